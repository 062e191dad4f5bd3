#ifndef DTLAB_CHAIN_HPP
#define DTLAB_CHAIN_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dtlab/hplane.hpp"

namespace dtlab {

// Points closer than this to a polytope facet are treated as lying on it,
// and the corresponding triangle of the chain as collapsed.
inline constexpr double kFacetSlack = 1e-9;

// Action-angle coordinates of an n-punctured sphere configuration:
// peripheral angles alpha_1..alpha_n, pants angles beta_1..beta_{n-3} and
// twist angles gamma_1..gamma_{n-3} (indices here are 0-based shifts of the
// 1-based labels, so alpha[0] is alpha_1).
struct ChartPoint {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> gamma;

  int n() const { return static_cast<int>(alpha.size()); }
};

// Chain of n-2 hyperbolic triangles. Triangle k (k = 0..n-3) has vertices
// (Bhat_k, C_{k+2}, Bhat_{k+1}) where Bhat_0 = C_1, Bhat_{n-2} = C_n and
// Bhat_k = B_k for 1 <= k <= n-3. C holds C_1..C_n, B holds B_1..B_{n-3},
// and degenerate[k] marks triangle k as collapsed to a point.
struct TriangleChain {
  std::vector<PlanePoint> C;
  std::vector<PlanePoint> B;
  std::vector<std::uint8_t> degenerate;

  int n() const { return static_cast<int>(C.size()); }

  // Vertex Bhat_k of the extended junction list, k = 0..n-2.
  PlanePoint junction(int k) const;
};

// Coordinates recovered from a chain. gamma[k] is empty when the twist angle
// gamma_{k+1} is undefined because triangle k+1 is collapsed (or only
// collapsed triangles precede it).
struct ChainCoords {
  std::vector<double> beta;
  std::vector<std::optional<double>> gamma;
};

// Extended pants angles betahat_0..betahat_{n-2}, where betahat_0 =
// 2 pi - alpha_1 and betahat_{n-2} = alpha_n are fixed by alpha and the
// interior entries are the free coordinates beta.
std::vector<double> extended_beta(const std::vector<double>& alpha,
                                  const std::vector<double>& beta);

// Throws RegimeViolation unless every alpha_p lies in (0, 2 pi) and
// sum(alpha) > 2 pi (n - 1).
void require_regime(const std::vector<double>& alpha);

// Membership of beta in the moment polytope for the given alpha, defined by
// betahat_k + 2 pi < alpha_{k+2} + betahat_{k+1} for k = 0..n-3. With
// strict = true the facet band of width kFacetSlack counts as outside; with
// strict = false it counts as inside.
bool polytope_contains(const std::vector<double>& alpha,
                       const std::vector<double>& beta, bool strict);

// Axis-aligned bounding box of the moment polytope: componentwise bounds
// (lower[k], upper[k]) for beta_{k+1}. Nonempty exactly in the regime.
std::pair<std::vector<double>, std::vector<double>> polytope_box(
    const std::vector<double>& alpha);

// Signed distances to the n-2 polytope facets; entry k is
// alpha_{k+2} + betahat_{k+1} - betahat_k - 2 pi, positive inside.
std::vector<double> facet_slacks(const std::vector<double>& alpha,
                                 const std::vector<double>& beta);

// Realize the chart point as a triangle chain, anchored by C_1 = (0, 1) with
// B_1 in the direction of the positive x-axis from C_1. Triangles on a facet
// collapse: all three vertices coincide and the degenerate flag is set.
// Throws RegimeViolation or PolytopeViolation for inadmissible input.
TriangleChain build_chain(const ChartPoint& p);

// Recover (beta, gamma) from vertex data. Collapsed triangles contribute the
// facet equality betahat_k = alpha_{k+2} + betahat_{k+1} - 2 pi instead of a
// measured angle, and their gamma slots are empty. Throws MalformedChain if
// the measured angles are inconsistent with any chart point.
ChainCoords chain_coords(const TriangleChain& t,
                         const std::vector<double>& alpha);

// True when no triangle of the chain is collapsed.
bool is_regular(const TriangleChain& t);

}  // namespace dtlab

#endif

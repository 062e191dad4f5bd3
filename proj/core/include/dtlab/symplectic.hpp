#ifndef DTLAB_SYMPLECTIC_HPP
#define DTLAB_SYMPLECTIC_HPP

#include <functional>
#include <vector>

#include "dtlab/chain.hpp"
#include "dtlab/holonomy.hpp"

namespace dtlab {

// Finite-difference step (radians of twist-flow time) for bracket proxies.
inline constexpr double kBracketStep = 1e-4;
// Below this magnitude a bracket estimate counts as zero; the Richardson
// consistency gate only fires above it.
inline constexpr double kBracketZeroTol = 1e-7;
// Both selector candidates under this magnitude is a contradiction for a
// regular chain and raises BothDegenerate.
inline constexpr double kSelectorDegenerateTol = 1e-6;
// Minimal fixed-point separation for the restricted chain to count as
// regular during the iterated construction.
inline constexpr double kSeparationTol = 1e-7;
// Rank tolerance for the certificate matrix, relative to its largest entry.
inline constexpr double kRankTolFactor = 1e-6;

// A pants decomposition given by its n-3 curve words. `chained` records that
// consecutive pairs of pants share punctures (a property guaranteed by the
// construction, stored rather than re-derived).
struct PantsFamily {
  std::vector<CurveWord> curves;
  bool chained = false;
};

// One-sided derivative data for a chain observable along a twist flow:
// Richardson-extrapolated value, the coarse step used, and the consistency
// gap between the two step sizes. Proportional to the Poisson bracket of the
// k-th action with the observable, with a fixed positive chart constant.
struct BracketEstimate {
  double value = 0.0;
  double stepsize = 0.0;
  double residual = 0.0;
};

// Real-valued function of a triangle chain.
using ChainObservable = std::function<double(const TriangleChain&)>;

// Rotation angle of the word's image under the peripheral rotations of the
// chain, as an observable.
ChainObservable angle_observable(CurveWord word, std::vector<double> alpha);
// The m-th action coordinate (1-based) read back from the chain.
ChainObservable beta_observable(int m, std::vector<double> alpha);
// The k-th angle coordinate (1-based) read back from the chain.
ChainObservable gamma_observable(int k, std::vector<double> alpha);

// Central finite difference of f along the twist flow about the k-th
// junction, computed at steps h and h/2 and Richardson-extrapolated.
// Throws SingularFiber off the regular locus and NumericallyUnstable when
// the two steps disagree beyond max(5% of the value, kBracketZeroTol).
BracketEstimate d_gamma(const ChartPoint& p, const ChainObservable& f, int k,
                        double stepsize = kBracketStep);

// For a 4-puncture representation with regular chain: whichever of the curve
// words (c_2 c_3)^{-1}, (c_1 c_3)^{-1} has the larger twist-flow derivative
// of its angle (ties prefer the first). Throws BothDegenerate when both
// derivatives vanish within kSelectorDegenerateTol.
CurveWord select_d_n4(const Representation& rep4);

// Iteratively builds the transverse chained pants decomposition d_1..d_{n-3}
// by restricting to a 4-punctured subsurface at each step and selecting one
// of the two candidate curves there. Throws RegularityLost when a restricted
// chain degenerates (fixed points of the previous d-curve and the next
// standard pants curve collide), and propagates BothDegenerate.
PantsFamily construct_transverse(const ChartPoint& p);

// Matrix of bracket proxies M[i][j] = d_gamma(p, angle of D.curves[j], i)
// together with its numerical rank.
struct TransversalityCertificate {
  std::vector<std::vector<double>> matrix;
  int rank = 0;
};

TransversalityCertificate transversality_certificate(const ChartPoint& p,
                                                     const PantsFamily& fam);

// Numerical rank by Gaussian elimination with partial pivoting; pivots with
// magnitude <= tol count as zero.
int matrix_rank(std::vector<std::vector<double>> m, double tol);

}  // namespace dtlab

#endif

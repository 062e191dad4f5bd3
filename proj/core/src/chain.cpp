#include "dtlab/chain.hpp"

#include <algorithm>
#include <cmath>

#include "dtlab/errors.hpp"
#include "dtlab/trig.hpp"

namespace dtlab {

namespace {

// Vertices of a collapsed triangle must agree to this tolerance, and
// measured angles must match their prescribed values this closely.
constexpr double kVertexMergeTol = 1e-7;
constexpr double kChainAngleTol = 1e-6;

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(std::string(what) + ": non-finite entry");
}

}  // namespace

PlanePoint TriangleChain::junction(int k) const {
  if (k <= 0) return C.front();
  if (k >= n() - 2) return C.back();
  return B[static_cast<std::size_t>(k) - 1];
}

std::vector<double> extended_beta(const std::vector<double>& alpha,
                                  const std::vector<double>& beta) {
  const int n = static_cast<int>(alpha.size());
  if (n < 4) throw Error("extended_beta: need n >= 4");
  if (static_cast<int>(beta.size()) != n - 3)
    throw Error("extended_beta: beta must have n - 3 entries");
  std::vector<double> bhat(static_cast<std::size_t>(n) - 1);
  bhat.front() = kTwoPi - alpha.front();
  std::copy(beta.begin(), beta.end(), bhat.begin() + 1);
  bhat.back() = alpha.back();
  return bhat;
}

void require_regime(const std::vector<double>& alpha) {
  const int n = static_cast<int>(alpha.size());
  if (n < 4) throw Error("require_regime: need n >= 4");
  require_finite(alpha, "alpha");
  double sum = 0.0;
  for (double a : alpha) {
    if (a <= 0.0 || a >= kTwoPi)
      throw RegimeViolation("peripheral angle outside (0, 2 pi)");
    sum += a;
  }
  if (sum <= kTwoPi * (n - 1))
    throw RegimeViolation("sum(alpha) must exceed 2 pi (n - 1)");
}

std::vector<double> facet_slacks(const std::vector<double>& alpha,
                                 const std::vector<double>& beta) {
  const auto bhat = extended_beta(alpha, beta);
  const int n = static_cast<int>(alpha.size());
  std::vector<double> slack(static_cast<std::size_t>(n) - 2);
  for (int k = 0; k <= n - 3; ++k)
    slack[k] = alpha[k + 1] + bhat[k + 1] - bhat[k] - kTwoPi;
  return slack;
}

bool polytope_contains(const std::vector<double>& alpha,
                       const std::vector<double>& beta, bool strict) {
  require_regime(alpha);
  require_finite(beta, "beta");
  for (double s : facet_slacks(alpha, beta)) {
    if (strict ? s <= kFacetSlack : s < -kFacetSlack) return false;
  }
  return true;
}

std::pair<std::vector<double>, std::vector<double>> polytope_box(
    const std::vector<double>& alpha) {
  require_regime(alpha);
  const int n = static_cast<int>(alpha.size());
  std::vector<double> lower(static_cast<std::size_t>(n) - 3);
  std::vector<double> upper(static_cast<std::size_t>(n) - 3);
  // Chaining the facet inequalities up from betahat_0 = 2 pi - alpha_1 and
  // down from betahat_{n-2} = alpha_n gives componentwise bounds.
  double lo = kTwoPi - alpha.front();
  for (int k = 1; k <= n - 3; ++k) {
    lo += kTwoPi - alpha[k];
    lower[k - 1] = lo;
  }
  double hi = alpha.back();
  for (int k = n - 3; k >= 1; --k) {
    hi += alpha[k + 1] - kTwoPi;
    upper[k - 1] = hi;
  }
  return {std::move(lower), std::move(upper)};
}

TriangleChain build_chain(const ChartPoint& p) {
  const int n = p.n();
  if (n < 4) throw Error("build_chain: need n >= 4");
  if (static_cast<int>(p.beta.size()) != n - 3 ||
      static_cast<int>(p.gamma.size()) != n - 3)
    throw Error("build_chain: coordinate sizes do not match n");
  require_finite(p.gamma, "gamma");
  if (!polytope_contains(p.alpha, p.beta, false))
    throw PolytopeViolation("build_chain: beta outside the moment polytope");

  const auto bhat = extended_beta(p.alpha, p.beta);
  const auto slack = facet_slacks(p.alpha, p.beta);

  TriangleChain t;
  t.C.assign(static_cast<std::size_t>(n), PlanePoint{});
  t.B.assign(static_cast<std::size_t>(n) - 3, PlanePoint{});
  t.degenerate.assign(static_cast<std::size_t>(n) - 2, 0);

  std::vector<PlanePoint> bpos(static_cast<std::size_t>(n) - 1);
  bpos[0] = PlanePoint{0.0, 1.0};
  PlanePoint cur = bpos[0];
  // Direction at the current junction toward the C-vertex of the last
  // non-collapsed triangle; meaningful once `placed` is true.
  double dir_prev_c = 0.0;
  bool placed = false;

  for (int k = 0; k <= n - 3; ++k) {
    if (slack[k] <= kFacetSlack) {
      t.degenerate[k] = 1;
      t.C[k + 1] = cur;
      bpos[k + 1] = cur;
      continue;
    }
    const double at_b = bhat[k] / 2.0;
    const TriangleData td = locos_angles(at_b, kPi - p.alpha[k + 1] / 2.0,
                                         kPi - bhat[k + 1] / 2.0);
    // The triangle winds clockwise, so at Bhat_k the ray to C_{k+2} sits
    // at_b counterclockwise from the ray to Bhat_{k+1}. The first placed
    // triangle is anchored with its ray to Bhat_{k+1} along direction 0;
    // afterwards the junction angle gamma_k fixes the ray to C_{k+2}
    // clockwise from the ray to the previous C-vertex.
    const double dir_c = placed ? dir_prev_c - p.gamma[k - 1] : at_b;
    const double dir_b = dir_c - at_b;
    t.C[k + 1] = geodesic_point(cur, dir_c, td.c);
    bpos[k + 1] = geodesic_point(cur, dir_b, td.b);
    cur = bpos[k + 1];
    dir_prev_c = ray_direction(cur, t.C[k + 1]);
    placed = true;
  }

  t.C[0] = bpos[0];
  t.C[static_cast<std::size_t>(n) - 1] = bpos[static_cast<std::size_t>(n) - 2];
  for (int k = 1; k <= n - 3; ++k) t.B[k - 1] = bpos[k];
  return t;
}

ChainCoords chain_coords(const TriangleChain& t,
                         const std::vector<double>& alpha) {
  const int n = static_cast<int>(alpha.size());
  if (t.n() != n || static_cast<int>(t.B.size()) != n - 3 ||
      static_cast<int>(t.degenerate.size()) != n - 2)
    throw Error("chain_coords: sizes do not match");
  require_regime(alpha);

  std::vector<double> bhat(static_cast<std::size_t>(n) - 1, 0.0);
  bhat.back() = alpha.back();
  for (int k = n - 3; k >= 0; --k) {
    if (t.degenerate[k]) {
      if (dist(t.junction(k), t.junction(k + 1)) > kVertexMergeTol ||
          dist(t.junction(k), t.C[k + 1]) > kVertexMergeTol)
        throw MalformedChain("collapsed triangle has distinct vertices");
      // On the facet the angle sum is exactly pi, which pins betahat_k.
      bhat[k] = alpha[k + 1] + bhat[k + 1] - kTwoPi;
      continue;
    }
    double half;
    double at_c;
    try {
      half = oriented_angle(t.junction(k + 1), t.junction(k), t.C[k + 1]);
      at_c = oriented_angle(t.junction(k), t.C[k + 1], t.junction(k + 1));
    } catch (const DegenerateVertex&) {
      throw MalformedChain("triangle not marked collapsed has coincident vertices");
    }
    if (half >= kPi)
      throw MalformedChain("triangle winds counterclockwise");
    if (std::abs(at_c - (kPi - alpha[k + 1] / 2.0)) > kChainAngleTol)
      throw MalformedChain("puncture angle does not match alpha");
    bhat[k] = 2.0 * half;
  }
  if (std::abs(bhat.front() - (kTwoPi - alpha.front())) > kChainAngleTol)
    throw MalformedChain("chain start angle does not match alpha_1");

  ChainCoords out;
  out.beta.assign(bhat.begin() + 1, bhat.end() - 1);
  out.gamma.assign(static_cast<std::size_t>(n) - 3, std::nullopt);
  int prev = -1;
  for (int k = 0; k <= n - 3; ++k) {
    if (t.degenerate[k]) continue;
    if (prev >= 0 && k >= 1)
      out.gamma[k - 1] =
          oriented_angle(t.C[k + 1], t.junction(k), t.C[prev + 1]);
    prev = k;
  }
  return out;
}

bool is_regular(const TriangleChain& t) {
  return std::none_of(t.degenerate.begin(), t.degenerate.end(),
                      [](std::uint8_t d) { return d != 0; });
}

}  // namespace dtlab

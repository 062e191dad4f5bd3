#include "dtlab/mcg.hpp"

#include <cmath>
#include <cstdlib>

#include "dtlab/errors.hpp"

namespace dtlab {

namespace {

// gamma_k is defined at a fiber iff triangle k survives and some earlier
// triangle survives to provide the other ray of the junction angle.
bool gamma_defined(const std::vector<double>& alpha,
                   const std::vector<double>& beta, int k) {
  const auto slack = facet_slacks(alpha, beta);
  if (slack[k] <= kFacetSlack) return false;
  for (int m = 0; m < k; ++m)
    if (slack[m] > kFacetSlack) return true;
  return false;
}

Isometry conjugate(const Isometry& g, const Isometry& by) {
  return by * g * by.inverse();
}

// One positive twist along c_i c_j (1-based indices, i < j):
//   c_k -> c_k                                   k < i or k > j
//   c_k -> (c_i c_j)^{-1} c_k (c_i c_j)          k in {i, j}
//   c_k -> v^{-1} c_k v,  v = c_i^{-1} c_j^{-1} c_i c_j   i < k < j
Representation pair_twist_once(const Representation& rep, int i, int j) {
  const Isometry& gi = rep.gens[static_cast<std::size_t>(i) - 1];
  const Isometry& gj = rep.gens[static_cast<std::size_t>(j) - 1];
  const Isometry u = (gi * gj).inverse();
  const Isometry v = (gi.inverse() * gj.inverse() * gi * gj).inverse();
  Representation out = rep;
  for (int k = i; k <= j; ++k) {
    Isometry& g = out.gens[static_cast<std::size_t>(k) - 1];
    g = conjugate(g, (k == i || k == j) ? u : v).normalized();
  }
  return out;
}

// Inverse twist: c_k -> (c_i c_j) c_k (c_i c_j)^{-1} on k in {i, j} and
// c_k -> x c_k x^{-1} with x = c_i c_j c_i^{-1} c_j^{-1} in between. If A is
// the forward automorphism and h = c_i c_j, then A(h) = h and A(x) comes out
// as the inverse of the forward middle conjugator, which makes this map a
// two-sided inverse of A on every generator.
Representation pair_twist_once_inverse(const Representation& rep, int i,
                                       int j) {
  const Isometry& gi = rep.gens[static_cast<std::size_t>(i) - 1];
  const Isometry& gj = rep.gens[static_cast<std::size_t>(j) - 1];
  const Isometry u = gi * gj;
  const Isometry w = gi * gj * gi.inverse() * gj.inverse();
  Representation out = rep;
  for (int k = i; k <= j; ++k) {
    Isometry& g = out.gens[static_cast<std::size_t>(k) - 1];
    g = conjugate(g, (k == i || k == j) ? u : w).normalized();
  }
  return out;
}

void require_pair_indices(int n, int i, int j) {
  if (i < 1 || j <= i || j > n)
    throw Error("pair curve needs puncture indices 1 <= i < j <= n");
}

}  // namespace

ChartPoint twist_pants(const ChartPoint& p, int k, int power) {
  const int n = p.n();
  if (k < 1 || k > n - 3) throw Error("twist_pants: index out of range");
  if (!gamma_defined(p.alpha, p.beta, k))
    throw SingularFiber("twist_pants: gamma is undefined on this fiber");
  ChartPoint out = p;
  out.gamma[static_cast<std::size_t>(k) - 1] = wrap_two_pi(
      p.gamma[static_cast<std::size_t>(k) - 1] +
      power * p.beta[static_cast<std::size_t>(k) - 1]);
  return out;
}

TriangleChain twist_flow(const TriangleChain& t, int k, double time) {
  const int n = t.n();
  if (k < 1 || k > n - 3) throw Error("twist_flow: index out of range");
  // gamma_k is the clockwise angle from the previous C-vertex ray, so
  // rotating the tail clockwise by `time` increases gamma_k by time.
  const Isometry g = rotation(t.junction(k), -time);
  TriangleChain out = t;
  for (int p = k + 1; p < n; ++p) out.C[p] = g.apply(t.C[p]);
  for (int m = k; m <= n - 4; ++m) out.B[m] = g.apply(t.B[m]);
  return out;
}

Representation twist_paircurve(const Representation& rep, int i, int j,
                               int power) {
  require_pair_indices(rep.n(), i, j);
  Representation out = rep;
  for (int it = 0; it < std::abs(power); ++it)
    out = power > 0 ? pair_twist_once(out, i, j)
                    : pair_twist_once_inverse(out, i, j);
  return out;
}

bool is_twist_fixed(const Representation& rep, int i, int j) {
  const int n = rep.n();
  require_pair_indices(n, i, j);
  std::vector<PlanePoint> c;
  c.reserve(static_cast<std::size_t>(n));
  for (const Isometry& g : rep.gens) c.push_back(fixed_point(g));

  bool inside = true;
  for (int k = i; k <= j && inside; ++k)
    inside = dist(c[static_cast<std::size_t>(i) - 1],
                  c[static_cast<std::size_t>(k) - 1]) <= kTwistFixTol;
  if (inside) return true;

  // Complementary arc C_{j+1}..C_n, C_1..C_{i-1} (cyclic). A coincidence
  // needs at least two punctures; an empty or singleton arc imposes no
  // constraint and must not report a fixed point (the twist genuinely moves
  // generic classes for every index pair).
  if (n - (j - i + 1) < 2) return false;
  const int first = j % n + 1;
  bool outside = true;
  for (int k = j + 1; k <= n + i - 1 && outside; ++k) {
    const int idx = (k - 1) % n + 1;
    outside = dist(c[static_cast<std::size_t>(first) - 1],
                   c[static_cast<std::size_t>(idx) - 1]) <= kTwistFixTol;
  }
  return outside;
}

bool conjugacy_equal(const Representation& r1, const Representation& r2,
                     double tol) {
  const int n = r1.n();
  if (r2.n() != n) return false;
  for (int p = 0; p < n; ++p)
    if (std::abs(wrap_pm_pi(r1.alpha[p] - r2.alpha[p])) > tol) return false;

  std::vector<PlanePoint> c1, c2;
  for (const Isometry& g : r1.gens) c1.push_back(fixed_point(g));
  for (const Isometry& g : r2.gens) c2.push_back(fixed_point(g));

  // Anchor on the first fixed point clearly separated from C_1; if none
  // exists every generator rotates about one point and translation alone
  // aligns the candidates.
  constexpr double kAnchorSep = 1e-6;
  int q = -1;
  for (int p = 1; p < n; ++p) {
    if (dist(c1[0], c1[static_cast<std::size_t>(p)]) > kAnchorSep) {
      q = p;
      break;
    }
  }
  Isometry g;
  if (q < 0) {
    g = frame(c2[0], 0.0) * frame(c1[0], 0.0).inverse();
  } else {
    const double d1 = dist(c1[0], c1[static_cast<std::size_t>(q)]);
    const double d2 = dist(c2[0], c2[static_cast<std::size_t>(q)]);
    if (std::abs(d1 - d2) > tol) return false;
    g = frame(c2[0], ray_direction(c2[0], c2[static_cast<std::size_t>(q)])) *
        frame(c1[0], ray_direction(c1[0], c1[static_cast<std::size_t>(q)]))
            .inverse();
  }
  // A rotation is determined by its fixed point and its angle, so after
  // aligning the anchor frame it suffices to compare those. Raw matrix
  // entries grow with the distance of the action from the model point and
  // would turn a fixed entry tolerance into a position-dependent one.
  for (int p = 0; p < n; ++p) {
    if (dist(g.apply(c1[static_cast<std::size_t>(p)]),
             c2[static_cast<std::size_t>(p)]) > tol)
      return false;
    const double a1 = rotation_angle(r1.gens[static_cast<std::size_t>(p)]);
    const double a2 = rotation_angle(r2.gens[static_cast<std::size_t>(p)]);
    if (std::abs(wrap_pm_pi(a1 - a2)) > tol) return false;
  }
  return true;
}

}  // namespace dtlab

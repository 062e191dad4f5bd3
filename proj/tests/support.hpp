#ifndef DTLAB_TESTS_SUPPORT_HPP
#define DTLAB_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "doctest.h"
#include "dtlab/chain.hpp"
#include "dtlab/hplane.hpp"
#include "dtlab/rng.hpp"

namespace dtlab::testing {

inline PlanePoint random_point(Rng& rng) {
  return PlanePoint{rng.uniform(-3.0, 3.0), std::exp(rng.uniform(-1.5, 1.5))};
}

inline Isometry random_isometry(Rng& rng) {
  Isometry g = rotation(random_point(rng), rng.uniform(0.1, kTwoPi - 0.1));
  g = g * rotation(random_point(rng), rng.uniform(0.1, kTwoPi - 0.1));
  return g;
}

inline std::vector<double> uniform_alpha(int n, double value) {
  return std::vector<double>(static_cast<std::size_t>(n), value);
}

// Random peripheral angles safely inside the admissible regime: each angle
// in (2 pi (n-1)/n + margin, 2 pi - margin) keeps the sum above 2 pi (n-1).
inline std::vector<double> random_alpha(Rng& rng, int n) {
  const double lo = kTwoPi * (n - 1) / n + 0.05;
  std::vector<double> a(static_cast<std::size_t>(n));
  for (auto& v : a) v = rng.uniform(lo, kTwoPi - 0.02);
  return a;
}

// Random chart point strictly inside the moment polytope, with gamma drawn
// uniformly from [0, 2 pi).
inline ChartPoint random_chart_point(Rng& rng, int n) {
  ChartPoint p;
  p.alpha = random_alpha(rng, n);
  const auto [lo, hi] = polytope_box(p.alpha);
  for (int tries = 0; tries < 10000 && p.beta.empty(); ++tries) {
    std::vector<double> beta(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i)
      beta[i] = rng.uniform(lo[i], hi[i]);
    if (polytope_contains(p.alpha, beta, true)) p.beta = beta;
  }
  REQUIRE(!p.beta.empty());
  p.gamma.resize(static_cast<std::size_t>(n) - 3);
  for (auto& g : p.gamma) g = rng.uniform(0.0, kTwoPi);
  return p;
}

// Interior (unsigned) angle at p between the rays to a and b.
inline double interior_angle(PlanePoint a, PlanePoint p, PlanePoint b) {
  const double t = oriented_angle(a, p, b);
  return std::min(t, kTwoPi - t);
}

}  // namespace dtlab::testing

#endif

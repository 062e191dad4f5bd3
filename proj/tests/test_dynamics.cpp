#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "dtlab/dynamics.hpp"
#include "dtlab/errors.hpp"
#include "dtlab/holonomy.hpp"
#include "dtlab/mcg.hpp"
#include "dtlab/trig.hpp"
#include "support.hpp"

using namespace dtlab;
using dtlab::testing::random_chart_point;
using dtlab::testing::uniform_alpha;

namespace {

// Independent van der Corput / Halton implementation for cross-checks.
double reference_radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i != 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

// Peripheral angles drawn the way the statistics fixtures draw them.
std::vector<double> fixture_alpha(Rng& rng, int n) {
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (auto& a : alpha)
    a = rng.uniform(kTwoPi * (n - 1) / n + 0.05, kTwoPi - 0.02);
  return alpha;
}

double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, int iterations) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// The n = 5 template with alpha = 0.95 * 2 pi whose separation scans touch
// zero at the exceptional twist angles: beta_2 comes from a coarse grid
// search and beta_1 from a golden-section refinement of the c2c3 separation
// at gamma_1 = pi.
struct EngineeredTemplate {
  ChartPoint point;  // gamma_1 = 2.0 (a generic angle), gamma_2 = 1.3
  double beta1 = 0.0;
  double beta2 = 0.0;
};

const EngineeredTemplate& engineered_template() {
  static const EngineeredTemplate fixture = [] {
    EngineeredTemplate t;
    const std::vector<double> alpha = uniform_alpha(5, 0.95 * kTwoPi);
    const auto box = polytope_box(alpha);
    const auto separation_at = [&](double b1, double b2) {
      const std::vector<double> beta = {b1, b2};
      if (!polytope_contains(alpha, beta, true)) return 1e9;
      return claim_distance(ChartPoint{alpha, beta, {kPi, 1.3}},
                            ClaimVariant::c2c3);
    };
    double best = 1e9, bb1 = 0.0, bb2 = 0.0;
    for (int q1 = 1; q1 < 40; ++q1) {
      for (int q2 = 1; q2 < 40; ++q2) {
        const double b1 =
            box.first[0] + (box.second[0] - box.first[0]) * q1 / 40.0;
        const double b2 =
            box.first[1] + (box.second[1] - box.first[1]) * q2 / 40.0;
        const double d = separation_at(b1, b2);
        if (d < best) {
          best = d;
          bb1 = b1;
          bb2 = b2;
        }
      }
    }
    t.beta2 = bb2;
    t.beta1 = golden_minimize(
        [&](double b1) { return separation_at(b1, bb2); }, bb1 - 0.3,
        bb1 + 0.3, 120);
    t.point = ChartPoint{alpha, {t.beta1, t.beta2}, {2.0, 1.3}};
    return t;
  }();
  return fixture;
}

ChartPoint engineered_at_gamma1(double gamma1) {
  ChartPoint p = engineered_template().point;
  p.gamma[0] = gamma1;
  return p;
}

// Signed defect cos(eta) - sgn * T_m(-cos(upsilon/2)) on the fixed n = 5
// relation template, as a function of the shared twist angle.
double eta_defect(double gamma1, int m, int sgn) {
  const std::vector<double> alpha = uniform_alpha(5, 0.95 * kTwoPi);
  const ChartPoint p{alpha, {0.8 * kPi, 1.2 * kPi}, {gamma1, 1.3}};
  const UpsilonConfig config = upsilon_config(p, 2, 3);
  const double eta = oriented_angle(config.Cj, config.Y1, config.Bnext);
  return std::cos(eta) - sgn * cheb_cos(m, -std::cos(config.upsilon / 2));
}

// Bisects the eta defect inside a bracket known to contain a sign change.
double bisect_eta_root(int m, int sgn, double lo, double hi) {
  double flo = eta_defect(lo, m, sgn);
  REQUIRE(flo * eta_defect(hi, m, sgn) < 0.0);
  for (int it = 0; it < 70; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = eta_defect(mid, m, sgn);
    if (flo * fmid <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scalar re-evaluation of the certificate polynomial straight from its
// defining expression, bypassing the coefficient assembly.
double certificate_value(const AppendixConstants& k, int m, double c) {
  const double si = std::sin(k.alpha_i / 2), ci = std::cos(k.alpha_i / 2);
  const double sj = std::sin(k.alpha_j / 2), cj = std::cos(k.alpha_j / 2);
  const double ch1 = std::cosh(k.d1), ch2 = std::cosh(k.d2);
  const double coth3 = std::cosh(k.d3) / std::sinh(k.d3);
  const double X = (ci * cj - c) / (si * sj);
  const double N = 1 - X * X - ch2 * ch2 - ch1 * ch1 + 2 * X * ch1 * ch2;
  const double R = (X * X - 1) * si * sj * coth3 * std::sinh(k.d2) +
                   (X * ch2 - ch1) * (ci - cj * c);
  const double T = cheb_cos(m, c);
  return sj * sj * N * T * T * (1 - c * c) - R * R * (1 - T * T);
}

bool contains_within(const std::vector<double>& values, double target,
                     double tol) {
  for (double v : values)
    if (std::fabs(v - target) < tol) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Torus rotations
// ---------------------------------------------------------------------------

TEST_CASE("torus observable battery") {
  for (int d : {1, 2, 3, 4, 7}) {
    const auto names = torus_observable_names(d);
    CHECK(names.size() == 10);
  }
  CHECK(torus_observable_names(1)[0] == "cos_1_0_0");
  CHECK(torus_observable_names(1)[1] == "sin_1_0_0");
  CHECK(torus_observable_names(5) == torus_observable_names(3));
  CHECK_THROWS_AS(torus_observable_names(0), Error);
}

TEST_CASE("torus_rotate validates input") {
  CHECK_THROWS_AS(torus_rotate({0.1}, {0.2, 0.3}, 10), Error);
  CHECK_THROWS_AS(torus_rotate({}, {}, 10), Error);
  CHECK_THROWS_AS(torus_rotate({0.1}, {0.2}, 0), Error);
}

TEST_CASE("golden rotation equidistributes") {
  const double rot = kTwoPi * (std::sqrt(2.0) - 1.0);
  const std::int64_t length = 100000;
  const TorusOrbit orbit = torus_rotate({0.3}, {rot}, length);
  CHECK(orbit.dim == 1);
  CHECK(orbit.length == length);
  CHECK(orbit.rotation == std::vector<double>{rot});
  CHECK(orbit.discrepancy < 1e-4);
  CHECK(orbit.birkhoff.size() == 10);
  const double bound = 5.0 / std::sqrt(static_cast<double>(length)) *
                       std::log(static_cast<double>(length));
  for (const auto& [name, value] : orbit.birkhoff) {
    CAPTURE(name);
    CHECK(std::fabs(value) < bound);
  }
}

TEST_CASE("periodic orbits plateau at a fixed discrepancy") {
  const TorusOrbit small = torus_rotate({0.3}, {kPi}, 4096);
  const TorusOrbit large = torus_rotate({0.3}, {kPi}, 65536);
  // A period-two orbit with an even sample count fills both points equally,
  // so the empirical measure (and with it the discrepancy) stops moving.
  CHECK(small.discrepancy == doctest::Approx(large.discrepancy).epsilon(1e-12));
  CHECK(small.discrepancy == doctest::Approx(0.45215).epsilon(1e-3));
}

TEST_CASE("golden rotation discrepancy decreases along dyadic lengths") {
  const double rot = kTwoPi * (std::sqrt(2.0) - 1.0);
  const double d10 = torus_rotate({0.3}, {rot}, 1 << 10).discrepancy;
  const double d13 = torus_rotate({0.3}, {rot}, 1 << 13).discrepancy;
  const double d16 = torus_rotate({0.3}, {rot}, 1 << 16).discrepancy;
  CHECK(d10 > d13);
  CHECK(d13 > d16);
}

TEST_CASE("random rotation vectors respect the Birkhoff bound") {
  for (int t = 0; t < 3; ++t) {
    Rng rng = task_rng(4200, static_cast<std::uint64_t>(t));
    const int d = 1 + (t % 3);
    std::vector<double> rotation(static_cast<std::size_t>(d));
    for (auto& v : rotation) v = rng.uniform(0.0, kTwoPi);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (auto& v : x) v = rng.uniform(0.0, kTwoPi);
    const std::int64_t length = 10000;
    const TorusOrbit orbit = torus_rotate(x, rotation, length);
    const double bound = 5.0 / std::sqrt(static_cast<double>(length)) *
                         std::log(static_cast<double>(length));
    for (const auto& [name, value] : orbit.birkhoff) {
      CAPTURE(t);
      CAPTURE(name);
      CHECK(std::fabs(value) < bound);
    }
    CHECK(orbit.discrepancy < 0.1);
  }
}

// ---------------------------------------------------------------------------
// Chart sampling
// ---------------------------------------------------------------------------

TEST_CASE("goldman_sample draws strictly admissible points") {
  Rng seed_rng = task_rng(71, 0);
  const std::vector<double> alpha = dtlab::testing::random_alpha(seed_rng, 5);
  Rng rng(9001);
  std::uint64_t attempts = 0;
  for (int s = 0; s < 300; ++s) {
    const ChartPoint p = goldman_sample(alpha, rng, &attempts);
    REQUIRE(p.alpha == alpha);
    REQUIRE(polytope_contains(alpha, p.beta, true));
    for (double g : p.gamma) {
      REQUIRE(g >= 0.0);
      REQUIRE(g < kTwoPi);
    }
  }
  CHECK(attempts >= 300);

  Rng r1(5), r2(5);
  const ChartPoint a = goldman_sample(alpha, r1);
  const ChartPoint b = goldman_sample(alpha, r2);
  CHECK(a.beta == b.beta);
  CHECK(a.gamma == b.gamma);

  Rng r3(6);
  CHECK_THROWS_AS(goldman_sample(uniform_alpha(5, 1.0), r3), RegimeViolation);
}

TEST_CASE("goldman acceptance rate matches the quasirandom volume") {
  const int n = 5;
  Rng rng = task_rng(4300, static_cast<std::uint64_t>(n));
  const std::vector<double> alpha = fixture_alpha(rng, n);
  const auto box = polytope_box(alpha);
  const int m = n - 3;

  const int kQuasi = 50000;
  const int primes[2] = {2, 3};
  int inside = 0;
  for (int s = 1; s <= kQuasi; ++s) {
    std::vector<double> beta(static_cast<std::size_t>(m));
    for (int q = 0; q < m; ++q)
      beta[static_cast<std::size_t>(q)] =
          box.first[static_cast<std::size_t>(q)] +
          (box.second[static_cast<std::size_t>(q)] -
           box.first[static_cast<std::size_t>(q)]) *
              reference_radical_inverse(static_cast<std::uint64_t>(s),
                                        primes[q]);
    inside += polytope_contains(alpha, beta, true);
  }
  const double volume_fraction = static_cast<double>(inside) / kQuasi;

  const int kSamples = 20000;
  std::uint64_t attempts = 0;
  for (int s = 0; s < kSamples; ++s) (void)goldman_sample(alpha, rng, &attempts);
  const double rate = static_cast<double>(kSamples) / static_cast<double>(attempts);
  CHECK(std::fabs(rate - volume_fraction) / volume_fraction < 0.03);
}

TEST_CASE("chart observable battery") {
  const auto names = chart_observable_names();
  CHECK(names.size() == 10);
  CHECK(names[0] == "cos_gamma1");

  const ChartPoint p{uniform_alpha(5, 1.94 * kPi), {2.3, 3.1}, {0.7, 2.9}};
  const auto values = chart_observable_values(p);
  REQUIRE(values.size() == 10);
  CHECK(values[0] == doctest::Approx(std::cos(0.7)));
  CHECK(values[1] == doctest::Approx(std::sin(0.7)));
  CHECK(values[2] == doctest::Approx(std::cos(0.7 + 2.9)));
  CHECK(values[3] == doctest::Approx(std::sin(1.4)));
  CHECK(values[4] == doctest::Approx(2.3));
  CHECK(values[5] == doctest::Approx(2.3 * 2.3));
  CHECK(values[6] == doctest::Approx(2.3 * 3.1));
  CHECK(values[7] == doctest::Approx(std::cos(2.3)));
  CHECK(values[8] == doctest::Approx(2.3 * std::cos(0.7)));
  CHECK(values[9] == doctest::Approx(std::exp(-2.3)));

  // n = 4 wraps the second-coordinate observables back to the first.
  const ChartPoint q{uniform_alpha(4, 1.9 * kPi), {2.0}, {1.1}};
  const auto wrapped = chart_observable_values(q);
  CHECK(wrapped[2] == doctest::Approx(std::cos(2.2)));
  CHECK(wrapped[6] == doctest::Approx(4.0));

  CHECK_THROWS_AS(
      chart_observable_values(ChartPoint{uniform_alpha(3, 6.0), {}, {}}),
      Error);
}

// ---------------------------------------------------------------------------
// Random walks
// ---------------------------------------------------------------------------

TEST_CASE("orbit_walk reports the start state at zero steps") {
  Rng rng(1203);
  const ChartPoint p = random_chart_point(rng, 5);
  const WalkSummary summary = orbit_walk(p, {}, 0, 42);
  CHECK(summary.steps == 0);
  CHECK(summary.singular_skips == 0);
  const auto values = chart_observable_values(p);
  REQUIRE(summary.averages.size() == values.size());
  for (std::size_t o = 0; o < values.size(); ++o) {
    CHECK(summary.averages[o] == doctest::Approx(values[o]).epsilon(1e-15));
    CHECK(summary.std_errors[o] == 0.0);
  }
  CHECK(summary.final_point.beta == p.beta);
  CHECK(summary.final_point.gamma == p.gamma);
}

TEST_CASE("orbit_walk validates input") {
  Rng rng(1207);
  const ChartPoint p = random_chart_point(rng, 5);
  CHECK_THROWS_AS(orbit_walk(p, {}, 5, 1), Error);
  CHECK_THROWS_AS(orbit_walk(p, {TwistSpec::pants(3)}, 5, 1), Error);
  CHECK_THROWS_AS(orbit_walk(p, {TwistSpec::pants(0)}, 5, 1), Error);
  CHECK_THROWS_AS(orbit_walk(p, {TwistSpec::pair(1, 6)}, 5, 1), Error);
  CHECK_THROWS_AS(orbit_walk(p, {TwistSpec::pair(3, 3)}, 5, 1), Error);
  CHECK_THROWS_AS(orbit_walk(p, {TwistSpec::pants(1)}, -1, 1), Error);
}

TEST_CASE("pants-only walks keep the action variables bitwise fixed") {
  Rng rng(1211);
  const ChartPoint p = random_chart_point(rng, 5);
  const WalkSummary summary = orbit_walk(
      p, {TwistSpec::pants(1), TwistSpec::pants(2)}, 5000, 314);
  CHECK(summary.singular_skips == 0);
  CHECK(summary.final_point.beta == p.beta);
  CHECK(summary.final_point.gamma != p.gamma);
}

TEST_CASE("mixed pants and pair walk agrees with direct sampling") {
  const int n = 4;
  Rng arng = task_rng(4400, 7);
  const std::vector<double> alpha = fixture_alpha(arng, n);
  const auto box = polytope_box(alpha);

  // Direct Monte Carlo reference for the invariant chart measure.
  Rng mc = task_rng(4401, 1);
  const int kMc = 100000;
  const std::size_t nobs = chart_observable_names().size();
  std::vector<double> mean(nobs, 0.0), m2(nobs, 0.0);
  for (int s = 0; s < kMc; ++s) {
    std::vector<double> beta(1);
    for (;;) {
      beta[0] = mc.uniform(box.first[0], box.second[0]);
      if (polytope_contains(alpha, beta, true)) break;
    }
    const ChartPoint q{alpha, beta, {mc.uniform(0.0, kTwoPi)}};
    const auto obs = chart_observable_values(q);
    for (std::size_t o = 0; o < nobs; ++o) {
      const double d = obs[o] - mean[o];
      mean[o] += d / (s + 1);
      m2[o] += d * (obs[o] - mean[o]);
    }
  }

  // Ergodic average along a random walk in the twist alphabet. The pair
  // curve (2,3) is transverse to the pants curve; together they generate a
  // large enough group to equidistribute over the fiber product.
  Rng prng = task_rng(4402, 3);
  std::vector<double> beta0(1);
  for (;;) {
    beta0[0] = prng.uniform(box.first[0], box.second[0]);
    if (polytope_contains(alpha, beta0, true)) break;
  }
  const ChartPoint start{alpha, beta0, {prng.uniform(0.0, kTwoPi)}};
  const WalkSummary walk = orbit_walk(
      start, {TwistSpec::pants(1), TwistSpec::pair(2, 3)}, 300000, 777);
  CHECK(walk.singular_skips == 0);

  int agree = 0;
  for (std::size_t o = 0; o < nobs; ++o) {
    const double se_mc_sq = m2[o] / kMc / kMc;
    const double combined =
        std::sqrt(walk.std_errors[o] * walk.std_errors[o] + se_mc_sq);
    CAPTURE(o);
    CAPTURE(walk.averages[o]);
    CAPTURE(mean[o]);
    if (std::fabs(walk.averages[o] - mean[o]) < 3.0 * combined) ++agree;
  }
  CHECK(agree >= 9);
}

// ---------------------------------------------------------------------------
// Configuration extraction and the affine law
// ---------------------------------------------------------------------------

TEST_CASE("upsilon_config extracts the two-triangle configuration") {
  Rng rng(501);
  const ChartPoint p = random_chart_point(rng, 5);
  const TriangleChain chain = build_chain(p);

  const UpsilonConfig config = upsilon_config(p, 2, 3);
  CHECK(config.alpha_i == p.alpha[1]);
  CHECK(config.alpha_j == p.alpha[2]);
  CHECK(dist(config.Ci, chain.C[1]) < 1e-12);
  CHECK(dist(config.Cj, chain.C[2]) < 1e-12);
  CHECK(dist(config.Bprev, chain.junction(1)) < 1e-12);
  CHECK(dist(config.Bnext, chain.junction(2)) < 1e-12);
  CHECK(config.gamma == doctest::Approx(p.gamma[0]).epsilon(1e-9));
  CHECK(config.upsilon > 0.0);
  CHECK(config.upsilon < kTwoPi);
  CHECK(config.d1 > 0.0);
  CHECK(config.d2 > 0.0);
  CHECK(config.d3 > 0.0);

  const UpsilonConfig next = upsilon_config(p, 3, 4);
  CHECK(next.gamma == doctest::Approx(p.gamma[1]).epsilon(1e-9));

  CHECK_THROWS_AS(upsilon_config(p, 1, 3), Error);
  CHECK_THROWS_AS(upsilon_config(p, 2, 5), Error);
  CHECK_THROWS_AS(upsilon_config(p, 3, 3), Error);
  // A non-adjacent pair needs the middle triangle collapsed.
  CHECK_THROWS_AS(upsilon_config(p, 2, 4), MalformedChain);

  Rng rng4(502);
  const ChartPoint q = random_chart_point(rng4, 4);
  CHECK(upsilon_config(q, 2, 3).gamma ==
        doctest::Approx(q.gamma[0]).epsilon(1e-9));
}

TEST_CASE("the pair-curve half angle is affine in the shared twist angle") {
  Rng rng(301);
  for (int n : {5, 6}) {
    const ChartPoint p = random_chart_point(rng, n);
    const int i = n == 5 ? 2 : 3;
    const ScanReport report = upsilon_gamma_fit(p, i, i + 1, 180);
    REQUIRE(report.fit.size() == 2);
    CHECK(report.residual < 1e-9);

    const UpsilonConfig config = upsilon_config(p, i, i + 1);
    const double si = std::sin(config.alpha_i / 2);
    const double sj = std::sin(config.alpha_j / 2);
    const double ci = std::cos(config.alpha_i / 2);
    const double cj = std::cos(config.alpha_j / 2);
    const double k1 = -si * sj * std::sinh(config.d1) * std::sinh(config.d2);
    const double k2 =
        si * sj * std::cosh(config.d1) * std::cosh(config.d2) - ci * cj;
    CHECK(std::fabs(report.fit[0] - k1) < 1e-9 * std::max(1.0, std::fabs(k1)));
    CHECK(std::fabs(report.fit[1] - k2) < 1e-9 * std::max(1.0, std::fabs(k2)));
    CHECK(std::fabs(report.fit[0]) > 1e-6);

    // The coefficients do not depend on the grid used to measure them.
    const ScanReport coarse = upsilon_gamma_fit(p, i, i + 1, 37);
    CHECK(std::fabs(coarse.fit[0] - report.fit[0]) < 1e-9);
    CHECK(std::fabs(coarse.fit[1] - report.fit[1]) < 1e-9);

    // Bookkeeping: one value per grid point, gaps marked as NaN.
    REQUIRE(report.grid.size() == 180);
    REQUIRE(report.values.size() == 180);
    CHECK(report.grid[0] == 0.0);
    CHECK(report.grid[1] == doctest::Approx(kTwoPi / 180));
    std::int64_t nan_count = 0;
    for (double v : report.values) nan_count += !std::isfinite(v);
    CHECK(nan_count == report.gaps);

    // Zeros of cos(upsilon/2), when the affine law crosses zero, sit at
    // gamma = +/- acos(-k2/k1).
    if (std::fabs(k2) < std::fabs(k1) && report.gaps == 0) {
      const double root = std::acos(-k2 / k1);
      CHECK(report.zeros.size() == 2);
      CHECK(contains_within(report.zeros, root, 1e-3));
      CHECK(contains_within(report.zeros, kTwoPi - root, 1e-3));
    }
  }
  CHECK_THROWS_AS(
      upsilon_gamma_fit(random_chart_point(rng, 5), 2, 3, 2), Error);
}

// ---------------------------------------------------------------------------
// Separation scans
// ---------------------------------------------------------------------------

TEST_CASE("separation scans have no zeros at generic templates") {
  Rng rng(401);
  for (int n : {5, 6}) {
    const ChartPoint p = random_chart_point(rng, n);
    for (ClaimVariant variant : {ClaimVariant::c2c3, ClaimVariant::c1c3}) {
      const ScanReport report = claim_scan_D1B2(p, variant, 360);
      CHECK(report.zeros.empty());
      CHECK(report.gaps == 0);
      double least = 1e9;
      for (double v : report.values) least = std::min(least, v);
      CHECK(least > 1e-4);
    }
  }

  const ChartPoint p = random_chart_point(rng, 5);
  const ScanReport single = claim_scan_D1B2(p, ClaimVariant::c2c3, 1);
  REQUIRE(single.values.size() == 1);
  CHECK(single.values[0] ==
        doctest::Approx(claim_distance(p, ClaimVariant::c2c3)));
  CHECK(single.zeros.empty());

  Rng rng4(402);
  CHECK_THROWS_AS(
      claim_distance(random_chart_point(rng4, 4), ClaimVariant::c2c3), Error);
}

TEST_CASE("the engineered template reproduces the exceptional zeros") {
  const EngineeredTemplate& fixture = engineered_template();
  CHECK(fixture.beta2 == doctest::Approx(3.8877).epsilon(1e-3));
  CHECK(fixture.beta1 == doctest::Approx(1.341215049831).epsilon(1e-6));
  CHECK(claim_distance(engineered_at_gamma1(kPi), ClaimVariant::c2c3) < 1e-8);

  // Away from the exceptional angle the separation is solidly positive.
  const ScanReport single =
      claim_scan_D1B2(fixture.point, ClaimVariant::c2c3, 1);
  CHECK(single.values[0] > 1e-3);

  // The c2c3 candidate meets the junction fixed point exactly at the
  // exceptional twist angle pi.
  const ScanReport front =
      claim_scan_D1B2(fixture.point, ClaimVariant::c2c3, 360);
  REQUIRE(!front.zeros.empty());
  CHECK(contains_within(front.zeros, kPi, 2e-3));

  // The c1c3 candidate meets it exactly at half the pants angle.
  const ScanReport cross =
      claim_scan_D1B2(fixture.point, ClaimVariant::c1c3, 360);
  REQUIRE(!cross.zeros.empty());
  CHECK(contains_within(cross.zeros, fixture.beta1 / 2, 2e-3));

  // Grid refinement keeps the located zero stable.
  const ScanReport fine =
      claim_scan_D1B2(fixture.point, ClaimVariant::c2c3, 720);
  REQUIRE(!fine.zeros.empty());
  double z360 = 0.0, z720 = 0.0;
  for (double z : front.zeros)
    if (std::fabs(z - kPi) < 2e-3) z360 = z;
  for (double z : fine.zeros)
    if (std::fabs(z - kPi) < 2e-3) z720 = z;
  CHECK(std::fabs(z360 - z720) < 1e-3);

  // At the coincidence the relation configuration degenerates: Y1 lands on
  // the junction, and measuring the angle there must be refused.
  const UpsilonConfig config = upsilon_config(engineered_at_gamma1(kPi), 2, 3);
  CHECK(dist(config.Y1, config.Bnext) < kDegenerateSepTol);
  CHECK_THROWS_AS(eta_relation_check(config, 1), DegenerateVertex);
  CHECK_THROWS_AS(main_relation_residual(config), DegenerateVertex);
}

// ---------------------------------------------------------------------------
// The half-angle relation
// ---------------------------------------------------------------------------

TEST_CASE("the half-angle relation holds exactly at its engineered roots") {
  const struct {
    int m;
    int sgn;
    double root;
  } roots[] = {{1, +1, 1.876610}, {2, +1, 0.987166}, {2, -1, 1.283979},
               {3, +1, 0.035748}, {3, -1, 0.699397}};
  for (const auto& entry : roots) {
    const double g =
        bisect_eta_root(entry.m, entry.sgn, entry.root - 0.02, entry.root + 0.02);
    CHECK(g == doctest::Approx(entry.root).epsilon(1e-4));
    const std::vector<double> alpha = uniform_alpha(5, 0.95 * kTwoPi);
    const ChartPoint p{alpha, {0.8 * kPi, 1.2 * kPi}, {g, 1.3}};
    const EtaRelationResult result =
        eta_relation_check(upsilon_config(p, 2, 3), entry.m);
    CHECK(result.satisfied);
    CHECK(std::min(result.minus_branch, result.plus_branch) < 1e-7);
  }
}

TEST_CASE("the half-angle relation fails at generic twist angles") {
  const std::vector<double> alpha = uniform_alpha(5, 0.95 * kTwoPi);
  const struct {
    int m;
    double gamma;
  } points[] = {{1, 1.0}, {2, 2.2}, {3, 1.6}, {4, 2.5}};
  for (const auto& entry : points) {
    const ChartPoint p{alpha, {0.8 * kPi, 1.2 * kPi}, {entry.gamma, 1.3}};
    const EtaRelationResult result =
        eta_relation_check(upsilon_config(p, 2, 3), entry.m);
    CAPTURE(entry.m);
    CHECK(!result.satisfied);
    CHECK(std::min(result.minus_branch, result.plus_branch) > 1e-5);
  }
  CHECK_THROWS_AS(
      eta_relation_check(
          upsilon_config(
              ChartPoint{alpha, {0.8 * kPi, 1.2 * kPi}, {1.0, 1.3}}, 2, 3),
          0),
      Error);
}

// ---------------------------------------------------------------------------
// The identity suite
// ---------------------------------------------------------------------------

TEST_CASE("measured configurations satisfy the identity suite") {
  Rng rng(601);
  for (int n : {5, 6, 7}) {
    for (int rep = 0; rep < 40; ++rep) {
      const ChartPoint p = random_chart_point(rng, n);
      const int i =
          2 + static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 4));
      const UpsilonConfig config = upsilon_config(p, i, i + 1);
      const RelationResiduals r = relation_residuals(config);
      CAPTURE(n);
      CAPTURE(i);
      CHECK(r.law_of_cosines_sides < 1e-9);
      CHECK(r.law_of_cosines_angles < 1e-9);
      CHECK(r.law_of_sines < 1e-9);
      CHECK(r.four_parts < 1e-9);
      CHECK(r.main_relation < 1e-9);
      CHECK(r.cos_epsilon < 1e-9);
      CHECK(r.sin_epsilon_sq < 1e-9);
      CHECK(r.cosh_cicj < 1e-9);
      CHECK(r.cosh_y1cj < 1e-9);
      CHECK(r.sinh_y1cj < 1e-9);
      CHECK(r.first_plug_in < 1e-9);
    }
  }
}

TEST_CASE("product identity behind the squared-sine numerator") {
  Rng rng(607);
  for (int rep = 0; rep < 100; ++rep) {
    const double x = rng.uniform(0.05, 3.0);
    const double y = rng.uniform(0.05, 3.0);
    const double shx = std::sinh(x), shy = std::sinh(y);
    const double chx = std::cosh(x), chy = std::cosh(y);
    const double lhs = shx * shx * shy * shy - chx * chx * chy * chy;
    const double rhs = 1 - chx * chx - chy * chy;
    CHECK(std::fabs(lhs - rhs) <
          1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)}));
  }
}

// ---------------------------------------------------------------------------
// The polynomial certificate
// ---------------------------------------------------------------------------

TEST_CASE("certificate polynomial has the right degree and leading term") {
  const std::vector<double> alpha = uniform_alpha(5, 0.95 * kTwoPi);
  const ChartPoint p{alpha, {0.8 * kPi, 1.2 * kPi}, {1.1, 1.3}};
  const AppendixConstants constants =
      appendix_constants(upsilon_config(p, 2, 3));
  Rng rng(701);
  for (int m = 1; m <= 5; ++m) {
    const AppendixPolynomial poly = appendix_polynomial(constants, m);
    CAPTURE(m);
    REQUIRE(poly.coefficients.size() ==
            static_cast<std::size_t>(2 * m + 4) + 1);
    const double lc = poly.coefficients.back();
    CHECK(lc > 0.0);
    CHECK(std::fabs(poly.leading_closed_form - lc) < 1e-10 * lc);
    CHECK(std::fabs(poly.leading_divided_difference - lc) < 1e-8 * lc);
    CHECK(poly.degree_overflow < 1e-5);
    for (int s = 0; s < 5; ++s) {
      const double c = rng.uniform(-1.5, 1.5);
      const double direct = certificate_value(constants, m, c);
      CHECK(std::fabs(poly(c) - direct) <
            1e-10 * std::max(1.0, std::fabs(direct)));
    }
  }
  CHECK_THROWS_AS(appendix_polynomial(constants, 0), Error);
  AppendixConstants bad = constants;
  bad.d1 = 0.0;
  CHECK_THROWS_AS(appendix_polynomial(bad, 1), Error);
  bad = constants;
  bad.alpha_i = kTwoPi;
  CHECK_THROWS_AS(appendix_polynomial(bad, 1), Error);
}

TEST_CASE("certificate polynomial vanishes where the relation holds") {
  const std::vector<double> alpha = uniform_alpha(5, 0.95 * kTwoPi);
  const struct {
    int m;
    int sgn;
    double root;
  } roots[] = {{1, +1, 1.876610}, {2, +1, 0.987166}};
  for (const auto& entry : roots) {
    const double g =
        bisect_eta_root(entry.m, entry.sgn, entry.root - 0.02, entry.root + 0.02);
    const ChartPoint p{alpha, {0.8 * kPi, 1.2 * kPi}, {g, 1.3}};
    const UpsilonConfig config = upsilon_config(p, 2, 3);
    const AppendixPolynomial poly =
        appendix_polynomial(appendix_constants(config), entry.m);
    const double chat = -std::cos(config.upsilon / 2);
    const double scale = std::fabs(poly(1.7));
    CAPTURE(entry.m);
    CHECK(std::fabs(poly(chat)) < 1e-6 * scale);
  }
}

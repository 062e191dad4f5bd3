#include "dtlab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtlab/errors.hpp"
#include "dtlab/hplane.hpp"
#include "dtlab/trig.hpp"

namespace dtlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// --- quasi-random helpers -------------------------------------------------

constexpr std::array<int, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                         23, 29, 31, 37, 41, 43, 47, 53};

// Van der Corput radical inverse of i >= 1 in base b, in (0, 1).
double radical_inverse(std::uint64_t i, int b) {
  double f = 1.0, r = 0.0;
  while (i != 0) {
    f /= b;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(b));
    i /= static_cast<std::uint64_t>(b);
  }
  return r;
}

// --- torus observable battery ----------------------------------------------

struct TorusBattery {
  std::vector<std::array<int, 3>> freq;
  std::vector<int> phase;  // 0 = cos, 1 = sin
};

TorusBattery torus_battery(int dim) {
  TorusBattery b;
  auto add = [&](int k0, int k1, int k2, int ph) {
    b.freq.push_back({k0, k1, k2});
    b.phase.push_back(ph);
  };
  // Ten characters per dimension class; frequency vectors are chosen so that
  // no wrapped coordinate cancels the frequency (every observable keeps
  // Lebesgue integral zero).
  if (dim == 1) {
    for (int k = 1; k <= 5; ++k) {
      add(k, 0, 0, 0);
      add(k, 0, 0, 1);
    }
  } else if (dim == 2) {
    add(1, 0, 0, 0);
    add(1, 0, 0, 1);
    add(0, 1, 0, 0);
    add(0, 1, 0, 1);
    add(1, 1, 0, 0);
    add(1, 1, 0, 1);
    add(1, -1, 0, 0);
    add(2, 1, 0, 0);
    add(1, 2, 0, 1);
    add(2, 2, 0, 0);
  } else {
    add(1, 0, 0, 0);
    add(0, 1, 0, 0);
    add(0, 0, 1, 0);
    add(1, 1, 0, 1);
    add(1, 0, 1, 0);
    add(0, 1, 1, 1);
    add(1, 1, 1, 0);
    add(1, -1, 0, 0);
    add(2, 1, 0, 0);
    add(1, 0, 2, 1);
  }
  return b;
}

std::string torus_observable_name(const std::array<int, 3>& k, int phase) {
  return std::string(phase ? "sin_" : "cos_") + std::to_string(k[0]) + "_" +
         std::to_string(k[1]) + "_" + std::to_string(k[2]);
}

// --- interior angles --------------------------------------------------------

double interior_angle_at(const PlanePoint& a, const PlanePoint& p,
                         const PlanePoint& b) {
  const double t = oriented_angle(a, p, b);
  return std::min(t, kTwoPi - t);
}

double rel_residual(double lhs, double rhs) {
  return std::fabs(lhs - rhs) /
         std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

// --- dense polynomial arithmetic --------------------------------------------

using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(Poly a, const Poly& b, double scale = 1.0) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

// Chebyshev polynomial T_m by the three-term recurrence, as coefficients.
Poly cheb_coefficients(int m) {
  Poly t0 = {1.0};
  if (m == 0) return t0;
  Poly t1 = {0.0, 1.0};
  for (int k = 2; k <= m; ++k) {
    Poly t2 = poly_add(poly_mul(Poly{0.0, 2.0}, t1), t0, -1.0);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  return t1;
}

// Order-th forward finite difference of f on the arithmetic grid
// {0, h, ..., order*h}; also reports the largest |f| seen on the grid.
double finite_difference(const AppendixPolynomial& f, int order, double h,
                         double* scale_out) {
  std::vector<double> v(static_cast<std::size_t>(order) + 1);
  double scale = 0.0;
  for (int q = 0; q <= order; ++q) {
    v[static_cast<std::size_t>(q)] = f(q * h);
    scale = std::max(scale, std::fabs(v[static_cast<std::size_t>(q)]));
  }
  for (int level = 0; level < order; ++level)
    for (int q = 0; q + level + 1 <= order; ++q)
      v[static_cast<std::size_t>(q)] =
          v[static_cast<std::size_t>(q) + 1] - v[static_cast<std::size_t>(q)];
  if (scale_out != nullptr) *scale_out = scale;
  return v[0];
}

// --- zero detection on a periodic scan --------------------------------------

// Locates zeros of the sampled values over the periodic grid. Sign changes
// are interpolated linearly; for non-negative series (distances) a local
// minimum far below its neighbouring increments marks a |linear| zero, whose
// location is recovered from the straight line on the non-kinked side.
std::vector<double> locate_zeros(const std::vector<double>& grid,
                                 const std::vector<double>& values) {
  const std::size_t n = grid.size();
  std::vector<double> zeros;
  if (n < 3) return zeros;
  const double step = grid[1] - grid[0];
  bool nonneg = true;
  for (double v : values)
    if (std::isfinite(v) && v < 0.0) nonneg = false;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t prev = (q + n - 1) % n;
    const std::size_t next = (q + 1) % n;
    const double vm = values[prev], v0 = values[q], vp = values[next];
    if (!std::isfinite(vm) || !std::isfinite(v0) || !std::isfinite(vp))
      continue;
    if (!nonneg) {
      if (v0 == 0.0)
        zeros.push_back(grid[q]);
      else if (v0 * vp < 0.0)
        zeros.push_back(wrap_two_pi(grid[q] + step * v0 / (v0 - vp)));
      continue;
    }
    // V-shaped touch of a non-negative series.
    if (!(v0 < vm && v0 <= vp)) continue;
    const double rise = std::max(vm - v0, vp - v0);
    if (!(v0 < 0.9 * rise)) continue;
    double at = grid[q];
    if (vp < vm && vp > v0) {
      // Kink right of q: the left line through (prev, q) passes the zero.
      at = grid[q] + step * v0 / (vm - v0);
    } else if (vm < vp && vm > v0) {
      at = grid[q] - step * v0 / (vp - v0);
    }
    zeros.push_back(wrap_two_pi(at));
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

// --- chart helpers -----------------------------------------------------------

ChartPoint with_gamma(const ChartPoint& p, std::size_t slot, double value) {
  ChartPoint q = p;
  q.gamma.at(slot) = wrap_two_pi(value);
  return q;
}

ChartPoint apply_twist(const ChartPoint& p, const TwistSpec& spec, int sign) {
  if (spec.kind == TwistSpec::Kind::PantsCurve)
    return twist_pants(p, spec.k, sign * spec.power);
  const Representation rep = holonomy(build_chain(p), p.alpha);
  const Representation twisted =
      twist_paircurve(rep, spec.i, spec.j, sign * spec.power);
  const TriangleChain chain = chain_from_representation(twisted);
  const ChainCoords coords = chain_coords(chain, p.alpha);
  std::vector<double> gamma(coords.gamma.size());
  for (std::size_t q = 0; q < coords.gamma.size(); ++q) {
    if (!coords.gamma[q])
      throw SingularFiber("pair twist landed on a singular fiber");
    gamma[q] = *coords.gamma[q];
  }
  return ChartPoint{p.alpha, coords.beta, gamma};
}

}  // namespace

// ---------------------------------------------------------------------------
// Torus rotations
// ---------------------------------------------------------------------------

std::vector<std::string> torus_observable_names(int dim) {
  if (dim < 1) throw Error("torus battery needs dimension >= 1");
  const TorusBattery b = torus_battery(dim);
  std::vector<std::string> names(b.freq.size());
  for (std::size_t q = 0; q < b.freq.size(); ++q)
    names[q] = torus_observable_name(b.freq[q], b.phase[q]);
  return names;
}

TorusOrbit torus_rotate(const std::vector<double>& x,
                        const std::vector<double>& rotation,
                        std::int64_t steps) {
  const int dim = static_cast<int>(rotation.size());
  if (dim < 1) throw Error("torus_rotate needs dimension >= 1");
  if (x.size() != rotation.size())
    throw Error("torus_rotate: start point and rotation dimension differ");
  if (steps < 1) throw Error("torus_rotate needs steps >= 1");
  if (dim > static_cast<int>(kPrimes.size()))
    throw Error("torus_rotate: dimension above the supported box family");

  TorusOrbit orbit;
  orbit.dim = dim;
  orbit.rotation = rotation;
  orbit.length = steps;

  // Fixed quasi-random family of anchored boxes prod_r [0, corner_r).
  std::vector<double> corners(
      static_cast<std::size_t>(kDiscrepancyBoxes) * dim);
  for (int q = 0; q < kDiscrepancyBoxes; ++q)
    for (int r = 0; r < dim; ++r)
      corners[static_cast<std::size_t>(q) * dim + r] =
          radical_inverse(static_cast<std::uint64_t>(q) + 1, kPrimes[r]);
  std::vector<std::int64_t> counts(kDiscrepancyBoxes, 0);

  const TorusBattery battery = torus_battery(dim);
  std::vector<double> sums(battery.freq.size(), 0.0);

  std::vector<double> state(x.size());
  for (std::size_t r = 0; r < x.size(); ++r) state[r] = wrap_two_pi(x[r]);
  std::vector<double> unit(static_cast<std::size_t>(dim));
  for (std::int64_t s = 0; s < steps; ++s) {
    for (int r = 0; r < dim; ++r) unit[static_cast<std::size_t>(r)] = state[static_cast<std::size_t>(r)] / kTwoPi;
    for (int q = 0; q < kDiscrepancyBoxes; ++q) {
      const double* corner = &corners[static_cast<std::size_t>(q) * dim];
      bool inside = true;
      for (int r = 0; r < dim; ++r) {
        if (!(unit[static_cast<std::size_t>(r)] < corner[r])) {
          inside = false;
          break;
        }
      }
      counts[static_cast<std::size_t>(q)] += inside;
    }
    for (std::size_t o = 0; o < battery.freq.size(); ++o) {
      double phase = 0.0;
      for (int r = 0; r < 3; ++r)
        if (battery.freq[o][static_cast<std::size_t>(r)] != 0)
          phase += battery.freq[o][static_cast<std::size_t>(r)] *
                   state[static_cast<std::size_t>(r % dim)];
      sums[o] += battery.phase[o] ? std::sin(phase) : std::cos(phase);
    }
    for (int r = 0; r < dim; ++r)
      state[static_cast<std::size_t>(r)] = wrap_two_pi(
          state[static_cast<std::size_t>(r)] + rotation[static_cast<std::size_t>(r)]);
  }

  double disc = 0.0;
  for (int q = 0; q < kDiscrepancyBoxes; ++q) {
    double volume = 1.0;
    for (int r = 0; r < dim; ++r)
      volume *= corners[static_cast<std::size_t>(q) * dim + r];
    disc = std::max(disc, std::fabs(static_cast<double>(counts[static_cast<std::size_t>(q)]) /
                                        static_cast<double>(steps) -
                                    volume));
  }
  orbit.discrepancy = disc;
  for (std::size_t o = 0; o < battery.freq.size(); ++o)
    orbit.birkhoff[torus_observable_name(battery.freq[o], battery.phase[o])] =
        sums[o] / static_cast<double>(steps);
  return orbit;
}

// ---------------------------------------------------------------------------
// Chart sampling and walks
// ---------------------------------------------------------------------------

ChartPoint goldman_sample(const std::vector<double>& alpha, Rng& rng,
                          std::uint64_t* attempts) {
  require_regime(alpha);
  const auto box = polytope_box(alpha);
  const std::size_t m = box.first.size();
  std::vector<double> beta(m);
  bool found = false;
  for (std::uint64_t tries = 0; tries < 50000000ULL; ++tries) {
    for (std::size_t q = 0; q < m; ++q)
      beta[q] = rng.uniform(box.first[q], box.second[q]);
    if (attempts != nullptr) ++*attempts;
    if (polytope_contains(alpha, beta, true)) {
      found = true;
      break;
    }
  }
  if (!found)
    throw Error("goldman_sample: rejection sampling failed to terminate");
  std::vector<double> gamma(m);
  for (std::size_t q = 0; q < m; ++q) gamma[q] = rng.uniform(0.0, kTwoPi);
  return ChartPoint{alpha, beta, gamma};
}

std::vector<std::string> chart_observable_names() {
  return {"cos_gamma1",       "sin_gamma1", "cos_gamma1_plus_gamma2",
          "sin_2gamma1",      "beta1",      "beta1_sq",
          "beta1_beta2",      "cos_beta1",  "beta1_cos_gamma1",
          "exp_neg_beta1"};
}

std::vector<double> chart_observable_values(const ChartPoint& p) {
  const std::size_t m = p.gamma.size();
  if (m == 0 || p.beta.size() != m)
    throw Error("chart observables need a chart point with n >= 4");
  const double g1 = p.gamma[0];
  const double g2 = p.gamma[1 % m];
  const double b1 = p.beta[0];
  const double b2 = p.beta[1 % m];
  return {std::cos(g1),      std::sin(g1), std::cos(g1 + g2),
          std::sin(2 * g1),  b1,           b1 * b1,
          b1 * b2,           std::cos(b1), b1 * std::cos(g1),
          std::exp(-b1)};
}

WalkSummary orbit_walk(const ChartPoint& p, const std::vector<TwistSpec>& twists,
                       std::int64_t steps, std::uint64_t seed) {
  if (steps < 0) throw Error("orbit_walk needs steps >= 0");
  if (twists.empty() && steps > 0)
    throw Error("orbit_walk needs a non-empty twist family");
  const int n = p.n();
  for (const TwistSpec& spec : twists) {
    if (spec.kind == TwistSpec::Kind::PantsCurve) {
      if (spec.k < 1 || spec.k > n - 3)
        throw Error("orbit_walk: pants-curve index out of range");
    } else if (spec.i < 1 || spec.j <= spec.i || spec.j > n) {
      throw Error("orbit_walk: pair-curve indices out of range");
    }
  }

  WalkSummary summary;
  summary.steps = steps;
  summary.observable_names = chart_observable_names();
  summary.final_point = p;

  const std::size_t nobs = summary.observable_names.size();
  const std::int64_t samples = steps + 1;
  const std::int64_t n_batches = std::min<std::int64_t>(100, samples);
  std::vector<double> sums(nobs, 0.0);
  std::vector<std::vector<double>> batch_sum(
      nobs, std::vector<double>(static_cast<std::size_t>(n_batches), 0.0));
  std::vector<std::int64_t> batch_count(static_cast<std::size_t>(n_batches), 0);

  Rng rng = task_rng(seed, 0);
  ChartPoint state = p;
  for (std::int64_t s = 0; s < samples; ++s) {
    const std::vector<double> values = chart_observable_values(state);
    const std::size_t b = static_cast<std::size_t>(s * n_batches / samples);
    ++batch_count[b];
    for (std::size_t o = 0; o < nobs; ++o) {
      sums[o] += values[o];
      batch_sum[o][b] += values[o];
    }
    if (s + 1 == samples) break;
    const std::int64_t pick =
        rng.uniform_int(0, 2 * static_cast<std::int64_t>(twists.size()) - 1);
    const TwistSpec& spec = twists[static_cast<std::size_t>(pick / 2)];
    const int sign = (pick % 2) ? 1 : -1;
    try {
      state = apply_twist(state, spec, sign);
    } catch (const Error&) {
      // The twisted point's chart coordinates could not be recovered (a
      // singular fiber, or a numerical failure on its boundary): record the
      // step and stay put.
      ++summary.singular_skips;
    }
  }
  summary.final_point = state;

  summary.averages.resize(nobs);
  summary.std_errors.resize(nobs);
  for (std::size_t o = 0; o < nobs; ++o) {
    summary.averages[o] = sums[o] / static_cast<double>(samples);
    if (n_batches < 2) {
      summary.std_errors[o] = 0.0;
      continue;
    }
    double mean_of_means = 0.0;
    std::vector<double> means(static_cast<std::size_t>(n_batches));
    for (std::size_t b = 0; b < static_cast<std::size_t>(n_batches); ++b) {
      means[b] = batch_sum[o][b] / static_cast<double>(batch_count[b]);
      mean_of_means += means[b];
    }
    mean_of_means /= static_cast<double>(n_batches);
    double var = 0.0;
    for (double mb : means) var += (mb - mean_of_means) * (mb - mean_of_means);
    var /= static_cast<double>(n_batches - 1);
    summary.std_errors[o] = std::sqrt(var / static_cast<double>(n_batches));
  }
  return summary;
}

// ---------------------------------------------------------------------------
// Configuration extraction
// ---------------------------------------------------------------------------

UpsilonConfig upsilon_config(const ChartPoint& p, int i, int j) {
  const int n = p.n();
  if (n < 4) throw Error("upsilon_config needs n >= 4");
  if (i < 2 || j <= i || j > n - 1)
    throw Error("upsilon_config needs puncture indices 2 <= i < j <= n-1");
  const TriangleChain chain = build_chain(p);
  const auto collapsed = [&](int triangle) {
    return chain.degenerate[static_cast<std::size_t>(triangle)] != 0;
  };
  if (collapsed(i - 2) || collapsed(j - 2))
    throw MalformedChain(
        "upsilon_config: the two boundary triangles must be non-degenerate");
  for (int q = i - 1; q <= j - 3; ++q)
    if (!collapsed(q))
      throw MalformedChain(
          "upsilon_config: triangles strictly between the pair must be "
          "collapsed");

  const Representation rep = holonomy(chain, p.alpha);
  const CurveWord pair = CurveWord::pair(i, j);

  UpsilonConfig config;
  config.i = i;
  config.j = j;
  config.alpha_i = p.alpha[static_cast<std::size_t>(i - 1)];
  config.alpha_j = p.alpha[static_cast<std::size_t>(j - 1)];
  config.Ci = chain.C[static_cast<std::size_t>(i - 1)];
  config.Cj = chain.C[static_cast<std::size_t>(j - 1)];
  config.Bprev = chain.junction(j - 2);
  config.Bnext = chain.junction(j - 1);
  config.Y1 = fixed_point(evaluate(rep, pair));
  config.upsilon = angle_function(rep, pair);
  config.d1 = dist(config.Ci, chain.junction(i - 1));
  config.d2 = dist(config.Cj, config.Bprev);
  config.d3 = dist(config.Cj, config.Bnext);

  const ChainCoords coords = chain_coords(chain, p.alpha);
  const auto& slot = coords.gamma.at(static_cast<std::size_t>(j - 3));
  if (!slot)
    throw MalformedChain("upsilon_config: the shared twist angle is undefined");
  config.gamma = *slot;
  return config;
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

ScanReport upsilon_gamma_fit(const ChartPoint& p_template, int i, int j,
                             int grid) {
  if (grid < 3) throw Error("upsilon_gamma_fit needs a grid of >= 3 points");
  // Validate the configuration once at the template itself. The collapse
  // structure does not depend on the swept angle, so index and degeneracy
  // errors surface here; a non-elliptic pair curve at the template's own
  // angle is just a gap for the scan.
  try {
    (void)upsilon_config(p_template, i, j);
  } catch (const NonElliptic&) {
  }
  const std::size_t slot = static_cast<std::size_t>(j - 3);

  ScanReport report;
  report.grid.resize(static_cast<std::size_t>(grid));
  report.values.assign(static_cast<std::size_t>(grid), kNaN);
  for (int s = 0; s < grid; ++s) {
    const double g = s * kTwoPi / grid;
    report.grid[static_cast<std::size_t>(s)] = g;
    try {
      const UpsilonConfig config =
          upsilon_config(with_gamma(p_template, slot, g), i, j);
      report.values[static_cast<std::size_t>(s)] = std::cos(config.upsilon / 2);
    } catch (const NonElliptic&) {
      ++report.gaps;
    }
  }

  // Least-squares affine fit value = k1 cos(g) + k2 over the valid points.
  double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (int s = 0; s < grid; ++s) {
    const double y = report.values[static_cast<std::size_t>(s)];
    if (!std::isfinite(y)) continue;
    const double x = std::cos(report.grid[static_cast<std::size_t>(s)]);
    s1 += 1.0;
    sx += x;
    sxx += x * x;
    sy += y;
    sxy += x * y;
  }
  const double det = s1 * sxx - sx * sx;
  if (!(std::fabs(det) > 1e-12) || s1 < 2.5)
    throw NumericallyUnstable(
        "upsilon_gamma_fit: degenerate design matrix for the affine fit");
  const double k1 = (s1 * sxy - sx * sy) / det;
  const double k2 = (sxx * sy - sx * sxy) / det;
  report.fit = {k1, k2};

  double max_err = 0.0, max_val = 0.0;
  for (int s = 0; s < grid; ++s) {
    const double y = report.values[static_cast<std::size_t>(s)];
    if (!std::isfinite(y)) continue;
    const double x = std::cos(report.grid[static_cast<std::size_t>(s)]);
    max_err = std::max(max_err, std::fabs(k1 * x + k2 - y));
    max_val = std::max(max_val, std::fabs(y));
  }
  report.residual = max_err / std::max(max_val, 1e-12);
  if (report.residual > kFitResidualTol)
    throw NumericallyUnstable(
        "upsilon_gamma_fit: affine fit residual " +
        std::to_string(report.residual) + " exceeds the acceptance threshold");
  report.zeros = locate_zeros(report.grid, report.values);
  return report;
}

double claim_distance(const ChartPoint& p, ClaimVariant variant) {
  if (p.n() < 5) throw Error("claim_distance needs n >= 5");
  const CurveWord candidate = variant == ClaimVariant::c2c3
                                  ? CurveWord{{-3, -2}}
                                  : CurveWord{{-3, -1}};
  const TriangleChain chain = build_chain(p);
  const Representation rep = holonomy(chain, p.alpha);
  return dist(fixed_point(evaluate(rep, candidate)), chain.junction(2));
}

ScanReport claim_scan_D1B2(const ChartPoint& p_template, ClaimVariant variant,
                           int grid) {
  if (p_template.n() < 5) throw Error("claim_scan_D1B2 needs n >= 5");
  if (grid < 1) throw Error("claim_scan_D1B2 needs grid >= 1");
  ScanReport report;
  if (grid == 1) {
    report.grid = {p_template.gamma.at(0)};
    report.values = {claim_distance(p_template, variant)};
    return report;
  }
  report.grid.resize(static_cast<std::size_t>(grid));
  report.values.assign(static_cast<std::size_t>(grid), kNaN);
  for (int s = 0; s < grid; ++s) {
    const double g = s * kTwoPi / grid;
    report.grid[static_cast<std::size_t>(s)] = g;
    try {
      report.values[static_cast<std::size_t>(s)] =
          claim_distance(with_gamma(p_template, 0, g), variant);
    } catch (const Error&) {
      ++report.gaps;
    }
  }
  report.zeros = locate_zeros(report.grid, report.values);
  return report;
}

// ---------------------------------------------------------------------------
// The half-angle relation
// ---------------------------------------------------------------------------

EtaRelationResult eta_relation_check(const UpsilonConfig& config, int m,
                                     double tol) {
  if (m < 1) throw Error("eta_relation_check needs m >= 1");
  if (dist(config.Y1, config.Bnext) < kDegenerateSepTol)
    throw DegenerateVertex(
        "eta_relation_check: Y1 coincides with the junction B_{j-1}");
  if (dist(config.Y1, config.Cj) < kDegenerateSepTol)
    throw DegenerateVertex("eta_relation_check: Y1 coincides with C_j");
  EtaRelationResult result;
  result.eta = oriented_angle(config.Cj, config.Y1, config.Bnext);
  result.upsilon = config.upsilon;
  const double cheb = cheb_cos(m, std::cos(config.upsilon / 2));
  result.minus_branch = std::fabs(std::cos(result.eta) - cheb);
  result.plus_branch = std::fabs(std::cos(result.eta) + cheb);
  result.satisfied = std::min(result.minus_branch, result.plus_branch) < tol;
  return result;
}

double main_relation_residual(const UpsilonConfig& config) {
  if (dist(config.Y1, config.Bnext) < kDegenerateSepTol ||
      dist(config.Y1, config.Cj) < kDegenerateSepTol ||
      dist(config.Cj, config.Bnext) < kDegenerateSepTol)
    throw DegenerateVertex("main_relation_residual: collapsed triangle");
  const double eps = interior_angle_at(config.Y1, config.Cj, config.Bnext);
  const double eta = interior_angle_at(config.Cj, config.Y1, config.Bnext);
  const double dy = dist(config.Y1, config.Cj);
  const double d3 = dist(config.Cj, config.Bnext);
  const double lhs = std::cos(eps) * std::cosh(dy);
  const double rhs = std::sinh(dy) * (std::cosh(d3) / std::sinh(d3)) -
                     std::sin(eps) * (std::cos(eta) / std::sin(eta));
  return rel_residual(lhs, rhs);
}

RelationResiduals relation_residuals(const UpsilonConfig& config) {
  RelationResiduals out;
  const double si = std::sin(config.alpha_i / 2);
  const double ci = std::cos(config.alpha_i / 2);
  const double sj = std::sin(config.alpha_j / 2);
  const double cj = std::cos(config.alpha_j / 2);
  // Half-angle variable of the closed forms; the measured rotation angle of
  // the pair curve is 2 pi minus the angle the formulas are written for, so
  // its half-angle cosine enters with a sign flip.
  const double chat = -std::cos(config.upsilon / 2);
  const double shat = std::sin(config.upsilon / 2);
  const double dcc = dist(config.Ci, config.Cj);
  const double ch1 = std::cosh(config.d1), sh1 = std::sinh(config.d1);
  const double ch2 = std::cosh(config.d2), sh2 = std::sinh(config.d2);
  const double X = std::cosh(dcc), shcc = std::sinh(dcc);

  // Side law of cosines at the shared junction.
  const double junction_angle =
      interior_angle_at(config.Ci, config.Bprev, config.Cj);
  out.law_of_cosines_sides =
      rel_residual(std::cos(junction_angle), (ch1 * ch2 - X) / (sh1 * sh2));

  // Triangle (Ci, Cj, Y1) measured angles.
  const double A_i = interior_angle_at(config.Cj, config.Ci, config.Y1);
  const double A_j = interior_angle_at(config.Ci, config.Cj, config.Y1);
  const double A_y = interior_angle_at(config.Ci, config.Y1, config.Cj);
  out.law_of_cosines_angles = rel_residual(
      X, (std::cos(A_i) * std::cos(A_j) + std::cos(A_y)) /
             (std::sin(A_i) * std::sin(A_j)));
  const double side_i = dist(config.Cj, config.Y1);  // opposite A_i
  const double side_j = dist(config.Ci, config.Y1);  // opposite A_j
  out.law_of_sines = rel_residual(
      std::sin(A_i), std::sinh(side_i) * std::sin(A_j) / std::sinh(side_j));
  const TriangleData td{side_i, side_j, dcc, A_i, A_j, A_y};
  out.four_parts = four_parts_residual(td) /
                   std::max(1.0, std::cosh(td.a) / std::tanh(td.b));

  out.main_relation = main_relation_residual(config);

  const double eps = interior_angle_at(config.Y1, config.Cj, config.Bnext);
  out.cos_epsilon =
      rel_residual(std::cos(eps), (X * ch2 - ch1) / (shcc * sh2));
  out.sin_epsilon_sq = rel_residual(
      std::sin(eps) * std::sin(eps),
      (1 - X * X - ch2 * ch2 - ch1 * ch1 + 2 * X * ch2 * ch1) /
          (shcc * shcc * sh2 * sh2));

  out.cosh_cicj = rel_residual(X, (ci * cj - chat) / (si * sj));
  out.cosh_y1cj =
      rel_residual(std::cosh(side_i), (-ci + cj * chat) / (sj * shat));
  out.sinh_y1cj = rel_residual(std::sinh(side_i), shcc * si / shat);

  const double eta = interior_angle_at(config.Cj, config.Y1, config.Bnext);
  const double lhs_plug = std::sin(eps) * shcc * sh2 *
                          (std::cos(eta) / std::sin(eta)) * shat * sj;
  const double rhs_plug =
      shcc * shcc * si * sj * (std::cosh(config.d3) / std::sinh(config.d3)) *
          sh2 +
      (X * ch2 - ch1) * (ci - cj * chat);
  out.first_plug_in = rel_residual(lhs_plug, rhs_plug);
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial certificate
// ---------------------------------------------------------------------------

AppendixConstants appendix_constants(const UpsilonConfig& config) {
  return AppendixConstants{config.alpha_i, config.alpha_j, config.d1,
                           config.d2, config.d3};
}

double AppendixPolynomial::operator()(double c) const {
  double value = 0.0;
  for (std::size_t q = coefficients.size(); q-- > 0;)
    value = value * c + coefficients[q];
  return value;
}

AppendixPolynomial appendix_polynomial(const AppendixConstants& constants,
                                       int m) {
  if (m < 1) throw Error("appendix_polynomial needs m >= 1");
  if (!(constants.alpha_i > 0.0) || !(constants.alpha_i < kTwoPi) ||
      !(constants.alpha_j > 0.0) || !(constants.alpha_j < kTwoPi))
    throw Error("appendix_polynomial: puncture angles must lie in (0, 2 pi)");
  if (!(constants.d1 > 0.0) || !(constants.d2 > 0.0) || !(constants.d3 > 0.0))
    throw Error("appendix_polynomial: configuration distances must be > 0");

  const double si = std::sin(constants.alpha_i / 2);
  const double ci = std::cos(constants.alpha_i / 2);
  const double sj = std::sin(constants.alpha_j / 2);
  const double cj = std::cos(constants.alpha_j / 2);
  const double s = si * sj;
  const double ch1 = std::cosh(constants.d1);
  const double ch2 = std::cosh(constants.d2);
  const double coth3 = std::cosh(constants.d3) / std::sinh(constants.d3);

  // cosh d(C_i, C_j) is affine in the half-angle cosine c.
  const Poly X = {ci * cj / s, -1.0 / s};
  const Poly X2 = poly_mul(X, X);
  // Squared-sine numerator of the angle at C_j; its sinh^2 sinh^2 denominator
  // cancels against the squared left side.
  Poly N = poly_add(Poly{1.0 - ch2 * ch2 - ch1 * ch1}, X2, -1.0);
  N = poly_add(N, X, 2.0 * ch1 * ch2);
  // The plugged-in right side as a polynomial in c.
  Poly R = poly_add(Poly{0.0}, poly_add(X2, Poly{1.0}, -1.0),
                    s * coth3 * std::sinh(constants.d2));
  R = poly_add(R, poly_mul(poly_add(poly_mul(X, Poly{ch2}), Poly{ch1}, -1.0),
                           Poly{ci, -cj}));

  const Poly T = cheb_coefficients(m);
  const Poly T2 = poly_mul(T, T);
  Poly P = poly_mul(poly_mul(N, T2), Poly{1.0, 0.0, -1.0});
  for (double& v : P) v *= sj * sj;
  P = poly_add(P, poly_mul(poly_mul(R, R), poly_add(Poly{1.0}, T2, -1.0)),
               -1.0);
  P.resize(static_cast<std::size_t>(2 * m + 4) + 1, 0.0);

  AppendixPolynomial result;
  result.m = m;
  result.coefficients = std::move(P);
  result.leading_closed_form =
      std::ldexp(1.0, 2 * m - 2) / (si * si) *
      (1.0 +
       (coth3 * std::sinh(constants.d2) + ch2 * cj) *
           (coth3 * std::sinh(constants.d2) + ch2 * cj) / (sj * sj));

  const int degree = 2 * m + 4;
  const double h = 0.5;
  double factorial = 1.0;
  for (int q = 2; q <= degree; ++q) factorial *= q;
  double scale = 0.0;
  result.leading_divided_difference =
      finite_difference(result, degree, h, &scale) /
      (factorial * std::pow(h, degree));
  double scale_above = 0.0;
  const double above = finite_difference(result, degree + 1, h, &scale_above);
  result.degree_overflow = std::fabs(above) / std::max(scale_above, 1e-300);
  return result;
}

}  // namespace dtlab

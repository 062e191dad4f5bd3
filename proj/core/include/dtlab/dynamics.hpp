#ifndef DTLAB_DYNAMICS_HPP
#define DTLAB_DYNAMICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dtlab/chain.hpp"
#include "dtlab/holonomy.hpp"
#include "dtlab/mcg.hpp"
#include "dtlab/rng.hpp"

namespace dtlab {

// Number of axis-aligned boxes used by the star-discrepancy estimate.
inline constexpr int kDiscrepancyBoxes = 2048;

// A least-squares fit is rejected when its relative residual exceeds this.
inline constexpr double kFitResidualTol = 1e-6;

// Two configuration points closer than this are treated as coincident when a
// vertex angle would have to be measured between them.
inline constexpr double kDegenerateSepTol = 1e-9;

// Default tolerance for declaring the half-angle relation satisfied.
inline constexpr double kEtaRelationTol = 1e-6;

// ---------------------------------------------------------------------------
// Torus rotations
// ---------------------------------------------------------------------------

// Statistics of a finite orbit of the torus rotation
// x -> (x_1 + r_1, ..., x_d + r_d) mod 2 pi.
struct TorusOrbit {
  int dim = 0;
  std::vector<double> rotation;
  std::int64_t length = 0;
  // Star-discrepancy estimate over a fixed quasi-random family of anchored
  // boxes, always in [0, 1].
  double discrepancy = 0.0;
  // Running Birkhoff average per registered observable. The battery is the
  // ten trigonometric characters named by torus_observable_names(dim); every
  // one has Lebesgue integral zero.
  std::map<std::string, double> birkhoff;
};

// Names of the fixed observable battery used for dimension `dim` (>= 1).
std::vector<std::string> torus_observable_names(int dim);

// Iterates the rotation for `steps` points starting at x (the start point is
// the first sample) and accumulates discrepancy and Birkhoff statistics.
// Requires x.size() == rotation.size() >= 1 and steps >= 1.
TorusOrbit torus_rotate(const std::vector<double>& x,
                        const std::vector<double>& rotation,
                        std::int64_t steps);

// ---------------------------------------------------------------------------
// Chart sampling and random mapping-class walks
// ---------------------------------------------------------------------------

// One draw from the normalized Lebesgue measure d(beta) d(gamma) of the
// action-angle chart: beta by rejection inside the bounding box of the
// momentum polytope, gamma uniform on the torus. Throws RegimeViolation when
// alpha is not in the admissible regime. When `attempts` is non-null it is
// incremented by the number of box draws used (for acceptance-rate studies).
ChartPoint goldman_sample(const std::vector<double>& alpha, Rng& rng,
                          std::uint64_t* attempts = nullptr);

// Names of the fixed chart observable battery (ten entries): trigonometric
// polynomials in the angle coordinates and smooth functions of beta. Indices
// past the chart dimension wrap around, so the battery is defined for every
// n >= 4.
std::vector<std::string> chart_observable_names();

// Values of the battery at p, in the order of chart_observable_names().
std::vector<double> chart_observable_values(const ChartPoint& p);

// Birkhoff summary of a random walk in the mapping-class alphabet.
struct WalkSummary {
  std::int64_t steps = 0;
  // Steps whose twisted point has no recoverable chart coordinates (a
  // singular fiber, or a numerical failure on its boundary); the step is
  // recorded here and the state is left unchanged.
  std::int64_t singular_skips = 0;
  std::vector<std::string> observable_names;
  std::vector<double> averages;
  // Batch-means standard error per observable.
  std::vector<double> std_errors;
  ChartPoint final_point;
};

// Applies `steps` independent uniformly random choices from the given twists
// and their inverses, starting at p, and accumulates Birkhoff averages of the
// chart battery over the visited states (start state included, so steps = 0
// reports the observables at p). Pants-curve twists act on the chart
// directly; pair-curve twists act on the holonomy representation and the
// chart point is recovered from the twisted chain.
WalkSummary orbit_walk(const ChartPoint& p, const std::vector<TwistSpec>& twists,
                       std::int64_t steps, std::uint64_t seed);

// ---------------------------------------------------------------------------
// The two-triangle configuration behind the exceptional-set scans
// ---------------------------------------------------------------------------

// Geometric data of two consecutive non-degenerate chain triangles with
// punctures C_i and C_j (j = i+1 on a regular fiber; the triangles strictly
// between must be collapsed). Y1 is the fixed point of the holonomy of the
// pair curve c_i c_j and upsilon its rotation angle; gamma is the defined
// twist angle between the two triangles (slot j-2); d1 = d(C_i, B_{i-1}),
// d2 = d(C_j, B_{j-2}), d3 = d(C_j, B_{j-1}).
struct UpsilonConfig {
  int i = 0;
  int j = 0;
  double alpha_i = 0.0;
  double alpha_j = 0.0;
  PlanePoint Ci, Cj;
  PlanePoint Bprev;  // shared junction B_{j-2} (= B_{i-1} when j = i+1)
  PlanePoint Bnext;  // junction B_{j-1}
  PlanePoint Y1;
  double upsilon = 0.0;
  double gamma = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// Extracts the configuration from the chart point. Requires n >= 4 and
// 2 <= i < j <= n-1 with both boundary triangles non-degenerate and all
// triangles strictly between collapsed; throws MalformedChain otherwise.
UpsilonConfig upsilon_config(const ChartPoint& p, int i, int j);

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

// Result of a one-parameter scan: the swept grid, the measured quantity per
// grid point (NaN at gaps), located zeros of the measured quantity, optional
// fit coefficients with their relative residual, and the number of grid
// points skipped because the measurement threw (recorded as gaps).
struct ScanReport {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> zeros;
  std::vector<double> fit;
  double residual = 0.0;
  std::int64_t gaps = 0;
};

// Sweeps the defined twist angle of the (i, j) configuration over `grid`
// equispaced values, records cos(upsilon/2) with upsilon the angle function
// of the pair curve c_i c_j, and fits the affine law
//   cos(upsilon/2) = k_1 cos(gamma) + k_2,
// reporting fit = {k_1, k_2}. The coefficients depend only on alpha and beta;
// closed forms (with d_1, d_2 the junction distances of the configuration):
//   k_1 = -sin(a_i/2) sin(a_j/2) sinh(d_1) sinh(d_2)
//   k_2 =  sin(a_i/2) sin(a_j/2) cosh(d_1) cosh(d_2) - cos(a_i/2) cos(a_j/2).
// Requires grid >= 3. Throws NumericallyUnstable when the relative residual
// exceeds kFitResidualTol. Grid points where the pair curve fails to be
// elliptic are recorded as gaps.
ScanReport upsilon_gamma_fit(const ChartPoint& p_template, int i, int j,
                             int grid);

// Which transversality candidate the separation scan tracks.
enum class ClaimVariant { c2c3, c1c3 };

// dist(D_1, B_2) at a single chart point, where D_1 is the fixed point of the
// candidate curve ((c_2 c_3)^-1 or (c_1 c_3)^-1) and B_2 the fixed point of
// the pants curve b_2. Requires n >= 5.
double claim_distance(const ChartPoint& p, ClaimVariant variant);

// Sweeps gamma_1 over `grid` equispaced values (grid = 1 evaluates at the
// template's own gamma_1) and records claim_distance. Zeros of the distance
// can only sit at the exceptional twist angles: gamma_1 in {0, pi} for the
// c2c3 candidate and gamma_1 = beta_1/2 (mod pi shifts) for c1c3. Requires
// n >= 5 and grid >= 1.
ScanReport claim_scan_D1B2(const ChartPoint& p_template, ClaimVariant variant,
                           int grid);

// ---------------------------------------------------------------------------
// The half-angle relation and its polynomial form
// ---------------------------------------------------------------------------

// Both branches of |cos(eta) -+ T_m(cos(upsilon/2))| for the configuration,
// with eta the oriented angle at Y1 from C_j to B_{j-1}.
struct EtaRelationResult {
  double eta = 0.0;
  double upsilon = 0.0;
  double minus_branch = 0.0;  // |cos(eta) - T_m(cos(upsilon/2))|
  double plus_branch = 0.0;   // |cos(eta) + T_m(cos(upsilon/2))|
  bool satisfied = false;     // either branch within tol
};

// Measures the relation on the configuration. Throws DegenerateVertex when
// Y1 coincides with B_{j-1} (within kDegenerateSepTol), the boundary case of
// the exceptional configurations. Generic configurations violate the
// relation by a visible margin.
EtaRelationResult eta_relation_check(const UpsilonConfig& config, int m,
                                     double tol = kEtaRelationTol);

// Residual of the four-parts identity
//   cos(e) cosh(d(Y1,C_j)) =
//       sinh(d(Y1,C_j)) coth(d(C_j,B_{j-1})) - sin(e) cot(eta)
// in the triangle (Y1, C_j, B_{j-1}), all terms measured geometrically and
// normalized by the magnitude of the sides. Throws DegenerateVertex when the
// triangle is collapsed.
double main_relation_residual(const UpsilonConfig& config);

// Residuals of the eleven displayed identities of the configuration
// trigonometry, each normalized relative to the magnitude of its two sides.
// The half-angle variable of the closed forms is the cosine
//   c = cos(a_i/2) cos(a_j/2) - cosh(d(C_i,C_j)) sin(a_i/2) sin(a_j/2),
// which equals -cos(upsilon/2) for the measured rotation angle (the pair
// curve and its inverse trade rotation angle upsilon <-> 2 pi - upsilon).
struct RelationResiduals {
  double law_of_cosines_sides = 0.0;   // side-side-angle law at the junction
  double law_of_cosines_angles = 0.0;  // angle-angle-angle law on (Ci,Cj,Y1)
  double law_of_sines = 0.0;           // on (Ci, Cj, Y1)
  double four_parts = 0.0;             // on (Ci, Cj, Y1)
  double main_relation = 0.0;          // four-parts on (Y1, Cj, B_{j-1})
  double cos_epsilon = 0.0;            // angle at C_j from the junction triangle
  double sin_epsilon_sq = 0.0;         // squared-sine form of the same angle
  double cosh_cicj = 0.0;              // cosh d(C_i,C_j) via the half angle
  double cosh_y1cj = 0.0;              // cosh d(Y1,C_j) via the half angle
  double sinh_y1cj = 0.0;              // sinh d(Y1,C_j) via the law of sines
  double first_plug_in = 0.0;          // main relation after substitutions
};

RelationResiduals relation_residuals(const UpsilonConfig& config);

// ---------------------------------------------------------------------------
// The degree-(2m+4) polynomial certificate
// ---------------------------------------------------------------------------

// Constants of a realized configuration feeding the polynomial.
struct AppendixConstants {
  double alpha_i = 0.0;
  double alpha_j = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

AppendixConstants appendix_constants(const UpsilonConfig& config);

// The polynomial P in c = cos(upsilon/2) obtained by squaring the plugged-in
// main relation and clearing cot^2(eta) with cos^2(eta) = T_m(c)^2. Roots of
// P are the only half-angle cosines compatible with the exceptional relation
// at these constants.
struct AppendixPolynomial {
  int m = 0;
  std::vector<double> coefficients;  // coefficients[k] multiplies c^k
  // Leading coefficient of c^{2m+4}: closed form
  //   (4^{m-1}/sin^2(a_i/2)) *
  //   (1 + (coth(d3) sinh(d2) + cosh(d2) cos(a_j/2))^2 / sin^2(a_j/2))
  // and the value extracted from the evaluator by divided differences.
  double leading_closed_form = 0.0;
  double leading_divided_difference = 0.0;
  // |(2m+5)-th finite difference| relative to the scale of P on the grid;
  // vanishes (up to roundoff) because deg P <= 2m+4.
  double degree_overflow = 0.0;

  double operator()(double c) const;
};

// Assembles the polynomial for m >= 1. All constants must describe a genuine
// configuration: alpha_i, alpha_j in (0, 2 pi) and d1, d2, d3 > 0.
AppendixPolynomial appendix_polynomial(const AppendixConstants& constants,
                                       int m);

}  // namespace dtlab

#endif

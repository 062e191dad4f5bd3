#include "dtlab/symplectic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <utility>

#include "dtlab/errors.hpp"
#include "dtlab/mcg.hpp"

namespace dtlab {

namespace {

// Chart coordinates of a representation, read back through its chain. Only
// meaningful on the regular locus, where every gamma slot is defined.
ChartPoint chart_of(const Representation& rep) {
  const TriangleChain t = chain_from_representation(rep);
  const ChainCoords cc = chain_coords(t, rep.alpha);
  ChartPoint p;
  p.alpha = rep.alpha;
  p.beta = cc.beta;
  p.gamma.reserve(cc.gamma.size());
  for (const auto& g : cc.gamma) {
    if (!g) throw SingularFiber("chart point undefined: collapsed triangle");
    p.gamma.push_back(*g);
  }
  return p;
}

// Substitute the peripheral words of a subsurface for the letters 1..4 of a
// word written in the subsurface generators.
CurveWord lift_word(const CurveWord& w,
                    const std::array<CurveWord, 4>& periph) {
  CurveWord out;
  for (const int letter : w.letters()) {
    const CurveWord& base = periph[static_cast<std::size_t>(std::abs(letter) - 1)];
    out = out * (letter > 0 ? base : base.inverse());
  }
  return out;
}

}  // namespace

ChainObservable angle_observable(CurveWord word, std::vector<double> alpha) {
  return [word = std::move(word),
          alpha = std::move(alpha)](const TriangleChain& t) {
    return angle_function(holonomy(t, alpha), word);
  };
}

ChainObservable beta_observable(int m, std::vector<double> alpha) {
  return [m, alpha = std::move(alpha)](const TriangleChain& t) {
    return chain_coords(t, alpha).beta.at(static_cast<std::size_t>(m - 1));
  };
}

ChainObservable gamma_observable(int k, std::vector<double> alpha) {
  return [k, alpha = std::move(alpha)](const TriangleChain& t) {
    // Copy the slot out of the temporary coordinate record before testing it.
    const std::optional<double> slot =
        chain_coords(t, alpha).gamma.at(static_cast<std::size_t>(k - 1));
    if (!slot) throw SingularFiber("gamma observable hit a collapsed triangle");
    return *slot;
  };
}

BracketEstimate d_gamma(const ChartPoint& p, const ChainObservable& f, int k,
                        double stepsize) {
  if (k < 1 || k > p.n() - 3) throw Error("d_gamma: twist index out of range");
  if (!(stepsize > 0.0)) throw Error("d_gamma: stepsize must be positive");
  const TriangleChain t = build_chain(p);
  if (!is_regular(t)) throw SingularFiber("d_gamma needs a regular point");

  // Observables valued in angles may wrap; differences are taken mod 2 pi in
  // (-pi, pi], which is exact for steps far below the injectivity scale.
  const auto slope = [&](double h) {
    const double plus = f(twist_flow(t, k, h));
    const double minus = f(twist_flow(t, k, -h));
    return wrap_pm_pi(plus - minus) / (2.0 * h);
  };

  const double coarse = slope(stepsize);
  const double fine = slope(0.5 * stepsize);

  BracketEstimate est;
  est.value = (4.0 * fine - coarse) / 3.0;  // Richardson step for central differences
  est.stepsize = stepsize;
  est.residual = std::abs(fine - coarse) / 3.0;
  if (est.residual > std::max(0.05 * std::abs(est.value), kBracketZeroTol)) {
    std::ostringstream msg;
    msg << "d_gamma: finite differences disagree (value " << est.value
        << ", residual " << est.residual << ", step " << stepsize << ")";
    throw NumericallyUnstable(msg.str());
  }
  return est;
}

CurveWord select_d_n4(const Representation& rep4) {
  if (rep4.n() != 4) throw Error("select_d_n4 needs exactly 4 punctures");
  const ChartPoint p = chart_of(rep4);  // throws SingularFiber off the regular locus

  const CurveWord cand_front{std::vector<int>{-3, -2}};  // (c_2 c_3)^{-1}
  const CurveWord cand_skip{std::vector<int>{-3, -1}};   // (c_1 c_3)^{-1}

  const BracketEstimate front =
      d_gamma(p, angle_observable(cand_front, p.alpha), 1);
  const BracketEstimate skip =
      d_gamma(p, angle_observable(cand_skip, p.alpha), 1);

  if (std::abs(front.value) < kSelectorDegenerateTol &&
      std::abs(skip.value) < kSelectorDegenerateTol) {
    std::ostringstream msg;
    msg << "select_d_n4: both candidate brackets vanish (" << front.value
        << ", " << skip.value << ")";
    throw BothDegenerate(msg.str());
  }
  return std::abs(front.value) >= std::abs(skip.value) ? cand_front : cand_skip;
}

PantsFamily construct_transverse(const ChartPoint& p) {
  const int n = p.n();
  if (n < 4) throw Error("construct_transverse needs n >= 4");
  const TriangleChain t = build_chain(p);
  if (!is_regular(t))
    throw SingularFiber("construct_transverse needs a regular point");
  const Representation rep = holonomy(t, p.alpha);

  PantsFamily fam;
  fam.chained = true;
  fam.curves.reserve(static_cast<std::size_t>(n - 3));

  // State of the iteration. x is the first peripheral word of the current
  // 4-punctured subsurface (a conjugate of some c_p), d_prev the previously
  // chosen curve; the seed pair below makes step i = 1 the subsurface
  // (c_1, c_2, c_3, b_2). The invariant x * d_prev^{-1} = b_i^{-1} in the
  // group keeps each quadruple multiplying to the identity.
  CurveWord x{std::vector<int>{1}};
  CurveWord d_prev{std::vector<int>{-2}};

  for (int i = 1; i <= n - 3; ++i) {
    const std::array<CurveWord, 4> periph = {x, d_prev.inverse(),
                                             CurveWord{std::vector<int>{i + 2}},
                                             CurveWord::pants(i + 1)};

    if (i >= 2) {
      // The subsurface degenerates when the previous curve's rotation center
      // collides with the junction it must share a pair of pants with.
      const double sep = dist(fixed_point(evaluate(rep, d_prev)),
                              fixed_point(evaluate(rep, CurveWord::pants(i))));
      if (!(sep > kSeparationTol)) {
        std::ostringstream msg;
        msg << "construct_transverse: step " << i
            << " lost regularity (curve centers " << sep << " apart)";
        throw RegularityLost(msg.str());
      }
    }

    const Representation sub = restrict_subsphere(rep, periph);
    if (!is_regular(chain_from_representation(sub))) {
      std::ostringstream msg;
      msg << "construct_transverse: step " << i
          << " restricted to a singular 4-punctured sphere";
      throw RegularityLost(msg.str());
    }

    const CurveWord w = select_d_n4(sub);
    const CurveWord d_i = lift_word(w, periph);
    if (!(w == CurveWord{std::vector<int>{-3, -2}})) {
      // The skip-type candidate uses the first puncture, so the next
      // subsurface sees it conjugated past the previous curve.
      x = x * d_prev.inverse() * x.inverse();
    }
    d_prev = d_i;
    fam.curves.push_back(d_i);
  }
  return fam;
}

TransversalityCertificate transversality_certificate(const ChartPoint& p,
                                                     const PantsFamily& fam) {
  const int m = p.n() - 3;
  if (static_cast<int>(fam.curves.size()) != m)
    throw Error("transversality_certificate: family size must be n - 3");

  TransversalityCertificate cert;
  cert.matrix.assign(static_cast<std::size_t>(m),
                     std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int j = 1; j <= m; ++j) {
    const ChainObservable obs =
        angle_observable(fam.curves[static_cast<std::size_t>(j - 1)], p.alpha);
    for (int i = 1; i <= m; ++i) {
      cert.matrix[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(
          j - 1)] = d_gamma(p, obs, i).value;
    }
  }

  double scale = 0.0;
  for (const auto& row : cert.matrix)
    for (const double v : row) scale = std::max(scale, std::abs(v));
  // Entries below the estimator's own zero resolution must not act as
  // pivots, so the rank tolerance has an absolute floor.
  cert.rank =
      matrix_rank(cert.matrix, std::max(kRankTolFactor * scale, kBracketZeroTol));
  return cert;
}

int matrix_rank(std::vector<std::vector<double>> m, double tol) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows > 0 ? static_cast<int>(m[0].size()) : 0;
  if (!(tol >= 0.0)) throw Error("matrix_rank: tolerance must be nonnegative");

  int rank = 0;
  int lead = 0;
  for (int col = 0; col < cols && lead < rows; ++col) {
    int pivot = -1;
    double best = tol;
    for (int r = lead; r < rows; ++r) {
      const double mag = std::abs(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[static_cast<std::size_t>(lead)], m[static_cast<std::size_t>(pivot)]);
    for (int r = lead + 1; r < rows; ++r) {
      const double f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       m[static_cast<std::size_t>(lead)][static_cast<std::size_t>(col)];
      for (int c = col; c < cols; ++c)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * m[static_cast<std::size_t>(lead)][static_cast<std::size_t>(c)];
    }
    ++lead;
    ++rank;
  }
  return rank;
}

}  // namespace dtlab

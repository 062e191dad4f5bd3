#include "dtlab/holonomy.hpp"

#include <algorithm>
#include <cmath>

#include "dtlab/errors.hpp"

namespace dtlab {

namespace {

constexpr double kVertexMergeTol = 1e-7;

void push_reduced(std::vector<int>& out, int letter) {
  if (letter == 0) throw Error("CurveWord: zero is not a letter");
  if (!out.empty() && out.back() == -letter)
    out.pop_back();
  else
    out.push_back(letter);
}

}  // namespace

CurveWord::CurveWord(std::vector<int> letters) {
  letters_.reserve(letters.size());
  for (int letter : letters) push_reduced(letters_, letter);
}

CurveWord CurveWord::pants(int k) {
  if (k < 1) throw Error("CurveWord::pants: index must be >= 1");
  std::vector<int> letters(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) letters[i] = -(k + 1 - i);
  return CurveWord(std::move(letters));
}

CurveWord CurveWord::pair(int i, int j) {
  if (i < 1 || j < 1 || i == j) throw Error("CurveWord::pair: bad indices");
  return CurveWord({i, j});
}

int CurveWord::max_index() const {
  int m = 0;
  for (int letter : letters_) m = std::max(m, std::abs(letter));
  return m;
}

CurveWord CurveWord::inverse() const {
  CurveWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    w.letters_.push_back(-*it);
  return w;
}

CurveWord CurveWord::operator*(const CurveWord& rhs) const {
  CurveWord w;
  w.letters_ = letters_;
  for (int letter : rhs.letters_) push_reduced(w.letters_, letter);
  return w;
}

Representation holonomy(const TriangleChain& t,
                        const std::vector<double>& alpha) {
  const int n = t.n();
  if (n < 4 || static_cast<int>(alpha.size()) != n)
    throw Error("holonomy: sizes do not match");
  Representation rep;
  rep.alpha = alpha;
  rep.gens.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) rep.gens.push_back(rotation(t.C[p], alpha[p]));
  Isometry prod = Isometry::identity();
  for (const Isometry& g : rep.gens) prod = prod * g;
  if (distance_to_identity(prod) > kHolonomyTol)
    throw HolonomyMismatch("holonomy: generator product is not the identity");
  return rep;
}

Isometry evaluate(const Representation& rep, const CurveWord& w) {
  Isometry out = Isometry::identity();
  for (int letter : w.letters()) {
    const int idx = std::abs(letter) - 1;
    if (idx >= rep.n()) throw Error("evaluate: letter exceeds generator count");
    const Isometry& g = rep.gens[static_cast<std::size_t>(idx)];
    out = out * (letter > 0 ? g : g.inverse());
  }
  // Renormalize: long products drift away from det = 1.
  return out.normalized();
}

double angle_function(const Representation& rep, const CurveWord& w,
                      const Tolerances& tol) {
  return rotation_angle(evaluate(rep, w), tol);
}

Representation restrict_subsphere(const Representation& rep,
                                  const std::array<CurveWord, 4>& words) {
  Representation out;
  out.gens.reserve(4);
  Isometry prod = Isometry::identity();
  for (const CurveWord& w : words) {
    out.gens.push_back(evaluate(rep, w));
    prod = prod * out.gens.back();
  }
  if (distance_to_identity(prod) > kHolonomyTol)
    throw NotClosed("restrict_subsphere: peripheral words do not close up");
  out.alpha.reserve(4);
  for (const Isometry& g : out.gens) out.alpha.push_back(rotation_angle(g));
  return out;
}

TriangleChain chain_from_representation(const Representation& rep) {
  const int n = rep.n();
  if (n < 4) throw Error("chain_from_representation: need n >= 4");
  TriangleChain t;
  t.C.reserve(static_cast<std::size_t>(n));
  for (const Isometry& g : rep.gens) t.C.push_back(fixed_point(g));
  t.B.reserve(static_cast<std::size_t>(n) - 3);
  for (int k = 1; k <= n - 3; ++k)
    t.B.push_back(fixed_point(evaluate(rep, CurveWord::pants(k))));
  t.degenerate.assign(static_cast<std::size_t>(n) - 2, 0);
  for (int k = 0; k <= n - 3; ++k) {
    const PlanePoint a = t.junction(k);
    const PlanePoint b = t.C[k + 1];
    const PlanePoint c = t.junction(k + 1);
    if (dist(a, b) <= kVertexMergeTol && dist(a, c) <= kVertexMergeTol &&
        dist(b, c) <= kVertexMergeTol)
      t.degenerate[k] = 1;
  }
  return t;
}

}  // namespace dtlab

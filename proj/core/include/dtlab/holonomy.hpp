#ifndef DTLAB_HOLONOMY_HPP
#define DTLAB_HOLONOMY_HPP

#include <array>
#include <vector>

#include "dtlab/chain.hpp"
#include "dtlab/hplane.hpp"

namespace dtlab {

// Largest PSL(2,R) distance to the identity tolerated for products that are
// required to close up.
inline constexpr double kHolonomyTol = 1e-8;

// A representation of the n-punctured sphere group: images of the peripheral
// generators c_1..c_n (whose product is the identity) plus their rotation
// angles alpha.
struct Representation {
  std::vector<Isometry> gens;
  std::vector<double> alpha;

  int n() const { return static_cast<int>(gens.size()); }
};

// Reduced word in the generators. Letters are signed 1-based indices:
// +i stands for c_i and -i for its inverse. Free reduction is applied
// eagerly, so adjacent cancelling letters never survive construction.
class CurveWord {
 public:
  CurveWord() = default;
  explicit CurveWord(std::vector<int> letters);

  // Pants curve b_k = (c_1 c_2 ... c_{k+1})^{-1}.
  static CurveWord pants(int k);
  // The curve c_i c_j enclosing the punctures i and j.
  static CurveWord pair(int i, int j);

  const std::vector<int>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  int max_index() const;

  CurveWord inverse() const;
  CurveWord operator*(const CurveWord& rhs) const;

  friend bool operator==(const CurveWord&, const CurveWord&) = default;

 private:
  std::vector<int> letters_;
};

// Peripheral rotations about the chain's puncture vertices. Validates the
// defining relation: the ordered product of the generators must be the
// identity of PSL(2,R) within kHolonomyTol, else HolonomyMismatch.
Representation holonomy(const TriangleChain& t,
                        const std::vector<double>& alpha);

// Image of a word under the representation.
Isometry evaluate(const Representation& rep, const CurveWord& w);

// Rotation angle of the image of w, in (0, 2 pi). Throws NonElliptic (or
// IdentityIsometry) when the image carries no angle.
double angle_function(const Representation& rep, const CurveWord& w,
                      const Tolerances& tol = Tolerances{});

// Representation of a 4-punctured subsurface whose peripheral curves are the
// given words. Throws NotClosed unless the word images multiply to the
// identity; the new peripheral angles are the rotation angles of the images.
Representation restrict_subsphere(const Representation& rep,
                                  const std::array<CurveWord, 4>& words);

// Triangle chain underlying a representation: C_p is the fixed point of
// rho(c_p), B_k the fixed point of rho(b_k), and a triangle is collapsed
// when its three vertices coincide within tolerance.
TriangleChain chain_from_representation(const Representation& rep);

}  // namespace dtlab

#endif

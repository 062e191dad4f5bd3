#ifndef DTLAB_MCG_HPP
#define DTLAB_MCG_HPP

#include "dtlab/chain.hpp"
#include "dtlab/holonomy.hpp"

namespace dtlab {

// Two representations (or twist-fixed point sets) are compared with this
// tolerance on fixed-point positions.
inline constexpr double kTwistFixTol = 1e-7;

// One Dehn twist of the walk alphabet: either along the pants curve b_k or
// along the curve c_i c_j enclosing the punctures i < j, raised to `power`.
struct TwistSpec {
  enum class Kind { PantsCurve, PairCurve };

  Kind kind = Kind::PantsCurve;
  int k = 1;
  int i = 1;
  int j = 2;
  int power = 1;

  static TwistSpec pants(int k, int power = 1) {
    return TwistSpec{Kind::PantsCurve, k, 0, 0, power};
  }
  static TwistSpec pair(int i, int j, int power = 1) {
    return TwistSpec{Kind::PairCurve, 0, i, j, power};
  }
};

// Dehn twist along b_k in the angle chart: gamma_k += power * beta_k
// (mod 2 pi), everything else unchanged. Throws SingularFiber when gamma_k
// is undefined at p (triangle k collapsed, or no earlier triangle survives).
ChartPoint twist_pants(const ChartPoint& p, int k, int power);

// Hamiltonian twist flow for time `time` along b_k: rotates the tail of the
// chain (C_{k+2}..C_n and B_{k+1}..B_{n-3}) about B_k so that gamma_k grows
// by exactly `time`. time = beta_k reproduces twist_pants(p, k, 1) and
// time = 2 pi is the identity.
TriangleChain twist_flow(const TriangleChain& t, int k, double time);

// Dehn twist along c_i c_j at the representation level, applied to the
// generators and iterated |power| times (inverse twist for power < 0). The
// peripheral angles are untouched.
Representation twist_paircurve(const Representation& rep, int i, int j,
                               int power);

// Fixed-point criterion for the twist along c_i c_j: the representation is
// fixed iff the fixed points C_i..C_j all coincide, or all the remaining
// C_{j+1}..C_n, C_1..C_{i-1} do.
bool is_twist_fixed(const Representation& rep, int i, int j);

// Whether two representations differ by a global conjugation, decided by
// aligning a frame on two separated fixed points and comparing all
// generators.
bool conjugacy_equal(const Representation& r1, const Representation& r2,
                     double tol = 1e-6);

}  // namespace dtlab

#endif

#ifndef DTLAB_TRIG_HPP
#define DTLAB_TRIG_HPP

#include <array>

#include "dtlab/hplane.hpp"

namespace dtlab {

// Hyperbolic triangle with side lengths a, b, c and interior angles A, B, C,
// where side a is opposite angle A and so on.
struct TriangleData {
  double a = 0.0, b = 0.0, c = 0.0;
  double A = 0.0, B = 0.0, C = 0.0;
};

// Side c from sides a, b and the included angle C:
// cosh c = cosh a cosh b - sinh a sinh b cos C.
double locos_sides(double a, double b, double C);

// All side lengths from the three interior angles via the dual law of
// cosines, cosh a = (cos A + cos B cos C) / (sin B sin C). Throws
// AngleSumTooLarge unless A + B + C < pi (each angle must lie in (0, pi)).
TriangleData locos_angles(double A, double B, double C);

// Residual of the four-parts relation
// cos C cosh a = sinh a coth b - sin C cot B
// for the labeled sides and angles of t; zero on every valid triangle.
double four_parts_residual(const TriangleData& t);

// Chebyshev polynomial of the first kind, T_m(x) = cos(m * acos x) on [-1,1],
// evaluated by the three-term recurrence (valid for all real x).
double cheb_cos(int m, double x);

// Vertices (V_A, V_B, V_C) of t in the upper half-plane: V_A at (0,1), V_B
// up the imaginary axis at distance c, and V_C such that the triangle
// V_A -> V_B -> V_C is clockwise.
std::array<PlanePoint, 3> realize_triangle(const TriangleData& t);

// acosh clamped just inside its domain; guards values that fall below 1 by
// roundoff near degenerate configurations.
inline double safe_acosh(double x) {
  return std::acosh(x < 1.0 + 1e-15 ? 1.0 + 1e-15 : x);
}

}  // namespace dtlab

#endif

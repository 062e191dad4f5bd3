#include "dtlab/trig.hpp"

#include <cmath>

#include "dtlab/errors.hpp"

namespace dtlab {

double locos_sides(double a, double b, double C) {
  if (a < 0.0 || b < 0.0) throw Error("locos_sides: negative side length");
  const double ch =
      std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(C);
  return safe_acosh(ch);
}

TriangleData locos_angles(double A, double B, double C) {
  if (A <= 0.0 || B <= 0.0 || C <= 0.0 || A >= kPi || B >= kPi || C >= kPi)
    throw Error("locos_angles: angles must lie in (0, pi)");
  if (A + B + C >= kPi)
    throw AngleSumTooLarge("locos_angles: interior angles sum to >= pi");
  TriangleData t;
  t.A = A;
  t.B = B;
  t.C = C;
  t.a = safe_acosh((std::cos(A) + std::cos(B) * std::cos(C)) /
                   (std::sin(B) * std::sin(C)));
  t.b = safe_acosh((std::cos(B) + std::cos(C) * std::cos(A)) /
                   (std::sin(C) * std::sin(A)));
  t.c = safe_acosh((std::cos(C) + std::cos(A) * std::cos(B)) /
                   (std::sin(A) * std::sin(B)));
  return t;
}

double four_parts_residual(const TriangleData& t) {
  return std::abs(std::cos(t.C) * std::cosh(t.a) -
                  std::sinh(t.a) / std::tanh(t.b) +
                  std::sin(t.C) * std::cos(t.B) / std::sin(t.B));
}

double cheb_cos(int m, double x) {
  if (m < 0) throw Error("cheb_cos: negative degree");
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < m; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::array<PlanePoint, 3> realize_triangle(const TriangleData& t) {
  const PlanePoint va{0.0, 1.0};
  const PlanePoint vb = geodesic_point(va, kPi / 2.0, t.c);
  // Placing V_C at direction pi/2 - A makes the counterclockwise angle at
  // V_A from the ray to V_B to the ray to V_C equal to 2*pi - A, i.e. the
  // triangle winds clockwise with interior angle A at V_A.
  const PlanePoint vc = geodesic_point(va, kPi / 2.0 - t.A, t.b);
  return {va, vb, vc};
}

}  // namespace dtlab

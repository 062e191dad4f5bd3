#ifndef DTLAB_HPLANE_HPP
#define DTLAB_HPLANE_HPP

#include <array>
#include <cmath>

namespace dtlab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduce an angle to [0, 2*pi).
inline double wrap_two_pi(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

// Reduce an angle to (-pi, pi].
inline double wrap_pm_pi(double theta) {
  double t = wrap_two_pi(theta);
  if (t > kPi) t -= kTwoPi;
  return t;
}

// Numerical tolerances shared across the geometric predicates.
struct Tolerances {
  double point = 1e-9;      // point coincidence
  double identity = 1e-10;  // matrix distance to +-identity
  double elliptic = 1e-9;   // margin below |trace| = 2 required for elliptic
};

// Point x + iy of the upper half-plane model, y > 0.
struct PlanePoint {
  double x = 0.0;
  double y = 1.0;
};

// Orientation-preserving isometry of the upper half-plane: the Moebius map
// z -> (az + b)/(cz + d) with real entries and ad - bc = 1. The matrices m
// and -m act identically, so all comparisons treat them as equal.
struct Isometry {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Isometry identity() { return Isometry{}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }

  Isometry inverse() const { return Isometry{d, -b, -c, a}; }

  PlanePoint apply(PlanePoint p) const;

  // Rescale so that det = 1. The entries of a PSL(2,R) element are only
  // defined up to sign; canonical() additionally flips the sign so that the
  // first entry of (a,b,c,d) exceeding `tol` in magnitude is positive.
  Isometry normalized() const;
  Isometry canonical(double tol = 1e-12) const;
};

inline Isometry operator*(const Isometry& g, const Isometry& h) {
  return Isometry{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                  g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

// max-abs entry distance between g and h as PSL(2,R) elements, i.e. the
// smaller of the distances to +h and to -h after normalization.
double isometry_distance(const Isometry& g, const Isometry& h);

inline bool isometry_equal(const Isometry& g, const Isometry& h,
                           double tol = 1e-9) {
  return isometry_distance(g, h) <= tol;
}

// Distance to the identity of PSL(2,R) (min over the two lifts).
double distance_to_identity(const Isometry& g);

inline bool points_equal(PlanePoint p, PlanePoint q, double tol = 1e-9) {
  return std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol;
}

// Hyperbolic distance between two points.
double dist(PlanePoint p, PlanePoint q);

// Euclidean direction angle at p of the initial tangent of the geodesic from
// p to q. Directions at a point form a circle R/2piZ; oriented angles between
// rays are differences of these values. Throws DegenerateVertex if p == q.
double ray_direction(PlanePoint p, PlanePoint q, double point_tol = 1e-12);

// Counterclockwise angle at p from the geodesic ray p->a to the ray p->b,
// in [0, 2*pi). Throws DegenerateVertex if a or b coincides with p.
double oriented_angle(PlanePoint a, PlanePoint p, PlanePoint b,
                      const Tolerances& tol = Tolerances{});

// Point at hyperbolic distance `len` from p along the geodesic leaving p in
// Euclidean direction angle `direction`.
PlanePoint geodesic_point(PlanePoint p, double direction, double len);

// Elliptic isometry fixing `center` and rotating the tangent space at it
// counterclockwise by theta. theta is taken mod 2*pi; rotation(p, 0) is the
// identity.
Isometry rotation(PlanePoint center, double theta);

// Isometry mapping i to p and the direction pi/2 at i to direction
// pi/2 + phi at p. Used to align frames when comparing configurations.
Isometry frame(PlanePoint p, double phi);

// Rotation angle in (0, 2*pi) of an elliptic isometry. Throws NonElliptic if
// |trace| >= 2 - tol.elliptic after normalization, IdentityIsometry if the
// element is the identity of PSL(2,R) within tol.identity.
double rotation_angle(const Isometry& g, const Tolerances& tol = Tolerances{});

// Fixed point in the upper half-plane of an elliptic isometry. Same error
// conditions as rotation_angle.
PlanePoint fixed_point(const Isometry& g, const Tolerances& tol = Tolerances{});

}  // namespace dtlab

#endif

#include "dtlab/hplane.hpp"

#include <algorithm>
#include <cmath>

#include "dtlab/errors.hpp"

namespace dtlab {

PlanePoint Isometry::apply(PlanePoint p) const {
  // (az + b)/(cz + d) for z = x + iy, kept in real arithmetic. With
  // w = cz + d the image is ((az + b) * conj(w)) / |w|^2 and the imaginary
  // part reduces to det * y / |w|^2.
  const double wr = c * p.x + d;
  const double wi = c * p.y;
  const double nr = a * p.x + b;
  const double ni = a * p.y;
  const double ww = wr * wr + wi * wi;
  return PlanePoint{(nr * wr + ni * wi) / ww, (a * d - b * c) * p.y / ww};
}

Isometry Isometry::normalized() const {
  const double s = det();
  if (!(s > 0.0)) throw Error("isometry has non-positive determinant");
  const double r = 1.0 / std::sqrt(s);
  return Isometry{a * r, b * r, c * r, d * r};
}

Isometry Isometry::canonical(double tol) const {
  Isometry g = normalized();
  const std::array<double, 4> e{g.a, g.b, g.c, g.d};
  for (double v : e) {
    if (std::abs(v) > tol) {
      if (v < 0.0) return Isometry{-g.a, -g.b, -g.c, -g.d};
      return g;
    }
  }
  return g;
}

double isometry_distance(const Isometry& g, const Isometry& h) {
  const Isometry u = g.normalized();
  const Isometry v = h.normalized();
  const double plus =
      std::max({std::abs(u.a - v.a), std::abs(u.b - v.b), std::abs(u.c - v.c),
                std::abs(u.d - v.d)});
  const double minus =
      std::max({std::abs(u.a + v.a), std::abs(u.b + v.b), std::abs(u.c + v.c),
                std::abs(u.d + v.d)});
  return std::min(plus, minus);
}

double distance_to_identity(const Isometry& g) {
  return isometry_distance(g, Isometry::identity());
}

double dist(PlanePoint p, PlanePoint q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
  return std::acosh(std::max(1.0, arg));
}

double ray_direction(PlanePoint p, PlanePoint q, double point_tol) {
  // Translate p to i by z -> (z - p.x)/p.y. The derivative 1/p.y is real and
  // positive, so direction angles at p are unchanged. The geodesic from i to
  // q' is either the imaginary axis or the semicircle centered at
  // s = (|q'|^2 - 1)/(2 q'.x) on the real line; its tangent at i is
  // perpendicular to the radius i - s, i.e. proportional to (1, s).
  const double qx = (q.x - p.x) / p.y;
  const double qy = q.y / p.y;
  const double dx = qx;
  const double dy = qy - 1.0;
  if (std::abs(dx) <= point_tol && std::abs(dy) <= point_tol)
    throw DegenerateVertex("ray_direction: endpoints coincide");
  if (qx == 0.0) return qy > 1.0 ? kPi / 2.0 : -kPi / 2.0;
  const double s = (qx * qx + qy * qy - 1.0) / (2.0 * qx);
  return qx > 0.0 ? std::atan2(s, 1.0) : std::atan2(-s, -1.0);
}

double oriented_angle(PlanePoint a, PlanePoint p, PlanePoint b,
                      const Tolerances& tol) {
  if (points_equal(a, p, tol.point) || points_equal(b, p, tol.point))
    throw DegenerateVertex("oriented_angle: ray endpoint coincides with vertex");
  const double da = ray_direction(p, a);
  const double db = ray_direction(p, b);
  return wrap_two_pi(db - da);
}

PlanePoint geodesic_point(PlanePoint p, double direction, double len) {
  // frame(p, phi) sends the unit-speed geodesic t -> i e^t (leaving i in
  // direction pi/2) to the geodesic leaving p in direction pi/2 + phi.
  return frame(p, direction - kPi / 2.0).apply(PlanePoint{0.0, std::exp(len)});
}

Isometry rotation(PlanePoint center, double theta) {
  const double h = theta / 2.0;
  const double co = std::cos(h);
  const double si = std::sin(h);
  // r fixes i and rotates the tangent space there counterclockwise by theta:
  // its derivative at i is exp(i*theta).
  const Isometry r{co, si, -si, co};
  const double sy = std::sqrt(center.y);
  const Isometry t{sy, center.x / sy, 0.0, 1.0 / sy};
  return t * r * t.inverse();
}

Isometry frame(PlanePoint p, double phi) {
  const double h = phi / 2.0;
  const double co = std::cos(h);
  const double si = std::sin(h);
  const Isometry r{co, si, -si, co};
  const double sy = std::sqrt(p.y);
  const Isometry t{sy, p.x / sy, 0.0, 1.0 / sy};
  return t * r;
}

namespace {

// Fixed point of a normalized elliptic matrix. The fixed-point equation
// c z^2 + (d - a) z - b = 0 has discriminant tr^2 - 4 < 0, and the root with
// positive imaginary part picks the sign of c.
PlanePoint elliptic_fixed_point(const Isometry& g) {
  const double tr = g.trace();
  const double root = std::sqrt(std::max(0.0, 4.0 - tr * tr));
  const double sign = g.c > 0.0 ? 1.0 : -1.0;
  return PlanePoint{(g.a - g.d) / (2.0 * g.c), sign * root / (2.0 * g.c)};
}

Isometry require_elliptic(const Isometry& g, const Tolerances& tol) {
  const Isometry m = g.normalized();
  if (distance_to_identity(m) <= tol.identity)
    throw IdentityIsometry("rotation data undefined for the identity");
  if (std::abs(m.trace()) >= 2.0 - tol.elliptic)
    throw NonElliptic("isometry is not elliptic: |trace| >= 2 - tol");
  return m;
}

}  // namespace

double rotation_angle(const Isometry& g, const Tolerances& tol) {
  const Isometry m = require_elliptic(g, tol);
  const PlanePoint z0 = elliptic_fixed_point(m);
  // The derivative at the fixed point is 1/(c z0 + d)^2 = exp(i * theta)
  // since |c z0 + d| = 1 on elliptic elements, so theta = -2 arg(c z0 + d).
  // Replacing m by -m shifts the argument by pi and theta by 2 pi: the same
  // class in PSL(2,R) gives the same answer.
  const double wr = m.c * z0.x + m.d;
  const double wi = m.c * z0.y;
  const double theta = wrap_two_pi(-2.0 * std::atan2(wi, wr));
  return theta == 0.0 ? kTwoPi : theta;
}

PlanePoint fixed_point(const Isometry& g, const Tolerances& tol) {
  return elliptic_fixed_point(require_elliptic(g, tol));
}

}  // namespace dtlab

#ifndef DTLAB_ERRORS_HPP
#define DTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dtlab {

// Base class for every failure the library reports on purpose. Callers that
// want to distinguish "input outside the mathematical domain" from plain
// std::logic_error can catch this type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// oriented_angle / eta_relation_check: two of the three points coincide, so
// the angle at the middle point is undefined.
struct DegenerateVertex : Error {
  using Error::Error;
};

// rotation_angle / angle_function: the isometry has |trace| >= 2 (up to
// tolerance), so it has no fixed point in the open upper half-plane.
struct NonElliptic : Error {
  using Error::Error;
};

// rotation_angle: the isometry is the identity in PSL(2,R); every point is
// fixed and no rotation angle is distinguished.
struct IdentityIsometry : Error {
  using Error::Error;
};

// locos_angles: a hyperbolic triangle needs interior angle sum < pi.
struct AngleSumTooLarge : Error {
  using Error::Error;
};

// Peripheral angles violate sum(alpha) > 2*pi*(n-1).
struct RegimeViolation : Error {
  using Error::Error;
};

// The requested beta lies outside the moment polytope for the given alpha.
struct PolytopeViolation : Error {
  using Error::Error;
};

// chain_coords: the vertex data does not satisfy the chain constraints
// (measured angles inconsistent with any admissible parameter vector).
struct MalformedChain : Error {
  using Error::Error;
};

// holonomy: the generator product is not the identity in PSL(2,R).
struct HolonomyMismatch : Error {
  using Error::Error;
};

// restrict_subsphere: the four curve words do not multiply to the identity.
struct NotClosed : Error {
  using Error::Error;
};

// twist_pants: the angle coordinate gamma_k is undefined on this fiber.
struct SingularFiber : Error {
  using Error::Error;
};

// Finite-difference estimates disagree across step sizes beyond tolerance.
struct NumericallyUnstable : Error {
  using Error::Error;
};

// select_d_n4: both candidate curves have vanishing bracket at this point.
struct BothDegenerate : Error {
  using Error::Error;
};

// construct_transverse: an intermediate four-punctured sphere is singular
// (D_{i-1} collides with B_i), so the iteration cannot continue.
struct RegularityLost : Error {
  using Error::Error;
};

}  // namespace dtlab

#endif

#pragma once

#include <string>

#include "dirichlet/vec3.hpp"

namespace dirichlet {

/// Built-in closed-form fields used for boundary data, densities and test
/// potentials.
struct Expression {
  enum class Kind {
    Constant,           // scale
    Linear,             // dot(coeffs, x) + offset
    QuadraticHarmonic,  // scale * (x^2 - y^2)
    ExternalPole,       // scale / |x - point|
    BallIndicator,      // scale inside |x - point| < radius, else 0
    ShellPotential,     // potential of density `scale` on the sphere (point, radius)
    Bump,               // scale * (1 - |x - point|^2 / radius^2)^4 inside, else 0
    Paraboloid,         // -(2 pi / 3) scale |x - point|^2, whose density is `scale`
  };

  Kind kind = Kind::Constant;
  Vec3 coeffs{1.0, 0.0, 0.0};
  double offset = 0.0;
  Vec3 point;
  double radius = 1.0;
  double scale = 1.0;

  double operator()(const Vec3& x) const;
};

/// Accepts the names used in config files: constant, linear,
/// quadratic-harmonic, external-pole, ball-indicator, shell-potential, bump,
/// paraboloid. Throws InvalidArgument otherwise.
Expression::Kind expression_kind_from_string(const std::string& name);
const char* to_string(Expression::Kind kind);

}  // namespace dirichlet

#include "dirichlet/expressions.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "dirichlet/error.hpp"

namespace dirichlet {

namespace {

constexpr std::array<std::pair<Expression::Kind, const char*>, 8> kNames{{
    {Expression::Kind::Constant, "constant"},
    {Expression::Kind::Linear, "linear"},
    {Expression::Kind::QuadraticHarmonic, "quadratic-harmonic"},
    {Expression::Kind::ExternalPole, "external-pole"},
    {Expression::Kind::BallIndicator, "ball-indicator"},
    {Expression::Kind::ShellPotential, "shell-potential"},
    {Expression::Kind::Bump, "bump"},
    {Expression::Kind::Paraboloid, "paraboloid"},
}};

}  // namespace

double Expression::operator()(const Vec3& x) const {
  const double pi = std::numbers::pi;
  switch (kind) {
    case Kind::Constant: return scale;
    case Kind::Linear: return dot(coeffs, x) + offset;
    case Kind::QuadraticHarmonic: return scale * (x.x * x.x - x.y * x.y);
    case Kind::ExternalPole: return scale / distance(x, point);
    case Kind::BallIndicator: return distance(x, point) < radius ? scale : 0.0;
    case Kind::ShellPotential: {
      const double q = 4.0 * pi * radius * radius * scale;
      return q / std::max(distance(x, point), radius);
    }
    case Kind::Bump: {
      const Vec3 d = x - point;
      const double s = dot(d, d) / (radius * radius);
      return s < 1.0 ? scale * std::pow(1.0 - s, 4) : 0.0;
    }
    case Kind::Paraboloid: {
      const Vec3 d = x - point;
      return -2.0 * pi / 3.0 * scale * dot(d, d);
    }
  }
  return 0.0;
}

Expression::Kind expression_kind_from_string(const std::string& name) {
  for (const auto& [kind, n] : kNames)
    if (name == n) return kind;
  throw Error(ErrorCode::InvalidArgument, "unknown expression '" + name + "'");
}

const char* to_string(Expression::Kind kind) {
  for (const auto& [k, n] : kNames)
    if (k == kind) return n;
  return "unknown";
}

}  // namespace dirichlet

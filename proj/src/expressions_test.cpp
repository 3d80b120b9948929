#include "dirichlet/expressions.hpp"

#include <cmath>
#include <numbers>

#include "dirichlet/error.hpp"
#include "doctest.h"

using namespace dirichlet;

TEST_CASE("expression names round trip") {
  for (const char* name : {"constant", "linear", "quadratic-harmonic", "external-pole", "ball-indicator",
                           "shell-potential", "bump", "paraboloid"})
    CHECK(std::string(to_string(expression_kind_from_string(name))) == name);
  CHECK_THROWS_AS(expression_kind_from_string("cubic"), Error);
}

TEST_CASE("expression values") {
  constexpr double pi = std::numbers::pi;
  Expression e;
  e.kind = Expression::Kind::Linear;
  e.coeffs = {1, -2, 3};
  e.offset = 0.5;
  CHECK(e({1, 1, 1}) == doctest::Approx(2.5));

  e = {};
  e.kind = Expression::Kind::ExternalPole;
  e.point = {3, 0, 0};
  CHECK(e({1, 0, 0}) == doctest::Approx(0.5));

  e = {};
  e.kind = Expression::Kind::ShellPotential;
  CHECK(e({0.2, 0, 0}) == doctest::Approx(4 * pi));
  CHECK(e({0, 0, 2}) == doctest::Approx(2 * pi));

  e = {};
  e.kind = Expression::Kind::Bump;
  e.radius = 0.5;
  CHECK(e({0, 0, 0}) == 1.0);
  CHECK(e({0.6, 0, 0}) == 0.0);

  e = {};
  e.kind = Expression::Kind::Paraboloid;
  CHECK(e({1, 0, 0}) == doctest::Approx(-2 * pi / 3));

  e = {};
  e.kind = Expression::Kind::BallIndicator;
  e.scale = 3;
  CHECK(e({0.5, 0, 0}) == 3.0);
  CHECK(e({1.5, 0, 0}) == 0.0);

  e = {};
  e.kind = Expression::Kind::QuadraticHarmonic;
  CHECK(e({2, 1, 9}) == doctest::Approx(3.0));
}

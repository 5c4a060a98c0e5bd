#include <doctest.h>

#include <cmath>

#include "cdk/errors.hpp"
#include "cdk/potential.hpp"

using namespace cdk;

TEST_CASE("polynomial potentials evaluate with analytic derivatives") {
  const Potential p = build_polynomial_potential({0, 0, 1}, whole_line(), "x2");
  CHECK(p.value(3.0) == 9.0);
  CHECK(p.deriv(1.0) == 2.0);
  CHECK(p.second(5.0) == 2.0);

  const Potential q = build_polynomial_potential({0, 0, 0, 0, 1}, whole_line(), "x4");
  CHECK(q.value(2.0) == 16.0);
  CHECK(q.second(1.0) == 12.0);
}

TEST_CASE("convexity violations are rejected") {
  CHECK_THROWS_AS(build_polynomial_potential({0, 0, -1}, whole_line()),
                  ConvexityViolation);
  CHECK_THROWS_AS(build_polynomial_potential({0, 1}, {-1.0, 1.0}),
                  ConvexityViolation);  // linear: V'' = 0
  CHECK_THROWS_AS(build_polynomial_potential({0, 1}, whole_line()),
                  ConvexityViolation);
  CHECK_THROWS_AS(build_polynomial_potential({0, 0, 0, 1}, whole_line()),
                  ConvexityViolation);  // cubic: V'' < 0 on the left
}

TEST_CASE("shifted minimizers are found by the expanding window scan") {
  // minimum near x = 5000, far outside the default scan box
  const Potential p =
      build_polynomial_potential({0, -1, 1e-4}, whole_line(), "shifted");
  CHECK(p.deriv(5000.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("the built-in convex family passes the grid check") {
  CHECK_NOTHROW(build_polynomial_potential({0, 0, 1}, whole_line()));
  CHECK_NOTHROW(build_polynomial_potential({0, 0, 0, 0, 1}, whole_line()));
  CHECK_NOTHROW(build_polynomial_potential({0, 0, 1, 0, 1}, whole_line()));
  Field cosh_field;
  cosh_field.f = [](double x) { return std::cosh(x); };
  cosh_field.df = [](double x) { return std::sinh(x); };
  cosh_field.ddf = [](double x) { return std::cosh(x); };
  CHECK_NOTHROW(build_generic_potential(cosh_field, {-2.0, 2.0}, "cosh"));
}

TEST_CASE("perturbation is exactly linear") {
  const Potential base = build_polynomial_potential({0, 0, 1}, {-3.0, 3.0});
  const Potential p = perturb(base, sin_field(), 0.01);
  CHECK(p.deriv(0.0) == doctest::Approx(0.01).epsilon(1e-15));
  for (double x : {-2.0, -0.3, 0.0, 1.7}) {
    CHECK(p.value(x) == doctest::Approx(x * x + 0.01 * std::sin(x)).epsilon(1e-15));
    CHECK(p.second(x) == doctest::Approx(2.0 - 0.01 * std::sin(x)).epsilon(1e-15));
  }
}

TEST_CASE("zero perturbation returns the base potential") {
  const Potential base = build_polynomial_potential({0, 0, 1}, whole_line());
  const Potential p = perturb(base, sin_field(), 0.0);
  for (double x : {-1.0, 0.0, 2.5}) CHECK(p.value(x) == base.value(x));
}

TEST_CASE("large perturbations lose convexity") {
  const Potential base = build_polynomial_potential({0, 0, 1}, {-3.0, 3.0});
  CHECK_THROWS_AS(perturb(base, sin_field(100.0), 0.1), ConvexityViolation);
}

TEST_CASE("generic perturbations need a compact interval") {
  const Potential base = build_polynomial_potential({0, 0, 1}, whole_line());
  CHECK_THROWS_AS(perturb(base, sin_field(), 0.01), DomainError);
}

TEST_CASE("rescale maps [-1,1] onto [a,b] affinely") {
  const Potential p = build_polynomial_potential({0, 0, 1}, whole_line());
  const double b = std::sqrt(2.0);
  const RescaledPotential r = rescale(p, -b, b);
  CHECK(r.lambda(1.0) == doctest::Approx(b));
  CHECK(r.lambda(-1.0) == doctest::Approx(-b));
  // affine midpoint property
  for (double u : {-0.7, 0.1})
    for (double v : {0.4, 0.9})
      CHECK(r.lambda(0.5 * (u + v)) ==
            doctest::Approx(0.5 * (r.lambda(u) + r.lambda(v))).epsilon(1e-15));
  // W(s) = 2 s^2 and W'' = 4
  for (double s : {-1.0, -0.25, 0.6}) {
    CHECK(r.w(s) == doctest::Approx(2.0 * s * s).epsilon(1e-14));
    CHECK(r.ddw(s) == doctest::Approx(4.0).epsilon(1e-14));
  }
}

TEST_CASE("rescale of the quartic gives W(s) = (4/3) s^4") {
  const Potential p = build_polynomial_potential({0, 0, 0, 0, 1}, whole_line());
  const double b4 = std::pow(4.0 / 3.0, 0.25);
  const RescaledPotential r = rescale(p, -b4, b4);
  for (double s : {-0.8, 0.3, 1.0})
    CHECK(r.w(s) == doctest::Approx(4.0 / 3.0 * std::pow(s, 4.0)).epsilon(1e-14));
}

TEST_CASE("rescale rejects intervals outside the domain") {
  const Potential p = build_polynomial_potential({0, 0, 1}, {-1.0, 1.0});
  CHECK_THROWS_AS(rescale(p, -2.0, 0.5), DomainError);
}

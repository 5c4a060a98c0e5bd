#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "cdk/edge_map.hpp"
#include "cdk/errors.hpp"
#include "cdk/quadrature.hpp"

using namespace cdk;

namespace {

std::shared_ptr<const EquilibriumData> gue_eq() {
  static const auto eq = std::make_shared<EquilibriumData>(EquilibriumData::build(
      build_polynomial_potential({0, 0, 1}, whole_line(), "gue"),
      solve_mrs(build_polynomial_potential({0, 0, 1}, whole_line(), "gue"))));
  return eq;
}

// Closed forms for the Gaussian case (G identically 4).
double eta_gue(double x) {
  return 2.0 * (x * std::sqrt(x * x - 1.0) - std::log(x + std::sqrt(x * x - 1.0)));
}
double xi_gue(double x) {
  return 2.0 * (std::acos(x) - x * std::sqrt(1.0 - x * x));
}
double fhat_gue(double x) {
  const double u = x > 1.0 ? 0.75 * eta_gue(x) : 0.75 * xi_gue(x);
  return std::pow(u, 2.0 / 3.0) / (std::fabs(x - 1.0) * 2.0);
}

// Independent eta quadrature via t = 1 + v^2 (removes the root vanishing).
double eta_indep(const EquilibriumData& eq, double x) {
  const double vmax = std::sqrt(x - 1.0);
  return integrate(gauss_legendre(200),
                   [&](double v) {
                     const double t = 1.0 + v * v;
                     return 2.0 * v * v * std::sqrt(v * v + 2.0) * eq.g(t);
                   },
                   0.0, vmax);
}

}  // namespace

TEST_CASE("f_hat equals one at the endpoints") {
  const EdgeMap ep(gue_eq(), +1);
  const EdgeMap em(gue_eq(), -1);
  CHECK(ep.f_hat(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(em.f_hat(-1.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("f_hat matches the closed-form Gaussian oracle") {
  const EdgeMap ep(gue_eq(), +1);
  // 1.1 lies outside the default validity radius sigma_hat/10 = 0.05, so
  // check the closed form through the defining quotient at radius points.
  for (double x : {1.01, 1.04, 0.96, 0.99}) {
    CHECK(ep.f_hat(x) == doctest::Approx(fhat_gue(x)).epsilon(1e-9));
  }
  // the spec-level sanity value f_hat(1.1) ~ 1.0099 via the closed form
  CHECK(fhat_gue(1.1) == doctest::Approx(1.00988).epsilon(2e-4));
}

TEST_CASE("f_hat is continuous across the endpoint") {
  const EdgeMap ep(gue_eq(), +1);
  CHECK(std::fabs(ep.f_hat(1.0 - 1e-4) - ep.f_hat(1.0 + 1e-4)) < 1e-3);
  // the interpolation stencil agrees with the closed form inside its zone
  const double h = ep.series_radius();
  for (double x : {1.0 + 0.5 * h, 1.0 - 0.3 * h, 1.0 + 0.95 * h})
    CHECK(ep.f_hat(x) == doctest::Approx(fhat_gue(x)).epsilon(1e-9));
}

TEST_CASE("f_hat containment in the 1/5 disc over the validity radius") {
  for (int side : {+1, -1}) {
    const EdgeMap em(gue_eq(), side);
    CHECK(em.delta_v() > 0.0);
    CHECK(em.delta_v() < gue_eq()->sigma_hat());
    for (int j = 0; j <= 50; ++j) {
      const double x = side + em.delta_v() * (j - 25.0) / 25.0;
      CHECK(std::fabs(em.f_hat(x) - 1.0) <= 0.2 + 1e-9);
      CHECK(em.d_v(x) > 0.0);
    }
  }
}

TEST_CASE("matching identity against an independent eta quadrature") {
  const auto eq = gue_eq();
  const EdgeMap ep(eq, +1);
  for (double x = 1.005; x <= 1.0 + ep.delta_v(); x += 0.005) {
    const double lhs = std::pow((x - 1.0) * eq->gamma_plus() * ep.f_hat(x), 1.5);
    const double rhs = 0.75 * eta_indep(*eq, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("bulk-side identity (2/3)(-f_N)^{3/2} = (N/2) xi") {
  const auto eq = gue_eq();
  const EdgeMap ep(eq, +1);
  const int n = 37;
  for (double x = 1.0 - ep.delta_v(); x < 1.0 - 0.002; x += 0.004) {
    const double fn = ep.f_n(n, x);
    CHECK(fn < 0.0);
    const double lhs = 2.0 / 3.0 * std::pow(-fn, 1.5);
    const double rhs = 0.5 * n * eq->xi(x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("f_n vanishes at the endpoint and carries the right sign") {
  const EdgeMap ep(gue_eq(), +1);
  const EdgeMap em(gue_eq(), -1);
  CHECK(ep.f_n(100, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ep.f_n(100, 1.01) > 0.0);
  CHECK(ep.f_n(100, 0.99) < 0.0);
  CHECK(em.f_n(100, -1.01) > 0.0);
  CHECK(em.f_n(100, -0.99) < 0.0);
}

TEST_CASE("f_n numeric example from the Gaussian closed form") {
  const EdgeMap ep(gue_eq(), +1);
  const double expect = std::pow(100.0, 2.0 / 3.0) * 2.0 * 0.01 * fhat_gue(1.01);
  CHECK(ep.f_n(100, 1.01) == doctest::Approx(expect).epsilon(1e-8));
  CHECK(expect == doctest::Approx(0.4314).epsilon(1e-3));
}

TEST_CASE("d_v at the endpoints is 2^{1/4}") {
  const EdgeMap ep(gue_eq(), +1);
  const EdgeMap em(gue_eq(), -1);
  CHECK(ep.d_v(1.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-9));
  CHECK(em.d_v(-1.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-9));
}

TEST_CASE("arguments outside the validity radius are rejected") {
  const EdgeMap ep(gue_eq(), +1);
  CHECK_THROWS_AS(ep.f_hat(1.0 + 2.0 * ep.delta_v()), DomainError);
  CHECK_THROWS_AS(ep.f_n(10, 0.5), DomainError);
}

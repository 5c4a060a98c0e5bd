#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cdk/errors.hpp"
#include "cdk/oracle.hpp"
#include "cdk/quadrature.hpp"

using namespace cdk;

namespace {
constexpr double kPi = std::numbers::pi;

Potential gue() { return build_polynomial_potential({0, 0, 1}, whole_line(), "gue"); }
}  // namespace

TEST_CASE("gaussian weight recurrence: alpha = 0, beta_j = j/(2N)") {
  const int n = 20;
  const RecurrenceTable tab = build_recurrence(gue(), n, n);
  CHECK(tab.betas[0] == doctest::Approx(std::sqrt(kPi / n)).epsilon(1e-12));
  for (int j = 0; j <= n; ++j) {
    CHECK(std::fabs(tab.alphas[j]) < 1e-12);
    if (j >= 1)
      CHECK(tab.betas[j] == doctest::Approx(j / (2.0 * n)).epsilon(1e-11));
  }
}

TEST_CASE("recurrence is stable under grid doubling") {
  const RecurrenceTable t1 = build_recurrence_raw(gue(), 20, 20, 560);
  const RecurrenceTable t2 = build_recurrence_raw(gue(), 20, 20, 1120);
  for (int j = 0; j <= 20; ++j) {
    CHECK(t1.betas[j] == doctest::Approx(t2.betas[j]).epsilon(1e-10));
  }
}

TEST_CASE("even potentials give vanishing alphas (quartic)") {
  const Potential q =
      build_polynomial_potential({0, 0, 0, 0, 1}, whole_line(), "quartic");
  const RecurrenceTable tab = build_recurrence(q, 12, 12);
  for (int j = 0; j <= 12; ++j) CHECK(std::fabs(tab.alphas[j]) < 1e-12);
  for (int j = 0; j <= 12; ++j) CHECK(tab.betas[j] > 0.0);
}

TEST_CASE("kernel trace equals N") {
  for (int n : {5, 20}) {
    const RecurrenceTable tab = build_recurrence(gue(), n, n);
    CHECK(oracle_trace(tab) == doctest::Approx(double(n)).epsilon(1e-7));
  }
}

TEST_CASE("kernel at N=1 reduces to the normalized weight") {
  const RecurrenceTable tab = build_recurrence(gue(), 1, 1);
  // K(x,x) = exp(-V(x)) / int exp(-V)
  for (double x : {-0.5, 0.0, 0.8}) {
    const double expect = std::exp(-x * x) / std::sqrt(kPi);
    CHECK(cd_kernel_exact(tab, x, x).to_double() ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("kernel symmetry is exact") {
  const RecurrenceTable tab = build_recurrence(gue(), 12, 12);
  for (double x : {-1.0, -0.2, 0.4})
    for (double y : {-0.7, 0.1, 1.1}) {
      const ScaledReal a = cd_kernel_exact(tab, x, y);
      const ScaledReal b = cd_kernel_exact(tab, y, x);
      CHECK(a.mantissa() == b.mantissa());
      CHECK(a.log2_scale() == b.log2_scale());
    }
}

TEST_CASE("reproducing property of the projection kernel") {
  const RecurrenceTable tab = build_recurrence(gue(), 20, 20);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  const QuadRule& gl = gauss_legendre(24);
  for (int rep = 0; rep < 5; ++rep) {
    const double x = u(rng), y = u(rng);
    KahanSum s;
    const int panels = 60;
    for (int p = 0; p < panels; ++p) {
      const double a = tab.trunc_lo + (tab.trunc_hi - tab.trunc_lo) * p / panels;
      const double b = tab.trunc_lo + (tab.trunc_hi - tab.trunc_lo) * (p + 1) / panels;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (size_t i = 0; i < gl.x.size(); ++i) {
        const double z = mid + half * gl.x[i];
        s.add(half * gl.w[i] * cd_kernel_exact(tab, x, z).to_double() *
              cd_kernel_exact(tab, z, y).to_double());
      }
    }
    CHECK(std::fabs(s.value() - cd_kernel_exact(tab, x, y).to_double()) < 1e-6);
  }
}

TEST_CASE("kernel stays representable deep in the void region") {
  const RecurrenceTable tab = build_recurrence(gue(), 60, 60);
  const ScaledReal far = cd_kernel_exact(tab, 2.2, 2.2);
  CHECK(far.log_abs() < -60.0);  // decays like exp(-N eta)
  CHECK(far.sign() == 1);
}

TEST_CASE("correlation determinants") {
  const RecurrenceTable tab = build_recurrence(gue(), 10, 10);
  const double k1 = correlation(tab, {0.3});
  CHECK(k1 == doctest::Approx(cd_kernel_exact(tab, 0.3, 0.3).to_double()));
  // coincident points: rank deficiency
  CHECK(correlation(tab, {0.5, 0.5}) == doctest::Approx(0.0).epsilon(1e-10));
  // 2-point: K(x,x)K(y,y) - K(x,y)^2, and bounded by the product
  const double r2 = correlation(tab, {0.2, -0.4});
  const double kxx = cd_kernel_exact(tab, 0.2, 0.2).to_double();
  const double kyy = cd_kernel_exact(tab, -0.4, -0.4).to_double();
  const double kxy = cd_kernel_exact(tab, 0.2, -0.4).to_double();
  CHECK(r2 == doctest::Approx(kxx * kyy - kxy * kxy).epsilon(1e-10));
  CHECK(r2 <= kxx * kyy);
  CHECK_THROWS_AS(correlation(tab, {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6}), DomainError);
}

TEST_CASE("gap probability basics") {
  const RecurrenceTable tab = build_recurrence(gue(), 5, 5);
  const double inf = std::numeric_limits<double>::infinity();
  // interval covering the whole effective support: determinant collapses
  const GapResult whole = gap_probability(tab, -10.0, 10.0, 40);
  CHECK(std::fabs(whole.value) <= 1e-10);
  // empty interval
  const GapResult empty = gap_probability(tab, 3.0, 2.0, 40);
  CHECK(empty.value == 1.0);
  // monotone in the left endpoint: 1 - gap((t,inf)) is a CDF of lambda_max
  double prev = -1.0;
  for (double t : {-0.5, 0.2, 0.9, 1.6, 2.4}) {
    const double cdf = gap_probability(tab, t, inf, 40).value;
    CHECK(cdf >= prev - 1e-12);
    prev = cdf;
  }
}

TEST_CASE("upper tail trace matches 1 - gap when both are representable") {
  const RecurrenceTable tab = build_recurrence(gue(), 30, 30);
  const double inf = std::numeric_limits<double>::infinity();
  const double t = 1.52;  // a few sigma beyond the edge sqrt(2)
  const double one_minus_gap = 1.0 - gap_probability(tab, t, inf, 60).value;
  const double trace = oracle_upper_tail(tab, t).to_double();
  CHECK(one_minus_gap > 0.0);
  CHECK(trace == doctest::Approx(one_minus_gap).epsilon(0.01));
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(build_recurrence(gue(), 10, 25), DomainError);  // n_max > 2N
  const RecurrenceTable tab = build_recurrence(gue(), 8, 8);
  CHECK_THROWS_AS(gap_probability(tab, 0.0, 1.0, 5), DomainError);
}

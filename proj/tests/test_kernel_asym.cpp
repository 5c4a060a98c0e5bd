#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "cdk/errors.hpp"
#include "cdk/kernel_asym.hpp"
#include "cdk/special_fn.hpp"

using namespace cdk;

namespace {
constexpr double kPi = std::numbers::pi;

std::shared_ptr<const EquilibriumData> gue_eq() {
  static const auto eq = [] {
    const Potential p = build_polynomial_potential({0, 0, 1}, whole_line(), "gue");
    return std::make_shared<EquilibriumData>(EquilibriumData::build(p, solve_mrs(p)));
  }();
  return eq;
}

AsymptoticKernel& gue_kernel() {
  static AsymptoticKernel ker(gue_eq());
  return ker;
}

double eta_gue(double x) {
  return 2.0 * (x * std::sqrt(x * x - 1.0) - std::log(x + std::sqrt(x * x - 1.0)));
}
}  // namespace

TEST_CASE("regime classification covers the line") {
  AsymptoticKernel& ker = gue_kernel();
  const double d = ker.delta0();
  CHECK(ker.classify(d, 0.0) == Regime::Bulk);
  CHECK(ker.classify(d, 1.0) == Regime::EdgePlus);
  CHECK(ker.classify(d, -1.0) == Regime::EdgeMinus);
  CHECK(ker.classify(d, 1.0 + 2.0 * d) == Regime::Void);
  CHECK(ker.classify(d, -3.0) == Regime::Void);
  // no gaps right at the regime boundaries
  for (double x : {1.0 - d, 1.0 + d, -1.0 - d, -1.0 + d, 0.999 * (1.0 - d)})
    CHECK_NOTHROW(ker.classify(d, x));
  CHECK_THROWS_AS(ker.classify(2.0 * d, 0.0), DomainError);
}

TEST_CASE("k-vector at the edge point x=1 (Gaussian)") {
  AsymptoticKernel& ker = gue_kernel();
  const int n = 64;
  const KVector k = ker.k_vector(n, ker.delta0(), 1.0);
  // f_N(1)=0, gamma=2, d(1)=2^{1/4}: scale = N^{1/6} * 2^{1/4} * 2^{1/4}
  const double scale = std::pow(n, 1.0 / 6.0) * std::sqrt(2.0);
  const AiryPair a0 = airy(0.0);
  CHECK(k.k1.to_double() == doctest::Approx(-a0.ai_prime / scale).epsilon(1e-8));
  CHECK(k.k2.to_double() == doctest::Approx(a0.ai * scale).epsilon(1e-8));
}

TEST_CASE("k-vector in the bulk at x=0") {
  AsymptoticKernel& ker = gue_kernel();
  const int n = 40;
  const KVector k = ker.k_vector(n, ker.delta0(), 0.0);
  const double phase = 0.5 * n * gue_eq()->xi(0.0);
  CHECK(k.k1.to_double() ==
        doctest::Approx(std::cos(phase + kPi / 4.0) / std::sqrt(kPi)).epsilon(1e-10));
  CHECK(k.k2.to_double() ==
        doctest::Approx(std::cos(phase - kPi / 4.0) / std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("bulk k-vector equals its rotated arcsin form") {
  // Equivalent writing of the bulk branch:
  // (2 pi)^{-1/2} (1-x^2)^{-1/4} [[1,-1],[1,1]] *
  //   (cos(N xi/2 - asin(x)/2), sin(N xi/2 + asin(x)/2))
  AsymptoticKernel& ker = gue_kernel();
  const auto eq = gue_eq();
  for (int n : {17, 64}) {
    for (double x = -0.9; x <= 0.9; x += 0.15) {
      const KVector k = ker.k_vector(n, ker.delta0(), x);
      const double phase = 0.5 * n * eq->xi(x);
      const double phi = 0.5 * std::asin(x);
      const double pref = 1.0 / (std::sqrt(2.0 * kPi) * std::pow(1.0 - x * x, 0.25));
      const double c = std::cos(phase - phi), s = std::sin(phase + phi);
      CHECK(k.k1.to_double() == doctest::Approx(pref * (c - s)).epsilon(1e-12));
      CHECK(k.k2.to_double() == doctest::Approx(pref * (c + s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("void kernel values carry non-positive log scale") {
  AsymptoticKernel& ker = gue_kernel();
  for (int n : {10, 40, 160}) {
    for (double x = 1.05; x <= 1.45; x += 0.1) {
      const KernelValue v = ker.density(n, x);
      if (v.regime != Regime::Void) continue;
      CHECK(v.value.log2_scale() <= 0);
      const KernelValue w = ker.leading_kernel(n, ker.delta0(), x, x + 0.02);
      CHECK(w.value.log2_scale() <= 0);
    }
  }
}

TEST_CASE("void k-vector flips sign with the parity of N on the left") {
  AsymptoticKernel& ker = gue_kernel();
  const double x = -1.4;
  const KVector even = ker.k_vector(10, ker.delta0(), x);
  const KVector odd = ker.k_vector(11, ker.delta0(), x);
  CHECK(even.k1.sign() == -odd.k1.sign());
  CHECK(even.regime == Regime::Void);
}

TEST_CASE("leading kernel is symmetric and matches the k-quotient inside a regime") {
  AsymptoticKernel& ker = gue_kernel();
  const int n = 30;
  const double d = ker.delta0();
  for (const auto& [x, y] : std::vector<std::pair<double, double>>{
           {0.1, 0.4}, {-0.6, 0.2}, {1.2, 1.5}, {1.0 - d / 2, 1.0 + d / 2}}) {
    const KernelValue v1 = ker.leading_kernel(n, d, x, y);
    const KernelValue v2 = ker.leading_kernel(n, d, y, x);
    CHECK(v1.value.to_double() == doctest::Approx(v2.value.to_double()).epsilon(1e-13));
    const double kq = ker.k_quotient(n, d, x, y).to_double();
    CHECK(v1.value.to_double() == doctest::Approx(kq).epsilon(1e-9));
  }
}

TEST_CASE("mixed regimes are reported") {
  AsymptoticKernel& ker = gue_kernel();
  CHECK_THROWS_AS(ker.leading_kernel(30, ker.delta0(), 0.0, 1.0), MixedRegime);
  CHECK_NOTHROW(ker.k_quotient(30, ker.delta0(), 0.0, 1.0));
}

TEST_CASE("bulk diagonal equals the density formula") {
  AsymptoticKernel& ker = gue_kernel();
  const auto eq = gue_eq();
  const int n = 40;
  const double x = 0.3;
  const double lhs = ker.leading_kernel(n, ker.delta0(), x, x).value.to_double();
  const double rhs =
      n * eq->rho(x) - std::cos(n * eq->xi(x)) / (2.0 * kPi * (1.0 - x * x));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  // the finite-separation form converges to the diagonal value
  const double near = ker.leading_kernel(n, ker.delta0(), x, x + 2e-5).value.to_double();
  CHECK(near == doctest::Approx(rhs).epsilon(1e-4));
  const double nearer = ker.leading_kernel(n, ker.delta0(), x, x + 1e-9).value.to_double();
  CHECK(nearer == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("edge diagonal matches the stated limit at x=1") {
  AsymptoticKernel& ker = gue_kernel();
  const EdgeMap& em = ker.edge(+1);
  const int n = 25;
  const double lhs = ker.leading_kernel(n, ker.delta0(), 1.0, 1.0).value.to_double();
  // Ai kernel at (0,0) times f_N'(1) plus 2 Ai(0) Ai'(0) d'(1)/d(1)
  const double h = 1e-4;
  const double fnp = (8 * (em.f_n(n, 1 + h) - em.f_n(n, 1 - h)) -
                      (em.f_n(n, 1 + 2 * h) - em.f_n(n, 1 - 2 * h))) /
                     (12 * h);
  const double dp = (8 * (em.d_v(1 + h) - em.d_v(1 - h)) -
                     (em.d_v(1 + 2 * h) - em.d_v(1 - 2 * h))) /
                    (12 * h);
  const AiryPair a0 = airy(0.0);
  const double rhs = airy_kernel(0.0, 0.0) * fnp +
                     2.0 * a0.ai * a0.ai_prime * dp / em.d_v(1.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
}

TEST_CASE("void diagonal decays like exp(-N eta)/(4 pi (x^2-1))") {
  AsymptoticKernel& ker = gue_kernel();
  const int n = 50;
  const double x = 1.5;
  const KernelValue v = ker.density(n, x);
  CHECK(v.regime == Regime::Void);
  const double expect_log =
      -n * eta_gue(x) + std::log(1.0 / (4.0 * kPi * (x * x - 1.0)));
  CHECK(v.value.log_abs() == doctest::Approx(expect_log).epsilon(1e-9));
}

TEST_CASE("density: bulk value for the Gaussian at N=50") {
  AsymptoticKernel& ker = gue_kernel();
  const KernelValue v = ker.density(50, 0.0);
  CHECK(v.regime == Regime::Bulk);
  const double expect = 50.0 * 2.0 / kPi - std::cos(50.0 * kPi) / (2.0 * kPi);
  CHECK(v.value.to_double() == doctest::Approx(expect).epsilon(1e-10));
  CHECK(expect == doctest::Approx(31.671834).epsilon(1e-6));
}

TEST_CASE("density at the edge point is N^{2/3} gamma Ai-kernel(0,0)") {
  AsymptoticKernel& ker = gue_kernel();
  const int n = 50;
  const KernelValue v = ker.density(n, 1.0);
  CHECK(v.regime == Regime::EdgePlus);
  const double expect = std::pow(n, 2.0 / 3.0) * 2.0 * airy_kernel(0.0, 0.0);
  CHECK(v.value.to_double() == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("density parity for even potentials") {
  AsymptoticKernel& ker = gue_kernel();
  for (int n : {20, 75}) {
    for (double x : {0.35, 0.98, 1.004, 1.31}) {
      const double plus = ker.density(n, x).value.log_abs();
      const double minus = ker.density(n, -x).value.log_abs();
      CHECK(plus == doctest::Approx(minus).epsilon(1e-10));
    }
  }
}

TEST_CASE("density branch continuity near the regime thresholds") {
  AsymptoticKernel& ker = gue_kernel();
  const int n = 60;
  const double tau = std::min(ker.edge(+1).delta_v(), 0.5 * std::pow(n, -0.4));
  for (double thr : {1.0 + tau, 1.0 - tau}) {
    const KernelValue in = ker.density(n, thr - 1e-6 * (thr > 1.0 ? 1 : -1));
    const KernelValue out = ker.density(n, thr + 1e-6 * (thr > 1.0 ? 1 : -1));
    const double scale = std::min(in.correction_scale, out.correction_scale);
    const double rel = std::fabs(in.value.to_double() - out.value.to_double()) /
                       std::max(std::fabs(out.value.to_double()), 1e-300);
    CHECK(rel < 3.0 * scale);
  }
}

TEST_CASE("void decay: log density + N eta stays bounded") {
  AsymptoticKernel& ker = gue_kernel();
  const int n = 80;
  for (double x = 1.25; x <= 2.0; x += 0.25) {
    const KernelValue v = ker.density(n, x);
    const double resid = v.value.log_abs() + n * eta_gue(x);
    CHECK(std::fabs(resid) <= std::fabs(std::log(4.0 * kPi * (x * x - 1.0))) + 1.0);
  }
}

TEST_CASE("bulk rescaled form and range guard") {
  AsymptoticKernel& ker = gue_kernel();
  const BulkRescaled r = ker.bulk_rescaled(100, 0.0, 0.0, 0.5);
  CHECK(r.approx == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(r.error_scale == doctest::Approx(1.5 / 100.0));
  CHECK(r.u == 0.0);
  CHECK(r.v == doctest::Approx(0.5 / (100.0 * gue_eq()->rho(0.0))));
  CHECK(ker.bulk_rescaled(100, 0.3, 1.0, 1.0).approx == 1.0);
  CHECK(ker.bulk_rescaled(100, 0.0, 0.0, 1.0).approx ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(ker.bulk_rescaled(100, 0.0, 1e6, 0.0), RangeError);
  CHECK_THROWS_AS(ker.bulk_rescaled(100, 1.2, 0.0, 0.0), DomainError);
}

TEST_CASE("edge rescaled regime classification") {
  AsymptoticKernel& ker = gue_kernel();
  const EdgeRescaled c1 = ker.edge_rescaled(100, 0.0, 0.0);
  CHECK(c1.case_id == 1);
  CHECK(c1.error_scale == doctest::Approx(std::pow(100.0, -2.0 / 3.0)));
  CHECK(c1.approx.to_double() == doctest::Approx(airy_kernel(0.0, 0.0)));
  const EdgeRescaled c2 = ker.edge_rescaled(1000, 4.0, 4.0, -10.0, 1.0);
  CHECK(c2.case_id == 2);
  const EdgeRescaled c3 = ker.edge_rescaled(100, -1.0, 3.0, -10.0, 2.0);
  CHECK(c3.case_id == 3);
  CHECK_THROWS_AS(ker.edge_rescaled(100, -20.0, 0.0), RangeError);
}

TEST_CASE("correction scale fields are populated") {
  AsymptoticKernel& ker = gue_kernel();
  const KernelValue bulk = ker.density(40, 0.2);
  CHECK(bulk.correction_scale ==
        doctest::Approx(1.0 / (40.0 * 40.0 * std::pow(0.8, 3.0))));
  const KernelValue lead = ker.leading_kernel(40, ker.delta0(), 0.1, 0.3);
  CHECK(lead.correction_scale > 0.0);
  CHECK(lead.branch == "bulk_two_term");
}

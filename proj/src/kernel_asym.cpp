#include "cdk/kernel_asym.hpp"

#include <cmath>
#include <numbers>

#include "cdk/errors.hpp"
#include "cdk/special_fn.hpp"

namespace cdk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDiagSwitch = 1e-5;  // divided differences -> derivatives

double quarter_root(double num, double den) { return std::pow(num / den, 0.25); }

// a(x) = ((x-1)/(x+1))^{1/4} outside the support.
double a_out(double x) { return quarter_root(x - 1.0, x + 1.0); }
// a_hat(x) = ((1-x)/(1+x))^{1/4} inside.
double a_hat(double x) { return quarter_root(1.0 - x, 1.0 + x); }

// 2 a'/a = 1/(x^2-1) holds for both branches.
double a_out_deriv(double x) { return a_out(x) / (2.0 * (x * x - 1.0)); }
double a_hat_deriv(double x) { return a_hat(x) / (2.0 * (x * x - 1.0)); }

ScaledReal abs_sum(const KVector& k) {
  ScaledReal s = k.k1.sign() < 0 ? -k.k1 : k.k1;
  s += k.k2.sign() < 0 ? -k.k2 : k.k2;
  return s;
}

template <class F>
double richardson_deriv(F&& f, double m, double h) {
  return (8.0 * (f(m + h) - f(m - h)) - (f(m + 2.0 * h) - f(m - 2.0 * h))) /
         (12.0 * h);
}
}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Bulk: return "bulk";
    case Regime::EdgePlus: return "edge_plus";
    case Regime::EdgeMinus: return "edge_minus";
    case Regime::Void: return "void";
  }
  return "?";
}

AsymptoticKernel::AsymptoticKernel(std::shared_ptr<const EquilibriumData> eq)
    : eq_(std::move(eq)) {
  em_plus_ = std::make_unique<EdgeMap>(eq_, +1);
  em_minus_ = std::make_unique<EdgeMap>(eq_, -1);
  delta0_ = std::min({eq_->sigma_hat() / 20.0, 0.999 * em_plus_->delta_v(),
                      0.999 * em_minus_->delta_v()});
}

Regime AsymptoticKernel::classify(double delta, double x) const {
  if (!(delta > 0.0) || delta > delta0_ * (1.0 + 1e-12))
    throw DomainError("kernel: delta must lie in (0, delta0]");
  if (!eq_->domain().contains(x))
    throw DomainError("kernel: argument outside the rescaled interval");
  if (std::fabs(x - 1.0) <= delta) return Regime::EdgePlus;
  if (std::fabs(x + 1.0) <= delta) return Regime::EdgeMinus;
  if (std::fabs(x) <= 1.0 - delta) return Regime::Bulk;
  if (std::fabs(x) >= 1.0 + delta) return Regime::Void;
  throw RegimeGap("kernel: point escaped the regime split");  // unreachable
}

KVector AsymptoticKernel::k_vector(int n, double delta, double x) const {
  KVector k;
  k.regime = classify(delta, x);
  switch (k.regime) {
    case Regime::Void: {
      const double sgn_pow = (x < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
      const ScaledReal pref =
          ScaledReal(sgn_pow / std::sqrt(4.0 * kPi)) *
          ScaledReal::from_log(-0.5 * n * eq_->eta(x));
      const double av = a_out(x);
      k.k1 = pref * ScaledReal(av);
      k.k2 = pref * ScaledReal(1.0 / av);
      break;
    }
    case Regime::Bulk: {
      const double phase = 0.5 * n * eq_->xi(x);
      const double ah = a_hat(x);
      k.k1 = ScaledReal(ah * std::cos(phase + kPi / 4.0) / std::sqrt(kPi));
      k.k2 = ScaledReal(std::cos(phase - kPi / 4.0) / (ah * std::sqrt(kPi)));
      break;
    }
    case Regime::EdgePlus: {
      const ScaledAiryPair ap = airy_scaled(em_plus_->f_n(n, x));
      const double scale = std::pow(n, 1.0 / 6.0) *
                           std::pow(eq_->gamma_plus(), 0.25) * em_plus_->d_v(x);
      k.k1 = -ap.ai_prime / ScaledReal(scale);
      k.k2 = ap.ai * ScaledReal(scale);
      break;
    }
    case Regime::EdgeMinus: {
      const ScaledAiryPair ap = airy_scaled(em_minus_->f_n(n, x));
      const double scale = std::pow(n, 1.0 / 6.0) *
                           std::pow(eq_->gamma_minus(), 0.25) * em_minus_->d_v(x);
      const double par = (n % 2 == 1) ? -1.0 : 1.0;
      k.k1 = ScaledReal(par) * ap.ai * ScaledReal(scale);
      k.k2 = ScaledReal(-par) * ap.ai_prime / ScaledReal(scale);
      break;
    }
  }
  return k;
}

ScaledReal AsymptoticKernel::k_quotient(int n, double delta, double x, double y) const {
  if (x == y)
    throw DomainError("k_quotient: diagonal point; use leading_kernel or density");
  const KVector kx = k_vector(n, delta, x);
  const KVector ky = k_vector(n, delta, y);
  return (kx.k1 * ky.k2 - kx.k2 * ky.k1) / ScaledReal(x - y);
}

KernelValue AsymptoticKernel::leading_void(int n, double x, double y) const {
  KernelValue out;
  out.regime = Regime::Void;
  out.branch = "void";
  const double sgn_pow = (x * y < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  const ScaledReal pref =
      ScaledReal(sgn_pow / (4.0 * kPi)) *
      ScaledReal::from_log(-0.5 * n * (eq_->eta(x) + eq_->eta(y)));
  const double ax = a_out(x), ay = a_out(y);
  const double dd = std::fabs(x - y) < kDiagSwitch
                        ? a_out_deriv(0.5 * (x + y))
                        : (ax - ay) / (x - y);
  out.value = pref * ScaledReal((1.0 / ax + 1.0 / ay) * dd);
  return out;
}

KernelValue AsymptoticKernel::leading_bulk(int n, double x, double y) const {
  KernelValue out;
  out.regime = Regime::Bulk;
  out.branch = "bulk_two_term";
  const double ax = a_hat(x), ay = a_hat(y);
  const double ratio_sum = ax / ay + ay / ax;
  double sin_part;
  if (std::fabs(x - y) < kDiagSwitch) {
    const double m = 0.5 * (x + y);
    const double theta = n * kPi * eq_->rho(m) * (x - y);
    sin_part = (x == y) ? n * kPi * eq_->rho(m) : std::sin(theta) / (x - y);
  } else {
    const double theta = 0.5 * n * (eq_->xi(y) - eq_->xi(x));  // N pi int_y^x rho
    sin_part = std::sin(theta) / (x - y);
  }
  const double dd = std::fabs(x - y) < kDiagSwitch
                        ? a_hat_deriv(0.5 * (x + y))
                        : (ax - ay) / (x - y);
  const double cos_part = std::cos(0.5 * n * (eq_->xi(x) + eq_->xi(y)));
  out.value = ScaledReal(
      (ratio_sum * sin_part + cos_part * (1.0 / ax + 1.0 / ay) * dd) / (2.0 * kPi));
  return out;
}

KernelValue AsymptoticKernel::leading_edge(int n, int side, double x, double y) const {
  KernelValue out;
  out.regime = side > 0 ? Regime::EdgePlus : Regime::EdgeMinus;
  out.branch = side > 0 ? "edge_airy_plus" : "edge_airy_minus";
  const EdgeMap& em = edge(side);
  const double fx = em.f_n(n, x), fy = em.f_n(n, y);
  const double dx = em.d_v(x), dy = em.d_v(y);
  double ddf, ddd;
  if (std::fabs(x - y) < kDiagSwitch) {
    const double m = 0.5 * (x + y);
    const double h = std::min(1e-3, 0.2 * (em.delta_v() - std::fabs(m - side)) + 1e-6);
    ddf = richardson_deriv([&](double z) { return em.f_n(n, z); }, m, h);
    ddd = richardson_deriv([&](double z) { return em.d_v(z); }, m, h);
  } else {
    ddf = (fx - fy) / (x - y);
    ddd = (dx - dy) / (x - y);
  }
  const ScaledAiryPair px = airy_scaled(fx);
  const ScaledAiryPair py = airy_scaled(fy);
  ScaledReal v = airy_kernel_scaled(fx, fy) * ScaledReal(ddf);
  v += (px.ai * py.ai_prime / ScaledReal(dy) + py.ai * px.ai_prime / ScaledReal(dx)) *
       ScaledReal(ddd);
  out.value = side > 0 ? v : -v;
  return out;
}

KernelValue AsymptoticKernel::leading_kernel(int n, double delta, double x,
                                             double y) const {
  const Regime rx = classify(delta, x);
  const Regime ry = classify(delta, y);
  if (rx != ry)
    throw MixedRegime("leading_kernel: arguments in different regimes; use k_quotient");
  KernelValue out;
  switch (rx) {
    case Regime::Void: out = leading_void(n, x, y); break;
    case Regime::Bulk: out = leading_bulk(n, x, y); break;
    case Regime::EdgePlus: out = leading_edge(n, +1, x, y); break;
    case Regime::EdgeMinus: out = leading_edge(n, -1, x, y); break;
  }
  const ScaledReal corr = abs_sum(k_vector(n, delta, x)) *
                          abs_sum(k_vector(n, delta, y)) / ScaledReal(double(n));
  out.correction_scale = corr.to_double();
  return out;
}

KernelValue AsymptoticKernel::density(int n, double x) const {
  if (!eq_->domain().contains(x))
    throw DomainError("density: argument outside the rescaled interval");
  const double tau_plus = std::min(em_plus_->delta_v(), 0.5 * std::pow(n, -0.4));
  const double tau_minus = std::min(em_minus_->delta_v(), 0.5 * std::pow(n, -0.4));
  const double ax = std::fabs(x);
  KernelValue out;
  if (std::fabs(x - 1.0) <= tau_plus || std::fabs(x + 1.0) <= tau_minus) {
    const bool plus = std::fabs(x - 1.0) <= tau_plus;
    const double gamma = plus ? eq_->gamma_plus() : eq_->gamma_minus();
    const double n23 = std::pow(n, 2.0 / 3.0);
    const double zeta = gamma * n23 * (ax - 1.0);
    out.value = ScaledReal(n23 * gamma) * airy_kernel_scaled(zeta, zeta);
    out.regime = plus ? Regime::EdgePlus : Regime::EdgeMinus;
    out.branch = "density_edge";
    out.correction_scale = (ax <= 1.0 ? (1.0 - ax) : n * std::pow(ax - 1.0, 2.5)) +
                           std::pow(n, -2.0 / 3.0);
  } else if (ax < 1.0) {
    out.value = ScaledReal(n * eq_->rho(x) -
                           std::cos(n * eq_->xi(x)) / (2.0 * kPi * (1.0 - x * x)));
    out.regime = Regime::Bulk;
    out.branch = "density_bulk";
    out.correction_scale = 1.0 / (double(n) * n * std::pow(1.0 - ax, 3.0));
  } else {
    out.value = ScaledReal::from_log(-double(n) * eq_->eta(x)) *
                ScaledReal(1.0 / (4.0 * kPi * (x * x - 1.0)));
    out.regime = Regime::Void;
    out.branch = "density_void";
    out.correction_scale =
        1.0 / (double(n) * std::pow(ax - 1.0, 2.5)) + 1.0 / double(n);
  }
  return out;
}

BulkRescaled AsymptoticKernel::bulk_rescaled(int n, double x, double s, double t) const {
  if (!(std::fabs(x) < 1.0))
    throw DomainError("bulk_rescaled: |x| < 1 required");
  const double delta = 1.0 - std::fabs(x);
  const double c_delta = delta * eq_->d_min() / (4.0 * kPi) *
                         std::sqrt(1.0 - (1.0 - delta) * (1.0 - delta));
  if (std::fabs(s) >= c_delta * n || std::fabs(t) >= c_delta * n)
    throw RangeError("bulk_rescaled: |s|,|t| must stay below c_delta*N");
  BulkRescaled out;
  const double rho = eq_->rho(x);
  out.u = x + s / (n * rho);
  out.v = x + t / (n * rho);
  out.approx = sine_kernel(s, t);
  out.error_scale = (1.0 + std::fabs(s) + std::fabs(t)) / n;
  return out;
}

EdgeRescaled AsymptoticKernel::edge_rescaled(int n, double s, double t, double q,
                                             double p) const {
  if (!(q < 0.0 && p > 0.0))
    throw DomainError("edge_rescaled: requires q < 0 < p");
  const double top = p * std::pow(n, 4.0 / 15.0);
  if (s < q || t < q || s > top || t > top)
    throw RangeError("edge_rescaled: (s,t) outside [q, p N^{4/15}]");
  EdgeRescaled out;
  out.approx = airy_kernel_scaled(s, t);
  const double n23 = std::pow(n, -2.0 / 3.0);
  if (s <= 2.0 && t <= 2.0) {
    out.case_id = 1;
    out.error_scale = n23;
  } else if (s >= 1.0 && t >= 1.0) {
    out.case_id = 2;
    out.error_scale = (std::pow(s, 2.5) + std::pow(t, 2.5)) * n23;
  } else {
    out.case_id = 3;
    const double big = std::max(s, t);
    out.error_scale = std::fabs(airy(big).ai_prime) * std::pow(big, 1.5) * n23;
  }
  return out;
}

}  // namespace cdk

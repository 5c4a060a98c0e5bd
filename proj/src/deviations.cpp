#include "cdk/deviations.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "cdk/errors.hpp"
#include "cdk/quadrature.hpp"
#include "cdk/special_fn.hpp"

namespace cdk {

namespace {

// Sum of log(1 - lambda_i) over the Nystrom eigenvalues of the Airy kernel
// on (s, infinity); the determinant is exp of this, the complementary
// probability is -expm1 of it.  Working through eigenvalues keeps the upper
// tail accurate far below machine epsilon of the determinant itself.
double tw2_log_det(double s, int m) {
  const QuadRule& gl = gauss_legendre(m);
  std::vector<double> r(m), w(m);
  std::vector<AiryPair> ap(m);
  for (int i = 0; i < m; ++i) {
    const double u = gl.x[i];
    r[i] = s + 10.0 * (1.0 + u) / (1.0 - u);
    w[i] = gl.w[i] * 20.0 / ((1.0 - u) * (1.0 - u));
    // Beyond 150 the kernel column is zero to double precision.
    ap[i] = r[i] > 150.0 ? AiryPair{0.0, 0.0} : airy(r[i]);
  }
  Eigen::MatrixXd k(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v;
      if (i == j) {
        v = ap[i].ai_prime * ap[i].ai_prime - r[i] * ap[i].ai * ap[i].ai;
      } else {
        v = (ap[i].ai * ap[j].ai_prime - ap[i].ai_prime * ap[j].ai) / (r[i] - r[j]);
      }
      k(i, j) = std::sqrt(w[i] * w[j]) * v;
      k(j, i) = k(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam >= 1.0) return -std::numeric_limits<double>::infinity();
    // Discretization noise produces eigenvalues ~ +-1e-18; they cancel in
    // pairs and are irrelevant against the genuine spectrum.
    acc += std::log1p(-lam);
  }
  return acc;
}

}  // namespace

double tw2_cdf(double s, int m) {
  if (s < -10.0 || s > 15.0)
    throw DomainError("tw2_cdf: s outside [-10, 15]");
  if (m < 20) throw DomainError("tw2_cdf: m >= 20 required");
  const double v1 = std::exp(tw2_log_det(s, m));
  const double v2 = std::exp(tw2_log_det(s, 2 * m));
  if (std::fabs(v1 - v2) > 1e-8)
    throw NoConvergence("tw2_cdf: m vs 2m Nystrom values differ by " +
                        std::to_string(std::fabs(v1 - v2)));
  return v1;
}

double tw2_upper_tail(double s, int m) {
  if (s < -10.0 || s > 15.0)
    throw DomainError("tw2_upper_tail: s outside [-10, 15]");
  if (m < 20) throw DomainError("tw2_upper_tail: m >= 20 required");
  const double v1 = -std::expm1(tw2_log_det(s, m));
  const double v2 = -std::expm1(tw2_log_det(s, 2 * m));
  if (std::fabs(v1 - v2) > 1e-8 * std::max(1.0, std::fabs(v2)))
    throw NoConvergence("tw2_upper_tail: m vs 2m values differ");
  return v1;
}

ScaledReal tw2_tail(double s) {
  if (!(s > 0.0)) throw DomainError("tw2_tail: s > 0 required");
  const double s32 = std::pow(s, 1.5);
  return ScaledReal(1.0 / (16.0 * std::numbers::pi * s32)) *
         ScaledReal::from_log(-4.0 / 3.0 * s32);
}

DeviationResult moderate_deviation(const EquilibriumData& eq, int n, double s) {
  if (!(s >= 1.0)) throw DomainError("moderate_deviation: s >= 1 required");
  DeviationResult out;
  out.s_or_x = s;
  out.formula = DeviationFormula::Moderate;
  out.value = tw2_tail(s);
  const double s32 = std::pow(s, 1.5);
  out.error_scale = s * s32 / std::pow(n, 2.0 / 3.0) + 1.0 / s32;
  const double x = 1.0 + s / (eq.gamma_plus() * std::pow(n, 2.0 / 3.0));
  out.regime_valid = s <= 0.5 * std::pow(n, 4.0 / 15.0) && eq.domain().contains(x);
  return out;
}

DeviationResult large_deviation(const EquilibriumData& eq, int n, double x) {
  const double inner = 1.0 + std::pow(n, -2.0 / 3.0);
  if (!(x > inner))
    throw DomainError("large_deviation: x must exceed 1 + N^{-2/3}");
  if (!(x < eq.domain().hi))
    throw DomainError("large_deviation: x must stay inside the rescaled interval");
  DeviationResult out;
  out.s_or_x = x;
  out.formula = DeviationFormula::Large;
  const double etap = eq.eta_deriv(x);
  out.value = ScaledReal::from_log(-double(n) * eq.eta(x)) *
              ScaledReal(1.0 / (4.0 * std::numbers::pi * n * (x * x - 1.0) * etap));
  out.error_scale = 1.0 / (double(n) * std::pow(x - 1.0, 1.5));
  return out;
}

const char* deviation_formula_name(DeviationFormula f) {
  switch (f) {
    case DeviationFormula::TwCdf: return "tw_cdf";
    case DeviationFormula::TwTail: return "tw_tail";
    case DeviationFormula::Moderate: return "moderate";
    case DeviationFormula::Large: return "large";
    case DeviationFormula::OracleGap: return "oracle_gap";
  }
  return "?";
}

}  // namespace cdk

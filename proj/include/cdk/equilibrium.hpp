#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cdk/chebyshev.hpp"
#include "cdk/potential.hpp"

namespace cdk {

// Endpoints (a,b) of the equilibrium support, defined by the two
// Mhaskar-Rakhmanov-Saff integral conditions on V'.
struct MrsEndpoints {
  double a = 0.0;
  double b = 0.0;
  double residual_norm = 0.0;
  int newton_iters = 0;
};

// Newton solve of the endpoint equations
//   A1 = int_{-1}^{1} V'(lambda(s)) / sqrt(1-s^2) ds            = 0
//   A2 = (b-a) int_{-1}^{1} s V'(lambda(s)) / sqrt(1-s^2) ds    = 4 pi,
// with Gauss-Chebyshev quadrature and the analytic moment Jacobian.
MrsEndpoints solve_mrs(const Potential& pot, double tol = 1e-12,
                       std::optional<std::pair<double, double>> init = std::nullopt,
                       int quad_order = 256);

// All equilibrium-measure quantities on the rescaled interval: the kernel
// G(x) = (1/pi) int_{-1}^{1} h(t,x)/sqrt(1-t^2) dt with
// h(t,x) = (W'(t)-W'(x))/(t-x), the density rho, the phase integrals xi and
// eta, the edge constants gamma_+/-, the Lagrange multiplier l and a
// positive lower bound d_min of G.  Immutable and safe for concurrent reads.
class EquilibriumData {
 public:
  static EquilibriumData build(const Potential& pot, const MrsEndpoints& ep,
                               int quad_order = 256);

  const MrsEndpoints& endpoints() const { return ep_; }
  double gamma_plus() const { return gamma_plus_; }
  double gamma_minus() const { return gamma_minus_; }
  double lagrange_l() const { return lagrange_l_; }
  double d_min() const { return d_min_; }
  double sigma_hat() const { return sigma_hat_; }
  int quad_order() const { return quad_order_; }
  const ChebyshevSeries& g_series() const { return g_cheb_; }
  const RescaledPotential& rescaled() const { return *resc_; }
  const Potential& potential() const { return resc_->potential(); }
  ExtendedInterval domain() const { return resc_->domain(); }
  double lambda(double s) const { return resc_->lambda(s); }
  double lambda_inv(double x) const { return resc_->lambda_inv(x); }

  // G evaluated from the Chebyshev approximant inside [-1-sigma_hat,
  // 1+sigma_hat] and by direct quadrature of h outside.
  double g(double x) const;
  // rho(x) = (1/2pi) sqrt(1-x^2) G(x) on [-1,1], zero outside.
  double rho(double x) const;
  // xi(x) = 2pi int_x^1 rho, clamped to [0, 2pi].
  double xi(double x) const;
  // eta(x) = int over [1,|x|] of sqrt(t^2-1) G(+-t); zero on [-1,1].
  double eta(double x) const;
  // eta'(x) = sign(x) sqrt(x^2-1) G(x) for |x| > 1.
  double eta_deriv(double x) const;

 private:
  EquilibriumData() = default;
  double g_direct(double x) const;

  MrsEndpoints ep_;
  std::shared_ptr<const RescaledPotential> resc_;
  ChebyshevSeries g_cheb_;
  double gamma_plus_ = 0.0, gamma_minus_ = 0.0;
  double lagrange_l_ = 0.0, d_min_ = 0.0, sigma_hat_ = 0.0;
  int quad_order_ = 0;
  std::vector<double> cheb_nodes_;   // Gauss-Chebyshev nodes for h
  std::vector<double> wprime_nodes_; // W' at those nodes
};

struct SensitivityRow {
  double eps = 0.0;
  double a = 0.0;
  double b = 0.0;
  double slope_a = 0.0;  // (a_eps - a_0)/eps, 0 at eps = 0
  double slope_b = 0.0;
};

// MRS endpoints of Q + eps*f for each eps in the list (0 is allowed and
// gives the base endpoints), with finite-difference slopes attached.
std::vector<SensitivityRow> endpoint_sensitivity(const Potential& base,
                                                 const Field& f,
                                                 const std::vector<double>& eps_list,
                                                 double tol = 1e-12);

}  // namespace cdk

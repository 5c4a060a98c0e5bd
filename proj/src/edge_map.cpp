#include "cdk/edge_map.hpp"

#include <cmath>
#include <numbers>

#include "cdk/errors.hpp"

namespace cdk {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

EdgeMap::EdgeMap(std::shared_ptr<const EquilibriumData> eq, int side)
    : eq_(std::move(eq)), side_(side) {
  if (side_ != +1 && side_ != -1) throw DomainError("EdgeMap: side must be +1 or -1");
  gamma_ = side_ > 0 ? eq_->gamma_plus() : eq_->gamma_minus();

  delta_v_ = eq_->sigma_hat() / 10.0;
  // Shrink the validity radius until f_hat stays in the disc |f-1| <= 1/5.
  for (int shrink = 0; shrink < 24; ++shrink) {
    bool ok = true;
    for (int j = 0; j < 64 && ok; ++j) {
      const double off = delta_v_ * (j - 31.5) / 31.5;
      if (std::fabs(off) < h0_) continue;
      const double fh = f_hat_direct(side_ + off);
      if (std::fabs(fh - 1.0) > 0.2) ok = false;
    }
    if (ok) break;
    delta_v_ *= 0.5;
    if (shrink == 23)
      throw ResolutionError("EdgeMap: could not find a validity radius with |f_hat-1| <= 1/5");
  }
  if (delta_v_ < 8.0 * h0_) h0_ = delta_v_ / 8.0;

  stencil_x_ = {side_ - 2.0 * h0_, side_ - h0_, side_ + h0_, side_ + 2.0 * h0_};
  for (int i = 0; i < 4; ++i) stencil_f_[i] = f_hat_direct(stencil_x_[i]);
}

void EdgeMap::require_inside(double x) const {
  if (std::fabs(x - side_) > delta_v_ * (1.0 + 1e-12))
    throw DomainError("EdgeMap: argument outside validity radius");
}

double EdgeMap::f_hat_direct(double x) const {
  double u;  // (3/4) * phase integral
  double gap;
  if (side_ > 0) {
    gap = x - 1.0;
    u = 0.75 * (x < 1.0 ? eq_->xi(x) : eq_->eta(x));
  } else {
    gap = -(x + 1.0);
    u = 0.75 * (x > -1.0 ? kTwoPi - eq_->xi(x) : eq_->eta(x));
  }
  return std::pow(u, 2.0 / 3.0) / (std::fabs(gap) * gamma_);
}

double EdgeMap::f_hat(double x) const {
  require_inside(x);
  if (std::fabs(x - side_) >= h0_) return f_hat_direct(x);
  // Cubic Lagrange interpolation through the cached stencil; reduces to the
  // classic Richardson combination at the endpoint itself.
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double li = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      li *= (x - stencil_x_[j]) / (stencil_x_[i] - stencil_x_[j]);
    }
    acc += li * stencil_f_[i];
  }
  return acc;
}

double EdgeMap::f_n(int n, double x) const {
  if (n < 1) throw DomainError("EdgeMap::f_n: n >= 1 required");
  const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);
  if (side_ > 0) return n23 * gamma_ * (x - 1.0) * f_hat(x);
  return -n23 * gamma_ * (x + 1.0) * f_hat(x);
}

double EdgeMap::d_v(double x) const {
  const double fh = f_hat(x);
  const double lin = side_ > 0 ? (x + 1.0) : (1.0 - x);
  return std::pow(lin * fh, 0.25);
}

}  // namespace cdk

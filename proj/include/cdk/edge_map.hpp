#pragma once

#include <array>
#include <memory>

#include "cdk/equilibrium.hpp"

namespace cdk {

// Conformal edge coordinate near one endpoint of the support.  f_hat maps a
// neighbourhood of side (+1 or -1) into a disc around 1 and satisfies
//   (|x - side| gamma f_hat(x))^{3/2} = (3/4) * (phase integral at x),
// where the phase integral is xi (bulk side of +1), 2pi - xi (bulk side of
// -1) or eta (void sides).  f_hat(side) = 1 by the choice of gamma.
//
// Immutable after construction; pure concurrent evaluation.
class EdgeMap {
 public:
  EdgeMap(std::shared_ptr<const EquilibriumData> eq, int side);

  // f_hat evaluated directly away from the endpoint and by a 4-point
  // interpolation stencil at side +- h0, side +- 2h0 inside |x-side| < h0,
  // where the direct quotient loses significance.
  double f_hat(double x) const;
  // N-scaled edge coordinate: side +1: N^{2/3} gamma_+ (x-1) f_hat(x);
  // side -1: -N^{2/3} gamma_- (x+1) f_hat(x).
  double f_n(int n, double x) const;
  // Quarter-power factor: ((x+1) f_hat)^{1/4} at +1, ((1-x) f_hat)^{1/4} at -1.
  double d_v(double x) const;

  int side() const { return side_; }
  double delta_v() const { return delta_v_; }
  double series_radius() const { return h0_; }
  double gamma() const { return gamma_; }
  const EquilibriumData& equilibrium() const { return *eq_; }

 private:
  double f_hat_direct(double x) const;
  void require_inside(double x) const;

  std::shared_ptr<const EquilibriumData> eq_;
  int side_ = +1;
  double gamma_ = 0.0;
  double delta_v_ = 0.0;
  double h0_ = 1e-3;
  std::array<double, 4> stencil_x_{};
  std::array<double, 4> stencil_f_{};
};

}  // namespace cdk

#pragma once

#include <functional>
#include <vector>

namespace cdk {

// Chebyshev interpolant on [lo,hi] built at first-kind Chebyshev points.
// value(x) = c[0]/2 + sum_{k>=1} c[k] T_k(u), u the affine pullback of x.
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;

  static ChebyshevSeries fit(const std::function<double(double)>& f, double lo,
                             double hi, int n);

  double operator()(double x) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& coeffs() const { return c_; }
  double max_abs_coeff() const;
  // Largest |c_k| among the trailing `count` coefficients.
  double tail_abs_coeff(int count) const;

  static ChebyshevSeries from_coeffs(std::vector<double> c, double lo, double hi);

 private:
  double lo_ = -1.0;
  double hi_ = 1.0;
  std::vector<double> c_;
};

}  // namespace cdk

#include "cdk/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cdk {

ChebyshevSeries ChebyshevSeries::fit(const std::function<double(double)>& f,
                                     double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("ChebyshevSeries::fit: n < 2");
  const double pi = std::numbers::pi;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  std::vector<double> fv(n);
  for (int j = 0; j < n; ++j) {
    const double theta = pi * (j + 0.5) / n;
    fv[j] = f(mid + half * std::cos(theta));
  }
  ChebyshevSeries s;
  s.lo_ = lo;
  s.hi_ = hi;
  s.c_.resize(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += fv[j] * std::cos(pi * k * (j + 0.5) / n);
    s.c_[k] = 2.0 * acc / n;
  }
  return s;
}

ChebyshevSeries ChebyshevSeries::from_coeffs(std::vector<double> c, double lo,
                                             double hi) {
  ChebyshevSeries s;
  s.c_ = std::move(c);
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

double ChebyshevSeries::operator()(double x) const {
  const double u = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  double b1 = 0.0, b2 = 0.0;
  for (size_t k = c_.size(); k-- > 1;) {
    const double b0 = 2.0 * u * b1 - b2 + c_[k];
    b2 = b1;
    b1 = b0;
  }
  return 0.5 * c_[0] + u * b1 - b2;
}

double ChebyshevSeries::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::fabs(v));
  return m;
}

double ChebyshevSeries::tail_abs_coeff(int count) const {
  double m = 0.0;
  const int n = static_cast<int>(c_.size());
  for (int k = std::max(0, n - count); k < n; ++k)
    m = std::max(m, std::fabs(c_[k]));
  return m;
}

}  // namespace cdk

#pragma once

#include <functional>
#include <vector>

namespace cdk {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre rule on [-1,1], cached per order.
const QuadRule& gauss_legendre(int n);

// Clenshaw-Curtis rule with npts points on [-1,1] (endpoints included),
// cached per size.  npts must be odd so the segment count is even.
const QuadRule& clenshaw_curtis(int npts);

// Gauss-Chebyshev (first kind) nodes cos((2k-1)pi/(2n)); the common weight
// is pi/n.  Integrates f(t)/sqrt(1-t^2) as (pi/n) * sum f(t_k).
const std::vector<double>& gauss_chebyshev_nodes(int n);

QuadRule map_to(const QuadRule& rule, double a, double b);

double integrate(const QuadRule& rule, const std::function<double(double)>& f,
                 double a, double b);

// Adaptive bisection with a 15-point Gauss panel; handles integrable
// endpoint singularities (log, sqrt) by geometric refinement.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-12,
                          double abs_tol = 1e-300, int max_depth = 48);

// Compensated accumulator; keeps quadrature sums deterministic and tight.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace cdk

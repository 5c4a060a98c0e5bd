#include "cdk/quadrature.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace cdk {

namespace {
constexpr double kPi = std::numbers::pi;

QuadRule make_gauss_legendre(int n) {
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

QuadRule make_clenshaw_curtis(int npts) {
  if (npts < 3 || npts % 2 == 0)
    throw std::invalid_argument("clenshaw_curtis: npts must be odd and >= 3");
  const int n = npts - 1;  // even segment count
  QuadRule r;
  r.x.resize(npts);
  r.w.resize(npts);
  for (int k = 0; k <= n; ++k) {
    const double theta = k * kPi / n;
    r.x[k] = std::cos(theta);
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) {
      const double b = (2 * j == n) ? 1.0 : 2.0;
      s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
    }
    const double c = (k == 0 || k == n) ? 1.0 : 2.0;
    r.w[k] = c / n * (1.0 - s);
  }
  return r;
}
}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

const QuadRule& clenshaw_curtis(int npts) {
  static std::map<int, QuadRule> cache;
  auto it = cache.find(npts);
  if (it == cache.end()) it = cache.emplace(npts, make_clenshaw_curtis(npts)).first;
  return it->second;
}

const std::vector<double>& gauss_chebyshev_nodes(int n) {
  static std::map<int, std::vector<double>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> x(n);
    for (int k = 1; k <= n; ++k) x[k - 1] = std::cos((2.0 * k - 1.0) * kPi / (2.0 * n));
    it = cache.emplace(n, std::move(x)).first;
  }
  return it->second;
}

QuadRule map_to(const QuadRule& rule, double a, double b) {
  QuadRule r;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  r.x.reserve(rule.x.size());
  r.w.reserve(rule.w.size());
  for (size_t i = 0; i < rule.x.size(); ++i) {
    r.x.push_back(mid + half * rule.x[i]);
    r.w.push_back(half * rule.w[i]);
  }
  return r;
}

double integrate(const QuadRule& rule, const std::function<double(double)>& f,
                 double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  KahanSum s;
  for (size_t i = 0; i < rule.x.size(); ++i)
    s.add(half * rule.w[i] * f(mid + half * rule.x[i]));
  return s.value();
}

namespace {
double panel15(const std::function<double(double)>& f, double a, double b) {
  return integrate(gauss_legendre(15), f, a, b);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double whole, double rel_tol, double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = panel15(f, a, m);
  const double right = panel15(f, m, b);
  const double sum = left + right;
  if (depth <= 0) return sum;
  const double err = std::fabs(sum - whole);
  // The roundoff floor keeps panels from subdividing forever once their
  // error estimate is dominated by cancellation noise.
  const double floor = 8e-16 * (std::fabs(left) + std::fabs(right));
  if (err <= std::max({abs_tol, rel_tol * std::fabs(sum), floor})) return sum;
  return adapt(f, a, m, left, rel_tol, abs_tol, depth - 1) +
         adapt(f, m, b, right, rel_tol, abs_tol, depth - 1);
}
}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol,
                          int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, panel15(f, a, b), rel_tol, abs_tol, max_depth);
}

}  // namespace cdk

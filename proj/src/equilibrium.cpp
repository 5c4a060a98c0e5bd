#include "cdk/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdk/errors.hpp"
#include "cdk/quadrature.hpp"

namespace cdk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDiagSwitch = 1e-6;  // |t-x| below which h uses W''(midpoint)

double divided_wprime(const RescaledPotential& r, double t, double x,
                      double wprime_t, double wprime_x) {
  if (std::fabs(t - x) < kDiagSwitch) return r.ddw(0.5 * (t + x));
  return (wprime_t - wprime_x) / (t - x);
}

struct MrsSystem {
  double a1 = 0.0, a2 = 0.0;       // residuals (a2 has the -4pi folded in)
  double j11 = 0.0, j12 = 0.0;     // Jacobian wrt (a,b)
  double j21 = 0.0, j22 = 0.0;
};

MrsSystem eval_mrs(const Potential& pot, double a, double b, int q) {
  const std::vector<double>& nodes = gauss_chebyshev_nodes(q);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  KahanSum s0, s1, m0, m1, m2;
  for (double s : nodes) {
    const double x = mid + half * s;
    const double dv = pot.deriv(x);
    const double ddv = pot.second(x);
    s0.add(dv);
    s1.add(s * dv);
    m0.add(ddv);
    m1.add(s * ddv);
    m2.add(s * s * ddv);
  }
  const double wq = kPi / q;
  MrsSystem r;
  r.a1 = wq * s0.value();
  const double is = wq * s1.value();  // int s V'(lambda(s)) dalpha-free part
  r.a2 = (b - a) * is - 4.0 * kPi;
  const double mm0 = wq * m0.value(), mm1 = wq * m1.value(), mm2 = wq * m2.value();
  // d lambda/da = (1-s)/2, d lambda/db = (1+s)/2
  r.j11 = 0.5 * (mm0 - mm1);
  r.j12 = 0.5 * (mm0 + mm1);
  r.j21 = -is + 0.5 * (b - a) * (mm1 - mm2);
  r.j22 = is + 0.5 * (b - a) * (mm1 + mm2);
  return r;
}

// Bracket from a coarse scan: the minimizer of V plus the distance at which
// V has risen by one on each side.
std::pair<double, double> initial_bracket(const Potential& pot) {
  const ExtendedInterval& J = pot.interval();
  const double lo = std::isfinite(J.lo) ? J.lo : -20.0;
  const double hi = std::isfinite(J.hi) ? J.hi : 20.0;
  const int n = 4001;
  double xm = 0.5 * (lo + hi), vm = pot.value(xm);
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1.0);
    const double v = pot.value(x);
    if (v < vm) {
      vm = v;
      xm = x;
    }
  }
  auto rise = [&](double dir) {
    double r = 1e-3;
    while (r < (hi - lo) && pot.value(xm + dir * r) < vm + 1.0) r *= 1.5;
    return std::min(r, dir > 0 ? (hi - xm) * 0.9 : (xm - lo) * 0.9);
  };
  const double ra = rise(-1.0), rb = rise(+1.0);
  return {xm - std::max(ra, 1e-3), xm + std::max(rb, 1e-3)};
}

}  // namespace

MrsEndpoints solve_mrs(const Potential& pot, double tol,
                       std::optional<std::pair<double, double>> init,
                       int quad_order) {
  if (!(tol > 0.0)) throw DomainError("solve_mrs: tol must be positive");
  const ExtendedInterval& J = pot.interval();
  auto [a, b] = init ? *init : initial_bracket(pot);
  auto inside = [&](double aa, double bb) {
    return aa < bb && J.strictly_inside(aa) && J.strictly_inside(bb);
  };
  if (!inside(a, b)) throw DomainError("solve_mrs: initial bracket invalid");

  MrsEndpoints out;
  for (int iter = 1; iter <= 100; ++iter) {
    const MrsSystem s = eval_mrs(pot, a, b, quad_order);
    out.residual_norm = std::max(std::fabs(s.a1), std::fabs(s.a2));
    out.newton_iters = iter - 1;
    if (out.residual_norm < tol) {
      out.a = a;
      out.b = b;
      if (!(J.strictly_inside(a) && J.strictly_inside(b)))
        throw EndpointEscape("solve_mrs: endpoint on the interval boundary (hard edge)");
      return out;
    }
    const double det = s.j11 * s.j22 - s.j12 * s.j21;
    if (det == 0.0) throw NoConvergence("solve_mrs: singular Jacobian");
    double da = -(s.j22 * s.a1 - s.j12 * s.a2) / det;
    double db = -(-s.j21 * s.a1 + s.j11 * s.a2) / det;
    // Damp steps that leave the interval or cross the endpoints.
    double step = 1.0;
    int halvings = 0;
    while (!inside(a + step * da, b + step * db) && halvings < 60) {
      step *= 0.5;
      ++halvings;
    }
    if (halvings >= 60)
      throw EndpointEscape("solve_mrs: endpoints forced against the interval boundary");
    a += step * da;
    b += step * db;
  }
  throw NoConvergence("solve_mrs: Newton did not reach tolerance in 100 iterations");
}

EquilibriumData EquilibriumData::build(const Potential& pot,
                                       const MrsEndpoints& ep, int quad_order) {
  if (quad_order < 64) throw DomainError("build_equilibrium: quad_order < 64");
  EquilibriumData eq;
  eq.ep_ = ep;
  eq.resc_ = std::make_shared<RescaledPotential>(pot, ep.a, ep.b);
  const ExtendedInterval dom = eq.resc_->domain();

  double sigma = 0.5;
  if (std::isfinite(dom.hi)) sigma = std::min(sigma, 0.5 * (dom.hi - 1.0));
  if (std::isfinite(dom.lo)) sigma = std::min(sigma, 0.5 * (-1.0 - dom.lo));
  if (sigma <= 0.0)
    throw EndpointEscape("build_equilibrium: no room beyond the support inside the interval");
  eq.sigma_hat_ = sigma;

  int ncheb = 128;
  int q = quad_order;
  const RescaledPotential& r = *eq.resc_;
  for (int attempt = 0;; ++attempt) {
    eq.cheb_nodes_ = gauss_chebyshev_nodes(q);
    eq.wprime_nodes_.resize(eq.cheb_nodes_.size());
    for (size_t i = 0; i < eq.cheb_nodes_.size(); ++i)
      eq.wprime_nodes_[i] = r.dw(eq.cheb_nodes_[i]);
    auto g_fn = [&eq](double x) { return eq.g_direct(x); };
    eq.g_cheb_ = ChebyshevSeries::fit(g_fn, -1.0 - sigma, 1.0 + sigma, ncheb);
    if (eq.g_cheb_.tail_abs_coeff(5) < 1e-12 * eq.g_cheb_.max_abs_coeff()) break;
    if (attempt >= 3)
      throw ResolutionError("build_equilibrium: Chebyshev tail of G did not resolve");
    ncheb *= 2;
    q *= 2;
  }
  eq.quad_order_ = q;

  // Positive lower bound of G over the extended interval, with a safety
  // margin; also the positivity check.
  double gmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 512; ++i) {
    const double x = -1.0 - sigma + (2.0 + 2.0 * sigma) * i / 511.0;
    gmin = std::min(gmin, eq.g_cheb_(x));
  }
  if (!(gmin > 0.0))
    throw PositivityError("build_equilibrium: G has a non-positive value on the grid");
  eq.d_min_ = 0.99 * gmin;

  eq.gamma_plus_ = std::cbrt(0.5) * std::pow(eq.g_cheb_(1.0), 2.0 / 3.0);
  eq.gamma_minus_ = std::cbrt(0.5) * std::pow(eq.g_cheb_(-1.0), 2.0 / 3.0);

  // Lagrange multiplier from the boundary value of the log-transform at
  // x = 1:  l = 2 int_{-1}^1 log(1-t) rho(t) dt - W(1).  After t = cos(theta)
  // the integrand is sin^2(theta) G(cos theta) log(2 sin^2(theta/2)) / pi,
  // whose log endpoint is tamed by the sin^2 factor.
  {
    auto integrand = [&eq](double theta) {
      const double st = std::sin(theta);
      if (st == 0.0 && theta < 1.0) return 0.0;  // sin^2 kills the log at 0
      const double half = std::sin(0.5 * theta);
      const double lg = std::log(2.0 * half * half);
      return st * st * eq.g_cheb_(std::cos(theta)) * lg;
    };
    const double li = integrate(clenshaw_curtis(4097), integrand, 0.0, kPi);
    eq.lagrange_l_ = li / kPi - r.w(1.0);
  }
  return eq;
}

double EquilibriumData::g_direct(double x) const {
  const RescaledPotential& r = *resc_;
  const double wpx = r.dw(x);
  KahanSum s;
  for (size_t i = 0; i < cheb_nodes_.size(); ++i)
    s.add(divided_wprime(r, cheb_nodes_[i], x, wprime_nodes_[i], wpx));
  return s.value() / static_cast<double>(cheb_nodes_.size());
}

double EquilibriumData::g(double x) const {
  if (x >= g_cheb_.lo() && x <= g_cheb_.hi()) return g_cheb_(x);
  const ExtendedInterval dom = resc_->domain();
  if (!dom.contains(x)) throw DomainError("G: argument outside the rescaled interval");
  return g_direct(x);
}

double EquilibriumData::rho(double x) const {
  if (std::fabs(x) >= 1.0) return 0.0;
  return 0.5 / kPi * std::sqrt(1.0 - x * x) * g(x);
}

double EquilibriumData::xi(double x) const {
  if (x >= 1.0) return 0.0;
  if (x <= -1.0) return 2.0 * kPi;
  // 2pi int_x^1 rho = int_0^{arccos x} sin^2(theta) G(cos theta) dtheta
  auto integrand = [this](double theta) {
    const double st = std::sin(theta);
    return st * st * g_cheb_(std::cos(theta));
  };
  const double v = integrate(clenshaw_curtis(257), integrand, 0.0, std::acos(x));
  return std::clamp(v, 0.0, 2.0 * kPi);
}

double EquilibriumData::eta(double x) const {
  const double ax = std::fabs(x);
  if (ax <= 1.0) return 0.0;
  const ExtendedInterval dom = resc_->domain();
  if (!dom.contains(x)) throw DomainError("eta: argument outside the rescaled interval");
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  // t = cosh(u) removes the square-root vanishing at the support edge; the
  // clamp keeps cosh(acosh(ax)) from drifting an ulp past the boundary.
  auto integrand = [this, sgn, ax](double u) {
    const double sh = std::sinh(u);
    return sh * sh * g(sgn * std::min(std::cosh(u), ax));
  };
  return integrate_adaptive(integrand, 0.0, std::acosh(ax), 1e-13, 1e-300);
}

double EquilibriumData::eta_deriv(double x) const {
  const double ax = std::fabs(x);
  if (ax <= 1.0) return 0.0;
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  return sgn * std::sqrt(x * x - 1.0) * g(x);
}

std::vector<SensitivityRow> endpoint_sensitivity(const Potential& base,
                                                 const Field& f,
                                                 const std::vector<double>& eps_list,
                                                 double tol) {
  if (!base.interval().bounded())
    throw DomainError("endpoint_sensitivity: requires a compact interval");
  const MrsEndpoints base_ep = solve_mrs(base, tol);
  std::vector<SensitivityRow> rows;
  rows.reserve(eps_list.size());
  for (double eps : eps_list) {
    SensitivityRow row;
    row.eps = eps;
    if (eps == 0.0) {
      row.a = base_ep.a;
      row.b = base_ep.b;
    } else {
      const Potential p = perturb(base, f, eps);
      const MrsEndpoints ep = solve_mrs(p, tol, std::make_pair(base_ep.a, base_ep.b));
      row.a = ep.a;
      row.b = ep.b;
      row.slope_a = (ep.a - base_ep.a) / eps;
      row.slope_b = (ep.b - base_ep.b) / eps;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cdk

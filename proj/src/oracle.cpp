#include "cdk/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdk/errors.hpp"
#include "cdk/quadrature.hpp"

namespace cdk {

namespace {

// Relative weight threshold: exp(-702) sits just above the subnormal range,
// so the grid keeps every point where the weighted polynomials can still
// contribute.
constexpr double kTailNats = 702.0;

struct Grid {
  std::vector<double> x, w;  // w includes exp(-N(V - V_min))
  double vmin = 0.0;
  double lo = 0.0, hi = 0.0;
};

double find_vmin(const Potential& pot, double lo, double hi, double* argmin) {
  const int n = 8001;
  double xm = lo, vm = pot.value(lo);
  for (int i = 1; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1.0);
    const double v = pot.value(x);
    if (v < vm) {
      vm = v;
      xm = x;
    }
  }
  if (argmin) *argmin = xm;
  return vm;
}

double truncation_point(const Potential& pot, int n_weight, double vmin,
                        double from, double dir, double bound) {
  // First point in direction dir where N(V - vmin) exceeds kTailNats.
  const double target = vmin + kTailNats / n_weight;
  double lo = from, hi = from + dir;
  int grow = 0;
  while (pot.value(hi) < target) {
    lo = hi;
    hi = from + (hi - from) * 2.0;
    if ((dir > 0 && hi >= bound) || (dir < 0 && hi <= bound)) return bound;
    if (++grow > 80)
      throw TailError("build_recurrence: weight tail bound unreachable");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (pot.value(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (std::fabs(hi - lo) < 1e-14 * (1.0 + std::fabs(hi))) break;
  }
  return hi;
}

Grid make_grid(const Potential& pot, int n_weight, int total_nodes) {
  const ExtendedInterval& J = pot.interval();
  const double scan_lo = std::isfinite(J.lo) ? J.lo : -1e6;
  const double scan_hi = std::isfinite(J.hi) ? J.hi : 1e6;
  double xm = 0.0;
  Grid g;
  g.vmin = find_vmin(pot, std::max(scan_lo, -30.0), std::min(scan_hi, 30.0), &xm);
  g.lo = truncation_point(pot, n_weight, g.vmin, xm, -1.0, scan_lo);
  g.hi = truncation_point(pot, n_weight, g.vmin, xm, +1.0, scan_hi);

  const int per_panel = 24;
  const int panels = (total_nodes + per_panel - 1) / per_panel;
  const QuadRule& base = gauss_legendre(per_panel);
  g.x.reserve(panels * per_panel);
  g.w.reserve(panels * per_panel);
  for (int p = 0; p < panels; ++p) {
    const double a = g.lo + (g.hi - g.lo) * p / panels;
    const double b = g.lo + (g.hi - g.lo) * (p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < per_panel; ++i) {
      const double x = mid + half * base.x[i];
      g.x.push_back(x);
      g.w.push_back(half * base.w[i] * std::exp(-n_weight * (pot.value(x) - g.vmin)));
    }
  }
  return g;
}

RecurrenceTable stieltjes(const Potential& pot, int n_weight, int n_max,
                          const Grid& g) {
  const size_t m = g.x.size();
  std::vector<double> pk(m, 0.0), pkm1(m, 0.0);
  RecurrenceTable tab;
  tab.n_weight = n_weight;
  tab.pot = std::make_shared<Potential>(pot);
  tab.trunc_lo = g.lo;
  tab.trunc_hi = g.hi;
  tab.grid_size = static_cast<int>(m);
  tab.alphas.assign(n_max + 1, 0.0);
  tab.betas.assign(n_max + 1, 0.0);

  KahanSum mass;
  for (size_t i = 0; i < m; ++i) mass.add(g.w[i]);
  const double mu0 = mass.value();
  if (!(mu0 > 0.0)) throw TailError("build_recurrence: zero total mass");
  tab.betas[0] = std::exp(-static_cast<double>(n_weight) * g.vmin) * mu0;

  const double p0 = 1.0 / std::sqrt(mu0);
  for (size_t i = 0; i < m; ++i) pk[i] = p0;

  double sqrt_beta_k = 0.0;  // sqrt(beta_k) in the orthonormal recurrence
  for (int k = 0; k <= n_max; ++k) {
    KahanSum sa;
    for (size_t i = 0; i < m; ++i) sa.add(g.w[i] * g.x[i] * pk[i] * pk[i]);
    tab.alphas[k] = sa.value();
    if (k == n_max) break;
    KahanSum sq;
    std::vector<double> q(m);
    for (size_t i = 0; i < m; ++i) {
      q[i] = (g.x[i] - tab.alphas[k]) * pk[i] - sqrt_beta_k * pkm1[i];
      sq.add(g.w[i] * q[i] * q[i]);
    }
    const double beta_next = sq.value();
    if (!(beta_next > 0.0))
      throw GridTooCoarse("build_recurrence: lost positivity of beta at degree " +
                          std::to_string(k + 1));
    tab.betas[k + 1] = beta_next;
    sqrt_beta_k = std::sqrt(beta_next);
    for (size_t i = 0; i < m; ++i) {
      pkm1[i] = pk[i];
      pk[i] = q[i] / sqrt_beta_k;
    }
  }
  return tab;
}

}  // namespace

RecurrenceTable build_recurrence_raw(const Potential& pot, int n_weight,
                                     int n_max, int grid_size) {
  if (n_weight < 1) throw DomainError("build_recurrence: n_weight >= 1 required");
  if (n_max < 1) throw DomainError("build_recurrence: n_max >= 1 required");
  if (n_max > 2 * n_weight)
    throw DomainError("build_recurrence: n_max must not exceed 2*n_weight");
  const Grid g = make_grid(pot, n_weight, grid_size);
  return stieltjes(pot, n_weight, n_max, g);
}

RecurrenceTable build_recurrence(const Potential& pot, int n_weight, int n_max) {
  const int base_nodes = 8 * n_max + 400;
  RecurrenceTable coarse = build_recurrence_raw(pot, n_weight, n_max, base_nodes);
  for (int escalate = 0; escalate < 2; ++escalate) {
    const RecurrenceTable fine =
        build_recurrence_raw(pot, n_weight, n_max, 2 * coarse.grid_size);
    // betas relative to themselves; alphas against the interval scale (they
    // vanish identically for even weights).
    const double x_scale =
        std::max({1.0, std::fabs(fine.trunc_lo), std::fabs(fine.trunc_hi)});
    double worst = 0.0;
    for (int k = 0; k <= n_max; ++k) {
      worst = std::max(worst, std::fabs(fine.betas[k] - coarse.betas[k]) /
                                  std::fabs(fine.betas[k]));
      worst = std::max(worst,
                       std::fabs(fine.alphas[k] - coarse.alphas[k]) / x_scale);
    }
    if (worst <= 1e-10) return fine;
    coarse = fine;
  }
  throw GridTooCoarse("build_recurrence: coefficients kept moving under grid doubling");
}

PhiEndpoints phi_endpoints(const RecurrenceTable& tab, double x) {
  const int n = tab.n_weight;
  if (tab.n_max() < n)
    throw DomainError("cd_kernel: table built with n_max < n_weight");
  const ScaledReal w_half =
      ScaledReal::from_log(-0.5 * n * tab.pot->value(x));
  ScaledReal pkm1;  // phi_{-1} = 0
  ScaledReal pk = w_half / ScaledReal(std::sqrt(tab.betas[0]));
  ScaledReal diag;
  for (int k = 0; k < n; ++k) {
    diag += pk * pk;
    const ScaledReal q = ScaledReal(x - tab.alphas[k]) * pk -
                         ScaledReal(std::sqrt(tab.betas[k])) * pkm1;
    pkm1 = pk;
    pk = q / ScaledReal(std::sqrt(tab.betas[k + 1]));
  }
  return {pkm1, pk, diag};
}

ScaledReal cd_kernel_exact(const RecurrenceTable& tab, double x, double y) {
  if (!tab.pot->interval().contains(x) || !tab.pot->interval().contains(y))
    throw DomainError("cd_kernel: point outside the interval");
  if (x == y) return phi_endpoints(tab, x).diag;
  const PhiEndpoints px = phi_endpoints(tab, x);
  const PhiEndpoints py = phi_endpoints(tab, y);
  const ScaledReal num = px.phi_n * py.phi_nm1 - px.phi_nm1 * py.phi_n;
  return ScaledReal(std::sqrt(tab.betas[tab.n_weight])) * num / ScaledReal(x - y);
}

double correlation(const RecurrenceTable& tab, const std::vector<double>& points) {
  const int k = static_cast<int>(points.size());
  if (k < 1 || k > 6) throw DomainError("correlation: 1 <= k <= 6 required");
  std::vector<std::vector<ScaledReal>> a(k, std::vector<ScaledReal>(k));
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      a[i][j] = cd_kernel_exact(tab, points[i], points[j]);
      a[j][i] = a[i][j];
    }
  // Scaled LU with partial pivoting.
  ScaledReal det(1.0);
  int sign = 1;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (abs_less(a[piv][c], a[r][c])) piv = r;
    if (a[piv][c].zero()) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      sign = -sign;
    }
    det *= a[c][c];
    for (int r = c + 1; r < k; ++r) {
      const ScaledReal f = a[r][c] / a[c][c];
      for (int j = c; j < k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return sign * det.to_double();
}

double oracle_trace(const RecurrenceTable& tab) {
  // int K(x,x) dx over the truncated support, on a composite grid matching
  // the recurrence resolution.
  const int per_panel = 24;
  const int panels = std::max(20, tab.grid_size / per_panel);
  const QuadRule& base = gauss_legendre(per_panel);
  KahanSum s;
  for (int p = 0; p < panels; ++p) {
    const double a = tab.trunc_lo + (tab.trunc_hi - tab.trunc_lo) * p / panels;
    const double b = tab.trunc_lo + (tab.trunc_hi - tab.trunc_lo) * (p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < per_panel; ++i) {
      const double x = mid + half * base.x[i];
      s.add(half * base.w[i] * phi_endpoints(tab, x).diag.to_double());
    }
  }
  return s.value();
}

ScaledReal oracle_upper_tail(const RecurrenceTable& tab, double lo) {
  const double clo = std::max(lo, tab.trunc_lo);
  const double chi = tab.trunc_hi;
  ScaledReal acc;
  if (!(clo < chi)) return acc;
  const int per_panel = 24;
  const int panels = 64;
  const QuadRule& base = gauss_legendre(per_panel);
  for (int p = 0; p < panels; ++p) {
    const double a = clo + (chi - clo) * p / panels;
    const double b = clo + (chi - clo) * (p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < per_panel; ++i) {
      const double x = mid + half * base.x[i];
      acc += ScaledReal(half * base.w[i]) * phi_endpoints(tab, x).diag;
    }
  }
  return acc;
}

namespace {
// Shrink [lo,hi] to the region where K(x,x) is within 1e-40 of its maximum
// over the interval; outside, the integral operator is numerically zero and
// wide Gauss grids would waste their nodes there.
std::pair<double, double> kernel_support(const RecurrenceTable& tab, double lo,
                                         double hi) {
  const int n_scan = 400;
  std::vector<double> logk(n_scan);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_scan; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / n_scan;
    logk[i] = phi_endpoints(tab, x).diag.log_abs();
    best = std::max(best, logk[i]);
  }
  const double cut = best - 40.0 * std::numbers::ln10;
  int first = 0, last = n_scan - 1;
  while (first < n_scan && logk[first] < cut) ++first;
  while (last >= 0 && logk[last] < cut) --last;
  if (first > last) return {lo, hi};
  const double a = lo + (hi - lo) * first / n_scan;
  const double b = lo + (hi - lo) * (last + 1.0) / n_scan;
  return {a, b};
}
}  // namespace

GapResult gap_probability(const RecurrenceTable& tab, double lo, double hi, int m) {
  if (m < 10) throw DomainError("gap_probability: m >= 10 required");
  double clo = std::max(lo, tab.trunc_lo);
  double chi = std::min(hi, tab.trunc_hi);
  GapResult out;
  out.m = m;
  if (!(clo < chi)) return out;  // empty interval: determinant of the identity
  const auto support = kernel_support(tab, clo, chi);
  clo = support.first;
  chi = support.second;

  auto nystrom = [&](int mm) {
    const QuadRule rule = map_to(gauss_legendre(mm), clo, chi);
    std::vector<PhiEndpoints> pe(mm);
    for (int i = 0; i < mm; ++i) pe[i] = phi_endpoints(tab, rule.x[i]);
    const double sb = std::sqrt(tab.betas[tab.n_weight]);
    Eigen::MatrixXd d(mm, mm);
    for (int i = 0; i < mm; ++i) {
      for (int j = 0; j <= i; ++j) {
        double kij;
        if (i == j) {
          kij = pe[i].diag.to_double();
        } else {
          const ScaledReal num = pe[i].phi_n * pe[j].phi_nm1 - pe[i].phi_nm1 * pe[j].phi_n;
          kij = sb * num.to_double() / (rule.x[i] - rule.x[j]);
        }
        const double v = std::sqrt(rule.w[i] * rule.w[j]) * kij;
        d(i, j) = (i == j ? 1.0 : 0.0) - v;
        d(j, i) = d(i, j);
      }
    }
    return d.partialPivLu().determinant();
  };

  const double v1 = nystrom(m);
  const double v2 = nystrom(2 * m);
  out.self_check = std::fabs(v1 - v2);
  out.value = v2;
  if (out.self_check > 1e-8)
    throw NoConvergence("gap_probability: Nystrom values at m and 2m differ by " +
                        std::to_string(out.self_check));
  return out;
}

}  // namespace cdk

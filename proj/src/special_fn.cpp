#include "cdk/special_fn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cdk/errors.hpp"

namespace cdk {

namespace {

constexpr double kAi0 = 0.35502805388781723926;    // 3^{-2/3}/Gamma(2/3)
constexpr double kAip0 = -0.25881940379280679841;  // -3^{-1/3}/Gamma(1/3)
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSeriesRadius = 4.5;
constexpr double kAsymRadius = 9.0;
constexpr double kWindowLo = -50.0;
constexpr double kWindowHi = 200.0;

// Taylor transport of (Ai, Ai') along the ODE y'' = x y from a to a+t.
// Converges for any step; used with |t| <= 0.25.
AiryPair taylor_step(double a, double ai, double aip, double t) {
  double ckm1 = 0.0;  // c_{k-1}
  double ck = ai;     // c_k
  double ck1 = aip;   // c_{k+1}
  double y = ck + ck1 * t;
  double yp = ck1;
  double tp = t;  // t^{k+1}
  for (int k = 0; k + 2 <= 64; ++k) {
    const double ck2 = (a * ck + ckm1) / ((k + 1.0) * (k + 2.0));
    const double dyp = (k + 2.0) * ck2 * tp;
    tp *= t;  // t^{k+2}
    const double dy = ck2 * tp;
    y += dy;
    yp += dyp;
    ckm1 = ck;
    ck = ck1;
    ck1 = ck2;
    if (k > 8 && std::fabs(dy) + std::fabs(dyp) < 1e-20 * (std::fabs(y) + std::fabs(yp)))
      break;
  }
  return {y, yp};
}

struct FillTable {
  double s0 = 0.0;
  double h = 0.25;
  std::vector<AiryPair> node;
};

// Dense (Ai, Ai') grid on 4..9.5, marched down from the asymptotic seed at
// 9.5.  Marching toward smaller s keeps the Bi-contamination shrinking.
const FillTable& fill_pos() {
  static const FillTable table = [] {
    FillTable t;
    t.s0 = 4.0;
    t.h = 0.25;
    const int n = 23;  // 4.0 .. 9.5
    t.node.resize(n);
    const ScaledAiryPair seed = airy_detail::asymptotic_pos(t.s0 + (n - 1) * t.h);
    t.node[n - 1] = {seed.ai.to_double(), seed.ai_prime.to_double()};
    for (int i = n - 2; i >= 0; --i) {
      const double s = t.s0 + (i + 1) * t.h;
      t.node[i] = taylor_step(s, t.node[i + 1].ai, t.node[i + 1].ai_prime, -t.h);
    }
    return t;
  }();
  return table;
}

// Dense grid on -9.5..-4, marched out from the Maclaurin seed at -4.
const FillTable& fill_neg() {
  static const FillTable table = [] {
    FillTable t;
    t.s0 = -9.5;
    t.h = 0.25;
    const int n = 23;  // -9.5 .. -4.0
    t.node.resize(n);
    t.node[n - 1] = airy_detail::maclaurin(-4.0);
    for (int i = n - 2; i >= 0; --i) {
      const double s = t.s0 + (i + 1) * t.h;
      t.node[i] = taylor_step(s, t.node[i + 1].ai, t.node[i + 1].ai_prime, -t.h);
    }
    return t;
  }();
  return table;
}

void check_window(double s) {
  if (!(s >= kWindowLo - 1e-12 && s <= kWindowHi + 1e-12))
    throw DomainError("airy: argument outside certified window [-50, 200]");
}

}  // namespace

namespace airy_detail {

AiryPair maclaurin(double s) {
  const double z3 = s * s * s;
  // f, g solve y''=xy with (f,f')(0)=(1,0), (g,g')(0)=(0,1).
  double f = 1.0, tf = 1.0;
  double g = s, tg = s;
  double gp = 1.0, tgp = 1.0;
  double fp = 0.5 * s * s, tfp = fp;
  for (int k = 1; k < 200; ++k) {
    tf *= z3 / ((3.0 * k - 1.0) * (3.0 * k));
    tg *= z3 / ((3.0 * k) * (3.0 * k + 1.0));
    tgp *= z3 / ((3.0 * k - 2.0) * (3.0 * k));
    if (k >= 2) tfp *= z3 / ((3.0 * k - 3.0) * (3.0 * k - 1.0));
    f += tf;
    g += tg;
    gp += tgp;
    if (k >= 2) fp += tfp;
    if (std::fabs(tf) + std::fabs(tg) < 1e-20 * (std::fabs(f) + std::fabs(g) + 1.0) && k > 4)
      break;
  }
  return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

ScaledAiryPair asymptotic_pos(double s) {
  // DLMF 9.7.5/9.7.6 with u_k, v_k coefficients; truncated at the smallest
  // term.  Fully accurate for s >= 8 (first omitted term < 1e-15 relative).
  const double zeta = 2.0 / 3.0 * std::pow(s, 1.5);
  double tu = 1.0, su = 1.0, sv = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 60; ++k) {
    tu *= -(6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k * zeta);
    if (std::fabs(tu) >= prev) break;
    prev = std::fabs(tu);
    su += tu;
    sv += tu * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    if (prev < 1e-19) break;
  }
  const ScaledReal damp = ScaledReal::from_log(-zeta);
  ScaledAiryPair r;
  r.ai = damp * ScaledReal(su * std::pow(s, -0.25) / (2.0 * kSqrtPi));
  r.ai_prime = damp * ScaledReal(-sv * std::pow(s, 0.25) / (2.0 * kSqrtPi));
  return r;
}

AiryPair asymptotic_neg(double s) {
  // DLMF 9.7.9/9.7.10: oscillatory expansion for large negative argument.
  const double z = -s;
  const double zeta = 2.0 / 3.0 * std::pow(z, 1.5);
  double P = 0.0, Q = 0.0, R = 0.0, S = 0.0;
  double u = 1.0;   // u_k
  double tz = 1.0;  // u_k zeta^{-k}
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 60; ++k) {
    if (k > 0) {
      u *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
      tz *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k * zeta);
    }
    if (std::fabs(tz) >= prev && k > 1) break;
    prev = std::fabs(tz);
    const double tv = tz * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    const int half = k / 2;
    const double sgn = (half % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      P += sgn * tz;
      R += sgn * tv;
    } else {
      Q += sgn * tz;
      S += sgn * tv;
    }
    if (prev < 1e-19) break;
  }
  const double phase = zeta + std::numbers::pi / 4.0;
  const double sn = std::sin(phase), cs = std::cos(phase);
  AiryPair r;
  r.ai = (sn * P - cs * Q) / (kSqrtPi * std::pow(z, 0.25));
  r.ai_prime = -(cs * R + sn * S) * std::pow(z, 0.25) / kSqrtPi;
  return r;
}

AiryPair ode_fill(double s) {
  const FillTable& t = (s > 0.0) ? fill_pos() : fill_neg();
  int i = static_cast<int>(std::llround((s - t.s0) / t.h));
  if (i < 0) i = 0;
  if (i >= static_cast<int>(t.node.size())) i = static_cast<int>(t.node.size()) - 1;
  const double a = t.s0 + i * t.h;
  if (s == a) return t.node[i];
  return taylor_step(a, t.node[i].ai, t.node[i].ai_prime, s - a);
}

}  // namespace airy_detail

AiryPair airy(double s) {
  check_window(s);
  if (std::fabs(s) <= kSeriesRadius) return airy_detail::maclaurin(s);
  if (std::fabs(s) < kAsymRadius) return airy_detail::ode_fill(s);
  if (s < 0.0) return airy_detail::asymptotic_neg(s);
  const ScaledAiryPair p = airy_detail::asymptotic_pos(s);
  return {p.ai.to_double(), p.ai_prime.to_double()};
}

ScaledAiryPair airy_scaled(double s) {
  check_window(s);
  if (s >= kAsymRadius) return airy_detail::asymptotic_pos(s);
  const AiryPair p = airy(s);
  return {ScaledReal(p.ai), ScaledReal(p.ai_prime)};
}

ScaledReal airy_kernel_scaled(double s, double t) {
  if (std::fabs(s - t) < 1e-4) {
    const double m = 0.5 * (s + t);
    const double u = 0.5 * (s - t);
    const ScaledAiryPair p = airy_scaled(m);
    const ScaledReal diag = p.ai_prime * p.ai_prime - ScaledReal(m) * p.ai * p.ai;
    // Even Taylor correction in u; the odd orders vanish by symmetry.
    return diag * ScaledReal(1.0 + 2.0 / 3.0 * m * u * u) +
           p.ai * p.ai_prime * ScaledReal(u * u / 3.0);
  }
  const ScaledAiryPair ps = airy_scaled(s);
  const ScaledAiryPair pt = airy_scaled(t);
  return (ps.ai * pt.ai_prime - ps.ai_prime * pt.ai) / ScaledReal(s - t);
}

double airy_kernel(double s, double t) { return airy_kernel_scaled(s, t).to_double(); }

ScaledReal airy_kernel_tail(double s, double t) {
  if (s < 1.0 || t < 1.0)
    throw DomainError("airy_kernel_tail: requires s,t >= 1");
  const double mant = 1.0 / (4.0 * std::numbers::pi) * std::pow(s * t, -0.25) /
                      (std::sqrt(s) + std::sqrt(t));
  const double logk = -(2.0 / 3.0) * (std::pow(s, 1.5) + std::pow(t, 1.5));
  return ScaledReal(mant) * ScaledReal::from_log(logk);
}

double sine_kernel(double s, double t) {
  const double d = s - t;
  const double x = std::numbers::pi * d;
  if (std::fabs(d) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace cdk

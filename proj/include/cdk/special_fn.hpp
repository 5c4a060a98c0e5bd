#pragma once

#include "cdk/scaled_real.hpp"

namespace cdk {

struct AiryPair {
  double ai = 0.0;
  double ai_prime = 0.0;
};

struct ScaledAiryPair {
  ScaledReal ai;
  ScaledReal ai_prime;
};

// Ai(s), Ai'(s).  Certified accuracy window s in [-50, 200]; absolute error
// <= 1e-12 on [-20, 30].  Values underflow plain doubles near s ~ 107; use
// airy_scaled past there.  Throws DomainError outside the window.
AiryPair airy(double s);

// Same values carried as mantissa + binary exponent, usable over the whole
// window (in particular s > 30 where exp(-(2/3)s^{3/2}) underflows).
ScaledAiryPair airy_scaled(double s);

// Airy kernel (Ai(s)Ai'(t) - Ai'(s)Ai(t))/(s-t), with the diagonal handled
// through Ai'(m)^2 - m*Ai(m)^2 at the midpoint plus an even Taylor
// correction for |s-t| < 1e-4.
double airy_kernel(double s, double t);
ScaledReal airy_kernel_scaled(double s, double t);

// Leading decay of the Airy kernel for s,t >= 1:
// (4pi)^{-1} (st)^{-1/4} (sqrt(s)+sqrt(t))^{-1} exp(-(2/3)(s^{3/2}+t^{3/2})).
ScaledReal airy_kernel_tail(double s, double t);

// sin(pi(s-t))/(pi(s-t)) with a Taylor branch near the diagonal.
double sine_kernel(double s, double t);

namespace airy_detail {
// Individual evaluation branches, exposed so tests can check their overlap.
AiryPair maclaurin(double s);          // |s| <= ~5.5
AiryPair ode_fill(double s);           // 4 <= |s| <= 9.5
AiryPair asymptotic_neg(double s);     // s <= -8
ScaledAiryPair asymptotic_pos(double s);  // s >= 8
}  // namespace airy_detail

}  // namespace cdk

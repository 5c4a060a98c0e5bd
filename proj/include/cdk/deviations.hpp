#pragma once

#include <string>

#include "cdk/equilibrium.hpp"
#include "cdk/scaled_real.hpp"

namespace cdk {

enum class DeviationFormula { TwCdf, TwTail, Moderate, Large, OracleGap };

struct DeviationResult {
  double s_or_x = 0.0;
  ScaledReal value;
  DeviationFormula formula = DeviationFormula::Moderate;
  double error_scale = 0.0;
  bool regime_valid = true;
};

// Tracy-Widom (beta = 2) distribution function as the Fredholm determinant
// of the Airy kernel on (s, infinity), via Nystrom quadrature with the
// algebraic map r = s + 10 (1+u)/(1-u).  Computes at m nodes and verifies
// against 2m nodes; throws NoConvergence if they differ by more than 1e-8.
double tw2_cdf(double s, int m);

// 1 - tw2_cdf(s) evaluated without the catastrophic cancellation the plain
// determinant suffers once the tail drops below machine epsilon.
double tw2_upper_tail(double s, int m);

// Right-tail asymptote (1/16 pi) s^{-3/2} exp(-(4/3) s^{3/2}) in scaled form.
ScaledReal tw2_tail(double s);

// Moderate-deviation tail of the rescaled largest eigenvalue: the tw2_tail
// leading term with the structural error scale s^{5/2}/N^{2/3} + s^{-3/2};
// regime_valid flags s <= 0.5 N^{4/15} (and the rescaled point staying
// inside the interval).
DeviationResult moderate_deviation(const EquilibriumData& eq, int n, double s);

// Large-deviation tail at a fixed rescaled location x > 1:
// exp(-N eta(x)) / (4 pi N (x^2-1) eta'(x)), error scale 1/(N (x-1)^{3/2}).
DeviationResult large_deviation(const EquilibriumData& eq, int n, double x);

const char* deviation_formula_name(DeviationFormula f);

}  // namespace cdk

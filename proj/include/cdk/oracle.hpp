#pragma once

#include <memory>
#include <vector>

#include "cdk/potential.hpp"
#include "cdk/scaled_real.hpp"

namespace cdk {

// Orthonormal three-term recurrence for the weight exp(-N V) on J:
// the monic orthogonal polynomials satisfy p_{j+1} = (x - alpha_j) p_j -
// beta_j p_{j-1}, with beta_0 the total mass of the weight.  Built by the
// Stieltjes procedure on a composite Gauss-Legendre grid over the interval
// where the weight is non-negligible.
struct RecurrenceTable {
  int n_weight = 0;
  std::vector<double> alphas;  // size n_max+1
  std::vector<double> betas;   // size n_max+1; betas[0] = total mass
  double trunc_lo = 0.0;
  double trunc_hi = 0.0;
  int grid_size = 0;
  std::shared_ptr<const Potential> pot;

  int n_max() const { return static_cast<int>(alphas.size()) - 1; }
};

// Stieltjes procedure; validates itself by rebuilding on a doubled grid and
// throws GridTooCoarse if any coefficient moves by more than 1e-10 relative.
RecurrenceTable build_recurrence(const Potential& pot, int n_weight, int n_max);

// Single-resolution build, exposed for stability experiments.
RecurrenceTable build_recurrence_raw(const Potential& pot, int n_weight,
                                     int n_max, int grid_size);

// Weighted Christoffel-Darboux kernel
//   K(x,y) = sum_{j<N} phi_j(x) phi_j(y),  phi_j = p_j e^{-N V / 2},
// evaluated through the weighted recurrence in scaled arithmetic.  The
// diagonal uses the sum form, off-diagonal points the CD quotient with the
// sqrt(beta_N) prefactor.
ScaledReal cd_kernel_exact(const RecurrenceTable& tab, double x, double y);

// k-point correlation det[K(x_i, x_j)] for k <= 6, via a scaled LU.
double correlation(const RecurrenceTable& tab, const std::vector<double>& points);

struct GapResult {
  double value = 1.0;   // det(1 - K restricted to the interval)
  int m = 0;            // requested quadrature size
  double self_check = 0.0;  // |value_m - value_2m|
};

// Fredholm determinant of 1 - K on L^2(lo, hi) by the Nystrom method with m
// Gauss-Legendre nodes, verified against 2m nodes.  Unbounded ends are
// clamped to the weight-truncation interval where the kernel is negligible.
GapResult gap_probability(const RecurrenceTable& tab, double lo, double hi, int m);

// Diagnostic helpers used by tests and the CLI.
double oracle_trace(const RecurrenceTable& tab);

// First-order Fredholm tail: integral of K(x,x) over (lo, trunc_hi) in
// scaled arithmetic.  Equals 1 - gap_probability up to a relative error of
// the order of the tail itself, and stays representable when that
// probability underflows doubles.
ScaledReal oracle_upper_tail(const RecurrenceTable& tab, double lo);
// Pre-computed endpoint values of the weighted recurrence at a point.
struct PhiEndpoints {
  ScaledReal phi_nm1;  // phi_{N-1}
  ScaledReal phi_n;    // phi_N
  ScaledReal diag;     // sum_{j<N} phi_j^2
};
PhiEndpoints phi_endpoints(const RecurrenceTable& tab, double x);

}  // namespace cdk

#pragma once

#include <memory>
#include <string>

#include "cdk/edge_map.hpp"
#include "cdk/equilibrium.hpp"
#include "cdk/scaled_real.hpp"

namespace cdk {

enum class Regime { Bulk, EdgePlus, EdgeMinus, Void };

const char* regime_name(Regime r);

struct KVector {
  ScaledReal k1;
  ScaledReal k2;
  Regime regime = Regime::Bulk;
};

struct KernelValue {
  ScaledReal value;
  Regime regime = Regime::Bulk;
  std::string branch;
  double correction_scale = 0.0;  // structural magnitude of the error term
};

struct BulkRescaled {
  double approx = 0.0;       // sin(pi(s-t))/(pi(s-t))
  double error_scale = 0.0;  // (1+|s|+|t|)/N
  double u = 0.0;            // x + s/(N rho(x))
  double v = 0.0;            // x + t/(N rho(x))
};

struct EdgeRescaled {
  ScaledReal approx;  // Airy kernel at (s,t)
  int case_id = 1;    // 1: both <= 2;  2: both >= 1;  3: mixed
  double error_scale = 0.0;
};

// Leading-order descriptions of the rescaled Christoffel-Darboux kernel
//   (b-a)/2 * K_N(lambda(x), lambda(y)),
// assembled from the equilibrium data and the two edge maps.  All values are
// carried as ScaledReal; the void and outer-edge regimes underflow doubles
// already for moderate N.
class AsymptoticKernel {
 public:
  explicit AsymptoticKernel(std::shared_ptr<const EquilibriumData> eq);

  // Four-branch regime split at distance delta from the endpoints.
  Regime classify(double delta, double x) const;

  // The 2-vector whose antisymmetric quotient is the kernel's leading term:
  // void and bulk branches are trigonometric/exponential in the phase
  // integrals, the edge branches are Airy pairs in the edge coordinate.
  KVector k_vector(int n, double delta, double x) const;

  // Kernel leading term with both arguments in one regime; divided
  // differences switch to derivative form near the diagonal.  Throws
  // MixedRegime when x and y classify differently.
  KernelValue leading_kernel(int n, double delta, double x, double y) const;

  // Global fallback (k1(x)k2(y)-k2(x)k1(y))/(x-y); regimes may differ.
  ScaledReal k_quotient(int n, double delta, double x, double y) const;

  // One-point density: bulk form with cosine correction, void exponential
  // form, diagonal Airy form near the edges; thresholds scale with N.
  KernelValue density(int n, double x) const;

  BulkRescaled bulk_rescaled(int n, double x, double s, double t) const;
  EdgeRescaled edge_rescaled(int n, double s, double t, double q = -10.0,
                             double p = 1.0) const;

  double delta0() const { return delta0_; }
  const EdgeMap& edge(int side) const { return side > 0 ? *em_plus_ : *em_minus_; }
  const EquilibriumData& equilibrium() const { return *eq_; }

 private:
  KernelValue leading_void(int n, double x, double y) const;
  KernelValue leading_bulk(int n, double x, double y) const;
  KernelValue leading_edge(int n, int side, double x, double y) const;

  std::shared_ptr<const EquilibriumData> eq_;
  std::unique_ptr<EdgeMap> em_plus_;
  std::unique_ptr<EdgeMap> em_minus_;
  double delta0_ = 0.0;
};

}  // namespace cdk

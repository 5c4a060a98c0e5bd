#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace cdk {

// Closed interval with possibly infinite endpoints.
struct ExtendedInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool strictly_inside(double x) const { return x > lo && x < hi; }
};

inline ExtendedInterval whole_line() { return ExtendedInterval{}; }

// A scalar field together with its first two derivatives; used for
// perturbations V = Q + eps*f and for generic external fields.
struct Field {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> ddf;
  std::string label;
};

Field sin_field(double scale = 1.0);
Field cos_field(double scale = 1.0);

// External field V on an interval J.  Immutable after construction; the
// evaluators are pure and safe for concurrent use.  Construction runs a
// convexity/confinement check on a 2048-point Chebyshev-distributed grid
// (the full interval when J is compact, a window around the minimizer of V
// otherwise).
class Potential {
 public:
  double value(double x) const;
  double deriv(double x) const;
  double second(double x) const;
  double operator()(double x) const { return value(x); }

  const ExtendedInterval& interval() const;
  const std::string& label() const;
  bool is_polynomial() const;
  // Empty for generic potentials; ascending powers otherwise.
  const std::vector<double>& coeffs() const;
  // Best effort: true when the field is known to be even (polynomials only).
  bool is_even() const;

 private:
  friend Potential build_polynomial_potential(std::vector<double>,
                                              ExtendedInterval, std::string);
  friend Potential build_generic_potential(Field, ExtendedInterval, std::string);
  friend Potential perturb(const Potential&, const Field&, double);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// coeffs in ascending powers.  Unbounded intervals require degree >= 2 and a
// positive leading coefficient.  Throws ConvexityViolation / NonConfining.
Potential build_polynomial_potential(std::vector<double> coeffs,
                                     ExtendedInterval interval,
                                     std::string label = "");

// Generic fields must supply the second derivative explicitly and live on a
// compact interval.
Potential build_generic_potential(Field field, ExtendedInterval interval,
                                  std::string label = "");

// V = base + eps*f.  Generic perturbations with eps != 0 require a compact
// interval; the perturbed field is re-checked for convexity.
Potential perturb(const Potential& base, const Field& f, double eps);

// W = V o lambda with lambda(s) = ((b-a)/2) s + (b+a)/2; the map taking
// [-1,1] onto [a,b].
class RescaledPotential {
 public:
  RescaledPotential(Potential pot, double a, double b);

  double lambda(double s) const { return half_ * s + mid_; }
  double lambda_inv(double x) const { return (x - mid_) / half_; }
  double lambda_prime() const { return half_; }

  double w(double s) const { return pot_.value(lambda(s)); }
  double dw(double s) const { return half_ * pot_.deriv(lambda(s)); }
  double ddw(double s) const { return half_ * half_ * pot_.second(lambda(s)); }

  // lambda^{-1}(J)
  ExtendedInterval domain() const;
  const Potential& potential() const { return pot_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  Potential pot_;
  double a_, b_, mid_, half_;
};

inline RescaledPotential rescale(const Potential& pot, double a, double b) {
  return RescaledPotential(pot, a, b);
}

}  // namespace cdk

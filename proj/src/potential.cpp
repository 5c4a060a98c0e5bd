#include "cdk/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdk/errors.hpp"

namespace cdk {

namespace {

std::vector<double> differentiate(const std::vector<double>& c) {
  std::vector<double> d;
  for (size_t k = 1; k < c.size(); ++k) d.push_back(k * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

int poly_degree(const std::vector<double>& c) {
  for (size_t k = c.size(); k-- > 0;)
    if (c[k] != 0.0) return static_cast<int>(k);
  return -1;
}

}  // namespace

struct Potential::Impl {
  ExtendedInterval interval;
  std::string label;
  bool polynomial = false;
  std::vector<double> coeffs;  // ascending; empty for generic
  std::vector<double> dcoeffs;
  std::vector<double> ddcoeffs;
  Field field;  // generic evaluators (also used for perturbed fields)
};

double Potential::value(double x) const {
  const Impl& i = *impl_;
  return i.polynomial ? horner(i.coeffs, x) : i.field.f(x);
}
double Potential::deriv(double x) const {
  const Impl& i = *impl_;
  return i.polynomial ? horner(i.dcoeffs, x) : i.field.df(x);
}
double Potential::second(double x) const {
  const Impl& i = *impl_;
  return i.polynomial ? horner(i.ddcoeffs, x) : i.field.ddf(x);
}
const ExtendedInterval& Potential::interval() const { return impl_->interval; }
const std::string& Potential::label() const { return impl_->label; }
bool Potential::is_polynomial() const { return impl_->polynomial; }
const std::vector<double>& Potential::coeffs() const { return impl_->coeffs; }

bool Potential::is_even() const {
  if (!impl_->polynomial) return false;
  for (size_t k = 1; k < impl_->coeffs.size(); k += 2)
    if (impl_->coeffs[k] != 0.0) return false;
  return true;
}

namespace {

// Window for the validation grid: the interval itself when compact,
// otherwise +-5 around a coarse minimizer of V.  The scan bounds expand
// until V' has the confining sign (or a cap is reached), so shifted
// potentials with a distant minimum are still windowed correctly.
std::pair<double, double> check_window(const Potential& p) {
  const ExtendedInterval& J = p.interval();
  if (J.bounded()) return {J.lo, J.hi};
  double scan_lo = std::max(J.lo, -20.0);
  double scan_hi = std::min(J.hi, 20.0);
  while (!std::isfinite(J.hi) && p.deriv(scan_hi) <= 0.0 && scan_hi < 1e6)
    scan_hi *= 2.0;
  while (!std::isfinite(J.lo) && p.deriv(scan_lo) >= 0.0 && scan_lo > -1e6)
    scan_lo *= 2.0;
  double best_x = 0.5 * (scan_lo + scan_hi), best_v = p.value(best_x);
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    const double x = scan_lo + (scan_hi - scan_lo) * i / (n - 1.0);
    const double v = p.value(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return {std::max(J.lo, best_x - 5.0), std::min(J.hi, best_x + 5.0)};
}

void validate(const Potential& p) {
  const auto [lo, hi] = check_window(p);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  const int n = 2048;
  double prev_dv = 0.0;
  bool have_prev = false;
  for (int j = n; j-- > 0;) {  // ascending in x
    const double x = mid + half * std::cos(std::numbers::pi * (j + 0.5) / n);
    if (p.second(x) <= 0.0)
      throw ConvexityViolation("potential '" + p.label() +
                               "': V'' <= 0 on validation grid near x=" +
                               std::to_string(x));
    const double dv = p.deriv(x);
    if (have_prev && dv <= prev_dv)
      throw ConvexityViolation("potential '" + p.label() +
                               "': V' not strictly increasing near x=" +
                               std::to_string(x));
    prev_dv = dv;
    have_prev = true;
  }
  const ExtendedInterval& J = p.interval();
  if (!std::isfinite(J.hi) && p.deriv(hi) <= 0.0)
    throw NonConfining("potential '" + p.label() + "': V' <= 0 at right scan end");
  if (!std::isfinite(J.lo) && p.deriv(lo) >= 0.0)
    throw NonConfining("potential '" + p.label() + "': V' >= 0 at left scan end");
}

}  // namespace

Potential build_polynomial_potential(std::vector<double> coeffs,
                                     ExtendedInterval interval,
                                     std::string label) {
  if (interval.lo >= interval.hi)
    throw DomainError("potential interval: lo >= hi");
  auto impl = std::make_shared<Potential::Impl>();
  impl->interval = interval;
  impl->polynomial = true;
  impl->coeffs = std::move(coeffs);
  impl->dcoeffs = differentiate(impl->coeffs);
  impl->ddcoeffs = differentiate(impl->dcoeffs);
  impl->label = label.empty() ? "poly" : std::move(label);
  Potential p;
  p.impl_ = std::move(impl);
  validate(p);
  // Backstop structural checks; the grid pass normally fires first.
  const int deg = poly_degree(p.coeffs());
  if (!interval.bounded() && (deg < 2 || p.coeffs()[deg] <= 0.0))
    throw NonConfining(
        "polynomial potential on an unbounded interval needs degree >= 2 "
        "with a positive leading coefficient");
  return p;
}

Potential build_generic_potential(Field field, ExtendedInterval interval,
                                  std::string label) {
  if (interval.lo >= interval.hi)
    throw DomainError("potential interval: lo >= hi");
  if (!interval.bounded())
    throw DomainError("generic potentials require a compact interval");
  if (!field.f || !field.df || !field.ddf)
    throw DomainError("generic potentials must supply V, V' and V''");
  auto impl = std::make_shared<Potential::Impl>();
  impl->interval = interval;
  impl->field = std::move(field);
  impl->label = label.empty() ? "generic" : std::move(label);
  Potential p;
  p.impl_ = std::move(impl);
  validate(p);
  return p;
}

Potential perturb(const Potential& base, const Field& f, double eps) {
  if (eps == 0.0) return base;
  if (!base.interval().bounded())
    throw DomainError("perturbations require a compact interval");
  if (!f.f || !f.df || !f.ddf)
    throw DomainError("perturbation field must supply f, f' and f''");
  auto impl = std::make_shared<Potential::Impl>();
  impl->interval = base.interval();
  Potential b = base;  // keep the base alive inside the closures
  Field pf = f;
  impl->field.f = [b, pf, eps](double x) { return b.value(x) + eps * pf.f(x); };
  impl->field.df = [b, pf, eps](double x) { return b.deriv(x) + eps * pf.df(x); };
  impl->field.ddf = [b, pf, eps](double x) { return b.second(x) + eps * pf.ddf(x); };
  impl->label = base.label() + "+" + std::to_string(eps) + "*" +
                (f.label.empty() ? "f" : f.label);
  Potential p;
  p.impl_ = std::move(impl);
  validate(p);
  return p;
}

Field sin_field(double scale) {
  Field f;
  f.f = [scale](double x) { return scale * std::sin(x); };
  f.df = [scale](double x) { return scale * std::cos(x); };
  f.ddf = [scale](double x) { return -scale * std::sin(x); };
  f.label = scale == 1.0 ? "sin" : std::to_string(scale) + "*sin";
  return f;
}

Field cos_field(double scale) {
  Field f;
  f.f = [scale](double x) { return scale * std::cos(x); };
  f.df = [scale](double x) { return -scale * std::sin(x); };
  f.ddf = [scale](double x) { return -scale * std::cos(x); };
  f.label = scale == 1.0 ? "cos" : std::to_string(scale) + "*cos";
  return f;
}

RescaledPotential::RescaledPotential(Potential pot, double a, double b)
    : pot_(std::move(pot)), a_(a), b_(b), mid_(0.5 * (a + b)), half_(0.5 * (b - a)) {
  if (!(a < b)) throw DomainError("rescale: requires a < b");
  if (!pot_.interval().contains(a) || !pot_.interval().contains(b))
    throw DomainError("rescale: [a,b] not contained in the potential interval");
}

ExtendedInterval RescaledPotential::domain() const {
  ExtendedInterval d;
  d.lo = std::isfinite(pot_.interval().lo) ? lambda_inv(pot_.interval().lo)
                                           : -std::numeric_limits<double>::infinity();
  d.hi = std::isfinite(pot_.interval().hi) ? lambda_inv(pot_.interval().hi)
                                           : std::numeric_limits<double>::infinity();
  return d;
}

}  // namespace cdk

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace cdk {

// A real number stored as mantissa * 2^log2_scale with mantissa in
// sign*[1,2) (or exactly 0).  Keeps quantities like exp(-N*eta) and the
// orthogonal-polynomial recurrence representable far beyond double range.
//
// Addition aligns the operands at the larger binary scale; summands more
// than 2^128 apart are dropped.  a-b and b-a are exact negations of each
// other, so antisymmetric kernel formulas stay exactly antisymmetric.
class ScaledReal {
 public:
  ScaledReal() = default;
  ScaledReal(double v) { assign(v); }  // NOLINT: implicit, mixes with doubles

  // exp(log_value) with a natural-log argument, valid for any |log_value|
  // representable in a double.
  static ScaledReal from_log(double log_value) {
    ScaledReal r;
    if (std::isinf(log_value) && log_value < 0) return r;
    const double e2 = log_value / kLn2;
    const double k = std::floor(e2);
    r.exp_ = static_cast<long long>(k);
    r.man_ = std::exp((e2 - k) * kLn2);
    r.renorm();
    return r;
  }

  static ScaledReal compose(double mantissa, long long log2_scale) {
    ScaledReal r;
    r.man_ = mantissa;
    r.exp_ = log2_scale;
    r.renorm();
    return r;
  }

  double mantissa() const { return man_; }
  long long log2_scale() const { return exp_; }
  bool zero() const { return man_ == 0.0; }
  int sign() const { return man_ > 0.0 ? 1 : (man_ < 0.0 ? -1 : 0); }

  // Saturates to 0 / +-inf outside double range.
  double to_double() const {
    if (man_ == 0.0) return 0.0;
    long long e = exp_;
    if (e > 2000) e = 2000;
    if (e < -2000) e = -2000;
    return std::ldexp(man_, static_cast<int>(e));
  }

  // Natural log of |value|; -inf for 0.
  double log_abs() const {
    if (man_ == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(man_)) + static_cast<double>(exp_) * kLn2;
  }

  ScaledReal operator-() const {
    ScaledReal r(*this);
    r.man_ = -r.man_;
    return r;
  }

  ScaledReal& operator*=(const ScaledReal& o) {
    man_ *= o.man_;
    exp_ += o.exp_;
    renorm();
    return *this;
  }

  ScaledReal& operator/=(const ScaledReal& o) {
    man_ /= o.man_;
    exp_ -= o.exp_;
    renorm();
    return *this;
  }

  ScaledReal& operator+=(const ScaledReal& o) {
    if (o.man_ == 0.0) return *this;
    if (man_ == 0.0) {
      *this = o;
      return *this;
    }
    const long long d = exp_ - o.exp_;
    if (d > 128) return *this;
    if (d < -128) {
      *this = o;
      return *this;
    }
    if (d >= 0) {
      man_ += std::ldexp(o.man_, static_cast<int>(-d));
    } else {
      man_ = o.man_ + std::ldexp(man_, static_cast<int>(d));
      exp_ = o.exp_;
    }
    renorm();
    return *this;
  }

  ScaledReal& operator-=(const ScaledReal& o) { return *this += (-o); }

  friend ScaledReal operator*(ScaledReal a, const ScaledReal& b) { return a *= b; }
  friend ScaledReal operator/(ScaledReal a, const ScaledReal& b) { return a /= b; }
  friend ScaledReal operator+(ScaledReal a, const ScaledReal& b) { return a += b; }
  friend ScaledReal operator-(ScaledReal a, const ScaledReal& b) { return a -= b; }

  friend bool abs_less(const ScaledReal& a, const ScaledReal& b) {
    if (a.man_ == 0.0) return b.man_ != 0.0;
    if (b.man_ == 0.0) return false;
    if (a.exp_ != b.exp_) return a.exp_ < b.exp_;
    return std::fabs(a.man_) < std::fabs(b.man_);
  }

 private:
  static constexpr double kLn2 = std::numbers::ln2;

  void assign(double v) {
    man_ = v;
    exp_ = 0;
    renorm();
  }

  void renorm() {
    if (man_ == 0.0) {
      exp_ = 0;
      return;
    }
    if (!std::isfinite(man_)) return;
    int k = 0;
    man_ = std::frexp(man_, &k);  // |man_| in [0.5,1)
    man_ *= 2.0;
    exp_ += k - 1;
  }

  double man_ = 0.0;
  long long exp_ = 0;
};

}  // namespace cdk

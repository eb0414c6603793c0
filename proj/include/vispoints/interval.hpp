#pragma once

// Certified real intervals over MPFR with outward (directed) rounding.

#include <string>

#include <mpfr.h>

#include "vispoints/arith_core.hpp"

namespace vispoints {

/// Closed interval [lower, upper] guaranteed to contain some exact real.
class IntervalReal {
 public:
  explicit IntervalReal(mpfr_prec_t precision = 128);
  IntervalReal(const Integer& value, mpfr_prec_t precision);
  IntervalReal(const Rational& value, mpfr_prec_t precision);
  IntervalReal(const Rational& lower, const Rational& upper, mpfr_prec_t precision);
  ~IntervalReal();

  IntervalReal(const IntervalReal& other);
  IntervalReal(IntervalReal&& other) noexcept;
  IntervalReal& operator=(const IntervalReal& other);
  IntervalReal& operator=(IntervalReal&& other) noexcept;

  static IntervalReal exact_zero(mpfr_prec_t precision) { return IntervalReal(precision); }
  static IntervalReal pi(mpfr_prec_t precision);
  /// Enclosure of ln(n), n >= 1.
  static IntervalReal log(const Integer& n, mpfr_prec_t precision);

  mpfr_prec_t precision() const noexcept { return precision_; }
  /// Outward-rounded copy at another precision.
  IntervalReal with_precision(mpfr_prec_t precision) const;
  mpfr_srcptr lower() const noexcept { return lo_; }
  mpfr_srcptr upper() const noexcept { return hi_; }

  /// upper - lower, rounded up.
  double width() const;
  /// Same, as an upper bound in an interval of its own precision.
  IntervalReal width_interval() const;

  bool contains(const Rational& x) const;
  bool contains(const IntervalReal& inner) const;
  bool overlaps(const IntervalReal& other) const;
  bool contains_zero() const;
  /// -1 or +1 when zero is excluded, 0 otherwise.
  int certain_sign() const;
  bool certainly_less(const Rational& x) const;
  bool certainly_less(const IntervalReal& other) const;
  bool certainly_greater(const Rational& x) const;
  /// |x| <= bound for every x in the interval.
  bool magnitude_at_most(const Rational& bound) const;

  double lower_double() const;  // rounded down
  double upper_double() const;  // rounded up

  /// Midpoint as a decimal with the given significant digits.
  std::string midpoint_string(int significant_digits = 12) const;
  /// Lower bound rounded down / upper bound rounded up to a decimal string.
  std::string lower_string(int significant_digits = 17) const;
  std::string upper_string(int significant_digits = 17) const;

  IntervalReal& operator+=(const IntervalReal& rhs);
  IntervalReal& operator-=(const IntervalReal& rhs);
  IntervalReal& operator*=(const IntervalReal& rhs);
  /// Throws PreconditionError when rhs contains zero.
  IntervalReal& operator/=(const IntervalReal& rhs);

  IntervalReal operator-() const;
  IntervalReal pow(unsigned long exponent) const;

  friend IntervalReal operator+(IntervalReal a, const IntervalReal& b) { return a += b; }
  friend IntervalReal operator-(IntervalReal a, const IntervalReal& b) { return a -= b; }
  friend IntervalReal operator*(IntervalReal a, const IntervalReal& b) { return a *= b; }
  friend IntervalReal operator/(IntervalReal a, const IntervalReal& b) { return a /= b; }

 private:
  mpfr_prec_t precision_;
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace vispoints

#pragma once

// Dense univariate polynomials over Q, and truncated power series in u whose
// coefficients are such polynomials (used to expand generating functions in
// the umbral variable X).

#include <cstddef>
#include <vector>

#include "vispoints/arith_core.hpp"

namespace vispoints {

class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients);
  static RationalPolynomial constant(const Rational& c);
  /// a*T + b
  static RationalPolynomial linear(const Rational& a, const Rational& b);

  /// Highest index with a nonzero coefficient, or -1 for the zero polynomial.
  int degree() const noexcept;
  bool is_zero() const noexcept { return degree() < 0; }
  /// Coefficient of T^i (zero beyond the stored range).
  Rational coefficient(std::size_t i) const;
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

  RationalPolynomial& operator+=(const RationalPolynomial& rhs);
  RationalPolynomial& operator-=(const RationalPolynomial& rhs);
  RationalPolynomial& operator*=(const RationalPolynomial& rhs);
  RationalPolynomial& operator*=(const Rational& scalar);
  RationalPolynomial pow(unsigned exponent) const;

  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(RationalPolynomial a, const RationalPolynomial& b) { return a *= b; }
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& s) { return a *= s; }
  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b);

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// sum_{n < order} a_n(X) u^n, truncated at u^order.
class PolySeries {
 public:
  explicit PolySeries(std::size_t order) : terms_(order) {}

  std::size_t order() const noexcept { return terms_.size(); }
  RationalPolynomial& operator[](std::size_t n) { return terms_.at(n); }
  const RationalPolynomial& operator[](std::size_t n) const { return terms_.at(n); }

  PolySeries& operator+=(const PolySeries& rhs);
  PolySeries& operator-=(const PolySeries& rhs);
  PolySeries& operator*=(const Rational& scalar);
  PolySeries operator*(const PolySeries& rhs) const;

  PolySeries derivative() const;
  /// Antiderivative with zero constant term.
  PolySeries integral() const;
  /// Multiplicative inverse; requires a_0 == 1.
  PolySeries inverse() const;
  /// log of a series with a_0 == 1, via integral(A' / A).
  PolySeries log() const;
  /// exp of a series with a_0 == 0, via E' = A' E.
  PolySeries exp() const;
  /// Divides by u; requires a_0 == 0. The result has order() - 1 terms.
  PolySeries divide_by_u() const;

 private:
  std::vector<RationalPolynomial> terms_;
};

}  // namespace vispoints

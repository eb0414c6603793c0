#include "vispoints/polynomial.hpp"

#include <algorithm>

#include "vispoints/errors.hpp"

namespace vispoints {

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients)
    : coeffs_(std::move(coefficients)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

RationalPolynomial RationalPolynomial::constant(const Rational& c) { return RationalPolynomial({c}); }

RationalPolynomial RationalPolynomial::linear(const Rational& a, const Rational& b) {
  return RationalPolynomial({b, a});
}

void RationalPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

int RationalPolynomial::degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

Rational RationalPolynomial::coefficient(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const RationalPolynomial& rhs) {
  if (is_zero() || rhs.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rational> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& scalar) {
  for (auto& c : coeffs_) c *= scalar;
  trim();
  return *this;
}

RationalPolynomial RationalPolynomial::pow(unsigned exponent) const {
  RationalPolynomial out = constant(1);
  for (unsigned i = 0; i < exponent; ++i) out *= *this;
  return out;
}

bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) { return a.coeffs_ == b.coeffs_; }

PolySeries& PolySeries::operator+=(const PolySeries& rhs) {
  const std::size_t n = std::min(order(), rhs.order());
  terms_.resize(n);
  for (std::size_t i = 0; i < n; ++i) terms_[i] += rhs.terms_[i];
  return *this;
}

PolySeries& PolySeries::operator-=(const PolySeries& rhs) {
  const std::size_t n = std::min(order(), rhs.order());
  terms_.resize(n);
  for (std::size_t i = 0; i < n; ++i) terms_[i] -= rhs.terms_[i];
  return *this;
}

PolySeries& PolySeries::operator*=(const Rational& scalar) {
  for (auto& t : terms_) t *= scalar;
  return *this;
}

PolySeries PolySeries::operator*(const PolySeries& rhs) const {
  const std::size_t n = std::min(order(), rhs.order());
  PolySeries out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (terms_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < n; ++j) out.terms_[i + j] += terms_[i] * rhs.terms_[j];
  }
  return out;
}

PolySeries PolySeries::derivative() const {
  PolySeries out(order());
  for (std::size_t n = 1; n < order(); ++n) out.terms_[n - 1] = terms_[n] * Rational(static_cast<long>(n));
  return out;
}

PolySeries PolySeries::integral() const {
  PolySeries out(order());
  for (std::size_t n = 0; n + 1 < order(); ++n) {
    out.terms_[n + 1] = terms_[n] * Rational(1, static_cast<unsigned long>(n + 1));
  }
  return out;
}

PolySeries PolySeries::inverse() const {
  if (order() == 0 || !(terms_[0] == RationalPolynomial::constant(1))) {
    throw PreconditionError("series inverse needs constant term 1");
  }
  PolySeries out(order());
  out.terms_[0] = RationalPolynomial::constant(1);
  for (std::size_t n = 1; n < order(); ++n) {
    RationalPolynomial acc;
    for (std::size_t k = 1; k <= n; ++k) acc += terms_[k] * out.terms_[n - k];
    out.terms_[n] = acc * Rational(-1);
  }
  return out;
}

PolySeries PolySeries::log() const { return (derivative() * inverse()).integral(); }

PolySeries PolySeries::exp() const {
  if (order() == 0) return PolySeries(0);
  if (!terms_[0].is_zero()) throw PreconditionError("series exp needs constant term 0");
  // n e_n = sum_{k=1}^{n} k a_k e_{n-k}
  PolySeries out(order());
  out.terms_[0] = RationalPolynomial::constant(1);
  for (std::size_t n = 1; n < order(); ++n) {
    RationalPolynomial acc;
    for (std::size_t k = 1; k <= n; ++k) {
      if (terms_[k].is_zero()) continue;
      acc += terms_[k] * out.terms_[n - k] * Rational(static_cast<long>(k));
    }
    out.terms_[n] = acc * Rational(1, static_cast<unsigned long>(n));
  }
  return out;
}

PolySeries PolySeries::divide_by_u() const {
  if (order() == 0 || !terms_[0].is_zero()) throw PreconditionError("series not divisible by u");
  PolySeries out(order() - 1);
  for (std::size_t n = 1; n < order(); ++n) out.terms_[n - 1] = terms_[n];
  return out;
}

}  // namespace vispoints

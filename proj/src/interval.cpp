#include "vispoints/interval.hpp"

#include <algorithm>
#include <vector>

#include "vispoints/errors.hpp"

namespace vispoints {

namespace {

std::string format_mpfr(const char* fmt, int digits, mpfr_srcptr x) {
  const int n = mpfr_snprintf(nullptr, 0, fmt, digits, x);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  mpfr_snprintf(out.data(), out.size(), fmt, digits, x);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace

IntervalReal::IntervalReal(mpfr_prec_t precision) : precision_(precision) {
  mpfr_init2(lo_, precision_);
  mpfr_init2(hi_, precision_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

IntervalReal::IntervalReal(const Integer& value, mpfr_prec_t precision) : IntervalReal(precision) {
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

IntervalReal::IntervalReal(const Rational& value, mpfr_prec_t precision) : IntervalReal(precision) {
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

IntervalReal::IntervalReal(const Rational& lower, const Rational& upper, mpfr_prec_t precision)
    : IntervalReal(precision) {
  if (lower > upper) throw PreconditionError("interval lower bound above upper bound");
  mpfr_set_q(lo_, lower.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, upper.get_mpq_t(), MPFR_RNDU);
}

IntervalReal::~IntervalReal() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

IntervalReal::IntervalReal(const IntervalReal& other) : precision_(other.precision_) {
  mpfr_init2(lo_, precision_);
  mpfr_init2(hi_, precision_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

IntervalReal::IntervalReal(IntervalReal&& other) noexcept : IntervalReal(other.precision_) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

IntervalReal& IntervalReal::operator=(const IntervalReal& other) {
  if (this == &other) return *this;
  precision_ = other.precision_;
  mpfr_set_prec(lo_, precision_);
  mpfr_set_prec(hi_, precision_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

IntervalReal& IntervalReal::operator=(IntervalReal&& other) noexcept {
  std::swap(precision_, other.precision_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

IntervalReal IntervalReal::pi(mpfr_prec_t precision) {
  IntervalReal out(precision);
  mpfr_const_pi(out.lo_, MPFR_RNDD);
  mpfr_const_pi(out.hi_, MPFR_RNDU);
  return out;
}

IntervalReal IntervalReal::log(const Integer& n, mpfr_prec_t precision) {
  if (n < 1) throw PreconditionError("log needs n >= 1");
  IntervalReal arg(n, precision);
  IntervalReal out(precision);
  mpfr_log(out.lo_, arg.lo_, MPFR_RNDD);
  mpfr_log(out.hi_, arg.hi_, MPFR_RNDU);
  return out;
}

IntervalReal IntervalReal::with_precision(mpfr_prec_t precision) const {
  IntervalReal out(precision);
  mpfr_set(out.lo_, lo_, MPFR_RNDD);
  mpfr_set(out.hi_, hi_, MPFR_RNDU);
  return out;
}

double IntervalReal::width() const { return mpfr_get_d(width_interval().hi_, MPFR_RNDU); }

IntervalReal IntervalReal::width_interval() const {
  IntervalReal out(precision_);
  mpfr_sub(out.hi_, hi_, lo_, MPFR_RNDU);
  mpfr_sub(out.lo_, hi_, lo_, MPFR_RNDD);
  return out;
}

bool IntervalReal::contains(const Rational& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

bool IntervalReal::contains(const IntervalReal& inner) const {
  return mpfr_lessequal_p(lo_, inner.lo_) && mpfr_greaterequal_p(hi_, inner.hi_);
}

bool IntervalReal::overlaps(const IntervalReal& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

bool IntervalReal::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

int IntervalReal::certain_sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  return 0;
}

bool IntervalReal::certainly_less(const Rational& x) const { return mpfr_cmp_q(hi_, x.get_mpq_t()) < 0; }

bool IntervalReal::certainly_less(const IntervalReal& other) const { return mpfr_less_p(hi_, other.lo_); }

bool IntervalReal::certainly_greater(const Rational& x) const { return mpfr_cmp_q(lo_, x.get_mpq_t()) > 0; }

bool IntervalReal::magnitude_at_most(const Rational& bound) const {
  Rational neg = -bound;
  return mpfr_cmp_q(hi_, bound.get_mpq_t()) <= 0 && mpfr_cmp_q(lo_, neg.get_mpq_t()) >= 0;
}

double IntervalReal::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double IntervalReal::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

std::string IntervalReal::midpoint_string(int significant_digits) const {
  mpfr_t mid;
  mpfr_init2(mid, precision_ + 2);
  mpfr_add(mid, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
  std::string out = format_mpfr("%.*RNg", significant_digits, mid);
  mpfr_clear(mid);
  return out;
}

std::string IntervalReal::lower_string(int significant_digits) const {
  return format_mpfr("%.*RDg", significant_digits, lo_);
}

std::string IntervalReal::upper_string(int significant_digits) const {
  return format_mpfr("%.*RUg", significant_digits, hi_);
}

IntervalReal& IntervalReal::operator+=(const IntervalReal& rhs) {
  mpfr_add(lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, rhs.hi_, MPFR_RNDU);
  return *this;
}

IntervalReal& IntervalReal::operator-=(const IntervalReal& rhs) {
  // [a, b] - [c, d] = [a - d, b - c]; the temporary guards against rhs == *this.
  IntervalReal r = rhs;
  mpfr_sub(lo_, lo_, r.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, r.lo_, MPFR_RNDU);
  return *this;
}

IntervalReal& IntervalReal::operator*=(const IntervalReal& rhs) {
  const mpfr_prec_t p = precision_;
  mpfr_t cand_lo[4], cand_hi[4];
  mpfr_srcptr a[2] = {lo_, hi_};
  mpfr_srcptr b[2] = {rhs.lo_, rhs.hi_};
  for (int i = 0; i < 4; ++i) {
    mpfr_init2(cand_lo[i], p);
    mpfr_init2(cand_hi[i], p);
    mpfr_mul(cand_lo[i], a[i / 2], b[i % 2], MPFR_RNDD);
    mpfr_mul(cand_hi[i], a[i / 2], b[i % 2], MPFR_RNDU);
  }
  mpfr_t new_lo, new_hi;
  mpfr_init2(new_lo, p);
  mpfr_init2(new_hi, p);
  mpfr_set(new_lo, cand_lo[0], MPFR_RNDD);
  mpfr_set(new_hi, cand_hi[0], MPFR_RNDU);
  for (int i = 1; i < 4; ++i) {
    mpfr_min(new_lo, new_lo, cand_lo[i], MPFR_RNDD);
    mpfr_max(new_hi, new_hi, cand_hi[i], MPFR_RNDU);
  }
  mpfr_swap(lo_, new_lo);
  mpfr_swap(hi_, new_hi);
  mpfr_clear(new_lo);
  mpfr_clear(new_hi);
  for (int i = 0; i < 4; ++i) {
    mpfr_clear(cand_lo[i]);
    mpfr_clear(cand_hi[i]);
  }
  return *this;
}

IntervalReal& IntervalReal::operator/=(const IntervalReal& rhs) {
  if (rhs.contains_zero()) throw PreconditionError("interval division by an interval containing zero");
  IntervalReal recip(rhs.precision_);
  mpfr_ui_div(recip.lo_, 1, rhs.hi_, MPFR_RNDD);
  mpfr_ui_div(recip.hi_, 1, rhs.lo_, MPFR_RNDU);
  return *this *= recip;
}

IntervalReal IntervalReal::operator-() const {
  IntervalReal out(precision_);
  mpfr_neg(out.lo_, hi_, MPFR_RNDD);
  mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  return out;
}

IntervalReal IntervalReal::pow(unsigned long exponent) const {
  IntervalReal out(Integer(1), precision_);
  IntervalReal base = *this;
  while (exponent > 0) {
    if (exponent & 1) out *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return out;
}

}  // namespace vispoints

#pragma once

// Main term 2^m r^m / zeta(m), the error term E_m(r) = V_m(r) - main term as
// certified intervals, exact fractional-part Moebius sums, and the
// certificate that the witness family keeps sum mu(d)/d^m {r/d} below -1/20.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vispoints/arith_core.hpp"
#include "vispoints/interval.hpp"

namespace vispoints {

/// m * ceil(log2(r + 2)) + 64.
mpfr_prec_t default_precision(unsigned m, std::uint64_t r);

/// Euler-Maclaurin parameters for zeta(s): partial sum over n < cutoff, then
/// `terms` Bernoulli corrections at the cutoff. The remainder is enclosed by
/// the magnitude of the last correction.
struct ZetaTail {
  std::uint64_t cutoff = 0;
  unsigned terms = 0;
};

/// Smallest-effort parameters whose remainder is below 2^-(bits + 16).
ZetaTail choose_zeta_tail(unsigned s, mpfr_prec_t bits, std::uint64_t min_cutoff = 0);

IntervalReal zeta_interval(unsigned s, mpfr_prec_t bits);
IntervalReal zeta_interval(unsigned s, mpfr_prec_t bits, const ZetaTail& tail);

/// Coarse enclosure from the integral test alone:
/// sum_{n<N} n^-s + [N^{1-s}/(s-1), N^{1-s}/(s-1) + N^-s].
IntervalReal zeta_integral_enclosure(unsigned s, std::uint64_t cutoff, mpfr_prec_t bits);

/// H_n - ln n.
IntervalReal harmonic_excess(std::uint64_t n, mpfr_prec_t bits);

/// gamma from H_n - ln n - 1/(2n) plus Bernoulli corrections in 1/n^2;
/// `n == 0` picks n from the precision.
IntervalReal euler_gamma_interval(mpfr_prec_t bits, std::uint64_t n = 0);

/// 2^m r^m / zeta(m). bits == 0 uses default_precision; precision is raised
/// until the width is below 1e-6 r^{m-1}. r == 0 gives exactly [0, 0].
IntervalReal main_term(unsigned m, std::uint64_t r, mpfr_prec_t bits = 0);

/// Main term reusing a zeta(m) enclosure (for scans).
IntervalReal main_term(unsigned m, std::uint64_t r, const IntervalReal& zeta_m);

/// E_m(r) with V_m(r) from the umbral path.
IntervalReal error_term(unsigned m, std::uint64_t r);

/// 1e-6 * r^{m-1}, the width every reported E_m(r) must stay under.
Rational error_width_target(unsigned m, std::uint64_t r);

struct FractionalMobiusSum {
  unsigned m = 0;
  unsigned k = 0;
  std::uint64_t r = 0;
  Rational value;  // sum_{d <= r} mu(d)/d^m {r/d}^k
};

/// Exact rational by balanced pairwise summation of the terms.
FractionalMobiusSum fractional_mobius_sum(unsigned m, unsigned k, std::uint64_t r);
FractionalMobiusSum fractional_mobius_sum(unsigned m, unsigned k, std::uint64_t r, const MobiusTable& mu);

/// sum_{d <= r} d^{-m}, exact.
Rational generalized_harmonic(unsigned m, std::uint64_t r);

struct WitnessBoundTerm {
  std::uint64_t d = 0;
  Rational value;  // mu(d)/d^m * 1/2
};

struct WitnessBoundCertificate {
  unsigned m = 0;
  std::uint64_t cutoff = 0;
  std::vector<WitnessBoundTerm> terms;  // even squarefree 2 < d <= cutoff
  Rational head;        // -1/2^{m+1} + head_extra
  Rational head_extra;  // sum of terms
  Rational tail_bound;  // cutoff^{1-m} / (m-1)
  Rational upper;       // head + tail_bound
  bool passes = false;  // upper < -1/20
};

/// Bounds sum_{d <= r} mu(d)/d^m {r/d} for every odd r divisible by all odd
/// primes <= cutoff. Odd squarefree d <= cutoff divide r, even squarefree
/// d = 2e have {r/d} = 1/2, and the rest is bounded by the integral tail.
WitnessBoundCertificate certify_witness_bound(unsigned m, std::uint64_t cutoff = 100);

std::string to_json(const WitnessBoundCertificate& cert);
std::string rational_string(const Rational& q);  // "p/q"

struct NegativityReport {
  unsigned m = 0;
  std::uint64_t r_max = 0;
  bool zeta_condition = false;  // zeta(m) - 1 - 2^-m < 2^-(m+1)
  std::uint64_t checked = 0;    // odd r in [3, r_max]
  std::uint64_t exact_fallbacks = 0;
  std::optional<std::uint64_t> counterexample;

  bool passed() const noexcept { return zeta_condition && !counterexample; }
};

/// ζ(m) − 1 − 2^{−m} < 2^{−(m+1)} by interval evaluation.
bool zeta_tail_condition(unsigned m, mpfr_prec_t bits = 128);

/// Interval check plus sign of sum mu(d)/d^m {r/d} for every odd r in
/// [3, r_max]: certified double kernel first, exact rational when the
/// enclosure straddles zero.
NegativityReport large_m_negativity_check(unsigned m, std::uint64_t r_max, unsigned threads = 1);

/// sum_{d <= r} mu(d)/d^i, exact.
Rational mobius_zeta_partial(unsigned i, std::uint64_t r);

struct WitnessRow {
  unsigned m = 0;
  std::uint64_t r = 0;
  std::uint64_t k = 0;
  std::vector<std::uint64_t> primes;
  Rational s;  // fractional_mobius_sum(m, 1, r)
  std::string s_decimal;
  Integer count;  // V_m(r)
  IntervalReal error;
  IntervalReal normalized;  // E_m(r) / r^{m-1}
};

struct WitnessReport {
  std::vector<WitnessRow> rows;             // ascending r
  std::vector<std::uint64_t> skipped;       // r values over the cap
};

/// Rows for r = k * prod(primes) with k odd and coprime to every prime.
/// Throws PreconditionError for an even or non-coprime k, or a prime set that
/// is not a set of odd primes.
WitnessReport witness_scan(unsigned m, const std::vector<std::uint64_t>& primes,
                           const std::vector<std::uint64_t>& k_values, std::uint64_t r_cap,
                           unsigned threads = 1);

struct ErrorScanRow {
  std::uint64_t r = 0;
  Integer count;
  IntervalReal main;
  IntervalReal error;
  IntervalReal normalized;
};

std::vector<ErrorScanRow> error_scan(unsigned m, std::uint64_t r_from, std::uint64_t r_to,
                                     std::uint64_t step, unsigned threads = 1);

/// Header m,r,V,main_mid,E_mid,E_norm_lo,E_norm_hi.
void write_error_csv(std::ostream& out, unsigned m, const std::vector<ErrorScanRow>& rows);
void write_witness_csv(std::ostream& out, const WitnessReport& report);

}  // namespace vispoints

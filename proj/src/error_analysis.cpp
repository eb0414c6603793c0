#include "vispoints/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "vispoints/errors.hpp"
#include "vispoints/kernels.hpp"
#include "vispoints/parallel.hpp"
#include "vispoints/visibility.hpp"

namespace vispoints {

namespace {

Integer to_integer(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

Integer pow_u64(std::uint64_t base, unsigned long exp) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

Rational inverse_power(std::uint64_t base, unsigned long exp) {
  Rational out(Integer(1), pow_u64(base, exp));
  return out;
}

Rational dyadic(long exponent) {
  // 2^exponent, exponent may be negative
  Rational out(1);
  if (exponent >= 0) {
    mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<unsigned long>(exponent));
  } else {
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<unsigned long>(-exponent));
  }
  return out;
}

/// Bernoulli numbers shared across calls; grown on demand, returned by value
/// so concurrent growth never invalidates a caller's copy.
BernoulliSequence bernoulli_table(unsigned max_index) {
  static std::mutex mu;
  static BernoulliSequence table = bernoulli(64);
  std::lock_guard lock(mu);
  if (table.size() <= max_index) table = bernoulli(std::max<unsigned>(max_index, 2 * static_cast<unsigned>(table.size())));
  return table;
}

/// sum of num_i / den_i over [lo, hi), combined pairwise without reduction.
std::pair<Integer, Integer> pairwise_sum(const std::vector<std::pair<Integer, Integer>>& terms, std::size_t lo,
                                         std::size_t hi) {
  if (hi == lo) return {Integer(0), Integer(1)};
  if (hi - lo == 1) return terms[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  auto [an, ad] = pairwise_sum(terms, lo, mid);
  auto [bn, bd] = pairwise_sum(terms, mid, hi);
  if (ad == bd) return {an + bn, ad};
  return {an * bd + bn * ad, ad * bd};
}

Rational sum_terms(const std::vector<std::pair<Integer, Integer>>& terms) {
  auto [num, den] = pairwise_sum(terms, 0, terms.size());
  Rational out(num, den);
  out.canonicalize();
  return out;
}

/// Rising factorial s (s+1) ... (s+n-1).
Integer rising(unsigned s, unsigned n) {
  Integer out = 1;
  for (unsigned i = 0; i < n; ++i) out *= s + i;
  return out;
}

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

/// Euler-Maclaurin remainder for zeta(s) at (N, M): |B_2M|/(2M)! (s)_{2M-1} N^{-(s+2M-1)}.
Rational zeta_remainder(unsigned s, std::uint64_t n, unsigned terms) {
  const auto b = bernoulli_table(2 * terms);
  Rational out = abs(b[2 * terms]) * Rational(rising(s, 2 * terms - 1), factorial(2 * terms));
  out /= Rational(pow_u64(n, s + 2 * terms - 1));
  out.canonicalize();
  return out;
}

double log2_zeta_remainder_estimate(unsigned s, std::uint64_t n, unsigned terms) {
  // |B_2M|/(2M)! <= 4/(2 pi)^{2M}
  const double two_m = 2.0 * terms;
  return 2.0 - two_m * std::log2(2.0 * M_PI) + (std::lgamma(s + two_m - 1.0) - std::lgamma(static_cast<double>(s))) / std::log(2.0) -
         (s + two_m - 1.0) * std::log2(static_cast<double>(n));
}

Rational partial_zeta(unsigned s, std::uint64_t below) {
  std::vector<std::pair<Integer, Integer>> terms;
  terms.reserve(below);
  for (std::uint64_t n = 1; n < below; ++n) terms.emplace_back(Integer(1), pow_u64(n, s));
  return sum_terms(terms);
}

void check_zeta_order(unsigned s) {
  if (s < 2) throw PreconditionError("zeta(s) needs s >= 2");
}

std::string decimal(const Rational& q, int digits) {
  IntervalReal v(q, 128);
  return v.midpoint_string(digits);
}

bool is_odd_prime(std::uint64_t p) {
  if (p < 3 || p % 2 == 0) return false;
  const auto f = factorize(p);
  return f.size() == 1 && f[0].second == 1;
}

}  // namespace

mpfr_prec_t default_precision(unsigned m, std::uint64_t r) {
  const auto log2_ceil = static_cast<mpfr_prec_t>(std::ceil(std::log2(static_cast<double>(r) + 2.0)));
  return static_cast<mpfr_prec_t>(m) * log2_ceil + 64;
}

ZetaTail choose_zeta_tail(unsigned s, mpfr_prec_t bits, std::uint64_t min_cutoff) {
  check_zeta_order(s);
  const double target = -static_cast<double>(bits) - 24.0;
  std::uint64_t n = std::max<std::uint64_t>(min_cutoff, 16 + static_cast<std::uint64_t>(bits) / 8);
  while (true) {
    double best = 0.0;
    for (unsigned terms = 1; terms <= 4 * n; ++terms) {
      const double est = log2_zeta_remainder_estimate(s, n, terms);
      if (est < target) return ZetaTail{n, terms};
      if (terms > 1 && est > best) break;  // past the optimal truncation
      best = est;
    }
    n *= 2;
  }
}

IntervalReal zeta_interval(unsigned s, mpfr_prec_t bits) { return zeta_interval(s, bits, choose_zeta_tail(s, bits)); }

IntervalReal zeta_interval(unsigned s, mpfr_prec_t bits, const ZetaTail& tail) {
  check_zeta_order(s);
  if (tail.cutoff < 2 || tail.terms < 1) throw PreconditionError("zeta tail needs cutoff >= 2 and terms >= 1");
  const std::uint64_t n = tail.cutoff;
  const auto b = bernoulli_table(2 * tail.terms);

  Rational center = partial_zeta(s, n);
  center += Rational(Integer(1), Integer(s - 1) * pow_u64(n, s - 1));  // integral
  center += Rational(Integer(1), 2 * pow_u64(n, s));                   // f(N)/2
  for (unsigned k = 1; k <= tail.terms; ++k) {
    Rational c = b[2 * k] * Rational(rising(s, 2 * k - 1), factorial(2 * k));
    c /= Rational(pow_u64(n, s + 2 * k - 1));
    center += c;
  }
  center.canonicalize();
  const Rational remainder = zeta_remainder(s, n, tail.terms);
  return IntervalReal(center - remainder, center + remainder, bits);
}

IntervalReal zeta_integral_enclosure(unsigned s, std::uint64_t cutoff, mpfr_prec_t bits) {
  check_zeta_order(s);
  if (cutoff < 1) throw PreconditionError("cutoff must be >= 1");
  const Rational partial = partial_zeta(s, cutoff);
  const Rational integral(Integer(1), Integer(s - 1) * pow_u64(cutoff, s - 1));
  return IntervalReal(partial + integral, partial + integral + inverse_power(cutoff, s), bits);
}

IntervalReal harmonic_excess(std::uint64_t n, mpfr_prec_t bits) {
  if (n == 0) throw PreconditionError("harmonic_excess needs n >= 1");
  std::vector<std::pair<Integer, Integer>> terms;
  for (std::uint64_t k = 1; k <= n; ++k) terms.emplace_back(Integer(1), to_integer(k));
  const Rational h = sum_terms(terms);
  return IntervalReal(h, bits + 32) - IntervalReal::log(to_integer(n), bits + 32);
}

IntervalReal euler_gamma_interval(mpfr_prec_t bits, std::uint64_t n) {
  if (n == 0) n = 32 + static_cast<std::uint64_t>(bits) / 4;
  const Rational target = dyadic(-static_cast<long>(bits) - 16);
  // H_n - ln n - gamma = 1/(2n) - sum_{k=1}^{M} B_2k / (2k n^2k) + R, |R| <= |B_2M| / (2M n^2M)
  Rational correction = Rational(Integer(1), 2 * to_integer(n));
  Rational remainder;
  const auto b = bernoulli_table(std::max<unsigned>(64, static_cast<unsigned>(bits)));
  for (unsigned k = 1;; ++k) {
    if (2 * k >= b.size()) throw PreconditionError("harmonic cutoff too small for requested precision");
    const Rational term = b[2 * k] / Rational(Integer(2 * k) * pow_u64(n, 2 * k));
    correction -= term;
    remainder = abs(term);
    if (remainder < target) break;
    if (2 * k > 6 * n) throw PreconditionError("harmonic cutoff too small for requested precision");
  }
  correction.canonicalize();
  const IntervalReal excess = harmonic_excess(n, bits);
  const IntervalReal shift(correction - remainder, correction + remainder, bits + 32);
  return (excess - shift).with_precision(bits);
}

Rational error_width_target(unsigned m, std::uint64_t r) {
  Rational out(pow_u64(r, m - 1), Integer(1000000));
  out.canonicalize();
  return out;
}

IntervalReal main_term(unsigned m, std::uint64_t r, mpfr_prec_t bits) {
  check_zeta_order(m);
  if (bits == 0) bits = default_precision(m, r);
  if (r == 0) return IntervalReal::exact_zero(bits);
  const Rational target = error_width_target(m, r);
  for (int attempt = 0; attempt < 8; ++attempt, bits *= 2) {
    IntervalReal out = main_term(m, r, zeta_interval(m, bits));
    IntervalReal width = out.width_interval();
    if (width.certainly_less(target)) return out;
  }
  throw InternalError("main term enclosure did not reach the width target");
}

IntervalReal main_term(unsigned m, std::uint64_t r, const IntervalReal& zeta_m) {
  check_zeta_order(m);
  const mpfr_prec_t bits = zeta_m.precision();
  if (r == 0) return IntervalReal::exact_zero(bits);
  const Integer numer = (Integer(1) << m) * pow_u64(r, m);
  return IntervalReal(numer, bits) / zeta_m;
}

IntervalReal error_term(unsigned m, std::uint64_t r) {
  check_zeta_order(m);
  if (r == 0) throw PreconditionError("error term needs r >= 1");
  const Integer v = umbral_evaluate(umbral_polynomial(m), r);
  const IntervalReal main = main_term(m, r);
  return IntervalReal(v, main.precision()) - main;
}

FractionalMobiusSum fractional_mobius_sum(unsigned m, unsigned k, std::uint64_t r) {
  if (r == 0) throw PreconditionError("fractional sum needs r >= 1");
  return fractional_mobius_sum(m, k, r, MobiusTable::build(r));
}

FractionalMobiusSum fractional_mobius_sum(unsigned m, unsigned k, std::uint64_t r, const MobiusTable& mu) {
  if (m < 1 || k < 1) throw PreconditionError("fractional sum needs m >= 1 and k >= 1");
  if (r == 0) throw PreconditionError("fractional sum needs r >= 1");
  if (mu.limit() < r) throw PreconditionError("mobius table shorter than r");
  // mu(d)/d^m {r/d}^k = mu(d) (r mod d)^k / d^{m+k}
  std::vector<std::pair<Integer, Integer>> terms;
  for (std::uint64_t d = 2; d <= r; ++d) {
    const int s = mu.mu(d);
    const std::uint64_t rem = r % d;
    if (s == 0 || rem == 0) continue;
    Integer num = pow_u64(rem, k);
    if (s < 0) num = -num;
    terms.emplace_back(std::move(num), pow_u64(d, m + k));
  }
  return FractionalMobiusSum{m, k, r, sum_terms(terms)};
}

Rational generalized_harmonic(unsigned m, std::uint64_t r) {
  std::vector<std::pair<Integer, Integer>> terms;
  for (std::uint64_t d = 1; d <= r; ++d) terms.emplace_back(Integer(1), pow_u64(d, m));
  return sum_terms(terms);
}

WitnessBoundCertificate certify_witness_bound(unsigned m, std::uint64_t cutoff) {
  if (m != 2 && m != 3) throw PreconditionError("witness bound certificate covers m = 2 and m = 3 only");
  if (cutoff < 6) throw PreconditionError("certificate cutoff must be >= 6");
  const MobiusTable mu = MobiusTable::build(cutoff);

  WitnessBoundCertificate cert;
  cert.m = m;
  cert.cutoff = cutoff;
  cert.head_extra = 0;
  for (std::uint64_t d = 4; d <= cutoff; d += 2) {
    const int s = mu.mu(d);
    if (s == 0) continue;
    Rational term(Integer(s), 2 * pow_u64(d, m));
    term.canonicalize();
    cert.head_extra += term;
    cert.terms.push_back(WitnessBoundTerm{d, term});
  }
  cert.head_extra.canonicalize();
  cert.head = cert.head_extra - dyadic(-static_cast<long>(m) - 1);
  cert.head.canonicalize();
  cert.tail_bound = Rational(Integer(1), Integer(m - 1) * pow_u64(cutoff, m - 1));
  cert.tail_bound.canonicalize();
  cert.upper = cert.head + cert.tail_bound;
  cert.upper.canonicalize();
  cert.passes = cert.upper < Rational(-1, 20);
  return cert;
}

std::string rational_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_json(const WitnessBoundCertificate& cert) {
  nlohmann::ordered_json j;
  j["m"] = cert.m;
  j["cutoff"] = cert.cutoff;
  j["head"] = rational_string(cert.head);
  j["head_extra"] = rational_string(cert.head_extra);
  j["tail_bound"] = rational_string(cert.tail_bound);
  j["upper"] = rational_string(cert.upper);
  j["passes"] = cert.passes;
  return j.dump(2);
}

bool zeta_tail_condition(unsigned m, mpfr_prec_t bits) {
  check_zeta_order(m);
  IntervalReal lhs = zeta_interval(m, bits);
  lhs -= IntervalReal(Rational(1) + dyadic(-static_cast<long>(m)), bits);
  return lhs.certainly_less(dyadic(-static_cast<long>(m) - 1));
}

NegativityReport large_m_negativity_check(unsigned m, std::uint64_t r_max, unsigned threads) {
  if (m < 4) throw PreconditionError("negativity check covers m >= 4");
  NegativityReport report;
  report.m = m;
  report.r_max = r_max;
  report.zeta_condition = zeta_tail_condition(m, std::max<mpfr_prec_t>(128, 2 * m + 64));
  if (r_max < 3) return report;

  const MobiusTable mu = MobiusTable::build(r_max);
  const std::uint64_t count = (r_max - 1) / 2;  // odd r = 3, 5, ..., <= r_max
  enum class Verdict : std::uint8_t { negative, negative_exact, nonnegative };
  std::vector<Verdict> verdicts(count);
  const std::size_t chunk = 64;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    for (std::size_t i = c * chunk; i < std::min<std::size_t>(count, (c + 1) * chunk); ++i) {
      const std::uint64_t r = 3 + 2 * i;
      const auto approx = kernels::frac_mobius_sum_f64(mu.values(), r, m, 1);
      if (approx.certainly_negative()) {
        verdicts[i] = Verdict::negative;
      } else {
        const auto exact = fractional_mobius_sum(m, 1, r, mu);
        verdicts[i] = exact.value < 0 ? Verdict::negative_exact : Verdict::nonnegative;
      }
    }
  });
  report.checked = count;
  for (std::size_t i = 0; i < count; ++i) {
    if (verdicts[i] == Verdict::negative_exact) ++report.exact_fallbacks;
    if (verdicts[i] == Verdict::nonnegative && !report.counterexample) report.counterexample = 3 + 2 * i;
  }
  return report;
}

Rational mobius_zeta_partial(unsigned i, std::uint64_t r) {
  if (i < 2) throw PreconditionError("mobius_zeta_partial needs i >= 2");
  if (r == 0) throw PreconditionError("mobius_zeta_partial needs r >= 1");
  if (r > kTableGuard) throw CapacityError("mobius_zeta_partial", r, kTableGuard);
  const MobiusTable mu = MobiusTable::build(r);
  std::vector<std::pair<Integer, Integer>> terms;
  for (std::uint64_t d = 1; d <= r; ++d) {
    const int s = mu.mu(d);
    if (s != 0) terms.emplace_back(Integer(s), pow_u64(d, i));
  }
  return sum_terms(terms);
}

WitnessReport witness_scan(unsigned m, const std::vector<std::uint64_t>& primes,
                           const std::vector<std::uint64_t>& k_values, std::uint64_t r_cap, unsigned threads) {
  check_zeta_order(m);
  std::vector<std::uint64_t> prime_set = primes;
  std::sort(prime_set.begin(), prime_set.end());
  if (std::adjacent_find(prime_set.begin(), prime_set.end()) != prime_set.end()) {
    throw PreconditionError("witness prime set has duplicates");
  }
  Integer product = 1;
  for (std::uint64_t p : prime_set) {
    if (!is_odd_prime(p)) throw PreconditionError("witness primes must be odd primes, got " + std::to_string(p));
    product *= to_integer(p);
  }
  for (std::uint64_t k : k_values) {
    if (k == 0 || k % 2 == 0) throw PreconditionError("witness k must be odd, got " + std::to_string(k));
    for (std::uint64_t p : prime_set) {
      if (k % p == 0) throw PreconditionError("witness k must be coprime to the prime set, got " + std::to_string(k));
    }
  }

  WitnessReport report;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> targets;  // (r, k)
  for (std::uint64_t k : k_values) {
    const Integer r = product * to_integer(k);
    if (r > to_integer(r_cap)) {
      report.skipped.push_back(r.fits_ulong_p() ? r.get_ui() : UINT64_MAX);
      continue;
    }
    targets.emplace_back(r.get_ui(), k);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  std::sort(report.skipped.begin(), report.skipped.end());
  if (targets.empty()) return report;

  const MobiusTable mu = MobiusTable::build(targets.back().first);
  std::vector<std::optional<WitnessRow>> rows(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t i) {
    const auto [r, k] = targets[i];
    WitnessRow row;
    row.m = m;
    row.r = r;
    row.k = k;
    row.primes = prime_set;
    row.s = fractional_mobius_sum(m, 1, r, mu).value;
    row.s_decimal = decimal(row.s, 12);
    row.count = umbral_evaluate(umbral_polynomial(m), r);
    const IntervalReal main = main_term(m, r);
    row.error = IntervalReal(row.count, main.precision()) - main;
    row.normalized = row.error / IntervalReal(pow_u64(r, m - 1), main.precision());
    rows[i] = std::move(row);
  });
  for (auto& row : rows) report.rows.push_back(std::move(*row));
  return report;
}

std::vector<ErrorScanRow> error_scan(unsigned m, std::uint64_t r_from, std::uint64_t r_to, std::uint64_t step,
                                     unsigned threads) {
  check_zeta_order(m);
  if (r_from < 1 || r_from > r_to) throw PreconditionError("error scan needs 1 <= from <= to");
  if (step < 1) throw PreconditionError("error scan needs step >= 1");
  if (r_to > kTableGuard) throw CapacityError("error scan radius", r_to, kTableGuard);

  const UmbralCounter counter(m, r_to);
  const std::uint64_t count = (r_to - r_from) / step + 1;
  mpfr_prec_t bits = default_precision(m, r_to);
  IntervalReal zeta = zeta_interval(m, bits);
  // The widest main term is the one at r_to; raise precision until it fits.
  for (int attempt = 0; !main_term(m, r_to, zeta).width_interval().certainly_less(error_width_target(m, r_to)); ++attempt) {
    if (attempt == 8) throw InternalError("zeta precision did not reach the width target");
    bits *= 2;
    zeta = zeta_interval(m, bits);
  }

  std::vector<std::optional<ErrorScanRow>> rows(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const std::uint64_t r = r_from + i * step;
    ErrorScanRow row{r, counter(r), main_term(m, r, zeta), IntervalReal(bits), IntervalReal(bits)};
    row.error = IntervalReal(row.count, bits) - row.main;
    row.normalized = row.error / IntervalReal(pow_u64(r, m - 1), bits);
    rows[i] = std::move(row);
  });
  std::vector<ErrorScanRow> out;
  out.reserve(count);
  for (auto& row : rows) out.push_back(std::move(*row));
  return out;
}

void write_error_csv(std::ostream& out, unsigned m, const std::vector<ErrorScanRow>& rows) {
  out << "m,r,V,main_mid,E_mid,E_norm_lo,E_norm_hi\n";
  for (const auto& row : rows) {
    out << m << ',' << row.r << ',' << row.count.get_str() << ',' << row.main.midpoint_string(12) << ','
        << row.error.midpoint_string(12) << ',' << row.normalized.lower_string() << ','
        << row.normalized.upper_string() << '\n';
  }
}

void write_witness_csv(std::ostream& out, const WitnessReport& report) {
  out << "m,r,k,primes,S_decimal,S_sign,V,E_mid,E_sign,E_norm_lo,E_norm_hi\n";
  for (const auto& row : report.rows) {
    std::string primes;
    for (std::size_t i = 0; i < row.primes.size(); ++i) {
      if (i) primes += ' ';
      primes += std::to_string(row.primes[i]);
    }
    out << row.m << ',' << row.r << ',' << row.k << ',' << primes << ',' << row.s_decimal << ','
        << sgn(row.s) << ',' << row.count.get_str() << ',' << row.error.midpoint_string(12) << ','
        << row.error.certain_sign() << ',' << row.normalized.lower_string() << ','
        << row.normalized.upper_string() << '\n';
  }
  for (std::uint64_t r : report.skipped) out << "# skipped r=" << r << " (over cap)\n";
}

}  // namespace vispoints

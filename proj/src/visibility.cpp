#include "vispoints/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vispoints/errors.hpp"
#include "vispoints/kernels.hpp"
#include "vispoints/parallel.hpp"
#include "vispoints/polynomial.hpp"

namespace vispoints {

namespace {

Integer to_integer(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }
Integer to_integer(std::int64_t v) { return Integer(static_cast<long>(v)); }

/// base^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && out > UINT64_MAX / base) return UINT64_MAX;
    out *= base;
  }
  return out;
}

void check_dimension(unsigned m) {
  if (m == 0) throw PreconditionError("dimension must be >= 1");
}

/// Enumerates coordinates level..m-1 of [-R, R]^m given the gcd and sup-norm
/// of the coordinates fixed so far; buckets[s] counts visible points with
/// sup-norm s.
void enumerate_tail(unsigned level, unsigned m, std::int64_t R, std::uint64_t g, std::uint64_t norm,
                    std::vector<std::uint64_t>& buckets) {
  if (level + 1 == m) {
    for (std::int64_t x = -R; x <= R; ++x) {
      const std::uint64_t a = static_cast<std::uint64_t>(x < 0 ? -x : x);
      if (std::gcd(g, a) == 1) ++buckets[std::max(norm, a)];
    }
    return;
  }
  for (std::int64_t x = -R; x <= R; ++x) {
    const std::uint64_t a = static_cast<std::uint64_t>(x < 0 ? -x : x);
    enumerate_tail(level + 1, m, R, std::gcd(g, a), std::max(norm, a), buckets);
  }
}

std::vector<std::uint64_t> enumerate_cube(unsigned m, std::uint64_t r_max, unsigned threads) {
  const auto R = static_cast<std::int64_t>(r_max);
  const std::uint64_t width = 2 * r_max + 1;
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, width)));
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(r_max + 1, 0));
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::int64_t begin = -R + static_cast<std::int64_t>(width * w / workers);
    const std::int64_t end = -R + static_cast<std::int64_t>(width * (w + 1) / workers);
    auto& buckets = partial[w];
    for (std::int64_t x = begin; x < end; ++x) {
      const std::uint64_t a = static_cast<std::uint64_t>(x < 0 ? -x : x);
      if (m == 1) {
        if (a == 1) ++buckets[a];
      } else {
        enumerate_tail(1, m, R, a, a, buckets);
      }
    }
  });
  std::vector<std::uint64_t> total(r_max + 1, 0);
  for (const auto& p : partial) {
    for (std::uint64_t s = 0; s <= r_max; ++s) total[s] += p[s];
  }
  return total;
}

void check_budget(std::uint64_t needed, std::uint64_t budget) {
  if (needed > budget) throw BudgetError(needed, budget);
}

std::vector<Integer> binomial_row(unsigned m) {
  std::vector<Integer> row(m + 1);
  for (unsigned j = 0; j <= m; ++j) row[j] = binomial(m, j);
  return row;
}

/// Horner evaluation of the power sums P_{j+1}(q) for q = 0..limit.
std::vector<Integer> power_sum_table(unsigned j, std::uint64_t limit) {
  const PowerSumPolynomial poly(j + 1);
  std::vector<Integer> out(limit + 1);
  for (std::uint64_t q = 0; q <= limit; ++q) out[q] = poly(q);
  return out;
}

}  // namespace

CountQuery make_query(unsigned dimension, double radius) {
  check_dimension(dimension);
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw PreconditionError("radius must be a finite value >= 0");
  return CountQuery{dimension, static_cast<std::uint64_t>(std::floor(radius))};
}

Integer brute_force_count(const CountQuery& q, const EnumerationOptions& opts) {
  check_dimension(q.dimension);
  check_budget(saturating_pow(2 * q.radius + 1, q.dimension), opts.budget);
  const auto buckets = enumerate_cube(q.dimension, q.radius, opts.threads);
  Integer total = 0;
  for (std::uint64_t c : buckets) total += to_integer(c);
  return total;
}

std::vector<Integer> brute_force_profile(unsigned m, std::uint64_t r_max, const EnumerationOptions& opts) {
  check_dimension(m);
  check_budget(saturating_pow(2 * r_max + 1, m), opts.budget);
  const auto buckets = enumerate_cube(m, r_max, opts.threads);
  std::vector<Integer> out(r_max + 1);
  Integer running = 0;
  for (std::uint64_t s = 0; s <= r_max; ++s) {
    running += to_integer(buckets[s]);
    out[s] = running;
  }
  return out;
}

Integer brute_force_positive_count(const CountQuery& q, const EnumerationOptions& opts) {
  check_dimension(q.dimension);
  check_budget(saturating_pow(q.radius, q.dimension), opts.budget);
  if (q.radius == 0) return 0;
  const unsigned m = q.dimension;
  const std::uint64_t r = q.radius;
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(opts.threads, r)));
  std::vector<std::uint64_t> partial(workers, 0);
  parallel_for(workers, workers, [&](std::size_t w) {
    // odometer over [1, r]^m with the first coordinate restricted to this block
    const std::uint64_t begin = 1 + r * w / workers;
    const std::uint64_t end = 1 + r * (w + 1) / workers;
    std::vector<std::uint64_t> x(m, 1);
    std::vector<std::uint64_t> g(m, 0);
    for (std::uint64_t x0 = begin; x0 < end; ++x0) {
      x.assign(m, 1);
      x[0] = x0;
      g[0] = x0;
      for (unsigned i = 1; i < m; ++i) g[i] = std::gcd(g[i - 1], x[i]);
      while (true) {
        if (g[m - 1] == 1) ++partial[w];
        unsigned i = m - 1;
        while (i > 0 && x[i] == r) {
          x[i] = 1;
          --i;
        }
        if (i == 0) break;
        ++x[i];
        for (unsigned k = i; k < m; ++k) g[k] = std::gcd(g[k - 1], x[k]);
      }
    }
  });
  Integer total = 0;
  for (std::uint64_t c : partial) total += to_integer(c);
  return total;
}

Integer first_difference(unsigned m, std::uint64_t n) {
  check_dimension(m);
  if (n < 2) throw PreconditionError("first difference needs n >= 2");
  Integer out = 0;
  for (unsigned j = 0; j < m; ++j) {
    Integer term = binomial(m, j) * jordan_value(j, n);
    if ((m - 1 - j) % 2 == 0) {
      out += term;
    } else {
      out -= term;
    }
  }
  return out;
}

Integer positive_count_via_differences(unsigned m, std::uint64_t r) {
  check_dimension(m);
  if (r == 0) return 0;
  return positive_profile_via_differences(m, r).back();
}

std::vector<Integer> positive_profile_via_differences(unsigned m, std::uint64_t r_max) {
  check_dimension(m);
  std::vector<Integer> out(r_max + 1, 0);
  if (r_max == 0) return out;
  const MobiusTable sieve = MobiusTable::build(r_max);
  std::vector<JordanTable> tables;
  for (unsigned j = 0; j < m; ++j) tables.push_back(build_jordan_table(j, sieve));
  const auto binom = binomial_row(m);
  out[1] = 1;
  for (std::uint64_t n = 2; n <= r_max; ++n) {
    Integer diff = 0;
    for (unsigned j = 0; j < m; ++j) {
      if ((m - 1 - j) % 2 == 0) {
        diff += binom[j] * tables[j](n);
      } else {
        diff -= binom[j] * tables[j](n);
      }
    }
    out[n] = out[n - 1] + diff;
  }
  return out;
}

Integer count_via_orthants(unsigned m, std::uint64_t r, PositiveSource source, const EnumerationOptions& opts) {
  check_dimension(m);
  if (r == 0) return 0;
  Integer total = 0;
  for (unsigned zeros = 0; zeros < m; ++zeros) {
    const unsigned k = m - zeros;
    const Integer positive = source == PositiveSource::enumeration
                                 ? brute_force_positive_count(CountQuery{k, r}, opts)
                                 : positive_count_via_differences(k, r);
    total += binomial(m, zeros) * (Integer(1) << k) * positive;
  }
  return total;
}

SummatoryCache SummatoryCache::build(unsigned order, std::uint64_t limit) {
  if (limit == 0) {
    SummatoryCache c;
    c.order_ = order;
    c.prefix_.assign(1, 0);
    return c;
  }
  return from_table(build_jordan_table(order, limit));
}

SummatoryCache SummatoryCache::from_table(const JordanTable& table) {
  SummatoryCache c;
  c.order_ = table.order;
  c.prefix_.resize(table.limit + 1);
  c.prefix_[0] = 0;
  for (std::uint64_t n = 1; n <= table.limit; ++n) c.prefix_[n] = c.prefix_[n - 1] + table(n);
  return c;
}

MertensFunction::MertensFunction(std::uint64_t max_argument) {
  const double target = std::cbrt(static_cast<double>(max_argument));
  std::uint64_t limit = static_cast<std::uint64_t>(target * target) + 1;
  limit = std::max<std::uint64_t>(limit, std::min<std::uint64_t>(max_argument, 1u << 16));
  limit = std::min<std::uint64_t>(limit, std::max<std::uint64_t>(max_argument, 1));
  limit = std::min<std::uint64_t>(limit, kTableGuard);
  const MobiusTable table = MobiusTable::build(limit);
  small_.assign(limit + 1, 0);
  kernels::mertens_prefix(table.values(), std::span<std::int64_t>(small_).subspan(1), 0);
}

std::int64_t MertensFunction::operator()(std::uint64_t x) {
  if (x < small_.size()) return small_[x];
  if (auto it = memo_.find(x); it != memo_.end()) return it->second;
  // sum_{k=1}^{x} M(floor(x/k)) = 1
  std::int64_t acc = 1;
  for (std::uint64_t k = 2; k <= x;) {
    const std::uint64_t q = x / k;
    const std::uint64_t k_hi = x / q;
    acc -= static_cast<std::int64_t>(k_hi - k + 1) * (*this)(q);
    k = k_hi + 1;
  }
  memo_.emplace(x, acc);
  return acc;
}

const char* method_name(SummatoryMethod m) noexcept {
  switch (m) {
    case SummatoryMethod::sieve:
      return "sieve";
    case SummatoryMethod::mobius_faulhaber:
      return "mobius_faulhaber";
    case SummatoryMethod::blocked:
      return "blocked";
  }
  return "unknown";
}

std::optional<SummatoryMethod> parse_summatory_method(const std::string& name) {
  if (name == "sieve") return SummatoryMethod::sieve;
  if (name == "mobius_faulhaber") return SummatoryMethod::mobius_faulhaber;
  if (name == "blocked") return SummatoryMethod::blocked;
  return std::nullopt;
}

Integer jordan_summatory(unsigned j, std::uint64_t r, SummatoryMethod method) {
  if (r == 0) return 0;
  switch (method) {
    case SummatoryMethod::sieve: {
      const JordanTable table = build_jordan_table(j, r);
      Integer acc = 0;
      for (const auto& v : table.values) acc += v;
      return acc;
    }
    case SummatoryMethod::mobius_faulhaber:
      return FaulhaberSummatory(j, r)(r);
    case SummatoryMethod::blocked: {
      MertensFunction mertens(r);
      const PowerSumPolynomial poly(j + 1);
      Integer acc = 0;
      std::int64_t m_prev = 0;  // M(l - 1)
      for (std::uint64_t l = 1; l <= r;) {
        const std::uint64_t q = r / l;
        const std::uint64_t h = r / q;
        const std::int64_t m_h = mertens(h);
        if (m_h != m_prev) acc += to_integer(m_h - m_prev) * poly(q);
        m_prev = m_h;
        l = h + 1;
      }
      return acc;
    }
  }
  throw PreconditionError("unknown summatory method");
}

FaulhaberSummatory::FaulhaberSummatory(unsigned j, std::uint64_t limit)
    : order_(j), mu_(MobiusTable::build(std::max<std::uint64_t>(limit, 1))), power_sums_(power_sum_table(j, limit)) {
  if (limit > kTableGuard) throw CapacityError("mobius_faulhaber summatory", limit, kTableGuard);
}

Integer FaulhaberSummatory::operator()(std::uint64_t r) const {
  if (r >= power_sums_.size()) throw PreconditionError("radius beyond Faulhaber table");
  const auto mu = mu_.values();
  Integer acc = 0;
  for (std::uint64_t d = 1; d <= r; ++d) {
    const int s = mu[d - 1];
    if (s > 0) {
      acc += power_sums_[r / d];
    } else if (s < 0) {
      acc -= power_sums_[r / d];
    }
  }
  return acc;
}

UmbralPolynomial umbral_polynomial(unsigned m) {
  check_dimension(m);
  const auto plus = RationalPolynomial::linear(2, 1);
  const auto minus = RationalPolynomial::linear(2, -1);
  RationalPolynomial q = plus.pow(m + 1) - minus.pow(m + 1);
  q *= Rational(1, 2 * (m + 1));
  UmbralPolynomial out;
  out.dimension = m;
  out.coefficients.resize(m + 2);
  for (unsigned i = 0; i <= m + 1; ++i) out.coefficients[i] = q.coefficient(i);
  return out;
}

Integer umbral_substitute(std::span<const Rational> coefficients, std::span<const Integer> summatory) {
  Rational acc = 0;
  for (std::size_t i = 1; i < coefficients.size(); ++i) {
    if (coefficients[i] == 0) continue;
    if (i - 1 >= summatory.size()) throw PreconditionError("missing summatory value for umbral power");
    acc += coefficients[i] * Rational(static_cast<unsigned long>(i)) * Rational(summatory[i - 1]);
  }
  acc.canonicalize();
  if (acc.get_den() != 1) throw InternalError("umbral evaluation did not reduce to an integer");
  return acc.get_num();
}

Integer umbral_evaluate(const UmbralPolynomial& poly, std::uint64_t r) {
  std::vector<Integer> s(poly.dimension);
  for (unsigned j = 0; j < poly.dimension; ++j) s[j] = jordan_summatory(j, r, SummatoryMethod::blocked);
  return umbral_substitute(poly.coefficients, s);
}

Integer umbral_evaluate(const UmbralPolynomial& poly, std::span<const SummatoryCache> caches, std::uint64_t r) {
  if (caches.size() < poly.dimension) throw PreconditionError("need one summatory cache per order j < m");
  std::vector<Integer> s(poly.dimension);
  for (unsigned j = 0; j < poly.dimension; ++j) {
    if (caches[j].order() != j) throw PreconditionError("summatory cache order mismatch");
    if (r > caches[j].limit()) throw PreconditionError("radius beyond summatory cache");
    s[j] = caches[j](r);
  }
  return umbral_substitute(poly.coefficients, s);
}

UmbralCounter::UmbralCounter(unsigned m, std::uint64_t r_max) : poly_(umbral_polynomial(m)) {
  if (r_max == 0) {
    for (unsigned j = 0; j < m; ++j) caches_.push_back(SummatoryCache::build(j, 0));
    return;
  }
  const MobiusTable sieve = MobiusTable::build(r_max);
  for (unsigned j = 0; j < m; ++j) caches_.push_back(SummatoryCache::from_table(build_jordan_table(j, sieve)));
}

FormalSeriesResult formal_series_check(unsigned m_max, std::uint64_t r) {
  if (m_max == 0) throw PreconditionError("formal series check needs m_max >= 1");
  if (r == 0) throw PreconditionError("formal series check needs r >= 1");
  const std::size_t order = m_max + 2;

  // log form: (1/2) log(A / B), A = 1 - (2X-1)u, B = 1 - (2X+1)u
  PolySeries a(order), b(order);
  a[0] = RationalPolynomial::constant(1);
  a[1] = RationalPolynomial::linear(-2, 1);
  b[0] = RationalPolynomial::constant(1);
  b[1] = RationalPolynomial::linear(-2, -1);
  PolySeries log_form = (a * b.inverse()).log();
  log_form *= Rational(1, 2);

  // exponential form: (e^{(2X+1)u} - e^{(2X-1)u}) / (2u)
  PolySeries plus(order), minus(order);
  plus[1] = RationalPolynomial::linear(2, 1);
  minus[1] = RationalPolynomial::linear(2, -1);
  PolySeries exp_form = plus.exp();
  exp_form -= minus.exp();
  exp_form = exp_form.divide_by_u();
  exp_form *= Rational(1, 2);

  std::vector<Integer> s(m_max + 1);
  for (unsigned j = 0; j <= m_max; ++j) s[j] = jordan_summatory(j, r, SummatoryMethod::blocked);

  FormalSeriesResult result;
  Integer factorial = 1;
  for (unsigned m = 1; m <= m_max; ++m) {
    factorial *= m;
    const Integer expected = umbral_evaluate(umbral_polynomial(m), r);
    const Integer from_log = umbral_substitute(log_form[m + 1].coefficients(), s);
    const RationalPolynomial exp_coeff = exp_form[m] * Rational(factorial);
    const Integer from_exp = umbral_substitute(exp_coeff.coefficients(), s);
    if (from_log != expected || from_exp != expected) {
      result.ok = false;
      result.first_failing_m = m;
      result.detail = "m=" + std::to_string(m) + ": umbral " + expected.get_str() + ", log series " +
                      from_log.get_str() + ", exp series " + from_exp.get_str();
      return result;
    }
  }
  return result;
}

}  // namespace vispoints

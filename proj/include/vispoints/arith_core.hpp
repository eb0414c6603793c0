#pragma once

// Exact arithmetic foundations: Moebius sieve, Jordan totients, Bernoulli
// numbers (B_1 = +1/2) and Faulhaber power-sum polynomials.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace vispoints {

using Integer = mpz_class;
using Rational = mpq_class;

/// Largest table (number of entries) any sieve in this library will allocate.
inline constexpr std::uint64_t kTableGuard = std::uint64_t{1} << 31;

/// Sieved mu(n) for 1 <= n <= limit, with smallest-prime-factor data when
/// built by the linear sieve. Immutable after construction.
class MobiusTable {
 public:
  /// Linear sieve. Throws CapacityError when limit > kTableGuard.
  static MobiusTable build(std::uint64_t limit);

  /// Wraps mu values for n = 1..values.size() without factor data (used by
  /// the cache loader). Validates every entry is in {-1, 0, 1}.
  static MobiusTable from_values(std::vector<std::int8_t> values);

  std::uint64_t limit() const noexcept { return limit_; }
  int mu(std::uint64_t n) const;

  /// mu(1), mu(2), ..., mu(limit).
  std::span<const std::int8_t> values() const noexcept {
    return {mu_.data() + 1, static_cast<std::size_t>(limit_)};
  }

  bool has_factor_data() const noexcept { return !spf_.empty(); }
  /// Requires has_factor_data() and 2 <= n <= limit.
  std::uint32_t smallest_prime_factor(std::uint64_t n) const;
  const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

 private:
  MobiusTable() = default;

  std::uint64_t limit_ = 0;
  std::vector<std::int8_t> mu_;      // index n, mu_[0] unused
  std::vector<std::uint32_t> spf_;   // index n, empty without factor data
  std::vector<std::uint32_t> primes_;
};

inline MobiusTable build_mobius_table(std::uint64_t limit) { return MobiusTable::build(limit); }

/// Binary sieve cache: "VPMU1\0", limit as u64 little-endian, then limit
/// bytes of mu(n) + 1.
void save_mobius_cache(const std::filesystem::path& path, const MobiusTable& table);
MobiusTable load_mobius_cache(const std::filesystem::path& path);

/// J_j(n) for n = 1..limit.
struct JordanTable {
  unsigned order = 0;
  std::uint64_t limit = 0;
  std::vector<Integer> values;  // values[n - 1] = J_order(n)

  const Integer& operator()(std::uint64_t n) const { return values.at(n - 1); }
};

/// J_j(n) from the prime factorization of n. J_0 is the indicator of n == 1.
Integer jordan_value(unsigned j, std::uint64_t n);

/// Multiplicative sieve over the smallest-prime-factor table.
JordanTable build_jordan_table(unsigned j, std::uint64_t limit);
JordanTable build_jordan_table(unsigned j, const MobiusTable& sieve);

/// Sum over d | n of J_j(d) == n^j.
bool divisor_sum_check(unsigned j, std::uint64_t n);

/// Exact B_0..B_K with B_1 = +1/2.
struct BernoulliSequence {
  std::vector<Rational> values;

  const Rational& operator[](std::size_t i) const { return values.at(i); }
  std::size_t size() const noexcept { return values.size(); }
};

BernoulliSequence bernoulli(unsigned max_index);

/// P_i(n) = sum_{q=1}^{n} q^{i-1} = (1/i) sum_{j<i} C(i,j) B_j n^{i-j}.
class PowerSumPolynomial {
 public:
  explicit PowerSumPolynomial(unsigned exponent);
  PowerSumPolynomial(unsigned exponent, const BernoulliSequence& bernoulli_numbers);

  unsigned exponent() const noexcept { return exponent_; }

  /// Rational coefficients of n^0 .. n^exponent.
  const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }

  Integer operator()(const Integer& n) const;
  Integer operator()(std::uint64_t n) const;

 private:
  void init(const BernoulliSequence& b);

  unsigned exponent_;
  std::vector<Rational> coefficients_;
  // Same polynomial over a common denominator: P(n) = (sum numer_[k] n^k) / denom_.
  std::vector<Integer> numer_;
  Integer denom_;
};

/// Sum_{q=1}^{n} q^{i-1} through the Faulhaber polynomial.
Integer power_sum(unsigned i, std::uint64_t n);

/// Exact binomial coefficient, zero when k > n.
Integer binomial(unsigned n, unsigned k);

/// Prime factorization by trial division, ascending (prime, exponent) pairs.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

/// mu(n) by trial division.
int mobius_by_factorization(std::uint64_t n);

}  // namespace vispoints

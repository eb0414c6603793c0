#pragma once

// Counting lattice points of [-r, r]^m visible from the origin: an
// enumeration oracle, the orthant and first-difference decompositions, the
// Jordan summatory functions S_j(r) and the umbral polynomial evaluation.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vispoints/arith_core.hpp"

namespace vispoints {

struct CountQuery {
  unsigned dimension = 1;  // m >= 1
  std::uint64_t radius = 0;
};

/// Floors a nonnegative real radius; V_m(r) only depends on floor(r).
CountQuery make_query(unsigned dimension, double radius);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000'000;

struct EnumerationOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  unsigned threads = 1;
};

/// |{x in Z^m : |x_i| <= r, gcd(|x_1|, ..., |x_m|) = 1}| by enumeration.
/// gcd of the all-zero tuple is 0, so the origin is never counted.
Integer brute_force_count(const CountQuery& q, const EnumerationOptions& opts = {});

/// V_m(0..r_max) from a single enumeration of [-r_max, r_max]^m, bucketed by
/// the sup-norm of each point.
std::vector<Integer> brute_force_profile(unsigned m, std::uint64_t r_max,
                                         const EnumerationOptions& opts = {});

/// V_m^+(r): visible points of [1, r]^m.
Integer brute_force_positive_count(const CountQuery& q, const EnumerationOptions& opts = {});

/// A_m^+(n) = sum_{j<m} (-1)^{m-1-j} C(m, j) J_j(n), n >= 2.
Integer first_difference(unsigned m, std::uint64_t n);

/// V_m^+(r) = 1 + sum_{2 <= n <= r} A_m^+(n).
Integer positive_count_via_differences(unsigned m, std::uint64_t r);

/// V_m^+(0..r_max) by telescoping, with Jordan values from sieved tables.
std::vector<Integer> positive_profile_via_differences(unsigned m, std::uint64_t r_max);

enum class PositiveSource { enumeration, differences };

/// V_m(r) = sum_{i<m} C(m, i) 2^{m-i} V_{m-i}^+(r); i counts zero coordinates.
Integer count_via_orthants(unsigned m, std::uint64_t r,
                           PositiveSource source = PositiveSource::enumeration,
                           const EnumerationOptions& opts = {});

/// Prefix sums S_j(0..limit) of J_j. Immutable after construction.
class SummatoryCache {
 public:
  static SummatoryCache build(unsigned order, std::uint64_t limit);
  static SummatoryCache from_table(const JordanTable& table);

  unsigned order() const noexcept { return order_; }
  std::uint64_t limit() const noexcept { return static_cast<std::uint64_t>(prefix_.size()) - 1; }
  const Integer& operator()(std::uint64_t r) const { return prefix_.at(r); }

 private:
  unsigned order_ = 0;
  std::vector<Integer> prefix_;
};

/// M(x) = sum_{n <= x} mu(n) for arbitrary x: a sieved table up to a
/// threshold near x^{2/3}, and the identity sum_{k<=x} M(x/k) = 1 with
/// memoisation above it. One instance per target r; not thread-safe.
class MertensFunction {
 public:
  explicit MertensFunction(std::uint64_t max_argument);

  std::int64_t operator()(std::uint64_t x);
  std::uint64_t table_limit() const noexcept { return static_cast<std::uint64_t>(small_.size()) - 1; }

 private:
  std::vector<std::int64_t> small_;  // small_[x] = M(x)
  std::unordered_map<std::uint64_t, std::int64_t> memo_;
};

enum class SummatoryMethod { sieve, mobius_faulhaber, blocked };

const char* method_name(SummatoryMethod m) noexcept;
std::optional<SummatoryMethod> parse_summatory_method(const std::string& name);

/// S_j(r) = sum_{n <= r} J_j(n).
///  sieve            sums a JordanTable (r within kTableGuard)
///  mobius_faulhaber sum_{d <= r} mu(d) P_{j+1}(floor(r/d)) (r within kTableGuard)
///  blocked          same sum grouped into O(sqrt r) runs of constant floor(r/d)
Integer jordan_summatory(unsigned j, std::uint64_t r, SummatoryMethod method);

/// S_j(r) = sum_{d <= r} mu(d) P_{j+1}(floor(r/d)) for any r <= limit, with
/// the power sums P_{j+1}(0..limit) evaluated once through Faulhaber.
class FaulhaberSummatory {
 public:
  FaulhaberSummatory(unsigned j, std::uint64_t limit);

  unsigned order() const noexcept { return order_; }
  Integer operator()(std::uint64_t r) const;

 private:
  unsigned order_;
  MobiusTable mu_;
  std::vector<Integer> power_sums_;
};

/// Q_m(T) = ((2T+1)^{m+1} - (2T-1)^{m+1}) / (2(m+1)).
struct UmbralPolynomial {
  unsigned dimension = 0;
  std::vector<Rational> coefficients;  // c_0 .. c_{m+1}
};

UmbralPolynomial umbral_polynomial(unsigned m);

/// Applies X^i -> i S_{i-1}(r), X^0 -> 0 to coefficients c_1.. of a polynomial
/// in X. `summatory[j]` must hold S_j(r) for every j < coefficients.size() - 1.
/// Throws InternalError when the result is not an integer.
Integer umbral_substitute(std::span<const Rational> coefficients, std::span<const Integer> summatory);

/// V_m(r) via the umbral polynomial, S_j(r) from the blocked method.
Integer umbral_evaluate(const UmbralPolynomial& poly, std::uint64_t r);
/// Same, reading S_j(r) from caches[j] (j = 0 .. m-1).
Integer umbral_evaluate(const UmbralPolynomial& poly, std::span<const SummatoryCache> caches,
                        std::uint64_t r);

/// Evaluates V_m(r) for every r <= r_max through cached summatory tables.
class UmbralCounter {
 public:
  UmbralCounter(unsigned m, std::uint64_t r_max);

  unsigned dimension() const noexcept { return poly_.dimension; }
  std::uint64_t limit() const noexcept { return caches_.front().limit(); }
  Integer operator()(std::uint64_t r) const { return umbral_evaluate(poly_, caches_, r); }

 private:
  UmbralPolynomial poly_;
  std::vector<SummatoryCache> caches_;
};

struct FormalSeriesResult {
  bool ok = true;
  std::optional<unsigned> first_failing_m;
  std::string detail;
};

/// Expands (1/2) log((1 - (2X-1)u) / (1 - (2X+1)u)) and
/// (e^{(2X+1)u} - e^{(2X-1)u}) / (2u) as formal series in u over Q[X], and
/// checks that the coefficient of u^{m+1} (resp. m! times that of u^m)
/// reproduces umbral_evaluate(m, r) after substitution, for 1 <= m <= m_max.
FormalSeriesResult formal_series_check(unsigned m_max, std::uint64_t r);

}  // namespace vispoints

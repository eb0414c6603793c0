#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "vispoints/errors.hpp"
#include "vispoints/visibility.hpp"

using namespace vispoints;

namespace {

// C(m+1, 2i+1) 2^{m-2i} / (m+1): the T^{m-2i} coefficient read off the binomial
// expansion of the two (m+1)-th powers.
Rational expected_umbral_coefficient(unsigned m, unsigned power) {
  if (power > m || (m - power) % 2) return 0;
  Integer c;
  mpz_bin_uiui(c.get_mpz_t(), m + 1, m + 1 - power);
  Rational q(c * (Integer(1) << power), m + 1);
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("fixed counts") {
  auto v = [](unsigned m, std::uint64_t r) { return brute_force_count({m, r}); };
  CHECK(v(2, 1) == 8);
  CHECK(v(2, 2) == 16);
  CHECK(v(3, 1) == 26);
  CHECK(v(3, 2) == 98);
  CHECK(v(3, 3) == 290);
  CHECK(v(1, 0) == 0);
  CHECK(v(1, 1000) == 2);
  CHECK(v(4, 0) == 0);
  CHECK(brute_force_positive_count({2, 2}) == 3);
  CHECK(brute_force_positive_count({3, 1}) == 1);
  CHECK(brute_force_positive_count({3, 0}) == 0);
  CHECK(first_difference(3, 2) == 6);
  CHECK(first_difference(2, 3) == 4);
  CHECK_THROWS_AS(first_difference(2, 1), PreconditionError);
}

TEST_CASE("radius queries floor real radii") {
  CHECK(make_query(3, 2.9).radius == 2);
  CHECK(make_query(3, 0.0).radius == 0);
  CHECK_THROWS_AS(make_query(3, -0.5), PreconditionError);
  CHECK_THROWS_AS(make_query(0, 1.0), PreconditionError);
}

TEST_CASE("enumeration agrees with the literal oracle") {
  for (unsigned m = 1; m <= 4; ++m) {
    const std::uint64_t rmax = m == 1 ? 40 : m == 2 ? 25 : m == 3 ? 8 : 4;
    const auto profile = brute_force_profile(m, rmax);
    for (std::uint64_t r = 0; r <= rmax; ++r) {
      CAPTURE(m);
      CAPTURE(r);
      REQUIRE(profile[r] == static_cast<unsigned long>(oracle::visible_count(m, static_cast<std::int64_t>(r))));
      REQUIRE(brute_force_positive_count({m, r}) == static_cast<unsigned long>(oracle::visible_positive_count(m, r)));
    }
  }
}

TEST_CASE("enumeration is independent of thread count") {
  for (unsigned t : {1u, 2u, 3u, 8u}) {
    CHECK(brute_force_count({3, 7}, {kDefaultEnumerationBudget, t}) == brute_force_count({3, 7}));
    CHECK(brute_force_positive_count({3, 9}, {kDefaultEnumerationBudget, t}) ==
          brute_force_positive_count({3, 9}));
  }
}

TEST_CASE("budget guard") {
  CHECK_THROWS_AS(brute_force_count({3, 10}, {100, 1}), BudgetError);
  CHECK_NOTHROW(brute_force_count({3, 2}, {125, 1}));
  CHECK_THROWS_AS(brute_force_count({64, 1000}), BudgetError);
}

TEST_CASE("four counting routes agree") {
  struct Range {
    unsigned m;
    std::uint64_t rmax;
  };
  for (auto [m, rmax] : {Range{1, 200}, Range{2, 80}, Range{3, 20}, Range{4, 8}, Range{5, 5}}) {
    const auto profile = brute_force_profile(m, rmax);
    const auto diffs = positive_profile_via_differences(m, rmax);
    const UmbralCounter umbral(m, rmax);
    const auto poly = umbral_polynomial(m);
    for (std::uint64_t r = 0; r <= rmax; ++r) {
      CAPTURE(m);
      CAPTURE(r);
      REQUIRE(umbral(r) == profile[r]);
      REQUIRE(count_via_orthants(m, r, PositiveSource::differences) == profile[r]);
      if (r <= 6) {
        REQUIRE(count_via_orthants(m, r, PositiveSource::enumeration) == profile[r]);
        REQUIRE(umbral_evaluate(poly, r) == profile[r]);
        REQUIRE(positive_count_via_differences(m, r) == diffs[r]);
      }
    }
  }
}

TEST_CASE("two-dimensional count is eight totient sums") {
  const auto s1 = SummatoryCache::build(1, 2000);
  const UmbralCounter umbral(2, 2000);
  for (std::uint64_t r = 1; r <= 2000; ++r) REQUIRE(umbral(r) == 8 * s1(r));
  CHECK(s1(10) == 32);
}

TEST_CASE("umbral polynomials") {
  const auto q1 = umbral_polynomial(1).coefficients;
  REQUIRE(q1.size() == 3);
  CHECK(q1[0] == 0);
  CHECK(q1[1] == 2);
  CHECK(q1[2] == 0);
  const auto q2 = umbral_polynomial(2).coefficients;
  CHECK(q2[0] == Rational(1, 3));
  CHECK(q2[1] == 0);
  CHECK(q2[2] == 4);
  const auto q3 = umbral_polynomial(3).coefficients;
  CHECK(q3[1] == 2);
  CHECK(q3[3] == 8);
  CHECK(q3[0] == 0);
  CHECK(q3[2] == 0);

  for (unsigned m = 1; m <= 32; ++m) {
    const auto c = umbral_polynomial(m).coefficients;
    REQUIRE(c.size() == m + 2);
    CHECK(c[m + 1] == 0);
    CHECK(c[m] == Rational(Integer(1) << m));
    for (unsigned p = 0; p <= m + 1; ++p) REQUIRE_MESSAGE(c[p] == expected_umbral_coefficient(m, p), "m=" << m);
  }
}

TEST_CASE("umbral substitution") {
  // X^1 -> 1 * S_0, X^2 -> 2 * S_1, X^0 dropped.
  const std::vector<Rational> coeffs{Rational(99), Rational(3), Rational(1, 2)};
  const std::vector<Integer> s{Integer(1), Integer(32)};
  CHECK(umbral_substitute(coeffs, s) == 3 + 32);
  const std::vector<Rational> bad{Rational(0), Rational(1, 3)};
  CHECK_THROWS_AS(umbral_substitute(bad, s), InternalError);
}

TEST_CASE("summatory methods agree") {
  for (unsigned j = 0; j <= 6; ++j) {
    const auto cache = SummatoryCache::build(j, 600);
    const FaulhaberSummatory faulhaber(j, 600);
    for (std::uint64_t r = 0; r <= 600; r += (r < 60 ? 1 : 37)) {
      CAPTURE(j);
      CAPTURE(r);
      REQUIRE(faulhaber(r) == cache(r));
      REQUIRE(jordan_summatory(j, r, SummatoryMethod::blocked) == cache(r));
      REQUIRE(jordan_summatory(j, r, SummatoryMethod::sieve) == cache(r));
      REQUIRE(jordan_summatory(j, r, SummatoryMethod::mobius_faulhaber) == cache(r));
    }
  }
  CHECK(jordan_summatory(0, 12345, SummatoryMethod::blocked) == 1);
  CHECK(jordan_summatory(1, 200000, SummatoryMethod::blocked) ==
        jordan_summatory(1, 200000, SummatoryMethod::sieve));
}

TEST_CASE("summatory method names") {
  for (auto m : {SummatoryMethod::sieve, SummatoryMethod::mobius_faulhaber, SummatoryMethod::blocked}) {
    CHECK(parse_summatory_method(method_name(m)) == m);
  }
  CHECK_FALSE(parse_summatory_method("fast").has_value());
}

TEST_CASE("sublinear mertens matches the sieve") {
  const auto table = build_mobius_table(300000);
  std::vector<std::int64_t> prefix(table.limit() + 1, 0);
  for (std::uint64_t n = 1; n <= table.limit(); ++n) prefix[n] = prefix[n - 1] + table.mu(n);
  MertensFunction mertens(300000);
  CHECK(mertens.table_limit() < 300000);
  for (std::uint64_t x : {1ull, 2ull, 10ull, 1000ull, 4567ull, 99999ull, 150000ull, 299999ull, 300000ull}) {
    CHECK(mertens(x) == prefix[x]);
  }
  CHECK(prefix[10] == -1);
}

TEST_CASE("formal series reproduce the counts") {
  CHECK(formal_series_check(1, 10).ok);
  CHECK(formal_series_check(3, 5).ok);
  const auto r = formal_series_check(8, 3);
  CHECK_MESSAGE(r.ok, r.detail);
  CHECK_FALSE(r.first_failing_m.has_value());
  CHECK_THROWS_AS(formal_series_check(0, 3), PreconditionError);
}

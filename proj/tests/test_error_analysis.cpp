#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "vispoints/error_analysis.hpp"
#include "vispoints/errors.hpp"

using namespace vispoints;

namespace {

Rational pow_ratio(std::uint64_t num, std::uint64_t den, unsigned e) {
  Integer a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), num, e);
  mpz_ui_pow_ui(b.get_mpz_t(), den, e);
  Rational q(a, b);
  q.canonicalize();
  return q;
}

std::vector<std::uint64_t> odd_primes_upto(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 3; p <= n; p += 2) {
    if (oracle::mobius(p) == -1) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("zeta enclosures") {
  for (unsigned s : {2u, 3u, 4u, 7u}) {
    const auto a = zeta_interval(s, 128);
    const auto b = zeta_interval(s, 128, ZetaTail{97, 9});
    const auto coarse = zeta_integral_enclosure(s, 1000, 128);
    CAPTURE(s);
    CHECK(a.width() <= std::ldexp(1.0, -120));
    CHECK(a.overlaps(b));
    CHECK(coarse.contains(a));
  }
  // zeta(2) = pi^2 / 6
  const auto pi = IntervalReal::pi(160);
  const auto ratio = zeta_interval(2, 160) * IntervalReal(Rational(6), 160) / (pi * pi);
  CHECK(ratio.contains(Rational(1)));
  CHECK(ratio.width() < 1e-40);
  // zeta(3) = 1.2020569031595942853997...
  CHECK(zeta_interval(3, 128).certainly_greater(Rational(Integer("12020569031595942853"), Integer("10000000000000000000"))));
  CHECK(zeta_interval(3, 128).certainly_less(Rational(Integer("12020569031595942854"), Integer("10000000000000000000"))));
  CHECK_THROWS_AS(zeta_interval(1, 64), PreconditionError);
}

TEST_CASE("enclosures nest under a precision change") {
  const auto hi = zeta_interval(3, 200);
  const auto lo = zeta_interval(3, 53);
  CHECK(lo.overlaps(hi));
  CHECK(hi.with_precision(53).contains(hi));
  const auto m = main_term(3, 1000);
  CHECK(main_term(3, 1000, zeta_interval(3, 53)).overlaps(m));
}

TEST_CASE("euler gamma") {
  const auto g = euler_gamma_interval(128);
  CHECK(g.width() <= std::ldexp(1.0, -56));
  CHECK(g.certainly_greater(Rational(Integer("5772156649015328606"), Integer("10000000000000000000"))));
  CHECK(g.certainly_less(Rational(Integer("5772156649015328607"), Integer("10000000000000000000"))));
  const auto g2 = euler_gamma_interval(128, 5000);
  CHECK(g.overlaps(g2));

  for (std::uint64_t n : {10ull, 100ull, 1000ull}) {
    const auto excess = harmonic_excess(n, 128);
    const auto lo = g + IntervalReal(Rational(1, 2 * n + 1), 128);
    const auto hi = g + IntervalReal(Rational(1, 2 * n), 128);
    CAPTURE(n);
    CHECK(lo.certainly_less(excess));
    CHECK(excess.certainly_less(hi));
  }
}

TEST_CASE("main and error terms") {
  CHECK(default_precision(3, 1000) == 3 * 10 + 64);
  const auto m31 = main_term(3, 1);
  CHECK(m31.certainly_greater(Rational(6655, 1000)));
  CHECK(m31.certainly_less(Rational(6656, 1000)));
  const auto m21 = main_term(2, 1);
  CHECK(m21.certainly_greater(Rational(2431, 1000)));
  CHECK(m21.certainly_less(Rational(2432, 1000)));
  CHECK(main_term(4, 0).contains_zero());
  CHECK(main_term(4, 0).width() == 0.0);

  const auto e31 = error_term(3, 1);
  CHECK(e31.certainly_greater(Rational(19344, 1000)));
  CHECK(e31.certainly_less(Rational(19345, 1000)));
  const auto e22 = error_term(2, 2);
  // 16 - 96/pi^2 = 6.27317...
  CHECK(e22.certainly_greater(Rational(6273, 1000)));
  CHECK(e22.certainly_less(Rational(6274, 1000)));

  const auto e3k = error_term(3, 1000);
  CHECK(e3k.magnitude_at_most(Rational(10 * 1000 * 1000)));
  CHECK(e3k.width_interval().certainly_less(error_width_target(3, 1000)));
  CHECK_THROWS_AS(error_term(3, 0), PreconditionError);
}

TEST_CASE("error signs are decidable for small r") {
  for (unsigned m : {3u, 4u}) {
    const auto rows = error_scan(m, 1, 1000, 1);
    for (const auto& row : rows) {
      CAPTURE(m);
      CAPTURE(row.r);
      REQUIRE((row.error.certain_sign() != 0 || row.error.width_interval().certainly_less(error_width_target(m, row.r))));
      REQUIRE(row.error.width_interval().certainly_less(error_width_target(m, row.r)));
    }
  }
}

TEST_CASE("fractional mobius sums") {
  CHECK(fractional_mobius_sum(2, 1, 1).value == 0);
  // {2/1} = {2/2} = 0, so r = 2 contributes nothing
  CHECK(fractional_mobius_sum(2, 1, 2).value == 0);
  CHECK(oracle::fractional_sum(2, 1, 2) == 0);
  CHECK(fractional_mobius_sum(2, 1, 3).value == Rational(-1, 8));
  for (unsigned m : {1u, 2u, 3u, 5u}) {
    for (unsigned k : {1u, 2u, 4u}) {
      for (std::uint64_t r : {1ull, 4ull, 30ull, 105ull, 211ull, 600ull}) {
        const auto s = fractional_mobius_sum(m, k, r).value;
        CAPTURE(m);
        CAPTURE(k);
        CAPTURE(r);
        REQUIRE(s == oracle::fractional_sum(m, k, r));
        REQUIRE(abs(s) <= generalized_harmonic(m, r));
      }
    }
  }
  CHECK(generalized_harmonic(2, 3) == Rational(49, 36));
  CHECK_THROWS_AS(fractional_mobius_sum(2, 0, 3), PreconditionError);
  CHECK_THROWS_AS(fractional_mobius_sum(2, 1, kTableGuard + 1), CapacityError);
}

TEST_CASE("certificate for m = 2 and 3") {
  for (unsigned m : {2u, 3u}) {
    const auto cert = certify_witness_bound(m, 100);
    CAPTURE(m);
    CHECK(cert.passes);
    CHECK(cert.upper < Rational(-1, 20));
    Rational direct = 0;
    for (const auto& t : cert.terms) direct += t.value;
    CHECK(direct == cert.head_extra);
    CHECK(cert.head == cert.head_extra - pow_ratio(1, 2, m + 1));
    CHECK(cert.upper == cert.head + cert.tail_bound);
    CHECK(cert.tail_bound == pow_ratio(1, 100, m - 1) / Rational(m - 1));
    CHECK(cert.tail_bound <= pow_ratio(1, 100, m - 1));
    CHECK(cert.head_extra < Rational(2, 5) * pow_ratio(1, 10, m - 1));
  }

  const auto cert = certify_witness_bound(2, 100);
  std::vector<std::pair<std::uint64_t, Rational>> expected;
  for (std::uint64_t p : odd_primes_upto(47)) expected.emplace_back(2 * p, Rational(1, 2 * 4 * p * p));
  for (std::uint64_t d : {30ull, 42ull, 66ull, 70ull, 78ull}) expected.emplace_back(d, Rational(-1, 2 * d * d));
  std::sort(expected.begin(), expected.end(), [](auto& a, auto& b) { return a.first < b.first; });
  REQUIRE(cert.terms.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(cert.terms[i].d == expected[i].first);
    CHECK(cert.terms[i].value == expected[i].second);
  }

  CHECK_THROWS_AS(certify_witness_bound(4, 100), PreconditionError);
  CHECK_THROWS_AS(certify_witness_bound(2, 5), PreconditionError);
}

TEST_CASE("certificate holds on actual witness radii") {
  // r = 3*5*7*...*97 is too large; the bound covers r divisible by all odd
  // primes up to the cutoff, so check a small cutoff against real sums.
  for (unsigned m : {2u, 3u}) {
    const auto cert = certify_witness_bound(m, 13);
    for (std::uint64_t k : {1ull, 17ull, 19ull}) {
      const std::uint64_t r = 3 * 5 * 7 * 11 * 13 * k;
      CAPTURE(m);
      CAPTURE(r);
      CHECK(fractional_mobius_sum(m, 1, r).value <= cert.upper);
    }
  }
}

TEST_CASE("certificate json") {
  const auto text = to_json(certify_witness_bound(3));
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("m") == 3);
  CHECK(j.at("cutoff") == 100);
  CHECK(j.at("passes") == true);
  for (const char* key : {"head", "head_extra", "tail_bound", "upper"}) {
    const std::string v = j.at(key);
    CHECK(v.find('/') != std::string::npos);
    CHECK(Rational(v) == Rational(v));
  }
  CHECK(Rational(std::string(j.at("tail_bound"))) == Rational(1, 20000));
  CHECK(rational_string(Rational(3)) == "3/1");
  CHECK(rational_string(Rational(-6, 4)) == "-3/2");
}

TEST_CASE("m >= 4 negativity") {
  CHECK(zeta_tail_condition(4));
  for (unsigned m = 4; m <= 64; ++m) CHECK(zeta_tail_condition(m));
  const auto rep = large_m_negativity_check(4, 2001, 2);
  CHECK(rep.passed());
  CHECK(rep.checked == 1000);
  CHECK_FALSE(rep.counterexample.has_value());
  CHECK(large_m_negativity_check(6, 999).passed());
  for (std::uint64_t r = 3; r <= 301; r += 2) REQUIRE(oracle::fractional_sum(4, 1, r) < 0);
  CHECK_THROWS_AS(large_m_negativity_check(3, 99), PreconditionError);
}

TEST_CASE("mobius partial sums approach 1/zeta") {
  CHECK(mobius_zeta_partial(2, 1) == 1);
  CHECK(mobius_zeta_partial(2, 4) == Rational(23, 36));
  for (unsigned i : {2u, 3u, 4u}) {
    const auto z = zeta_interval(i, 160);
    const auto inv = IntervalReal(Rational(1), 160) / z;
    for (std::uint64_t r : {10ull, 100ull, 1000ull, 10000ull}) {
      const auto dev = IntervalReal(mobius_zeta_partial(i, r), 160) - inv;
      CAPTURE(i);
      CAPTURE(r);
      CHECK(dev.magnitude_at_most(pow_ratio(1, r, i - 1) / Rational(i - 1)));
    }
  }
  const auto dev3 = IntervalReal(mobius_zeta_partial(3, 10000), 160) - IntervalReal(Rational(1), 160) / zeta_interval(3, 160);
  CHECK(dev3.magnitude_at_most(Rational(1, 10000000)));
}

TEST_CASE("witness scans") {
  const auto small = witness_scan(2, {3, 5, 7}, {1, 11, 13}, 10000);
  REQUIRE(small.rows.size() == 3);
  CHECK(small.rows[0].r == 105);
  CHECK(small.rows[1].r == 1155);
  CHECK(small.rows[2].r == 1365);
  CHECK(small.skipped.empty());
  for (const auto& row : small.rows) {
    CHECK(row.s == oracle::fractional_sum(2, 1, row.r));
    Integer phi_sum = 0;
    for (std::uint64_t n = 1; n <= row.r; ++n) phi_sum += static_cast<unsigned long>(oracle::totient(n));
    CHECK(row.count == 8 * phi_sum);
  }
  CHECK(witness_scan(3, {3, 5, 7}, {}, 10000).rows.empty());

  const auto capped = witness_scan(3, {3, 5, 7}, {1, 101}, 10000);
  CHECK(capped.rows.size() == 1);
  REQUIRE(capped.skipped.size() == 1);
  CHECK(capped.skipped[0] == 10605);

  CHECK_THROWS_AS(witness_scan(3, {3, 5}, {2}, 100), PreconditionError);
  CHECK_THROWS_AS(witness_scan(3, {3, 5}, {9}, 100), PreconditionError);
  CHECK_THROWS_AS(witness_scan(3, {2, 5}, {1}, 100), PreconditionError);
  CHECK_THROWS_AS(witness_scan(3, {9}, {1}, 100), PreconditionError);

  const auto w = witness_scan(3, {3, 5, 7, 11, 13}, {1}, 1000000, 2);
  REQUIRE(w.rows.size() == 1);
  CHECK(w.rows[0].r == 15015);
  CHECK(w.rows[0].s < Rational(-1, 20));
  CHECK(w.rows[0].error.width_interval().certainly_less(error_width_target(3, 15015)));
}

TEST_CASE("error scan rows and csv") {
  const auto rows = error_scan(3, 1, 3, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].count == 26);
  CHECK(rows[1].count == 98);
  CHECK(rows[2].count == 290);
  const auto two = error_scan(2, 10, 10, 1);
  REQUIRE(two.size() == 1);
  CHECK(two[0].count == 256);
  CHECK_THROWS_AS(error_scan(3, 0, 0, 1), PreconditionError);
  CHECK_THROWS_AS(error_scan(3, 5, 4, 1), PreconditionError);
  CHECK_THROWS_AS(error_scan(3, 1, 4, 0), PreconditionError);

  std::ostringstream out;
  write_error_csv(out, 3, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,r,V,main_mid,E_mid,E_norm_lo,E_norm_hi");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(n == 3);
  CHECK(out.str().find("3,1,26,6.65525898065,19.3447410194") != std::string::npos);

  const auto scan = error_scan(3, 1, 200, 7, 1);
  const auto scan4 = error_scan(3, 1, 200, 7, 4);
  std::ostringstream a, b;
  write_error_csv(a, 3, scan);
  write_error_csv(b, 3, scan4);
  CHECK(a.str() == b.str());
}

TEST_CASE("witness regression fixture") {
  // Recorded from the first certified run; r = 3*5*7*11*13.
  const auto w = witness_scan(3, {3, 5, 7, 11, 13}, {1}, 1000000);
  REQUIRE(w.rows.size() == 1);
  const auto& row = w.rows[0];
  CHECK(row.count == Integer("22531176234434"));
  CHECK(row.s_decimal == "-0.0596531468341");
  CHECK(row.error.certain_sign() == 1);
  CHECK(row.normalized.certainly_greater(Rational(Integer("98703410794242657"), Integer("10000000000000000"))));
  CHECK(row.normalized.certainly_less(Rational(Integer("98703410794242660"), Integer("10000000000000000"))));
  CHECK(row.s == oracle::fractional_sum(3, 1, 15015));
}

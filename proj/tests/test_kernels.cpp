#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "vispoints/arith_core.hpp"
#include "vispoints/kernels.hpp"

using namespace vispoints;
namespace k = vispoints::kernels;

namespace {

// |sum - exact| <= bound, compared as rationals.
bool within_bound(const k::CertifiedSum& s, const mpq_class& exact) {
  mpq_class diff = mpq_class(s.sum) - exact;
  if (diff < 0) diff = -diff;
  return diff <= mpq_class(s.error_bound);
}

std::vector<k::Isa> available() {
  std::vector<k::Isa> out{k::Isa::scalar};
  if (k::cpu_supports(k::Isa::avx2)) out.push_back(k::Isa::avx2);
  return out;
}

}  // namespace

TEST_CASE("isa names and selection") {
  CHECK(std::string(k::isa_name(k::Isa::scalar)) == "scalar");
  CHECK(std::string(k::isa_name(k::Isa::avx2)) == "avx2");
  CHECK(k::cpu_supports(k::Isa::scalar));
  CHECK(k::cpu_supports(k::active_isa()));
}

TEST_CASE("certified fractional sum encloses the exact value") {
  const auto mu = build_mobius_table(3000);
  for (auto isa : available()) {
    CAPTURE(k::isa_name(isa));
    for (unsigned m : {1u, 2u, 3u, 4u, 6u}) {
      for (unsigned kk : {1u, 2u, 3u}) {
        for (std::uint64_t r : {1ull, 2ull, 3ull, 5ull, 7ull, 8ull, 105ull, 999ull, 2999ull}) {
          const auto s = k::frac_mobius_sum_f64(mu.values(), r, m, kk, isa);
          REQUIRE_MESSAGE(within_bound(s, oracle::fractional_sum(m, kk, r)),
                          "m=" << m << " k=" << kk << " r=" << r);
          CHECK(s.error_bound >= 0.0);
          CHECK(s.abs_sum >= std::abs(s.sum));
        }
      }
    }
  }
}

TEST_CASE("scalar and avx2 fractional sums agree within their bounds") {
  if (!k::cpu_supports(k::Isa::avx2)) return;
  const auto mu = build_mobius_table(20000);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(1, 20000);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t r = trial < 16 ? static_cast<std::uint64_t>(trial + 1) : pick(rng);
    const unsigned m = 1 + trial % 6;
    const auto a = k::scalar::frac_mobius_sum_f64(mu.values(), r, m, 1);
    const auto b = k::avx2::frac_mobius_sum_f64(mu.values(), r, m, 1);
    CAPTURE(r);
    CAPTURE(m);
    REQUIRE(std::abs(a.sum - b.sum) <= a.error_bound + b.error_bound);
    REQUIRE(a.certainly_negative() == (a.sum + a.error_bound < 0));
  }
}

TEST_CASE("mertens prefix matches a plain running sum for every isa") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(-1, 1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 31u, 32u, 33u, 1000u, 4099u}) {
    std::vector<std::int8_t> mu(n);
    for (auto& v : mu) v = static_cast<std::int8_t>(pick(rng));
    std::vector<std::int64_t> expected(n);
    std::int64_t run = 17;
    for (std::size_t i = 0; i < n; ++i) expected[i] = run += mu[i];
    for (auto isa : available()) {
      std::vector<std::int64_t> out(n, -999);
      const auto last = k::mertens_prefix(mu, out, 17, isa);
      CHECK(out == expected);
      CHECK(last == run);
    }
  }
}

TEST_CASE("error bound helper scales with the term count") {
  CHECK(k::detail::frac_sum_error_bound(0.0, 0, 4) == 0.0);
  CHECK(k::detail::frac_sum_error_bound(1.0, 100, 4) < k::detail::frac_sum_error_bound(1.0, 1000, 4));
  CHECK(k::detail::frac_sum_error_bound(1.0, 10, 4) > 0.0);
}

#include "vispoints/arith_core.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "vispoints/errors.hpp"

namespace vispoints {

namespace {

constexpr std::array<char, 6> kCacheMagic = {'V', 'P', 'M', 'U', '1', '\0'};

void check_guard(const char* what, std::uint64_t limit) {
  if (limit > kTableGuard) throw CapacityError(what, limit, kTableGuard);
}

}  // namespace

MobiusTable MobiusTable::build(std::uint64_t limit) {
  if (limit == 0) throw PreconditionError("mobius table limit must be >= 1");
  check_guard("mobius table", limit);

  MobiusTable t;
  t.limit_ = limit;
  t.mu_.assign(limit + 1, 0);
  t.spf_.assign(limit + 1, 0);
  t.mu_[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] == 0) {
      t.spf_[i] = static_cast<std::uint32_t>(i);
      t.primes_.push_back(static_cast<std::uint32_t>(i));
      t.mu_[i] = -1;
    }
    const std::uint32_t spf_i = t.spf_[i];
    for (std::uint32_t p : t.primes_) {
      const std::uint64_t ip = i * p;
      if (p > spf_i || ip > limit) break;
      t.spf_[ip] = p;
      t.mu_[ip] = (p == spf_i) ? 0 : static_cast<std::int8_t>(-t.mu_[i]);
    }
  }
  return t;
}

MobiusTable MobiusTable::from_values(std::vector<std::int8_t> values) {
  if (values.empty()) throw PreconditionError("mobius table limit must be >= 1");
  check_guard("mobius table", values.size());
  for (std::int8_t v : values) {
    if (v < -1 || v > 1) throw FormatError("mobius value outside {-1, 0, 1}");
  }
  if (values.front() != 1) throw FormatError("mu(1) must be 1");
  MobiusTable t;
  t.limit_ = values.size();
  t.mu_.reserve(values.size() + 1);
  t.mu_.push_back(0);
  t.mu_.insert(t.mu_.end(), values.begin(), values.end());
  return t;
}

int MobiusTable::mu(std::uint64_t n) const {
  if (n == 0 || n > limit_) throw PreconditionError("mu(n) outside table range");
  return mu_[n];
}

std::uint32_t MobiusTable::smallest_prime_factor(std::uint64_t n) const {
  if (!has_factor_data()) throw PreconditionError("table carries no factor data");
  if (n < 2 || n > limit_) throw PreconditionError("spf(n) outside table range");
  return spf_[n];
}

void save_mobius_cache(const std::filesystem::path& path, const MobiusTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(kCacheMagic.data(), kCacheMagic.size());
  std::uint64_t n = table.limit();
  std::array<unsigned char, 8> le{};
  for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(n >> (8 * i));
  out.write(reinterpret_cast<const char*>(le.data()), le.size());
  std::vector<char> body(n);
  auto vals = table.values();
  for (std::uint64_t i = 0; i < n; ++i) body[i] = static_cast<char>(vals[i] + 1);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

MobiusTable load_mobius_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open sieve cache " + path.string());
  std::array<char, 6> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kCacheMagic) throw FormatError("bad sieve cache magic");
  std::array<unsigned char, 8> le{};
  in.read(reinterpret_cast<char*>(le.data()), le.size());
  if (!in) throw FormatError("truncated sieve cache header");
  std::uint64_t n = 0;
  for (int i = 7; i >= 0; --i) n = (n << 8) | le[i];
  if (n == 0) throw FormatError("sieve cache limit is zero");
  check_guard("sieve cache", n);

  std::vector<std::int8_t> values(n);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::uint64_t>(in.gcount()) != n) throw FormatError("sieve cache body shorter than limit");
  if (in.peek() != std::ifstream::traits_type::eof()) throw FormatError("sieve cache has trailing bytes");
  for (auto& v : values) {
    if (static_cast<unsigned char>(v) > 2) throw FormatError("sieve cache byte outside {0, 1, 2}");
    v = static_cast<std::int8_t>(v - 1);
  }
  return MobiusTable::from_values(std::move(values));
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int mobius_by_factorization(std::uint64_t n) {
  if (n == 0) throw PreconditionError("mu(0) is undefined");
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

Integer jordan_value(unsigned j, std::uint64_t n) {
  if (n == 0) throw PreconditionError("J_j(0) is undefined");
  if (j == 0) return n == 1 ? 1 : 0;
  Integer result = 1;
  for (auto [p, e] : factorize(n)) {
    Integer pj;
    mpz_ui_pow_ui(pj.get_mpz_t(), p, j);
    Integer lower;
    mpz_pow_ui(lower.get_mpz_t(), pj.get_mpz_t(), e - 1);
    // J_j(p^e) = p^{ej} - p^{(e-1)j}
    result *= lower * (pj - 1);
  }
  return result;
}

JordanTable build_jordan_table(unsigned j, std::uint64_t limit) {
  if (limit == 0) throw PreconditionError("jordan table limit must be >= 1");
  check_guard("jordan table", limit);
  if (j == 0) {
    JordanTable t{0, limit, std::vector<Integer>(limit, 0)};
    t.values[0] = 1;
    return t;
  }
  return build_jordan_table(j, MobiusTable::build(limit));
}

JordanTable build_jordan_table(unsigned j, const MobiusTable& sieve) {
  const std::uint64_t limit = sieve.limit();
  JordanTable t{j, limit, std::vector<Integer>(limit, 0)};
  t.values[0] = 1;
  if (j == 0) return t;
  if (!sieve.has_factor_data()) throw PreconditionError("jordan sieve needs factor data");

  Integer pj;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint64_t p = sieve.smallest_prime_factor(n);
    const std::uint64_t q = n / p;
    mpz_ui_pow_ui(pj.get_mpz_t(), p, j);
    if (q % p == 0) {
      t.values[n - 1] = t.values[q - 1] * pj;
    } else {
      t.values[n - 1] = t.values[q - 1] * (pj - 1);
    }
  }
  return t;
}

bool divisor_sum_check(unsigned j, std::uint64_t n) {
  if (n == 0) throw PreconditionError("divisor_sum_check needs n >= 1");
  std::vector<std::uint64_t> divisors{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t base = divisors.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * pk);
    }
  }
  Integer sum = 0;
  for (std::uint64_t d : divisors) sum += jordan_value(j, d);
  Integer nj;
  mpz_ui_pow_ui(nj.get_mpz_t(), n, j);
  return sum == nj;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BernoulliSequence bernoulli(unsigned max_index) {
  // Standard recurrence sum_{k=0}^{n} C(n+1, k) B_k = 0, which yields
  // B_1 = -1/2; the sign of B_1 is flipped at the end.
  std::vector<Rational> b(max_index + 1);
  b[0] = 1;
  for (unsigned n = 1; n <= max_index; ++n) {
    Rational acc = 0;
    for (unsigned k = 0; k < n; ++k) {
      if (b[k] == 0) continue;
      acc += Rational(binomial(n + 1, k)) * b[k];
    }
    b[n] = -acc / (n + 1);
    b[n].canonicalize();
  }
  if (max_index >= 1) b[1] = Rational(1, 2);
  return BernoulliSequence{std::move(b)};
}

PowerSumPolynomial::PowerSumPolynomial(unsigned exponent) : exponent_(exponent) {
  if (exponent == 0) throw PreconditionError("power sum exponent must be >= 1");
  init(bernoulli(exponent));
}

PowerSumPolynomial::PowerSumPolynomial(unsigned exponent, const BernoulliSequence& b)
    : exponent_(exponent) {
  if (exponent == 0) throw PreconditionError("power sum exponent must be >= 1");
  if (b.size() < exponent) throw PreconditionError("not enough Bernoulli numbers");
  init(b);
}

void PowerSumPolynomial::init(const BernoulliSequence& b) {
  const unsigned i = exponent_;
  coefficients_.assign(i + 1, 0);
  for (unsigned j = 0; j < i; ++j) {
    Rational c = Rational(binomial(i, j)) * b[j] / i;
    c.canonicalize();
    coefficients_[i - j] = c;
  }
  denom_ = 1;
  for (const auto& c : coefficients_) mpz_lcm(denom_.get_mpz_t(), denom_.get_mpz_t(), c.get_den_mpz_t());
  numer_.resize(i + 1);
  for (unsigned k = 0; k <= i; ++k) {
    numer_[k] = coefficients_[k].get_num() * (denom_ / coefficients_[k].get_den());
  }
}

Integer PowerSumPolynomial::operator()(const Integer& n) const {
  Integer acc = 0;
  for (unsigned k = exponent_ + 1; k-- > 0;) {
    acc *= n;
    acc += numer_[k];
  }
  if (!mpz_divisible_p(acc.get_mpz_t(), denom_.get_mpz_t())) {
    throw InternalError("Faulhaber polynomial produced a non-integer");
  }
  Integer out;
  mpz_divexact(out.get_mpz_t(), acc.get_mpz_t(), denom_.get_mpz_t());
  return out;
}

Integer PowerSumPolynomial::operator()(std::uint64_t n) const {
  Integer big;
  mpz_import(big.get_mpz_t(), 1, -1, sizeof n, 0, 0, &n);
  return (*this)(big);
}

Integer power_sum(unsigned i, std::uint64_t n) { return PowerSumPolynomial(i)(n); }

}  // namespace vispoints

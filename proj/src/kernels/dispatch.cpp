#include <cfloat>
#include <cstdlib>
#include <string_view>

#include "vispoints/errors.hpp"
#include "vispoints/kernels.hpp"

namespace vispoints::kernels {

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("VISPOINTS_ISA")) {
      std::string_view want(env);
      if (want == "scalar") return Isa::scalar;
      if (want == "avx2" && cpu_supports(Isa::avx2)) return Isa::avx2;
    }
    return cpu_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

namespace detail {

double frac_sum_error_bound(double abs_sum, std::uint64_t n, unsigned op_count) noexcept {
  // Each term carries at most op_count roundings; any summation order adds
  // at most (n - 1) more. Doubled for the rounding of abs_sum itself.
  const double u = DBL_EPSILON / 2;
  const double steps = static_cast<double>(n) + op_count;
  const double underflow = static_cast<double>(n) * op_count * DBL_TRUE_MIN;
  return 2.0 * steps * u * abs_sum + 2.0 * underflow;
}

}  // namespace detail

namespace {

void check_frac_args(std::span<const std::int8_t> mu, std::uint64_t r, unsigned k) {
  if (r == 0) throw PreconditionError("fractional sum needs r >= 1");
  if (k == 0) throw PreconditionError("fractional power k must be >= 1");
  if (mu.size() < r) throw PreconditionError("mobius values shorter than r");
  if (r >= (std::uint64_t{1} << 52)) throw PreconditionError("r too large for double kernel");
}

}  // namespace

CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r, unsigned m,
                                 unsigned k, Isa isa) {
  check_frac_args(mu, r, k);
  if (isa == Isa::avx2 && cpu_supports(Isa::avx2)) return avx2::frac_mobius_sum_f64(mu, r, m, k);
  return scalar::frac_mobius_sum_f64(mu, r, m, k);
}

std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                            std::int64_t carry, Isa isa) {
  if (out.size() < mu.size()) throw PreconditionError("mertens output shorter than input");
  if (isa == Isa::avx2 && cpu_supports(Isa::avx2)) return avx2::mertens_prefix(mu, out, carry);
  return scalar::mertens_prefix(mu, out, carry);
}

}  // namespace vispoints::kernels

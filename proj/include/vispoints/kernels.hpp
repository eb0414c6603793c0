#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and an AVX2
// variant; the variant is picked once at runtime from CPUID and can be forced
// with VISPOINTS_ISA=scalar|avx2. Results are never used for printed values,
// only for certified sign decisions, so lane order does not affect output.

#include <cstdint>
#include <span>

namespace vispoints::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;
bool cpu_supports(Isa isa) noexcept;

/// Best supported ISA, or the VISPOINTS_ISA override when it is supported.
Isa active_isa();

/// Double-precision evaluation of sum_{d=1}^{r} mu(d) ((r mod d)/d)^k / d^m
/// together with a rigorous bound: |sum - exact| <= error_bound.
struct CertifiedSum {
  double sum = 0.0;
  double abs_sum = 0.0;
  double error_bound = 0.0;

  bool certainly_negative() const noexcept { return sum + error_bound < 0.0; }
  bool certainly_positive() const noexcept { return sum - error_bound > 0.0; }
};

/// mu holds mu(1), mu(2), ...; requires mu.size() >= r and r < 2^52.
CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r,
                                 unsigned m, unsigned k, Isa isa);
inline CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r,
                                        unsigned m, unsigned k) {
  return frac_mobius_sum_f64(mu, r, m, k, active_isa());
}

/// out[i] = carry + mu[0] + ... + mu[i]; returns the final running total.
std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                            std::int64_t carry, Isa isa);
inline std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                                   std::int64_t carry = 0) {
  return mertens_prefix(mu, out, carry, active_isa());
}

namespace scalar {
CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r, unsigned m,
                                 unsigned k);
std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                            std::int64_t carry);
}  // namespace scalar

namespace avx2 {
CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r, unsigned m,
                                 unsigned k);
std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                            std::int64_t carry);
}  // namespace avx2

namespace detail {
/// Shared a-priori error bound for n terms of op_count flops each.
double frac_sum_error_bound(double abs_sum, std::uint64_t n, unsigned op_count) noexcept;
}  // namespace detail

}  // namespace vispoints::kernels

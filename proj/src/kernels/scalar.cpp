#include "vispoints/kernels.hpp"

namespace vispoints::kernels::scalar {

CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r, unsigned m,
                                 unsigned k) {
  CertifiedSum out;
  for (std::uint64_t d = 1; d <= r; ++d) {
    const int sign = mu[d - 1];
    const std::uint64_t rem = r % d;
    if (sign == 0 || rem == 0) continue;
    const double inv = 1.0 / static_cast<double>(d);
    const double frac = static_cast<double>(rem) * inv;
    double frac_k = frac;
    for (unsigned i = 1; i < k; ++i) frac_k *= frac;
    double inv_m = 1.0;
    for (unsigned i = 0; i < m; ++i) inv_m *= inv;
    const double term = frac_k * inv_m;
    out.sum += sign > 0 ? term : -term;
    out.abs_sum += term;
  }
  out.error_bound = detail::frac_sum_error_bound(out.abs_sum, r, m + k + 2);
  return out;
}

std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                            std::int64_t carry) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    carry += mu[i];
    out[i] = carry;
  }
  return carry;
}

}  // namespace vispoints::kernels::scalar

#include "vispoints/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <cstring>
#endif

namespace vispoints::kernels::avx2 {

#if defined(__AVX2__)

namespace {

inline __m256d load_mu4(const std::int8_t* p) {
  std::int32_t packed;
  std::memcpy(&packed, p, sizeof packed);
  return _mm256_cvtepi32_pd(_mm_cvtepi8_epi32(_mm_cvtsi32_si128(packed)));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r, unsigned m,
                                 unsigned k) {
  const __m256d rv = _mm256_set1_pd(static_cast<double>(r));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d dv = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
  __m256d sum = zero;
  __m256d abs_sum = zero;

  std::uint64_t d = 1;
  for (; d + 3 <= r; d += 4) {
    const __m256d sign = load_mu4(mu.data() + (d - 1));
    // r mod d, exact: r and d are integers below 2^52, so the quotient guess
    // is off by at most one and the fix-ups restore 0 <= rem < d.
    const __m256d q = _mm256_floor_pd(_mm256_div_pd(rv, dv));
    __m256d rem = _mm256_sub_pd(rv, _mm256_mul_pd(q, dv));
    rem = _mm256_add_pd(rem, _mm256_and_pd(_mm256_cmp_pd(rem, zero, _CMP_LT_OQ), dv));
    rem = _mm256_sub_pd(rem, _mm256_and_pd(_mm256_cmp_pd(rem, dv, _CMP_GE_OQ), dv));

    const __m256d inv = _mm256_div_pd(one, dv);
    const __m256d frac = _mm256_mul_pd(rem, inv);
    __m256d frac_k = frac;
    for (unsigned i = 1; i < k; ++i) frac_k = _mm256_mul_pd(frac_k, frac);
    __m256d inv_m = one;
    for (unsigned i = 0; i < m; ++i) inv_m = _mm256_mul_pd(inv_m, inv);
    const __m256d term = _mm256_mul_pd(_mm256_mul_pd(frac_k, inv_m), _mm256_mul_pd(sign, sign));
    sum = _mm256_add_pd(sum, _mm256_mul_pd(sign, term));
    abs_sum = _mm256_add_pd(abs_sum, term);
    dv = _mm256_add_pd(dv, step);
  }

  CertifiedSum out;
  out.sum = hsum(sum);
  out.abs_sum = hsum(abs_sum);
  for (; d <= r; ++d) {
    const int s = mu[d - 1];
    const std::uint64_t rem = r % d;
    if (s == 0 || rem == 0) continue;
    const double inv = 1.0 / static_cast<double>(d);
    const double frac = static_cast<double>(rem) * inv;
    double frac_k = frac;
    for (unsigned i = 1; i < k; ++i) frac_k *= frac;
    double inv_m = 1.0;
    for (unsigned i = 0; i < m; ++i) inv_m *= inv;
    const double term = frac_k * inv_m;
    out.sum += s > 0 ? term : -term;
    out.abs_sum += term;
  }
  out.error_bound = detail::frac_sum_error_bound(out.abs_sum, r, m + k + 3);
  return out;
}

std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                            std::int64_t carry) {
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= mu.size(); i += 4) {
    std::int32_t packed;
    std::memcpy(&packed, mu.data() + i, sizeof packed);
    __m256i x = _mm256_cvtepi8_epi64(_mm_cvtsi32_si128(packed));
    // In-register inclusive scan over four 64-bit lanes.
    x = _mm256_add_epi64(x, _mm256_blend_epi32(_mm256_permute4x64_epi64(x, 0x90), zero, 0x03));
    x = _mm256_add_epi64(x, _mm256_blend_epi32(_mm256_permute4x64_epi64(x, 0x40), zero, 0x0F));
    x = _mm256_add_epi64(x, _mm256_set1_epi64x(carry));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), x);
    carry = _mm256_extract_epi64(x, 3);
  }
  for (; i < mu.size(); ++i) {
    carry += mu[i];
    out[i] = carry;
  }
  return carry;
}

#else

CertifiedSum frac_mobius_sum_f64(std::span<const std::int8_t> mu, std::uint64_t r, unsigned m,
                                 unsigned k) {
  return scalar::frac_mobius_sum_f64(mu, r, m, k);
}

std::int64_t mertens_prefix(std::span<const std::int8_t> mu, std::span<std::int64_t> out,
                            std::int64_t carry) {
  return scalar::mertens_prefix(mu, out, carry);
}

#endif

}  // namespace vispoints::kernels::avx2

#include "zcp/simd/kernels.hpp"

#include <vector>

#if defined(__x86_64__) || defined(_M_X64)
#define ZCP_HAVE_X86 1
#include <immintrin.h>
#else
#define ZCP_HAVE_X86 0
#endif

namespace zcp::simd::avx2 {

#if ZCP_HAVE_X86

namespace {

__attribute__((target("avx2"))) inline std::int64_t hsum(__m256i v) {
  __m128i lo = _mm256_castsi256_si128(v);
  __m128i hi = _mm256_extracti128_si256(v, 1);
  __m128i s = _mm_add_epi64(lo, hi);
  return _mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1);
}

}  // namespace

// Lanes hold four consecutive output indices k..k+3. For a fixed input index
// i the needed b entries b[(k - i) mod n] are contiguous in the doubled copy
// bb[j] = b[j mod n], starting at k - i + n.
__attribute__((target("avx2"))) void cyclic_convolve(std::span<const std::int32_t> a,
                                                     std::span<const std::int32_t> b,
                                                     std::span<std::int64_t> out) {
  const std::size_t n = a.size();
  std::vector<std::int32_t> bb(2 * n + 4, 0);
  for (std::size_t j = 0; j < 2 * n; ++j) bb[j] = b[j % n];

  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t i = 0; i < n; ++i) {
      const __m256i ai = _mm256_set1_epi64x(a[i]);
      const __m128i raw =
          _mm_loadu_si128(reinterpret_cast<const __m128i*>(bb.data() + (k + n - i)));
      const __m256i bj = _mm256_cvtepi32_epi64(raw);
      acc = _mm256_add_epi64(acc, _mm256_mul_epi32(ai, bj));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + k), acc);
  }
  for (; k < n; ++k) {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<std::int64_t>(a[i]) * bb[k + n - i];
    out[k] = acc;
  }
}

__attribute__((target("avx2"))) std::int64_t dot(std::span<const std::int32_t> a,
                                                 std::span<const std::int32_t> b) {
  const std::size_t n = a.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i x =
        _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(a.data() + i)));
    const __m256i y =
        _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(b.data() + i)));
    acc = _mm256_add_epi64(acc, _mm256_mul_epi32(x, y));
  }
  std::int64_t total = hsum(acc);
  for (; i < n; ++i) total += static_cast<std::int64_t>(a[i]) * b[i];
  return total;
}

#else

void cyclic_convolve(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::int64_t> out) {
  scalar::cyclic_convolve(a, b, out);
}

std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  return scalar::dot(a, b);
}

#endif

}  // namespace zcp::simd::avx2

#include "zcp/simd/kernels.hpp"

namespace zcp::simd::scalar {

void cyclic_convolve(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::int64_t> out) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (k + n - i) % n;
      acc += static_cast<std::int64_t>(a[i]) * b[j];
    }
    out[k] = acc;
  }
}

std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<std::int64_t>(a[i]) * b[i];
  return acc;
}

}  // namespace zcp::simd::scalar

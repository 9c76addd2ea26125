#pragma once
// Small-integer inner loops with a scalar reference and an AVX2 variant.
//
// The exact-arithmetic code paths run on GMP integers; these kernels are a
// fast path taken only when every operand fits in int32 and the caller has
// bounded the accumulated sum below 2^62 (see convolution_fits / dot_fits).
// The active variant is chosen once at startup from CPUID and can be pinned
// with the environment variable ZCP_SIMD=scalar|avx2.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace zcp::simd {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
Isa active_isa();
std::string_view isa_name(Isa isa);

/// Pin the dispatch target. Returns false (and leaves the target unchanged)
/// if the requested ISA is not supported by this CPU.
bool force_isa(Isa isa);

/// True when n products of magnitude <= max_a * max_b cannot overflow int64
/// and all operands fit int32.
bool convolution_fits(std::uint64_t max_a, std::uint64_t max_b, std::size_t n);

/// out[k] = sum_i a[i] * b[(k - i) mod n], n = a.size() = b.size() = out.size().
void cyclic_convolve(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::int64_t> out);

std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b);

namespace scalar {
void cyclic_convolve(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::int64_t> out);
std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
}  // namespace scalar

namespace avx2 {
// Callable only when avx2_available().
void cyclic_convolve(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::int64_t> out);
std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
}  // namespace avx2

}  // namespace zcp::simd

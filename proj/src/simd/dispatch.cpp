#include <atomic>
#include <cstdlib>
#include <string>

#include "zcp/simd/kernels.hpp"

namespace zcp::simd {

namespace {

bool detect_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  const bool has = detect_avx2();
  if (const char* env = std::getenv("ZCP_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && has) return Isa::Avx2;
  }
  return has ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

bool avx2_available() {
  static const bool has = detect_avx2();
  return has;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

bool convolution_fits(std::uint64_t max_a, std::uint64_t max_b, std::size_t n) {
  constexpr std::uint64_t kI32 = 0x7fffffffULL;
  if (max_a > kI32 || max_b > kI32) return false;
  const unsigned __int128 bound = static_cast<unsigned __int128>(max_a) * max_b * n;
  return bound < (static_cast<unsigned __int128>(1) << 62);
}

void cyclic_convolve(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::int64_t> out) {
  if (active_isa() == Isa::Avx2)
    avx2::cyclic_convolve(a, b, out);
  else
    scalar::cyclic_convolve(a, b, out);
}

std::int64_t dot(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  return active_isa() == Isa::Avx2 ? avx2::dot(a, b) : scalar::dot(a, b);
}

}  // namespace zcp::simd

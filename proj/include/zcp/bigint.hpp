#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zcp {

using Int = mpz_class;
using IntVec = std::vector<Int>;

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor_mod(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// g = gcd(a, b) >= 0 with x*a + y*b = g.
inline void gcdext(Int& g, Int& x, Int& y, const Int& a, const Int& b) {
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

inline bool fits_i64(const Int& a) { return a.fits_slong_p() && sizeof(long) == 8; }

inline std::optional<std::int64_t> to_i64(const Int& a) {
  if (!a.fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(a.get_si());
}

inline Int from_i64(std::int64_t v) { return Int(static_cast<long>(v)); }

inline Int ipow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

bool is_prime(long n);

std::string to_string(const IntVec& v);

}  // namespace zcp

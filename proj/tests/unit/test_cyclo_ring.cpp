#include "doctest.h"
#include "gen.hpp"
#include "zcp/cyclo_ring.hpp"
#include "zcp/error.hpp"
#include "zcp/simd/kernels.hpp"

using namespace zcp;

namespace {

// Oracle: binomial expansion t^{p-1} = sum_i C(p-1, i) (-1)^{p-1-i} x^i, so
// p h = t^{p-1} - s coefficientwise.
IntVec h_by_binomials(unsigned p) {
  IntVec h(p);
  Int binom = 1;
  for (unsigned i = 0; i < p; ++i) {
    Int term = ((p - 1 - i) % 2 == 0) ? binom : Int(-binom);
    h[i] = (term - 1) / Int(p);
    binom = binom * (p - 1 - i) / (i + 1);
  }
  while (!h.empty() && h.back() == 0) h.pop_back();
  return h;
}

RingElt random_elt(testgen::Gen& g, unsigned p, long bound) {
  return RingElt(p, g.vec(p, -bound, bound));
}

}  // namespace

TEST_CASE("h for p = 2 and p = 3") {
  CHECK(solve_t_power_identities(2).h == PolyZ::constant(-1));
  CHECK(solve_t_power_identities(3).h == PolyZ(IntVec{0, -1}));
}

TEST_CASE("h matches the binomial oracle") {
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
    CAPTURE(p);
    auto ids = solve_t_power_identities(p);
    CHECK(ids.h.coeffs() == h_by_binomials(p));
    CHECK(ids.h.eval(1) == -1);
    CHECK(verify_t_power_identities(ids));
    CHECK(ids.rounds.size() == p);  // starting state + p-1 substitutions
  }
}

TEST_CASE("identities re-derived independently") {
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    CAPTURE(p);
    auto ids = solve_t_power_identities(p);
    PolyZ t = t_poly(), s = s_poly(p);
    CHECK(pow(t, p - 1) == Int(p) * ids.h + s);
    CHECK(PolyZ::constant(p) == -pow(t, p - 1) + pow(t, p) * ids.f + s * ids.g);
    CHECK(ids.h == t * ids.beta - PolyZ::constant(1));
  }
}

TEST_CASE("non-prime p is rejected") {
  CHECK_THROWS_AS(solve_t_power_identities(4), PreconditionError);
  CHECK_THROWS_AS(solve_t_power_identities(1), PreconditionError);
  CHECK_THROWS_AS(solve_t_power_identities(9), PreconditionError);
}

TEST_CASE("t-power expansion") {
  for (unsigned p : {2u, 3u, 5u, 7u})
    for (unsigned k = 1; k <= 5; ++k) {
      CAPTURE(p);
      CAPTURE(k);
      CHECK(check_t_power_expansion(p, k));
    }
}

TEST_CASE("ring basics") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    RingElt t = RingElt::t(p), s = RingElt::s(p);
    CHECK((t * s).is_zero());
    CHECK(s * s == Int(p) * s);
    CHECK(RingElt::alpha_pow(p, 1).pow(p) == RingElt::one(p));
    CHECK(augment(s) == p);
    CHECK(augment(t) == 0);
  }
}

TEST_CASE("property: f s = f(1) s and augmentation is multiplicative") {
  testgen::Gen g(7);
  for (int trial = 0; trial < 200; ++trial) {
    unsigned p = std::vector<unsigned>{2, 3, 5, 7, 11}[g.range(0, 4)];
    RingElt f = random_elt(g, p, 50), h = random_elt(g, p, 50);
    CHECK(f * RingElt::s(p) == augment(f) * RingElt::s(p));
    CHECK(augment(f * h) == augment(f) * augment(h));
    CHECK(f * h == h * f);
  }
}

TEST_CASE("fast product agrees with the GMP reference on both ISAs") {
  testgen::Gen g(8);
  simd::Isa before = simd::active_isa();
  for (simd::Isa isa : {simd::Isa::Scalar, simd::Isa::Avx2}) {
    if (!simd::force_isa(isa)) continue;
    for (int trial = 0; trial < 200; ++trial) {
      unsigned p = std::vector<unsigned>{2, 3, 5, 7, 11, 13, 31}[g.range(0, 6)];
      long bound = trial % 4 == 0 ? 3000000000L : 100000;  // first case forces GMP path
      RingElt a = random_elt(g, p, bound), b = random_elt(g, p, bound);
      CHECK(ring_mul(a, b) == ring_mul_reference(a, b));
    }
  }
  simd::force_isa(before);
}

TEST_CASE("mismatched p") {
  CHECK_THROWS_AS(ring_mul(RingElt::one(3), RingElt::one(5)), PreconditionError);
}

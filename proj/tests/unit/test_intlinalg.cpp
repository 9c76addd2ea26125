#include <functional>
#include <numeric>

#include "doctest.h"
#include "gen.hpp"
#include "zcp/error.hpp"
#include "zcp/intlinalg.hpp"
#include "zcp/simd/kernels.hpp"

using namespace zcp;

namespace {

using LL = long long;
using Small = std::vector<std::vector<LL>>;

Small to_small(const IntMatrix& m) {
  Small s(m.rows(), std::vector<LL>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s[i][j] = m(i, j).get_si();
  return s;
}

// Cofactor expansion; small matrices only.
LL cofactor_det(const Small& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  LL d = 0;
  for (std::size_t c = 0; c < n; ++c) {
    Small minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<LL> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    LL term = a[0][c] * cofactor_det(minor);
    d += (c % 2 == 0) ? term : -term;
  }
  return d;
}

void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out,
             std::vector<std::size_t>& cur, std::size_t start = 0) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

// Invariant factors via determinantal divisors d_k = gcd of k x k minors.
std::vector<LL> invariant_factors_oracle(const IntMatrix& m) {
  Small a = to_small(m);
  std::vector<LL> out;
  LL prev = 1;
  for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(m.rows(), k, rs, cur);
    subsets(m.cols(), k, cs, cur);
    LL g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        Small sub(k, std::vector<LL>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[r[i]][c[j]];
        g = std::gcd(g, cofactor_det(sub));
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

// Cramer's rule membership for a full-rank square basis.
bool member_by_cramer(const IntMatrix& basis, const std::vector<LL>& v) {
  Small b = to_small(basis);
  LL d = cofactor_det(b);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Small bi = b;
    for (std::size_t r = 0; r < b.size(); ++r) bi[r][i] = v[r];
    if (cofactor_det(bi) % d != 0) return false;
  }
  return true;
}

void check_hnf_shape(const HnfResult& h) {
  for (std::size_t j = 0; j < h.H.cols(); ++j) {
    if (j >= h.rank()) {
      CHECK(h.H.column(j) == IntVec(h.H.rows()));
      continue;
    }
    std::size_t r = h.pivot_rows[j];
    if (j > 0) CHECK(r > h.pivot_rows[j - 1]);
    for (std::size_t i = 0; i < r; ++i) CHECK(h.H(i, j) == 0);
    CHECK(h.H(r, j) > 0);
    for (std::size_t k = 0; k < j; ++k) {
      CHECK(h.H(r, k) >= 0);
      CHECK(h.H(r, k) < h.H(r, j));
    }
  }
}

}  // namespace

TEST_CASE("hnf worked example") {
  IntMatrix a = IntMatrix::from_rows({{2, 4}, {3, 5}});
  HnfResult h = hnf(a, Track::TransformAndInverse);
  CHECK(h.H == IntMatrix::from_rows({{2, 0}, {0, 1}}));  // (4,5) - 2(2,3) = (0,-1)
  CHECK(a * h.U == h.H);
  CHECK((h.U * h.U_inv).is_identity());
}

TEST_CASE("property: hnf invariants and canonicity") {
  testgen::Gen g(101);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t m = g.range(1, 6), n = g.range(1, 6);
    IntMatrix a = g.matrix(m, n, -9, 9);
    if (g.coin(0.3) && n > 1)
      for (std::size_t i = 0; i < m; ++i) a(i, n - 1) = a(i, 0) * 3;  // force dependence
    HnfResult h = hnf(a, Track::TransformAndInverse);
    check_hnf_shape(h);
    CHECK(a * h.U == h.H);
    CHECK((h.U * h.U_inv).is_identity());
    CHECK(abs(det(h.U)) == 1);
    HnfResult h2 = hnf(a * g.unimodular(n), Track::None);
    CHECK(h2.H == h.H);
  }
}

TEST_CASE("property: snf against determinantal divisors") {
  testgen::Gen g(102);
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t m = g.range(1, 4), n = g.range(1, 4);
    IntMatrix a = g.matrix(m, n, -6, 6);
    SnfResult s = snf(a, true);
    CHECK(s.U * a * s.V == s.S);
    CHECK((s.U * s.U_inv).is_identity());
    CHECK((s.V * s.V_inv).is_identity());
    auto oracle = invariant_factors_oracle(a);
    REQUIRE(s.rank == oracle.size());
    for (std::size_t i = 0; i < s.rank; ++i) CHECK(s.S(i, i) == Int(static_cast<long>(oracle[i])));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j || i >= s.rank) CHECK(s.S(i, j) == 0);
  }
}

TEST_CASE("cokernel invariants") {
  CHECK(cokernel_invariants(IntMatrix::from_rows({{2, 0}, {0, 3}})).to_string() == "Z/6");
  CHECK(cokernel_invariants(IntMatrix::from_rows({{2, 4}, {2, 4}, {0, 0}})).to_string() == "Z/2 + Z + Z");
  CHECK(cokernel_invariants(IntMatrix::identity(3)).to_string() == "0");
  CHECK(cokernel_invariants(IntMatrix(2, 0)).free_rank == 2);
}

TEST_CASE("property: kernel") {
  testgen::Gen g(103);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = g.range(1, 5), n = g.range(1, 7);
    IntMatrix a = g.matrix(m, n, -5, 5);
    Lattice k = kernel_basis(a);
    CHECK((a * k.basis()).is_zero());
    CHECK(k.rank() == n - rank(a));
    CHECK(k.is_primitive());
  }
}

TEST_CASE("property: intersection and membership by Cramer") {
  testgen::Gen g(104);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = g.range(2, 3);
    IntMatrix b1, b2;
    do b1 = g.matrix(n, n, -4, 4); while (det(b1) == 0);
    do b2 = g.matrix(n, n, -4, 4); while (det(b2) == 0);
    Lattice l1 = Lattice::from_generators(b1), l2 = Lattice::from_generators(b2);
    Lattice li = lattice_intersect(l1, l2);
    REQUIRE(li.rank() == n);
    const long box = 6;
    std::vector<LL> v(n);
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
      if (i == n) {
        IntVec w(n);
        for (std::size_t r = 0; r < n; ++r) w[r] = static_cast<long>(v[r]);
        bool in1 = member_by_cramer(b1, v), in2 = member_by_cramer(b2, v);
        CHECK(l1.contains(w) == in1);
        CHECK(li.contains(w) == (in1 && in2));
        return;
      }
      for (long x = -box; x <= box; ++x) {
        v[i] = x;
        walk(i + 1);
      }
    };
    walk(0);
    auto q = quotient_invariants(Lattice::full(n), l1);
    Int order = 1;
    for (const auto& f : q.factors) order *= f;
    CHECK(order == abs(det(b1)));
    CHECK(q.free_rank == 0);
  }
}

TEST_CASE("reduce gives canonical coset representatives") {
  testgen::Gen g(105);
  Lattice l = Lattice::from_generators(IntMatrix::from_rows({{3, 1}, {0, 4}}));
  for (int trial = 0; trial < 100; ++trial) {
    IntVec v = g.vec(2, -30, 30), w = g.vec(2, -5, 5);
    IntVec shifted = v;
    IntVec lw = l.basis() * w;
    for (std::size_t i = 0; i < 2; ++i) shifted[i] += lw[i];
    CHECK(l.reduce(v) == l.reduce(shifted));
  }
}

TEST_CASE("integer systems") {
  testgen::Gen g(106);
  for (int trial = 0; trial < 80; ++trial) {
    IntMatrix a = g.matrix(g.range(1, 5), g.range(1, 5), -6, 6);
    IntVec x0 = g.vec(a.cols(), -4, 4);
    IntVec b = a * x0;
    auto x = solve_integer_system(a, b);
    REQUIRE(x);
    CHECK(a * *x == b);
  }
  CHECK_FALSE(solve_integer_system(IntMatrix::from_rows({{2}}), IntVec{1}));
}

TEST_CASE("unimodular completion and inverse") {
  testgen::Gen g(107);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = g.range(1, 5), k = g.range(0, n);
    IntMatrix w = g.unimodular(n);
    IntMatrix b = w.columns(0, k);
    auto c = unimodular_completion(b);
    REQUIRE(c);
    CHECK(c->columns(0, k) == b);
    CHECK(abs(det(*c)) == 1);
    CHECK((w * inverse_unimodular(w)).is_identity());
  }
  CHECK_FALSE(unimodular_completion(IntMatrix::from_rows({{2}, {0}})));
  CHECK_THROWS_AS(inverse_unimodular(IntMatrix::from_rows({{2}})), PreconditionError);
}

TEST_CASE("fast matrix product agrees with the reference path") {
  testgen::Gen g(108);
  simd::Isa before = simd::active_isa();
  for (simd::Isa isa : {simd::Isa::Scalar, simd::Isa::Avx2}) {
    if (!simd::force_isa(isa)) continue;
    for (int trial = 0; trial < 60; ++trial) {
      IntMatrix a = g.matrix(g.range(1, 9), g.range(1, 20), -100000, 100000);
      IntMatrix b = g.matrix(a.cols(), g.range(1, 9), -100000, 100000);
      CHECK(a * b == multiply_reference(a, b));
    }
  }
  simd::force_isa(before);
}

TEST_CASE("bareiss determinant against cofactors") {
  testgen::Gen g(109);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix a = g.matrix(g.range(1, 5), 0, 0, 0);
    a = g.matrix(a.rows(), a.rows(), -7, 7);
    CHECK(det(a) == Int(static_cast<long>(cofactor_det(to_small(a)))));
  }
}

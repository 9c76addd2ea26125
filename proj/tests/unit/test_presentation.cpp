#include <map>

#include "doctest.h"
#include "zcp/error.hpp"
#include "zcp/lattice_props.hpp"
#include "zcp/presentation.hpp"

using namespace zcp;

namespace {

AugPresentation aug(const std::string& spec, unsigned p) { return build_aug(build_module(parse_modspec(spec), p)); }

// Oracle for N_M: brute-force kernel membership over a box, compared to the
// lattice on the same box.
void box_oracle(const AugPresentation& pres, long box) {
  const std::size_t n = pres.size();
  if (n > 4) return;
  std::vector<long> c(n, -box);
  for (;;) {
    IntVec v(n);
    IntVec image(pres.M.ambient_rank());
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = c[i];
      for (std::size_t r = 0; r < image.size(); ++r) image[r] += c[i] * pres.elements[i][r];
    }
    CHECK(pres.N.contains(v) == pres.M.relations().contains(image));
    std::size_t i = 0;
    while (i < n && ++c[i] > box) c[i++] = -box;
    if (i == n) break;
  }
}

}  // namespace

TEST_CASE("augmentation presentations of small modules") {
  AugPresentation z = aug("0", 2);
  CHECK(z.size() == 1);
  CHECK(z.N == Lattice::full(1));

  AugPresentation z2 = aug("triv(2)", 2);
  CHECK(z2.N == Lattice::from_generators(IntMatrix::from_rows({{1, 0}, {0, 2}})));
  box_oracle(z2, 4);

  AugPresentation r2 = aug("cyclicR(2,1)", 2);
  CHECK(r2.N.rank() == 4);
  CHECK(r2.N.is_full_rank());
  box_oracle(r2, 2);
  CHECK(r2.N.contains(r2.N.image(r2.action)));
  for (std::size_t j = 0; j < r2.N.rank(); ++j)
    CHECK(r2.M.relations().contains(r2.pi * r2.N.basis().column(j)));
  CHECK_THROWS_AS(build_aug(build_module(ModSpec::free_r(1), 2)), PreconditionError);
}

TEST_CASE("R/(q^k) bases follow the displayed formulas") {
  InvariantBasis b = basis_R_mod_qk(2, 1, 2);
  REQUIRE(b.orbit_blocks.size() == 1);
  CHECK(b.orbit_blocks[0] == std::vector<IntVec>{{0, 2, 0, 0}, {0, 0, 2, 0}});
  CHECK(b.fixed == std::vector<IntVec>{{1, 0, 0, 0}, {0, -1, -1, 1}});
  CHECK(b.size() == 4);

  InvariantBasis b3 = basis_R_mod_qk(3, 1, 2);
  CHECK(b3.orbit_blocks.size() == 3);  // two xi orbits and the 3e_i orbit
  CHECK(b3.fixed.size() == 3);
  CHECK(b3.size() == 9);

  for (auto [q, k, p] : {std::tuple{2L, 1L, 2u}, {3L, 1L, 2u}, {2L, 2L, 2u}, {5L, 1L, 2u}, {2L, 1L, 3u},
                         {3L, 1L, 3u}, {2L, 1L, 5u}}) {
    AugPresentation pres = build_aug(build_module(ModSpec::cyclic_r(q, k), p));
    InvariantBasis bq = basis_R_mod_qk(pres);
    CHECK(check_invariant_basis(bq, pres.N, pres.action, p) == "");
  }
}

TEST_CASE("trivial modules") {
  AugPresentation z2 = aug("triv(2)", 2);
  InvariantBasis b = basis_trivial(z2);
  CHECK(b.fixed == std::vector<IntVec>{{1, 0}, {0, 2}});
  for (std::string s : {"triv(1)", "triv(5)", "triv(2) + triv(2)", "triv(3) + triv(2)"}) {
    AugPresentation pres = aug(s, 3);
    CHECK(check_invariant_basis(basis_trivial(pres), pres.N, pres.action, 3) == "");
  }
  CHECK_THROWS_AS(basis_trivial(aug("cyclicR(2,1)", 2)), PreconditionError);
}

TEST_CASE("direct sum assembly") {
  AugPresentation a = aug("triv(2)", 2), b = aug("triv(2)", 2);
  DirectSumBasis d = assemble_direct_sum(a, b, basis_trivial(a), basis_trivial(b));
  CHECK(d.l_elements.size() == 1);
  CHECK(d.n3.fixed.size() == 1);
  CHECK(d.n3.orbit_blocks.empty());
  CHECK(d.combined().size() == 4);
  CHECK(check_invariant_basis(d.combined(), d.pres.N, d.pres.action, 2) == "");

  AugPresentation zero = aug("0", 2);
  AugPresentation r = aug("cyclicR(3,1)", 2);
  DirectSumBasis dz = assemble_direct_sum(r, zero, basis_R_mod_qk(r), basis_trivial(zero));
  CHECK(dz.l_elements.empty());
  CHECK(dz.n3.size() == 0);
  CHECK(check_invariant_basis(dz.combined(), dz.pres.N, dz.pres.action, 2) == "");

  InvariantBasis no_zero = basis_trivial(a);
  no_zero.fixed.erase(no_zero.fixed.begin());
  CHECK_THROWS_AS(assemble_direct_sum(a, b, no_zero, basis_trivial(b)), PreconditionError);
}

TEST_CASE("property: direct sum blocks on random pairs") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    unsigned p = trial % 3 == 2 ? 3 : 2;
    ModSpec s1, s2;
    long o1, o2;
    do {
      s1 = random_spec(rng, p, 16);
      s2 = random_spec(rng, p, 16);
      o1 = build_module(s1, p).order().get_si();
      o2 = build_module(s2, p).order().get_si();
    } while (!s1.is_building_block_tree() || !s2.is_building_block_tree() || o1 * o2 > 64);
    CAPTURE(s1.to_string());
    CAPTURE(s2.to_string());
    AugPresentation p1 = build_aug(build_module(s1, p)), p2 = build_aug(build_module(s2, p));
    auto b1 = constructive_basis(p1), b2 = constructive_basis(p2);
    REQUIRE(b1);
    REQUIRE(b2);
    DirectSumBasis d = assemble_direct_sum(p1, p2, *b1, *b2);
    CHECK(d.combined().size() == static_cast<std::size_t>(o1 * o2));
    CHECK(d.l_elements.size() == static_cast<std::size_t>((o1 - 1) * (o2 - 1)));
    CHECK(check_invariant_basis(d.combined(), d.pres.N, d.pres.action, p) == "");
    // N_3 is closed under alpha, which moves xi_x to xi_{alpha x}.
    Lattice n3 = Lattice::from_generators(d.n3.matrix());
    CHECK(n3.contains(n3.image(d.pres.action)));
  }
}

TEST_CASE("constructive bases for spec trees") {
  for (std::string s : {"cyclicR(2,1) + triv(3)", "triv(2) + triv(2) + cyclicR(3,1)", "(triv(2) + triv(3)) + triv(2)"}) {
    AugPresentation pres = aug(s, 2);
    auto b = constructive_basis(pres);
    REQUIRE(b);
    CHECK(check_invariant_basis(*b, pres.N, pres.action, 2) == "");
    SearchResult r = invariant_basis_for(pres, SearchOptions{});
    CHECK(r.route == "constructive");
    CHECK(r.k == 0);
  }
  CHECK_FALSE(constructive_basis(aug("cyclic(5,4)", 2)));
}

TEST_CASE("search on modules outside the building blocks") {
  AugPresentation pres = aug("cyclic(5,4)", 2);
  SearchResult r = invariant_basis_for(pres, SearchOptions{});
  Lattice nk = stabilized_lattice(pres.N, 2, r.k);
  CHECK(check_invariant_basis(r.basis, nk, stabilized_action(pres.action, 2, r.k), 2) == "");

  // Z with alpha = -1 is the cyclotomic lattice for p = 2.
  CHECK_THROWS_AS(find_invariant_basis(Lattice::full(1), IntMatrix::from_rows({{-1}}), 2, SearchOptions{}),
                  NotNonCyclotomic);
  // Regular representation.
  SearchResult reg = find_invariant_basis(Lattice::full(3), IntMatrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}),
                                          3, SearchOptions{});
  CHECK(reg.k == 0);
  CHECK(reg.basis.orbit_blocks.size() == 1);
}

TEST_CASE("property: search on random modules") {
  Rng rng(77);
  std::map<unsigned, int> ks;
  for (int trial = 0; trial < 40; ++trial) {
    unsigned p = trial % 2 ? 3 : 2;
    FinMod m = random_module(rng, p, 32);
    AugPresentation pres = build_aug(m);
    SearchOptions opts;
    opts.seed = trial;
    SearchResult r = invariant_basis_for(pres, opts);
    ks[r.k]++;
    CHECK(check_invariant_basis(r.basis, stabilized_lattice(pres.N, p, r.k),
                                stabilized_action(pres.action, p, r.k), p) == "");
  }
  for (auto [k, count] : ks) MESSAGE("k = " << k << ": " << count << " modules");
}

TEST_CASE("stabilized presentations") {
  SearchOptions opts;
  StabilizedPresentation z2 = stabilize_presentation(build_module(ModSpec::triv(2), 2), opts);
  CHECK(z2.k == 0);
  CHECK(z2.n2.orbit_blocks.empty());
  CHECK(z2.n2.fixed == std::vector<IntVec>{{1, 0}, {0, 1}});
  CHECK(z2.cover == std::vector<std::size_t>{0, 1});
  CHECK(z2.exact);
  CHECK(z2.cover_valid);

  StabilizedPresentation r2 = stabilize_presentation(build_module(ModSpec::cyclic_r(2, 1), 2), opts);
  auto n2 = r2.n2.vectors();
  for (std::size_t x = 0; x < 4; ++x) {
    IntVec hat(4);
    hat[x] = 1;
    CHECK(n2[r2.cover[x]] == hat);
  }
  CHECK(r2.exact);

  StabilizedPresentation padded = stabilize_presentation(build_module(ModSpec::cyclic_r(2, 1), 2), opts, 2);
  CHECK(padded.k == 2);
  CHECK(padded.exact);
  CHECK(padded.cover_valid);
}

TEST_CASE("windowed basis of N_R") {
  for (auto [p, radius] : {std::pair{2u, 1L}, {2u, 2L}, {3u, 1L}}) {
    WindowedRBasis w = windowed_R_basis(p, radius);
    CHECK(w.independent);
    CHECK(w.spans);
    CHECK(w.equivariant);
    CHECK(w.basis.size() == w.window.size() - p);
  }
}

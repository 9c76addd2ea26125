#include <functional>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "zcp/error.hpp"
#include "zcp/zmod.hpp"

using namespace zcp;

namespace {

long spec_order(const ModSpec& s, unsigned p) {  // product of leaf orders
  switch (s.kind) {
    case ModSpec::Kind::TrivCyclic:
    case ModSpec::Kind::CyclicTwisted:
      return s.n;
    case ModSpec::Kind::CyclicR: {
      long o = 1;
      for (long i = 0; i < s.k * static_cast<long>(p); ++i) o *= s.q;
      return o;
    }
    case ModSpec::Kind::Sum: {
      long o = 1;
      for (const auto& c : s.children) o *= spec_order(c, p);
      return o;
    }
    default:
      return -1;
  }
}

// Brute-force subgroup sizes straight from the element list.
std::set<std::size_t> brute_image(const FinMod& m, const std::function<IntVec(const IntVec&)>& f) {
  std::set<std::size_t> out;
  for (const auto& x : m.enumerate()) out.insert(m.index_of(f(x)));
  return out;
}

std::size_t brute_kernel(const FinMod& m, const std::function<IntVec(const IntVec&)>& f) {
  std::size_t n = 0;
  for (const auto& x : m.enumerate())
    if (m.index_of(f(x)) == 0) ++n;
  return n;
}

IntVec t_of(const FinMod& m, const IntVec& x) {
  IntVec ax = m.act(x);
  for (std::size_t i = 0; i < x.size(); ++i) ax[i] -= x[i];
  return m.canonical(ax);
}

}  // namespace

TEST_CASE("parser round trip and errors") {
  for (std::string s : {"triv(5)", "cyclicR(2,1)", "freeR(2)", "triv(2) + triv(3)",
                        "cyclic(5,4)", "0", "cyclicR(3,1) + (triv(2) + triv(4))", "triv(0)"}) {
    CHECK(parse_modspec(s).to_string() == s);
  }
  CHECK(parse_modspec(" triv( 5 )+cyclicR(2 ,2)").to_string() == "triv(5) + cyclicR(2,2)");
  for (std::string bad : {"", "triv", "triv(", "cyclicR(4,1)", "foo(1)", "triv(2) +", "freeR(0)", "triv(2))"})
    CHECK_THROWS_AS(parse_modspec(bad), ParseError);
}

TEST_CASE("building blocks") {
  FinMod r2 = build_module(parse_modspec("cyclicR(2,1)"), 2);
  CHECK(r2.order() == 4);
  auto e = r2.enumerate();
  REQUIRE(e.size() == 4);
  CHECK(e[0] == IntVec{0, 0});
  CHECK(e[1] == IntVec{1, 0});
  CHECK(e[2] == IntVec{0, 1});
  CHECK(e[3] == IntVec{1, 1});
  CHECK(r2.act(e[1]) == e[2]);
  CHECK(r2.action_order() == 2);

  FinMod z5 = build_module(ModSpec::triv(5), 2);
  CHECK(z5.order() == 5);
  CHECK(z5.action().is_identity());
  CHECK(z5.action_order() == 1);
  CHECK(build_module(parse_modspec("triv(2) + triv(3)"), 2).order() == 6);
  CHECK(build_module(parse_modspec("triv(3)"), 3).enumerate().size() == 3);

  FinMod f = build_module(ModSpec::free_r(1), 2);
  CHECK_FALSE(f.is_finite());
  CHECK_THROWS_AS(f.enumerate(), PreconditionError);
  CHECK_THROWS_AS(build_module(ModSpec::twisted(5, 2), 2), PreconditionError);  // 2^2 != 1 mod 5
}

TEST_CASE("orbits") {
  FinMod m = build_module(ModSpec::twisted(5, 4), 2);
  auto orbits = m.orbits();
  REQUIRE(orbits.size() == 3);
  CHECK(orbits[0] == std::vector<std::size_t>{0});
  CHECK(orbits[1] == std::vector<std::size_t>{1, 4});
  CHECK(orbits[2] == std::vector<std::size_t>{2, 3});

  for (const auto& o : build_module(ModSpec::triv(7), 3).orbits()) CHECK(o.size() == 1);

  FinMod r3 = build_module(ModSpec::cyclic_r(3, 1), 2);
  std::vector<IntVec> fixed;
  std::size_t two = 0;
  auto elems = r3.enumerate();
  for (const auto& o : r3.orbits()) {
    if (o.size() == 1) fixed.push_back(elems[o[0]]);
    if (o.size() == 2) ++two;
  }
  CHECK(fixed == std::vector<IntVec>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(two == 3);
}

TEST_CASE("t image, fixed points, s kernel in R/(4) and R/(q)") {
  FinMod m = build_module(ModSpec::cyclic_r(2, 2), 2);
  Lattice t = m.t_image();
  CHECK(m.subgroup_order(t) == 4);
  CHECK(m.subgroup_order(t.scaled(2) + m.zero()) == 2);
  // Oracle: direct modular arithmetic on pairs mod 4, t(x0, x1) = (x1 - x0, x0 - x1).
  std::set<std::pair<int, int>> timg;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) timg.insert({((b - a) % 4 + 4) % 4, ((a - b) % 4 + 4) % 4});
  CHECK(timg.size() == 4);

  CHECK(build_module(ModSpec::triv(6), 2).subgroup_order(build_module(ModSpec::triv(6), 2).t_image()) == 1);

  for (auto [q, p] : {std::pair{3L, 2u}, {5L, 2u}, {2L, 3u}, {7L, 3u}}) {
    FinMod rq = build_module(ModSpec::cyclic_r(q, 1), p);
    CHECK(rq.s_kernel() == rq.t_image());
  }
}

TEST_CASE("generated submodules") {
  FinMod m = build_module(ModSpec::cyclic_r(2, 1), 2);
  CHECK(m.subgroup_order(m.generated({IntVec{0, 0}})) == 1);
  Submodule fixed = submodule_generated(m, {IntVec{1, 1}});
  CHECK(fixed.module.order() == 2);
  CHECK(fixed.preimage == m.fixed_submodule());
  CHECK(m.generated(m.enumerate()) == m.whole());
  CHECK(m.generated({}) == m.zero());
}

TEST_CASE("property: random modules against brute force") {
  Rng rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    unsigned p = trial % 2 ? 3 : 2;
    ModSpec spec = random_spec(rng, p, 64);
    FinMod m = build_module(spec, p);
    CAPTURE(spec.to_string());
    CHECK(m.order() == spec_order(spec, p));
    CHECK(parse_modspec(spec.to_string()).to_string() == spec.to_string());
    auto elems = m.enumerate();
    std::size_t fixed_points = 0;
    for (const auto& o : m.orbits()) {
      CHECK((o.size() == 1 || o.size() == p));
      if (o.size() == 1) ++fixed_points;
    }
    CHECK((elems.size() - fixed_points) % p == 0);
    for (std::size_t i = 0; i < elems.size(); ++i) CHECK(m.index_of(elems[i]) == i);

    CHECK(m.subgroup_order(m.t_image()) == brute_image(m, [&](const IntVec& x) { return t_of(m, x); }).size());
    CHECK(m.subgroup_order(m.fixed_submodule()) == fixed_points);
    RingElt s = RingElt::s(p);
    CHECK(m.subgroup_order(m.s_kernel()) == brute_kernel(m, [&](const IntVec& x) { return m.apply(s, x); }));

    Lattice sub = random_submodule(rng, m);
    CHECK(m.is_submodule(sub));
    Submodule sm = as_submodule(m, sub);
    CHECK(sm.module.order() == m.subgroup_order(sub));
    for (const auto& y : sm.module.enumerate()) CHECK(sub.contains(sm.include(y)));
  }
}

TEST_CASE("random module population respects the size cap") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    FinMod m = random_module(rng, trial % 2 ? 3 : 2, 64);
    CHECK(m.order() <= 64);
    CHECK(m.order() >= 1);
  }
}

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "zcp/error.hpp"
#include "zcp/graphkit.hpp"

using namespace zcp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

GraphSpecInput input_for(const std::string& spec, unsigned p) {
  return graph_input_for_module(build_module(parse_modspec(spec), p), SearchOptions{});
}

FinMod z3_squared_swap() {
  return FinMod(2, Lattice::from_generators(IntMatrix::from_rows({{3, 0}, {0, 3}})),
                IntMatrix::from_rows({{0, 1}, {1, 0}}));
}

std::size_t count_nodes(const std::string& dot) {
  std::size_t n = 0;
  std::istringstream is(dot);
  for (std::string line; std::getline(is, line);)
    if (line.find("->") == std::string::npos && line.find('"') != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST_CASE("strand graphs") {
  GadgetGraph g = build_strand_graph(1);
  CHECK(g.core_size() == 1);
  CHECK(g.emitter() == std::optional<std::size_t>{0});
  CHECK(count_nodes(to_dot(g, 2)) == 3);
  CHECK(to_dot(g, 2) == to_dot(build_strand_graph(1), 2));
  CHECK(is_irreducible(g));
  CHECK(has_no_sinks(g));
  CHECK_THROWS_AS(build_strand_graph(0), PreconditionError);

  GadgetGraph g4 = build_strand_graph(4, 3);
  AutomorphismCheck chk = validate_automorphism(g4);
  CHECK(chk.ok);
  CHECK(chk.order == 3);
  CHECK(chk.fixes_emitter);

  GadgetGraph d = delete_strand(g4, 0);
  CHECK(d.rays.size() == 3);
  CHECK(validate_automorphism(d).order == 3);
  CHECK_THROWS_AS(delete_strand(g4, 1), PreconditionError);
  CHECK_THROWS_AS(delete_strand(d, 0), PreconditionError);
  CHECK_THROWS_AS(delete_strand(g4, 9), PreconditionError);

  GadgetGraph plain = build_strand_graph(4);
  CHECK(delete_strand(delete_strand(plain, 0), 0).rays.size() == 2);
}

TEST_CASE("instantiation follows the ray rules") {
  Instantiation in = instantiate(build_strand_graph(2), 3);
  CHECK(in.vertices.size() == 7);
  // x0_2: loop and one edge to x0_1.
  const std::size_t x2 = in.ray_index[0][1], x1 = in.ray_index[0][0];
  CHECK(in.edges.at({x2, x2}) == 1);
  CHECK(in.edges.at({x2, x1}) == 1);
  CHECK(in.edges.at({x1, 0}) == 1);
  CHECK(in.edges.at({0, x2}) == 1);
  std::size_t out_of_x2 = 0;
  for (const auto& [e, m] : in.edges)
    if (e.first == x2) out_of_x2 += static_cast<std::size_t>(m);
  CHECK(out_of_x2 == 2);
}

TEST_CASE("spielberg graph audit for Z/2") {
  GraphSpecInput in = input_for("triv(2)", 2);
  REQUIRE(in.b == std::vector<IntVec>{{1, 0}, {0, 2}});
  GadgetGraph g = build_spielberg(in);
  // v, two a's, two heads, two z+ and no z- since both b are nonnegative.
  CHECK(g.core_size() == 7);
  CHECK(g.rays.size() == 1 + 2 + 2);
  CHECK(g.edge_count(*g.find("z1+"), g.a_vertex[1]) == 2);
  AutomorphismCheck chk = validate_automorphism(g);
  CHECK(chk.ok);
  CHECK(chk.order == 1);
  CHECK(to_dot(g, 1) == slurp(ZCP_GOLDEN_DIR "/spielberg_z2_depth1.dot"));
}

TEST_CASE("spielberg graph structure") {
  struct Case {
    GraphSpecInput in;
    unsigned order;
  };
  std::vector<Case> cases{{input_for("cyclic(5,4)", 2), 2},
                          {graph_input_for_module(z3_squared_swap(), SearchOptions{}), 2},
                          {input_for("cyclic(7,2)", 3), 3},
                          {input_for("cyclicR(2,1) + triv(2)", 2), 2}};
  for (const auto& c : cases) {
    const GraphSpecInput& in = c.in;
    GadgetGraph g = build_spielberg(in);
    std::size_t plus = 0, minus = 0;
    for (const auto& b : in.b) {
      plus += std::any_of(b.begin(), b.end(), [](const Int& x) { return x > 0; });
      minus += std::any_of(b.begin(), b.end(), [](const Int& x) { return x < 0; });
    }
    CHECK(g.core_size() == 1 + in.a_size() + in.b.size() + plus + minus);
    CHECK(g.rays.size() == 1 + in.a_size() + in.b.size());

    AutomorphismCheck chk = validate_automorphism(g);
    REQUIRE(chk.ok);
    CHECK(chk.order == c.order);
    CHECK(chk.fixes_emitter);
    CHECK(is_irreducible(g));
    CHECK(has_no_sinks(g));

    // a -> vertex a is injective and equivariant.
    std::set<std::size_t> seen(g.a_vertex.begin(), g.a_vertex.end());
    CHECK(seen.size() == in.a_size());
    for (std::size_t a = 0; a < in.a_size(); ++a) CHECK(g.sigma[g.a_vertex[a]] == g.a_vertex[in.a_perm[a]]);

    // Multiplicities z_b^+- -> a are b_a^+- recomputed from b, and the
    // automorphism matches (gamma b)_{gamma a} with b_a.
    auto bperm = in.b_perm();
    for (std::size_t j = 0; j < in.b.size(); ++j) {
      auto zp = g.find("z" + std::to_string(j) + "+");
      auto zm = g.find("z" + std::to_string(j) + "-");
      for (std::size_t a = 0; a < in.a_size(); ++a) {
        const long ba = in.b[j][a].get_si();
        CHECK((zp ? g.edge_count(*zp, g.a_vertex[a]) : 0) == std::max(ba, 0L));
        CHECK((zm ? g.edge_count(*zm, g.a_vertex[a]) : 0) == std::max(-ba, 0L));
        CHECK(in.b[bperm[j]][in.a_perm[a]] == in.b[j][a]);
      }
      if (zm) CHECK(g.edge_count(*zm, *zm) == 2);
    }
  }
}

TEST_CASE("automorphism violations are reported") {
  GadgetGraph g = build_spielberg(input_for("cyclic(5,4)", 2));
  GadgetGraph bad = g;
  bad.add_edge(bad.a_vertex[1], bad.a_vertex[2]);
  AutomorphismCheck chk = validate_automorphism(bad);
  CHECK_FALSE(chk.ok);
  CHECK(chk.violation.find("multiplicity") != std::string::npos);

  GadgetGraph moved = g;
  std::swap(moved.sigma[0], moved.sigma[1]);
  CHECK_FALSE(validate_automorphism(moved).ok);

  GadgetGraph rays = g;
  rays.ray_sigma[1] = 0;
  CHECK_FALSE(validate_automorphism(rays).ok);
}

TEST_CASE("irreducibility") {
  GadgetGraph g = build_spielberg(input_for("cyclic(5,4)", 2));
  CHECK(is_irreducible(g));
  GadgetGraph sink = g;
  std::size_t s = sink.add_vertex("sink");
  sink.add_edge(sink.a_vertex[0], s);
  CHECK_FALSE(is_irreducible(sink));
  CHECK_FALSE(has_no_sinks(sink));

  GadgetGraph loop;
  std::size_t x = loop.add_vertex("x");
  loop.add_edge(x, x);
  CHECK(is_irreducible(loop));
  // Without an emitter nothing returns from a downward ray.
  GadgetGraph noemit = loop;
  noemit.rays.push_back({"r", x, RayOrientation::KillsDownward});
  noemit.ray_sigma.push_back(0);
  CHECK_FALSE(is_irreducible(noemit));
}

TEST_CASE("graph input validation") {
  GraphSpecInput in = input_for("cyclic(5,4)", 2);
  CHECK(check_graph_input(in) == "");

  GraphSpecInput dep = in;
  dep.b.push_back(dep.b[0]);
  CHECK(check_graph_input(dep) != "");
  CHECK_THROWS_AS(build_spielberg(dep), PreconditionError);

  GraphSpecInput outside = in;
  outside.b[0][1] += 1;  // element 1 is nonzero in G
  CHECK(check_graph_input(outside).find("ker") != std::string::npos);

  GraphSpecInput swapped = input_for("cyclic(5,4)", 2);
  for (std::size_t i = 0; i < swapped.a_size(); ++i) swapped.b[0][i] += swapped.b[1][i];
  CHECK(check_graph_input(swapped) != "");

  GraphSpecInput noneq = in;
  std::swap(noneq.pi0[1], noneq.pi0[2]);
  CHECK(check_graph_input(noneq) != "");
}

TEST_CASE("generators route: Z^2 with the swap") {
  FinMod z2(2, Lattice(2), IntMatrix::from_rows({{0, 1}, {1, 0}}));
  GraphSpecInput in = graph_input_from_generators(z2, {1, 0}, {IntVec{1, 0}, IntVec{0, 1}}, SearchOptions{});
  CHECK(in.b.empty());
  GadgetGraph g = build_spielberg(in);
  CHECK(validate_automorphism(g).order == 2);
  CHECK(g.core_size() == 3);
}

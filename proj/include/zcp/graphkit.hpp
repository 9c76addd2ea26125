#pragma once
// Directed multigraphs built from a finite core plus symbolic infinite rays
// and at most one infinite emitter. Rays are never materialized beyond the
// depth a caller asks for.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zcp/presentation.hpp"
#include "zcp/zmod.hpp"

namespace zcp {

enum class VertexKind { Standard, InfiniteEmitter };

enum class RayOrientation {
  // r_i emits a loop and one edge to r_{i-1} (r_0 = base). Kills [base] in K0.
  KillsDownward,
  // base emits one edge to r_1; r_i emits a loop, one edge to r_{i+1} and one
  // to the emitter. Kills f(base) in K1.
  FeedsUpward,
};

struct RaySpec {
  std::string family;
  std::size_t base = 0;
  RayOrientation orientation = RayOrientation::KillsDownward;
};

struct GadgetGraph {
  std::vector<std::string> names;  // core vertices
  std::vector<VertexKind> kinds;
  std::map<std::pair<std::size_t, std::size_t>, long> edges;  // core -> core multiplicities
  std::vector<RaySpec> rays;
  std::vector<std::size_t> sigma;      // automorphism on core vertices
  std::vector<std::size_t> ray_sigma;  // automorphism on rays
  // Set by build_spielberg: vertex of each a in A.
  std::vector<std::size_t> a_vertex;

  std::size_t core_size() const { return names.size(); }
  std::optional<std::size_t> emitter() const;
  std::size_t add_vertex(std::string name, VertexKind kind = VertexKind::Standard);
  void add_edge(std::size_t from, std::size_t to, long mult = 1);
  long edge_count(std::size_t from, std::size_t to) const;
  std::optional<std::size_t> find(const std::string& name) const;
};

/// One vertex of a depth-L instantiation: a core vertex or ray vertex r_i.
struct InstVertex {
  std::optional<std::size_t> core;
  std::size_t ray = 0;
  std::size_t depth = 0;  // 1..L for ray vertices
};

/// Finite depth-L instantiation. Edges leaving the window are dropped; the
/// emitter gets one edge to every instantiated vertex.
struct Instantiation {
  std::vector<InstVertex> vertices;
  std::vector<std::string> names;
  std::map<std::pair<std::size_t, std::size_t>, long> edges;
  std::vector<std::size_t> core_index;              // core vertex -> instantiated index
  std::vector<std::vector<std::size_t>> ray_index;  // ray -> depth-1 -> index
};

Instantiation instantiate(const GadgetGraph& g, std::size_t depth);

/// Input to build_spielberg: an abelian group G = Z^r / Lambda with the
/// action of alpha, a Gamma-set A (permutation a -> alpha a), an equivariant
/// map pi0 : A -> G whose range generates G, and a Gamma-invariant set B of
/// independent vectors in ker(pi).
struct GraphSpecInput {
  unsigned p = 2;
  FinMod group;
  std::vector<std::size_t> a_perm;
  std::vector<IntVec> pi0;
  std::vector<IntVec> b;

  std::size_t a_size() const { return a_perm.size(); }
  IntMatrix pi_matrix() const;  // r x |A|
  /// Orbits of A, each listed as a, alpha a, alpha^2 a, ...
  std::vector<std::vector<std::size_t>> orbits() const;
  /// Permutation of B induced by alpha (throws PreconditionError if B is not invariant).
  std::vector<std::size_t> b_perm() const;
};

/// Empty string when the input satisfies every hypothesis of the construction.
std::string check_graph_input(const GraphSpecInput& in);

/// A = G for a finite module, B an invariant basis of N_G (after
/// stabilization when needed; extra free orbits map to 0).
GraphSpecInput graph_input_for_module(const FinMod& g, const SearchOptions& opts);
/// A given explicitly; B is an invariant basis of ker(pi) from the search.
GraphSpecInput graph_input_from_generators(const FinMod& g, std::vector<std::size_t> a_perm,
                                           std::vector<IntVec> pi0, const SearchOptions& opts);

GadgetGraph build_spielberg(const GraphSpecInput& in);

/// Central infinite emitter with m downward strands. The automorphism
/// cycles the last cycle_len strands and fixes the rest.
GadgetGraph build_strand_graph(std::size_t m, std::size_t cycle_len = 0);

/// Removes strand idx; PreconditionError unless the automorphism fixes it.
GadgetGraph delete_strand(const GadgetGraph& g, std::size_t idx);

struct AutomorphismCheck {
  bool ok = false;
  unsigned order = 0;
  bool fixes_emitter = false;
  std::string violation;
};

AutomorphismCheck validate_automorphism(const GadgetGraph& g);

/// Strong connectivity of the depth-3 instantiation (the ray pattern is
/// periodic, so deeper windows add nothing).
bool is_irreducible(const GadgetGraph& g);

/// No vertex of the (infinite) graph is a sink.
bool has_no_sinks(const GadgetGraph& g);

std::string to_dot(const GadgetGraph& g, std::size_t depth);

}  // namespace zcp

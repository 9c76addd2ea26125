#pragma once
// K-theory of graph algebras of GadgetGraphs through the boundary matrix
// D: Z^{regular} -> Z^{E^0}, column x = sum_{e in E^1(x)} delta_{t(e)} - delta_x.
// K0 = coker D, K1 = ker D.

#include <optional>
#include <string>
#include <vector>

#include "zcp/graphkit.hpp"

namespace zcp {

struct BoundaryColumn {
  enum class Kind { Vertex, Ghost, EliminatedRay } kind = Kind::Vertex;
  std::size_t vertex = 0;  // instantiated vertex (Vertex)
  std::size_t ray = 0;     // Ghost / EliminatedRay
};

struct BoundaryMatrix {
  Instantiation inst;  // rows are inst.vertices
  std::vector<BoundaryColumn> columns;
  std::vector<std::string> col_names;
  IntMatrix D;
  std::size_t depth = 0;  // 0 for the eliminated form

  std::size_t rows() const { return D.rows(); }
};

/// Closure rules for truncated rays; switching one off gives a mis-closed
/// matrix whose K-groups drift with the depth.
struct TruncationOptions {
  bool ghost_columns = true;
  bool row_only_tops = true;
};

/// Rays instantiated to depth L. Downward rays keep every column and get one
/// ghost column delta_top standing in for the absent deeper relation; the top
/// of an upward ray contributes a row but no column.
BoundaryMatrix boundary_matrix(const GadgetGraph& g, std::size_t depth, const TruncationOptions& opts = {});

/// Exact ray elimination: a downward ray becomes the single column
/// delta_base, an upward ray the row-only vertex r_1.
BoundaryMatrix eliminated_matrix(const GadgetGraph& g);

struct KResult {
  BoundaryMatrix bm;
  GroupInvariants k0;
  std::vector<Int> moduli;           // per K0 coordinate: d > 1, or 0 when free
  IntMatrix class_map;               // K0 coordinates x rows (unreduced)
  Lattice k1;                        // ker D inside Z^{columns}
  std::optional<IntMatrix> induced_k0;  // on K0 coordinates, rows reduced mod moduli
  std::optional<IntMatrix> induced_k1;  // on the k1 basis

  std::size_t k0_rank() const { return moduli.size(); }
  /// K0 class of an integer combination of vertices, reduced.
  IntVec k0_class(const IntVec& rows_vec) const;
  IntVec vertex_class(std::size_t row) const;
  /// Relations among the classes of the core vertices.
  Lattice core_relations() const;
};

KResult compute_k(const BoundaryMatrix& bm);
KResult compute_k(const GadgetGraph& g, std::size_t depth, const TruncationOptions& opts = {});

/// Fills induced_k0 / induced_k1 from the graph automorphism. Requires a
/// truncated (depth >= 1) matrix and a valid automorphism.
void induced_action(const GadgetGraph& g, KResult& kr);

struct KSummary {
  std::size_t depth = 0;
  GroupInvariants k0;
  std::size_t k1_rank = 0;
  Lattice core_relations;
  std::string to_string() const;
};

struct TruncationReport {
  std::vector<std::size_t> depths;
  std::vector<KSummary> per_depth;
  KSummary eliminated;
  bool stable = false;
  std::string mismatch;
};

TruncationReport stabilization_check(const GadgetGraph& g, const std::vector<std::size_t>& depths,
                                     const TruncationOptions& opts = {});

struct TheoremReport {
  bool countable = true;
  bool irreducible = false;
  bool unique_emitter = false;
  bool no_sinks = false;
  bool automorphism = false;
  bool emitter_fixed = false;
  bool equivariant_injection = false;
  bool k0_iso = false;
  bool k1_zero = false;
  bool class_map = false;
  bool cross_pipeline = false;
  bool order_matches = false;
  bool induced_matches = false;
  bool degenerate = false;  // alpha acts trivially
  unsigned sigma_order = 0;
  unsigned alpha_order = 0;
  GroupInvariants k0, g_invariants, b_quotient;
  std::size_t k1_rank = 0;
  IntMatrix phi;  // K0 coordinates -> G coordinates, [a] -> pi0(a)
  KResult k;
  std::vector<std::string> failures;

  bool all() const { return failures.empty(); }
};

TheoremReport verify_theorem(const GadgetGraph& g, const GraphSpecInput& in, std::size_t depth = 3);

/// Fixed sublattice of an integer action (kernel of A - I).
Lattice fixed_sublattice(const IntMatrix& a);
/// Characteristic polynomial det(xI - A), low degree first.
IntVec characteristic_polynomial(const IntMatrix& a);

}  // namespace zcp

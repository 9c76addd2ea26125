#pragma once
// Property checkers on presentation lattices: non-cyclotomicity, the
// intersection identity (tN_M) & N_{M0} = tN_{M0}, purity with witnesses,
// the condition (tM) & M0 = tM0, and equivariant projections onto N_{M0}.

#include <optional>
#include <string>
#include <vector>

#include "zcp/cyclo_ring.hpp"
#include "zcp/presentation.hpp"

namespace zcp {

/// lambda(action) = sum_i lambda_i action^i.
IntMatrix ring_action(const RingElt& lambda, const IntMatrix& action);

struct NoncycDetail {
  Lattice ker_s;  // ker(s) & N
  Lattice t_n;    // tN
  bool equal = false;
};

NoncycDetail noncyclotomic_detail(const Lattice& n, const IntMatrix& action, unsigned p);
bool is_noncyclotomic(const Lattice& n, const IntMatrix& action, unsigned p);

/// M0 <= M together with both presentations; N_{M0} is embedded in ZM.
struct InclusionPair {
  FinMod M;
  Submodule M0;
  AugPresentation pres;
  AugPresentation pres0;
  IntMatrix embed;                     // ZM0 -> ZM
  std::vector<std::size_t> m0_indices; // positions of M0's elements in pres
  Lattice n0;                          // image of N_{M0}
  Lattice p0;                          // Z M0 inside ZM
};

InclusionPair make_inclusion(const FinMod& m, const Lattice& m0_preimage);

struct IntersectionReport {
  Lattice lhs;  // (tN_M) & N_{M0}
  Lattice rhs;  // tN_{M0}
  bool holds = false;
};

IntersectionReport check_tn_intersection(const InclusionPair& pair);

/// (tM) & M0 == tM0, compared as subgroups of M.
bool check_t_condition(const InclusionPair& pair);

/// N_M / N_{M0} torsion-free (equivalently N_{M0} saturated in N_M).
bool quotient_torsion_free(const InclusionPair& pair);

struct PurityVerdict {
  bool pure = false;
  IntVec xi;
  RingElt lambda{2};
  std::optional<IntVec> eta;  // pure: eta in N0 with lambda eta = lambda xi
  std::string route;
  bool verified = false;
};

/// Requires xi in N_M and lambda xi in N_{M0} (PreconditionError otherwise).
/// Builds eta as in the case split on whether t divides lambda; falls back
/// to an integral solve, and reports (xi, lambda) as a violation if that fails.
PurityVerdict purity_witness(const InclusionPair& pair, const IntVec& xi, const RingElt& lambda);

/// When (tM) & M0 != tM0: z with tz in M0 \ tM0, and xi = (tz)^ - t z^, for
/// which s xi lies in N_{M0} but not in s N_{M0}. nullopt if no such z.
std::optional<PurityVerdict> impurity_witness(const InclusionPair& pair);

/// Scans lambda in {t, s, 2, ..., scalar_bound}; returns the first violation.
std::optional<PurityVerdict> find_purity_violation(const InclusionPair& pair, long scalar_bound = 4);

struct ProjectionResult {
  std::optional<IntMatrix> p;  // in N's basis coordinates
  std::string reason;          // why absent
  Lattice complement;          // ker P as a sublattice of the ambient space
};

/// P with P A = A P on N, P = id on N0 and image N0. Absent is a proof:
/// either N0 is not saturated in N, or the Sylvester system has no integral
/// solution.
ProjectionResult find_equivariant_projection(const Lattice& n, const Lattice& n0, const IntMatrix& action);

struct InclusionDiagram {
  StabilizedPresentation top, bottom;  // padded to a common k
  IntMatrix p_embed;                   // Z^{|M0| + kp} -> Z^{|M| + kp}
  IntMatrix n_projection, p_projection;
  bool rows_exact = false;
  bool columns_injective = false;
  bool commutes = false;
  bool summands = false;
};

struct DiagramResult {
  bool condition = false;
  std::optional<InclusionDiagram> diagram;
  std::optional<PurityVerdict> witness;
};

DiagramResult inclusion_diagram(const InclusionPair& pair, const SearchOptions& opts);

/// Every submodule of a finite module, as preimage lattices, zero first.
std::vector<Lattice> all_submodules(const FinMod& m);

}  // namespace zcp

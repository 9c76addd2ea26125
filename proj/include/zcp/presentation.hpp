#pragma once
// The presentation 0 -> N_M -> ZM -> M -> 0 of a finite module, and bases of
// N_M (or N_M + R^k) made of free alpha-orbits plus fixed vectors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zcp/intlinalg.hpp"
#include "zcp/zmod.hpp"

namespace zcp {

struct AugPresentation {
  FinMod M;
  std::vector<IntVec> elements;   // enumerate() order; ZM has basis hat(i)
  std::vector<std::size_t> perm;  // elements[perm[i]] = alpha * elements[i]
  IntMatrix pi;                   // r x |M|, column i = elements[i]
  IntMatrix action;               // permutation matrix of alpha on ZM
  Lattice N;                      // ker(pi mod Lambda)

  std::size_t size() const { return elements.size(); }
  IntVec hat(std::size_t i) const;
  IntVec hat(const IntVec& x) const { return hat(M.index_of(x)); }
  /// pi(v) as a canonical element of M.
  IntVec project(const IntVec& v) const { return M.canonical(pi * v); }
};

AugPresentation build_aug(const FinMod& m);

/// A basis organized as free orbits (v, Av, ..., A^{p-1}v) plus fixed vectors.
struct InvariantBasis {
  std::size_t ambient = 0;
  std::vector<std::vector<IntVec>> orbit_blocks;
  std::vector<IntVec> fixed;

  std::size_t size() const;
  /// Orbit blocks first (in order, each block in orbit order), then fixed vectors.
  std::vector<IntVec> vectors() const;
  IntMatrix matrix() const;
  void append(const InvariantBasis& other);
};

/// Empty string if b is a Z-basis of n, every block is cycled by `action`
/// with period exactly p, and fixed vectors are fixed; else the first problem.
std::string check_invariant_basis(const InvariantBasis& b, const Lattice& n,
                                  const IntMatrix& action, unsigned p);

/// {xi_x : x not in B} + {q^k e_i} for M = R/(q^k), in the coordinates of
/// build_aug(build_module(cyclicR(q,k), p)). xi_0 = 0^ is the first fixed vector.
InvariantBasis basis_R_mod_qk(long q, long k, unsigned p);
InvariantBasis basis_R_mod_qk(const AugPresentation& pres);

/// Trivial M: {0^} + {x^ - x 1^ : x = 2..n-1} + {n 1^} for cyclic Z/n, and 0^
/// plus a basis of the c_0 = 0 part otherwise. All vectors fixed.
InvariantBasis basis_trivial(const AugPresentation& pres);

/// N_{M1+M2} = Z0^ + N~_{M1} + N~_{M2} + N_3. Both input bases must contain
/// 0^ as a fixed vector.
struct DirectSumBasis {
  AugPresentation pres;
  InvariantBasis zero_part, tilde1, tilde2, n3;
  std::vector<std::size_t> l_elements;  // indices of L = (M1+M2) \ (M1 u M2)
  InvariantBasis combined() const;
};

DirectSumBasis assemble_direct_sum(const AugPresentation& p1, const AugPresentation& p2,
                                   const InvariantBasis& b1, const InvariantBasis& b2);

/// Follows the module's spec tree (building blocks and sums only); nullopt if
/// the module has no such provenance.
std::optional<InvariantBasis> constructive_basis(const AugPresentation& pres);

/// xi_x for x in a finite window of R = Z^p, checked on the window.
struct WindowedRBasis {
  unsigned p = 0;
  long radius = 0;
  std::vector<IntVec> window;  // all x with |x_i| <= radius
  InvariantBasis basis;        // in Z^{window.size()}
  Lattice kernel;              // ker(pi) on window-supported vectors
  bool independent = false;
  bool spans = false;
  bool equivariant = false;
};

WindowedRBasis windowed_R_basis(unsigned p, long radius);

struct SearchOptions {
  bool allow_stabilization = true;
  unsigned k_max = 3;
  std::uint64_t seed = 1;
  std::size_t random_candidates = 200;
  std::size_t hint_limit = 512;
};

struct SearchResult {
  unsigned k = 0;  // copies of R adjoined
  InvariantBasis basis;  // basis of N + R^k in Z^{n + k p}
  std::string route;     // "constructive", "greedy" or "greedy+stabilized"
  std::size_t candidates_tried = 0;
};

/// Extends `action` and `n` by k copies of R (cyclic shift blocks).
IntMatrix stabilized_action(const IntMatrix& action, unsigned p, unsigned k);
Lattice stabilized_lattice(const Lattice& n, unsigned p, unsigned k);

/// Greedy orbit extraction then fixed-vector completion, with stabilization
/// fallback. Throws NotNonCyclotomic when ker(s) & N != tN, SearchExhausted
/// when no basis is found within the options' limits.
SearchResult find_invariant_basis(const Lattice& n, const IntMatrix& action, unsigned p,
                                  const SearchOptions& opts, const std::vector<IntVec>& hints = {});

/// Constructive route when available, else the search with N_M-specific hints.
SearchResult invariant_basis_for(const AugPresentation& pres, const SearchOptions& opts);

/// 0 -> N1 -> N2 -> M -> 0 with N1 = N_M + R^k and N2 = ZM + R^k, both with
/// invariant bases; cover[i] is the position in n2.vectors() of elements[i]^.
struct StabilizedPresentation {
  AugPresentation pres;
  unsigned k = 0;
  IntMatrix action;        // on Z^{|M| + k p}
  IntMatrix to_module;     // r x (|M| + k p): pi extended by 0
  InvariantBasis n1, n2;
  std::vector<std::size_t> cover;
  std::string route;
  bool exact = false;      // image(N1) == ker(N2 -> M)
  bool cover_valid = false;
};

/// k is at least min_k; extra copies of R get their standard orbit blocks.
StabilizedPresentation stabilize_presentation(const FinMod& m, const SearchOptions& opts,
                                              unsigned min_k = 0);

}  // namespace zcp

#pragma once
// R-modules as Z^r / Lambda with an integer matrix U acting as alpha.
//
// Subgroups of M are represented by the lattice S with Lambda <= S <= Z^r
// (their full preimage), so sums, intersections and orders of subgroups are
// plain lattice operations.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zcp/cyclo_ring.hpp"
#include "zcp/intlinalg.hpp"

namespace zcp {

using Rng = std::mt19937_64;

/// Module expression tree. Textual grammar (whitespace ignored):
///   expr  := term ('+' term)*
///   term  := 'triv(' n ')'          Z/n with trivial action; triv(0) is Z
///          | 'cyclicR(' q ',' k ')' R/(q^k)
///          | 'freeR(' r ')'         R^r
///          | 'cyclic(' n ',' a ')'  Z/n with alpha acting as x -> a x
///          | '0' | '(' expr ')'
/// cyclic() is outside the building-block family; modules using it have no
/// constructive invariant basis.
struct ModSpec {
  enum class Kind { TrivCyclic, TrivFree, CyclicR, FreeR, CyclicTwisted, Sum };
  Kind kind = Kind::Sum;
  long n = 0;       // TrivCyclic, CyclicTwisted
  long a = 1;       // CyclicTwisted multiplier
  long q = 0, k = 0;  // CyclicR
  long rank = 0;    // TrivFree, FreeR
  std::vector<ModSpec> children;  // Sum (empty sum = zero module)

  static ModSpec triv(long n);
  static ModSpec triv_free(long rank);
  static ModSpec cyclic_r(long q, long k);
  static ModSpec free_r(long rank);
  static ModSpec twisted(long n, long a);
  static ModSpec sum(std::vector<ModSpec> parts);

  bool is_building_block_tree() const;
  std::string to_string() const;
};

/// Throws ParseError.
ModSpec parse_modspec(const std::string& text);

class FinMod {
 public:
  /// The zero module for p = 2 (placeholder for default-constructed holders).
  FinMod();
  /// Checks U * Lambda <= Lambda and U^p = I mod Lambda; PreconditionError otherwise.
  FinMod(unsigned p, Lattice relations, IntMatrix action);

  unsigned p() const { return p_; }
  std::size_t ambient_rank() const { return relations_.ambient_rank(); }
  const Lattice& relations() const { return relations_; }
  const IntMatrix& action() const { return action_; }
  bool is_finite() const { return relations_.is_full_rank(); }
  /// |M|; PreconditionError when infinite.
  Int order() const;
  /// 1 when alpha acts trivially, p otherwise.
  unsigned action_order() const;

  const std::optional<ModSpec>& provenance() const { return provenance_; }
  void set_provenance(ModSpec s) { provenance_ = std::move(s); }

  IntVec canonical(const IntVec& v) const { return relations_.reduce(v); }
  bool equal(const IntVec& a, const IntVec& b) const;
  IntVec act(const IntVec& v) const { return canonical(action_ * v); }
  IntVec add(const IntVec& a, const IntVec& b) const;
  IntVec scale(const Int& c, const IntVec& v) const;
  IntVec apply(const RingElt& lambda, const IntVec& v) const;

  /// Canonical representatives, 0 first; coordinate 0 varies fastest.
  std::vector<IntVec> enumerate() const;
  /// Position of an element in enumerate() order.
  std::size_t index_of(const IntVec& v) const;

  /// Orbits as index lists [x, alpha x, ...], ordered by smallest member.
  std::vector<std::vector<std::size_t>> orbits() const;

  /// Subgroups (as preimage lattices).
  Lattice whole() const { return Lattice::full(ambient_rank()); }
  Lattice zero() const { return relations_; }
  Lattice t_image() const;
  Lattice t_image(const Lattice& sub) const;
  Lattice fixed_submodule() const;
  Lattice s_kernel() const;
  Lattice generated(const std::vector<IntVec>& gens) const;
  /// |S / Lambda|.
  Int subgroup_order(const Lattice& s) const;
  bool is_submodule(const Lattice& s) const;

  std::string describe() const;

 private:
  unsigned p_;
  Lattice relations_;
  IntMatrix action_;
  std::optional<ModSpec> provenance_;
};

FinMod build_module(const ModSpec& spec, unsigned p);
FinMod direct_sum(const FinMod& a, const FinMod& b);
/// M / S for a submodule S (given as a preimage lattice).
FinMod quotient(const FinMod& m, const Lattice& sub);

/// {v : a v in target}.
Lattice preimage(const IntMatrix& a, const Lattice& target);

/// A submodule M0 <= M as a module in its own right, with inclusion data.
struct Submodule {
  Lattice preimage;       // Lambda <= S <= Z^r
  FinMod module;          // S-coordinates: Z^{r} / coords(Lambda)
  IntMatrix inclusion;    // basis of S: module coords -> ambient coords of M
  /// Element of M0 (module coords) as an element of M.
  IntVec include(const IntVec& v) const { return inclusion * v; }
};

Submodule submodule_generated(const FinMod& m, const std::vector<IntVec>& gens);
Submodule as_submodule(const FinMod& m, const Lattice& s);

/// Random finite module, |M| <= cap: a random building-block tree, and with
/// probability 1/2 a quotient of it by a random cyclic submodule.
FinMod random_module(Rng& rng, unsigned p, long cap);
ModSpec random_spec(Rng& rng, unsigned p, long cap);
/// Every direct sum of leaves with total order <= max_order (the zero
/// module first): triv(n), R/(q^k), and cyclic(n, a) for each a != 1 of
/// order p mod n. Each multiset of leaves appears once.
std::vector<ModSpec> small_specs(unsigned p, long max_order);
/// Random submodule generated by up to max_gens random elements.
Lattice random_submodule(Rng& rng, const FinMod& m, int max_gens = 2);

}  // namespace zcp

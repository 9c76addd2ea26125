#include <sstream>

#include "zcp/error.hpp"
#include "zcp/zmod.hpp"

namespace zcp {

namespace {

constexpr std::size_t kEnumerateLimit = 1u << 22;

IntMatrix shift_matrix(std::size_t p) {  // e_i -> e_{i+1 mod p}
  IntMatrix u(p, p);
  for (std::size_t i = 0; i < p; ++i) u((i + 1) % p, i) = 1;
  return u;
}

}  // namespace

FinMod::FinMod() : FinMod(2, Lattice::full(1), IntMatrix::identity(1)) {}

FinMod::FinMod(unsigned p, Lattice relations, IntMatrix action)
    : p_(p), relations_(std::move(relations)), action_(std::move(action)) {
  const std::size_t r = relations_.ambient_rank();
  if (!is_prime(p)) throw PreconditionError("module: p must be prime");
  if (action_.rows() != r || action_.cols() != r) throw PreconditionError("module: action shape mismatch");
  if (!relations_.contains(relations_.image(action_)))
    throw PreconditionError("module: action does not preserve the relation lattice");
  IntMatrix up = matrix_pow(action_, p) - IntMatrix::identity(r);
  for (std::size_t j = 0; j < r; ++j)
    if (!relations_.contains(up.column(j)))
      throw PreconditionError("module: alpha^p is not the identity on the quotient");
}

Int FinMod::order() const {
  if (!is_finite()) throw PreconditionError("module is infinite");
  return relations_.index();
}

unsigned FinMod::action_order() const {
  IntMatrix d = action_ - IntMatrix::identity(ambient_rank());
  for (std::size_t j = 0; j < d.cols(); ++j)
    if (!relations_.contains(d.column(j))) return p_;
  return 1;
}

bool FinMod::equal(const IntVec& a, const IntVec& b) const {
  IntVec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return relations_.contains(d);
}

IntVec FinMod::add(const IntVec& a, const IntVec& b) const {
  IntVec s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return canonical(s);
}

IntVec FinMod::scale(const Int& c, const IntVec& v) const {
  IntVec s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) s[i] = c * v[i];
  return canonical(s);
}

IntVec FinMod::apply(const RingElt& lambda, const IntVec& v) const {
  if (lambda.p() != p_) throw PreconditionError("ring element has the wrong p");
  IntVec acc(v.size()), cur = v;
  for (unsigned i = 0; i < p_; ++i) {
    if (lambda[i] != 0)
      for (std::size_t j = 0; j < v.size(); ++j) acc[j] += lambda[i] * cur[j];
    cur = action_ * cur;
  }
  return canonical(acc);
}

std::vector<IntVec> FinMod::enumerate() const {
  Int n = order();
  if (n > Int(static_cast<unsigned long>(kEnumerateLimit)))
    throw PreconditionError("module too large to enumerate");
  const std::size_t r = ambient_rank();
  std::vector<unsigned long> radix(r);
  for (std::size_t i = 0; i < r; ++i) radix[i] = relations_.basis()(i, i).get_ui();
  std::vector<IntVec> out;
  out.reserve(n.get_ui());
  std::vector<unsigned long> digit(r, 0);
  for (unsigned long count = 0; count < n.get_ui(); ++count) {
    IntVec v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = digit[i];
    out.push_back(std::move(v));
    for (std::size_t i = 0; i < r; ++i) {
      if (++digit[i] < radix[i]) break;
      digit[i] = 0;
    }
  }
  return out;
}

std::size_t FinMod::index_of(const IntVec& v) const {
  if (!is_finite()) throw PreconditionError("module is infinite");
  IntVec c = canonical(v);
  std::size_t idx = 0, mult = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    idx += c[i].get_ui() * mult;
    mult *= relations_.basis()(i, i).get_ui();
  }
  return idx;
}

std::vector<std::vector<std::size_t>> FinMod::orbits() const {
  auto elems = enumerate();
  std::vector<bool> seen(elems.size(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit;
    IntVec x = elems[i];
    std::size_t j = i;
    do {
      seen[j] = true;
      orbit.push_back(j);
      x = act(x);
      j = index_of(x);
    } while (j != i);
    out.push_back(std::move(orbit));
  }
  return out;
}

Lattice FinMod::t_image() const { return t_image(whole()); }

Lattice FinMod::t_image(const Lattice& sub) const {
  IntMatrix t = action_ - IntMatrix::identity(ambient_rank());
  return relations_ + sub.image(t);
}

Lattice FinMod::fixed_submodule() const {
  return preimage(action_ - IntMatrix::identity(ambient_rank()), relations_);
}

Lattice FinMod::s_kernel() const {
  const std::size_t r = ambient_rank();
  IntMatrix s(r, r), cur = IntMatrix::identity(r);
  for (unsigned i = 0; i < p_; ++i) {
    s += cur;
    cur = action_ * cur;
  }
  return preimage(s, relations_);
}

Lattice FinMod::generated(const std::vector<IntVec>& gens) const {
  std::vector<IntVec> all;
  for (const auto& g : gens) {
    IntVec cur = g;
    for (unsigned i = 0; i < p_; ++i) {
      all.push_back(cur);
      cur = action_ * cur;
    }
  }
  return relations_ + Lattice::from_generators(ambient_rank(), all);
}

Int FinMod::subgroup_order(const Lattice& s) const {
  if (!s.contains(relations_)) throw PreconditionError("subgroup does not contain the relations");
  return order() / s.index();
}

bool FinMod::is_submodule(const Lattice& s) const {
  return s.ambient_rank() == ambient_rank() && s.contains(relations_) && s.contains(s.image(action_));
}

std::string FinMod::describe() const {
  std::ostringstream os;
  if (provenance_) os << provenance_->to_string() << " ";
  os << "p=" << p_ << " rank " << ambient_rank();
  if (is_finite()) os << " order " << order().get_str();
  else os << " infinite";
  return os.str();
}

Lattice preimage(const IntMatrix& a, const Lattice& target) {
  if (a.rows() != target.ambient_rank()) throw PreconditionError("preimage: shape mismatch");
  Lattice k = kernel_basis(IntMatrix::hstack(a, Int(-1) * target.basis()));
  IntMatrix top(a.cols(), k.rank());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < k.rank(); ++j) top(i, j) = k.basis()(i, j);
  return Lattice::from_generators(top);
}

FinMod build_module(const ModSpec& spec, unsigned p) {
  if (!is_prime(p)) throw PreconditionError("p must be prime");
  using K = ModSpec::Kind;
  FinMod out = [&]() -> FinMod {
    switch (spec.kind) {
      case K::TrivCyclic:
        return FinMod(p, Lattice::from_generators(IntMatrix::from_rows({{spec.n}})), IntMatrix::identity(1));
      case K::TrivFree:
        return FinMod(p, Lattice(spec.rank), IntMatrix::identity(spec.rank));
      case K::CyclicTwisted: {
        IntMatrix a(1, 1);
        a(0, 0) = floor_mod(Int(spec.a), Int(spec.n));
        return FinMod(p, Lattice::from_generators(IntMatrix::from_rows({{spec.n}})), a);
      }
      case K::CyclicR: {
        Int qk = ipow(Int(spec.q), spec.k);
        return FinMod(p, Lattice::from_generators(qk * IntMatrix::identity(p)), shift_matrix(p));
      }
      case K::FreeR: {
        IntMatrix u(0, 0);
        for (long i = 0; i < spec.rank; ++i) u = IntMatrix::block_diag(u, shift_matrix(p));
        return FinMod(p, Lattice(spec.rank * p), u);
      }
      case K::Sum: {
        if (spec.children.empty())
          return FinMod(p, Lattice::full(1), IntMatrix::identity(1));
        FinMod acc = build_module(spec.children[0], p);
        for (std::size_t i = 1; i < spec.children.size(); ++i)
          acc = direct_sum(acc, build_module(spec.children[i], p));
        return acc;
      }
    }
    throw InternalError("unreachable module kind");
  }();
  out.set_provenance(spec);
  return out;
}

FinMod direct_sum(const FinMod& a, const FinMod& b) {
  if (a.p() != b.p()) throw PreconditionError("direct sum: different p");
  Lattice rel = Lattice::from_generators(IntMatrix::block_diag(a.relations().basis(), b.relations().basis()));
  FinMod out(a.p(), rel, IntMatrix::block_diag(a.action(), b.action()));
  if (a.provenance() && b.provenance()) out.set_provenance(ModSpec::sum({*a.provenance(), *b.provenance()}));
  return out;
}

FinMod quotient(const FinMod& m, const Lattice& sub) {
  if (!m.is_submodule(sub)) throw PreconditionError("quotient by a subgroup that is not a submodule");
  return FinMod(m.p(), sub, m.action());
}

Submodule as_submodule(const FinMod& m, const Lattice& s) {
  if (!m.is_submodule(s)) throw PreconditionError("not a submodule");
  IntMatrix rel = s.coordinates_of(m.relations().basis());
  FinMod mod(m.p(), Lattice::from_generators(rel), restricted_action(s, m.action()));
  return Submodule{s, std::move(mod), s.basis()};
}

Submodule submodule_generated(const FinMod& m, const std::vector<IntVec>& gens) {
  return as_submodule(m, m.generated(gens));
}

ModSpec random_spec(Rng& rng, unsigned p, long cap) {
  struct Leaf {
    ModSpec spec;
    long order;
  };
  std::vector<Leaf> leaves;
  for (long n = 2; n <= std::min(cap, 12L); ++n) leaves.push_back({ModSpec::triv(n), n});
  for (long q : {2L, 3L, 5L, 7L})
    for (long k = 1; k <= 3; ++k) {
      long ord = 1;
      for (long i = 0; i < k * static_cast<long>(p) && ord <= cap; ++i) ord *= q;
      if (ord <= cap) leaves.push_back({ModSpec::cyclic_r(q, k), ord});
    }
  if (p == 2)
    for (long n = 3; n <= std::min(cap, 12L); ++n) leaves.push_back({ModSpec::twisted(n, n - 1), n});
  if (p == 3)
    for (auto [n, a] : {std::pair{7L, 2L}, {9L, 4L}, {13L, 3L}, {19L, 7L}})
      if (n <= cap) leaves.push_back({ModSpec::twisted(n, a), n});

  std::vector<ModSpec> parts;
  long order = 1;
  int want = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int tries = 0; tries < 20 && static_cast<int>(parts.size()) < want; ++tries) {
    const Leaf& l = leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
    if (order * l.order > cap) continue;
    order *= l.order;
    parts.push_back(l.spec);
  }
  if (parts.empty()) parts.push_back(ModSpec::triv(2));
  return ModSpec::sum(std::move(parts));
}

std::vector<ModSpec> small_specs(unsigned p, long max_order) {
  std::vector<std::pair<ModSpec, long>> leaves;
  for (long n = 2; n <= max_order; ++n) leaves.push_back({ModSpec::triv(n), n});
  for (long q = 2; q <= max_order; ++q) {
    if (!is_prime(q)) continue;
    long ord = 1;
    for (long k = 1;; ++k) {
      for (unsigned i = 0; i < p && ord <= max_order; ++i) ord *= q;
      if (ord > max_order) break;
      leaves.push_back({ModSpec::cyclic_r(q, k), ord});
    }
  }
  for (long n = 3; n <= max_order; ++n)
    for (long a = 2; a < n; ++a) {
      long x = 1;
      for (unsigned i = 0; i < p; ++i) x = x * a % n;
      if (x == 1) leaves.push_back({ModSpec::twisted(n, a), n});
    }

  std::vector<ModSpec> out{ModSpec::triv(1)};
  std::vector<ModSpec> parts;
  auto rec = [&](auto&& self, std::size_t first, long order) -> void {
    for (std::size_t i = first; i < leaves.size(); ++i) {
      if (order * leaves[i].second > max_order) continue;
      parts.push_back(leaves[i].first);
      out.push_back(ModSpec::sum(parts));
      self(self, i, order * leaves[i].second);
      parts.pop_back();
    }
  };
  rec(rec, 0, 1);
  return out;
}

Lattice random_submodule(Rng& rng, const FinMod& m, int max_gens) {
  auto elems = m.enumerate();
  int count = std::uniform_int_distribution<int>(0, max_gens)(rng);
  std::vector<IntVec> gens;
  for (int i = 0; i < count; ++i)
    gens.push_back(elems[std::uniform_int_distribution<std::size_t>(0, elems.size() - 1)(rng)]);
  return m.generated(gens);
}

FinMod random_module(Rng& rng, unsigned p, long cap) {
  FinMod m = build_module(random_spec(rng, p, cap), p);
  if (std::bernoulli_distribution(0.5)(rng)) {
    Lattice sub = random_submodule(rng, m, 1);
    if (sub.index() > 1) return quotient(m, sub);
  }
  return m;
}

}  // namespace zcp

#include <algorithm>

#include "zcp/error.hpp"
#include "zcp/presentation.hpp"

namespace zcp {

namespace {

IntVec unit(std::size_t n, std::size_t i) {
  IntVec v(n);
  v[i] = 1;
  return v;
}

IntVec combo(std::initializer_list<std::pair<Int, const IntVec*>> terms) {
  IntVec out(terms.begin()->second->size());
  for (const auto& [c, v] : terms)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * (*v)[i];
  return out;
}

bool is_zero_element(const FinMod& m, const IntVec& x) {
  for (const auto& e : m.canonical(x))
    if (e != 0) return false;
  return true;
}

}  // namespace

IntVec AugPresentation::hat(std::size_t i) const { return unit(size(), i); }

AugPresentation build_aug(const FinMod& m) {
  AugPresentation pres{m, m.enumerate(), {}, {}, {}, Lattice()};
  const std::size_t n = pres.elements.size();
  pres.perm.resize(n);
  pres.action = IntMatrix(n, n);
  pres.pi = IntMatrix::from_columns(pres.elements, m.ambient_rank());
  for (std::size_t i = 0; i < n; ++i) {
    pres.perm[i] = m.index_of(m.act(pres.elements[i]));
    pres.action(pres.perm[i], i) = 1;
  }
  pres.N = preimage(pres.pi, m.relations());
  ZCP_CHECK(pres.N.rank() == n, "N_M must have rank |M|");
  return pres;
}

std::size_t InvariantBasis::size() const {
  std::size_t n = fixed.size();
  for (const auto& b : orbit_blocks) n += b.size();
  return n;
}

std::vector<IntVec> InvariantBasis::vectors() const {
  std::vector<IntVec> out;
  for (const auto& b : orbit_blocks) out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), fixed.begin(), fixed.end());
  return out;
}

IntMatrix InvariantBasis::matrix() const { return IntMatrix::from_columns(vectors(), ambient); }

void InvariantBasis::append(const InvariantBasis& other) {
  if (other.ambient != ambient) throw PreconditionError("invariant basis: ambient mismatch");
  orbit_blocks.insert(orbit_blocks.end(), other.orbit_blocks.begin(), other.orbit_blocks.end());
  fixed.insert(fixed.end(), other.fixed.begin(), other.fixed.end());
}

std::string check_invariant_basis(const InvariantBasis& b, const Lattice& n, const IntMatrix& action,
                                  unsigned p) {
  if (b.ambient != n.ambient_rank()) return "ambient dimension mismatch";
  for (const auto& v : b.vectors())
    if (v.size() != b.ambient) return "vector of wrong length";
  for (std::size_t j = 0; j < b.orbit_blocks.size(); ++j) {
    const auto& blk = b.orbit_blocks[j];
    if (blk.size() != p) return "orbit block " + std::to_string(j) + " does not have p vectors";
    for (std::size_t i = 0; i < p; ++i)
      if (action * blk[i] != blk[(i + 1) % p])
        return "orbit block " + std::to_string(j) + " is not cycled by the action at position " + std::to_string(i);
  }
  for (std::size_t j = 0; j < b.fixed.size(); ++j)
    if (action * b.fixed[j] != b.fixed[j]) return "fixed vector " + std::to_string(j) + " is moved";
  if (b.size() != n.rank())
    return "basis has " + std::to_string(b.size()) + " vectors, lattice rank is " + std::to_string(n.rank());
  if (!(Lattice::from_generators(b.matrix()) == n)) return "vectors do not span the lattice";
  return "";
}

InvariantBasis basis_R_mod_qk(long q, long k, unsigned p) {
  return basis_R_mod_qk(build_aug(build_module(ModSpec::cyclic_r(q, k), p)));
}

InvariantBasis basis_R_mod_qk(const AugPresentation& pres) {
  const FinMod& m = pres.M;
  const unsigned p = m.p();
  if (m.ambient_rank() != p) throw PreconditionError("basis_R_mod_qk: module is not R/(q^k)");
  const Int qk = m.relations().basis()(0, 0);
  if (!(Lattice::from_generators(qk * IntMatrix::identity(p)) == m.relations()))
    throw PreconditionError("basis_R_mod_qk: module is not R/(q^k)");

  std::vector<std::size_t> e_idx(p);
  for (unsigned i = 0; i < p; ++i) e_idx[i] = m.index_of(unit(p, i));
  auto in_b = [&](std::size_t idx) { return std::find(e_idx.begin(), e_idx.end(), idx) != e_idx.end(); };
  auto xi = [&](std::size_t idx) {
    IntVec v = pres.hat(idx);
    const IntVec& x = pres.elements[idx];
    for (unsigned i = 0; i < p; ++i) v[e_idx[i]] -= x[i];
    return v;
  };

  InvariantBasis out;
  out.ambient = pres.size();
  for (const auto& orbit : m.orbits()) {
    if (in_b(orbit[0])) continue;
    if (orbit.size() == 1) {
      out.fixed.push_back(xi(orbit[0]));
    } else {
      std::vector<IntVec> blk;
      for (auto idx : orbit) blk.push_back(xi(idx));
      out.orbit_blocks.push_back(std::move(blk));
    }
  }
  std::vector<IntVec> qblock;
  for (unsigned i = 0; i < p; ++i) {
    IntVec v = pres.hat(e_idx[i]);
    v[e_idx[i]] = qk;
    qblock.push_back(v);
  }
  out.orbit_blocks.push_back(std::move(qblock));
  return out;
}

InvariantBasis basis_trivial(const AugPresentation& pres) {
  const FinMod& m = pres.M;
  if (m.action_order() != 1) throw PreconditionError("basis_trivial: action is not trivial");
  InvariantBasis out;
  out.ambient = pres.size();
  out.fixed.push_back(pres.hat(std::size_t{0}));
  const std::size_t n = pres.size();
  if (m.ambient_rank() == 1) {
    if (n == 1) return out;
    IntVec one = pres.hat(IntVec{1});
    for (std::size_t x = 2; x < n; ++x) {
      IntVec hx = pres.hat(IntVec{Int(static_cast<unsigned long>(x))});
      out.fixed.push_back(combo({{1, &hx}, {-Int(static_cast<unsigned long>(x)), &one}}));
    }
    out.fixed.push_back(combo({{Int(static_cast<unsigned long>(n)), &one}}));
    return out;
  }
  std::vector<IntVec> rest;
  for (std::size_t i = 1; i < n; ++i) rest.push_back(pres.hat(i));
  Lattice tilde = lattice_intersect(pres.N, Lattice::from_generators(n, rest));
  for (std::size_t j = 0; j < tilde.rank(); ++j) out.fixed.push_back(tilde.basis().column(j));
  return out;
}

InvariantBasis DirectSumBasis::combined() const {
  InvariantBasis out = zero_part;
  out.append(tilde1);
  out.append(tilde2);
  out.append(n3);
  return out;
}

DirectSumBasis assemble_direct_sum(const AugPresentation& p1, const AugPresentation& p2,
                                   const InvariantBasis& b1, const InvariantBasis& b2) {
  if (p1.M.p() != p2.M.p()) throw PreconditionError("assemble_direct_sum: different p");
  const std::size_t r1 = p1.M.ambient_rank(), r2 = p2.M.ambient_rank();
  DirectSumBasis out{build_aug(direct_sum(p1.M, p2.M)), {}, {}, {}, {}, {}};
  const AugPresentation& pres = out.pres;
  const std::size_t n = pres.size();

  auto lift = [&](const IntVec& x, bool first) {
    IntVec y(r1 + r2);
    for (std::size_t i = 0; i < x.size(); ++i) y[first ? i : r1 + i] = x[i];
    return y;
  };
  std::vector<std::size_t> map1(p1.size()), map2(p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) map1[i] = pres.M.index_of(lift(p1.elements[i], true));
  for (std::size_t i = 0; i < p2.size(); ++i) map2[i] = pres.M.index_of(lift(p2.elements[i], false));
  auto embed = [&](const IntVec& v, const std::vector<std::size_t>& map) {
    IntVec w(n);
    for (std::size_t i = 0; i < v.size(); ++i) w[map[i]] += v[i];
    return w;
  };
  auto tilde = [&](const InvariantBasis& b, const AugPresentation& pp, const std::vector<std::size_t>& map) {
    IntVec zero_hat = pp.hat(std::size_t{0});
    auto it = std::find(b.fixed.begin(), b.fixed.end(), zero_hat);
    if (it == b.fixed.end()) throw PreconditionError("assemble_direct_sum: basis lacks the fixed vector 0^");
    InvariantBasis t;
    t.ambient = n;
    for (const auto& blk : b.orbit_blocks) {
      std::vector<IntVec> e;
      for (const auto& v : blk) e.push_back(embed(v, map));
      t.orbit_blocks.push_back(std::move(e));
    }
    for (auto f = b.fixed.begin(); f != b.fixed.end(); ++f)
      if (f != it) t.fixed.push_back(embed(*f, map));
    return t;
  };

  out.zero_part.ambient = n;
  out.zero_part.fixed.push_back(pres.hat(std::size_t{0}));
  out.tilde1 = tilde(b1, p1, map1);
  out.tilde2 = tilde(b2, p2, map2);
  out.n3.ambient = n;

  auto split = [&](std::size_t idx) {
    const IntVec& x = pres.elements[idx];
    IntVec x1(x.begin(), x.begin() + r1), x2(x.begin() + r1, x.end());
    return std::pair{x1, x2};
  };
  auto in_l = [&](std::size_t idx) {
    auto [x1, x2] = split(idx);
    return !is_zero_element(p1.M, x1) && !is_zero_element(p2.M, x2);
  };
  auto xi = [&](std::size_t idx) {
    auto [x1, x2] = split(idx);
    IntVec v = pres.hat(idx);
    v[pres.M.index_of(lift(x1, true))] -= 1;
    v[pres.M.index_of(lift(x2, false))] -= 1;
    return v;
  };
  for (const auto& orbit : pres.M.orbits()) {
    if (!in_l(orbit[0])) continue;
    for (auto idx : orbit) out.l_elements.push_back(idx);
    if (orbit.size() == 1) {
      out.n3.fixed.push_back(xi(orbit[0]));
    } else {
      std::vector<IntVec> blk;
      for (auto idx : orbit) blk.push_back(xi(idx));
      out.n3.orbit_blocks.push_back(std::move(blk));
    }
  }
  return out;
}

namespace {

std::pair<AugPresentation, InvariantBasis> constructive(const ModSpec& spec, unsigned p) {
  using K = ModSpec::Kind;
  if (spec.kind == K::Sum) {
    if (spec.children.empty()) {
      AugPresentation pres = build_aug(build_module(spec, p));
      InvariantBasis b;
      b.ambient = 1;
      b.fixed.push_back(pres.hat(std::size_t{0}));
      return {pres, b};
    }
    auto acc = constructive(spec.children[0], p);
    for (std::size_t i = 1; i < spec.children.size(); ++i) {
      auto next = constructive(spec.children[i], p);
      DirectSumBasis d = assemble_direct_sum(acc.first, next.first, acc.second, next.second);
      acc = {d.pres, d.combined()};
    }
    return acc;
  }
  AugPresentation pres = build_aug(build_module(spec, p));
  if (spec.kind == K::CyclicR) return {pres, basis_R_mod_qk(pres)};
  if (spec.kind == K::TrivCyclic) return {pres, basis_trivial(pres)};
  throw InternalError("constructive basis: unsupported leaf");
}

}  // namespace

std::optional<InvariantBasis> constructive_basis(const AugPresentation& pres) {
  const auto& prov = pres.M.provenance();
  if (!prov || !prov->is_building_block_tree()) return std::nullopt;
  auto [cp, basis] = constructive(*prov, pres.M.p());
  if (!(cp.M.relations() == pres.M.relations()) || cp.M.action() != pres.M.action()) return std::nullopt;
  return basis;
}

WindowedRBasis windowed_R_basis(unsigned p, long radius) {
  if (!is_prime(p)) throw PreconditionError("p must be prime");
  if (radius < 1) throw PreconditionError("window radius must be >= 1");
  WindowedRBasis out;
  out.p = p;
  out.radius = radius;
  const long side = 2 * radius + 1;
  std::size_t count = 1;
  for (unsigned i = 0; i < p; ++i) count *= side;
  if (count > 4096) throw PreconditionError("window too large");
  for (std::size_t c = 0; c < count; ++c) {
    IntVec x(p);
    std::size_t rest = c;
    for (unsigned i = 0; i < p; ++i) {
      x[i] = static_cast<long>(rest % side) - radius;
      rest /= side;
    }
    out.window.push_back(x);
  }
  auto index = [&](const IntVec& x) {
    std::size_t idx = 0, mult = 1;
    for (unsigned i = 0; i < p; ++i) {
      idx += (x[i].get_si() + radius) * mult;
      mult *= side;
    }
    return idx;
  };
  auto rotate = [&](const IntVec& x) {  // alpha * x
    IntVec y(p);
    for (unsigned i = 0; i < p; ++i) y[(i + 1) % p] = x[i];
    return y;
  };
  std::vector<std::size_t> e_idx(p);
  for (unsigned i = 0; i < p; ++i) e_idx[i] = index(unit(p, i));
  auto xi = [&](std::size_t idx) {
    IntVec v = unit(count, idx);
    for (unsigned i = 0; i < p; ++i) v[e_idx[i]] -= out.window[idx][i];
    return v;
  };

  IntMatrix perm(count, count);
  for (std::size_t i = 0; i < count; ++i) perm(index(rotate(out.window[i])), i) = 1;

  out.basis.ambient = count;
  std::vector<bool> seen(count, false);
  for (auto e : e_idx) seen[e] = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit;
    std::size_t j = i;
    do {
      seen[j] = true;
      orbit.push_back(j);
      j = index(rotate(out.window[j]));
    } while (j != i);
    if (orbit.size() == 1) {
      out.basis.fixed.push_back(xi(i));
    } else {
      std::vector<IntVec> blk;
      for (auto idx : orbit) blk.push_back(xi(idx));
      out.basis.orbit_blocks.push_back(std::move(blk));
    }
  }
  out.kernel = kernel_basis(IntMatrix::from_columns(out.window, p));
  IntMatrix bm = out.basis.matrix();
  out.independent = rank(bm) == bm.cols();
  out.spans = Lattice::from_generators(bm) == out.kernel;
  out.equivariant = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (std::find(e_idx.begin(), e_idx.end(), i) != e_idx.end()) continue;
    if (perm * xi(i) != xi(index(rotate(out.window[i])))) out.equivariant = false;
  }
  return out;
}

}  // namespace zcp

#include <algorithm>
#include <random>

#include "zcp/error.hpp"
#include "zcp/lattice_props.hpp"
#include "zcp/presentation.hpp"

namespace zcp {

namespace {

IntMatrix shift_block(unsigned p) {
  IntMatrix u(p, p);
  for (unsigned i = 0; i < p; ++i) u((i + 1) % p, i) = 1;
  return u;
}

IntVec pad(const IntVec& v, std::size_t n) {
  IntVec w = v;
  w.resize(n);
  return w;
}

bool all_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& e) { return e == 0; });
}

// Peels free orbits R*v off the current complement C as long as some
// candidate admits a functional phi with phi(A^i v) = delta_{i0}; the
// complement is then ker Phi, Phi(x) = sum_i phi(A^{-i} x) alpha^i, and the
// remaining candidates are projected along R*v into it.
std::optional<InvariantBasis> greedy(const Lattice& n, const IntMatrix& a, unsigned p,
                                     std::vector<IntVec> pool, Rng& rng, const SearchOptions& opts,
                                     std::size_t& tried) {
  const std::size_t amb = n.ambient_rank();
  InvariantBasis out;
  out.ambient = amb;
  Lattice c = n;
  pool.erase(std::remove_if(pool.begin(), pool.end(), [&](const IntVec& v) { return !n.contains(v); }),
             pool.end());

  while (c.rank() > 0) {
    const std::size_t m = c.rank();
    IntMatrix ac = restricted_action(c, a);
    if (ac.is_identity()) {
      for (std::size_t j = 0; j < m; ++j) out.fixed.push_back(c.basis().column(j));
      return out;
    }
    std::vector<IntMatrix> pw(p);
    pw[0] = IntMatrix::identity(m);
    for (unsigned i = 1; i < p; ++i) pw[i] = ac * pw[i - 1];

    // Candidates in C-coordinates.
    std::vector<IntVec> cand;
    for (const auto& v : pool) cand.push_back(*c.coordinates(v));
    for (std::size_t j = 0; j < m; ++j) {
      IntVec e(m);
      e[j] = 1;
      cand.push_back(e);
    }
    for (std::size_t i = 0; i < m && cand.size() < pool.size() + 4 * m * m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        IntVec e(m);
        e[i] = 1;
        e[j] = 1;
        cand.push_back(e);
        e[j] = -1;
        cand.push_back(e);
      }
    std::uniform_int_distribution<int> coef(-1, 1);
    for (std::size_t r = 0; r < opts.random_candidates; ++r) {
      IntVec e(m);
      for (auto& x : e) x = coef(rng);
      cand.push_back(e);
    }

    bool found = false;
    for (const auto& w0 : cand) {
      if (all_zero(w0)) continue;
      ++tried;
      IntMatrix wt(p, m);  // rows (A^i w0)^T
      std::vector<IntVec> orbit(p);
      for (unsigned i = 0; i < p; ++i) {
        orbit[i] = pw[i] * w0;
        for (std::size_t j = 0; j < m; ++j) wt(i, j) = orbit[i][j];
      }
      IntVec e0(p);
      e0[0] = 1;
      auto phi = solve_integer_system(wt, e0);
      if (!phi) continue;

      std::vector<IntVec> blk;
      for (const auto& w : orbit) blk.push_back(c.basis() * w);
      out.orbit_blocks.push_back(std::move(blk));

      IntMatrix rows(p, m);
      for (unsigned i = 0; i < p; ++i) {
        IntVec r = pw[i].transpose() * *phi;
        for (std::size_t j = 0; j < m; ++j) rows(i, j) = r[j];
      }
      Lattice k = kernel_basis(rows);
      Lattice next = Lattice::from_generators(c.basis() * k.basis());

      std::vector<IntVec> projected;
      for (const auto& v : pool) {
        IntVec cv = *c.coordinates(v);
        IntVec rest = cv;
        for (unsigned i = 0; i < p; ++i) {
          // coefficient of alpha^i in Phi(v) is phi(A^{-i} v) = phi(A^{p-i} v)
          IntVec shifted = pw[(p - i) % p] * cv;
          Int ai = 0;
          for (std::size_t j = 0; j < m; ++j) ai += (*phi)[j] * shifted[j];
          if (ai == 0) continue;
          for (std::size_t j = 0; j < m; ++j) rest[j] -= ai * orbit[i][j];
        }
        if (all_zero(rest)) continue;
        projected.push_back(c.basis() * rest);
      }
      pool = std::move(projected);
      c = std::move(next);
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  return out;
}

}  // namespace

IntMatrix stabilized_action(const IntMatrix& action, unsigned p, unsigned k) {
  IntMatrix a = action;
  for (unsigned i = 0; i < k; ++i) a = IntMatrix::block_diag(a, shift_block(p));
  return a;
}

Lattice stabilized_lattice(const Lattice& n, unsigned p, unsigned k) {
  return Lattice::from_generators(IntMatrix::block_diag(n.basis(), IntMatrix::identity(std::size_t{k} * p)));
}

SearchResult find_invariant_basis(const Lattice& n, const IntMatrix& action, unsigned p,
                                  const SearchOptions& opts, const std::vector<IntVec>& hints) {
  if (!is_noncyclotomic(n, action, p))
    throw NotNonCyclotomic("lattice has a cyclotomic summand: ker(s) & N != tN");
  Rng rng(opts.seed);
  std::vector<IntVec> base = hints;
  if (base.size() > opts.hint_limit) {
    std::shuffle(base.begin(), base.end(), rng);
    base.resize(opts.hint_limit);
  }
  SearchResult res;
  const unsigned kmax = opts.allow_stabilization ? opts.k_max : 0;
  for (unsigned k = 0; k <= kmax; ++k) {
    Lattice nk = stabilized_lattice(n, p, k);
    IntMatrix ak = stabilized_action(action, p, k);
    const std::size_t amb = nk.ambient_rank();
    std::vector<IntVec> pool;
    for (const auto& h : base) pool.push_back(pad(h, amb));
    for (unsigned j = 0; j < k; ++j) {
      const std::size_t off = n.ambient_rank() + std::size_t{j} * p;
      for (const auto& h : base) {
        IntVec v = pad(h, amb);
        v[off] += 1;
        pool.push_back(v);
      }
    }
    auto b = greedy(nk, ak, p, pool, rng, opts, res.candidates_tried);
    if (!b) continue;
    std::string problem = check_invariant_basis(*b, nk, ak, p);
    ZCP_CHECK(problem.empty(), "search produced an invalid basis: " + problem);
    res.k = k;
    res.basis = std::move(*b);
    res.route = k == 0 ? "greedy" : "greedy+stabilized";
    return res;
  }
  throw SearchExhausted("no invariant basis found with k <= " + std::to_string(kmax) + " after " +
                        std::to_string(res.candidates_tried) + " candidates");
}

SearchResult invariant_basis_for(const AugPresentation& pres, const SearchOptions& opts) {
  const unsigned p = pres.M.p();
  if (auto b = constructive_basis(pres)) {
    std::string problem = check_invariant_basis(*b, pres.N, pres.action, p);
    ZCP_CHECK(problem.empty(), "constructive basis failed verification: " + problem);
    return SearchResult{0, std::move(*b), "constructive", 0};
  }
  // Hints: 0^, ord(x) x^, and the three-term relations (y+z)^ - y^ - z^.
  std::vector<IntVec> hints;
  const std::size_t n = pres.size();
  hints.push_back(pres.hat(std::size_t{0}));
  for (std::size_t i = 1; i < n; ++i) {
    Int ord = 1;
    IntVec x = pres.elements[i];
    while (pres.M.index_of(pres.M.scale(ord, x)) != 0) ++ord;
    IntVec v = pres.hat(i);
    v[i] = ord;
    hints.push_back(v);
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::size_t sum = pres.M.index_of(pres.M.add(pres.elements[i], pres.elements[j]));
      IntVec v(n);
      v[sum] += 1;
      v[i] -= 1;
      v[j] -= 1;
      hints.push_back(v);
    }
  return find_invariant_basis(pres.N, pres.action, p, opts, hints);
}

StabilizedPresentation stabilize_presentation(const FinMod& m, const SearchOptions& opts, unsigned min_k) {
  StabilizedPresentation sp;
  sp.pres = build_aug(m);
  const unsigned p = m.p();
  SearchResult r = invariant_basis_for(sp.pres, opts);
  if (r.k < min_k) {
    const std::size_t amb = sp.pres.size() + std::size_t{min_k} * p;
    for (auto& blk : r.basis.orbit_blocks)
      for (auto& v : blk) v.resize(amb);
    for (auto& v : r.basis.fixed) v.resize(amb);
    for (unsigned j = r.k; j < min_k; ++j) {
      std::vector<IntVec> blk;
      for (unsigned i = 0; i < p; ++i) {
        IntVec v(amb);
        v[sp.pres.size() + std::size_t{j} * p + i] = 1;
        blk.push_back(v);
      }
      r.basis.orbit_blocks.push_back(std::move(blk));
    }
    r.basis.ambient = amb;
    r.k = min_k;
  }
  sp.k = r.k;
  sp.route = r.route;
  sp.n1 = std::move(r.basis);
  const std::size_t n = sp.pres.size(), amb = n + std::size_t{sp.k} * p;
  sp.action = stabilized_action(sp.pres.action, p, sp.k);
  sp.to_module = IntMatrix::hstack(sp.pres.pi, IntMatrix(m.ambient_rank(), amb - n));

  // N2 = ZM + R^k: one block per free orbit of M, x^ for fixed points, then the R copies.
  sp.n2.ambient = amb;
  sp.cover.assign(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> where(n);  // (block or fixed, position)
  auto unit = [&](std::size_t i) {
    IntVec v(amb);
    v[i] = 1;
    return v;
  };
  std::vector<std::size_t> fixed_pts;
  for (const auto& orbit : m.orbits()) {
    if (orbit.size() == 1) {
      fixed_pts.push_back(orbit[0]);
      continue;
    }
    std::vector<IntVec> blk;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      where[orbit[i]] = {sp.n2.orbit_blocks.size(), i};
      blk.push_back(unit(orbit[i]));
    }
    sp.n2.orbit_blocks.push_back(std::move(blk));
  }
  for (unsigned j = 0; j < sp.k; ++j) {
    std::vector<IntVec> blk;
    for (unsigned i = 0; i < p; ++i) blk.push_back(unit(n + std::size_t{j} * p + i));
    sp.n2.orbit_blocks.push_back(std::move(blk));
  }
  for (auto x : fixed_pts) sp.n2.fixed.push_back(unit(x));
  const std::size_t free_len = sp.n2.orbit_blocks.size() * p;
  for (std::size_t f = 0; f < fixed_pts.size(); ++f) sp.cover[fixed_pts[f]] = free_len + f;
  for (std::size_t x = 0; x < n; ++x)
    if (std::find(fixed_pts.begin(), fixed_pts.end(), x) == fixed_pts.end())
      sp.cover[x] = where[x].first * p + where[x].second;

  Lattice n2 = Lattice::full(amb);
  ZCP_CHECK(check_invariant_basis(sp.n2, n2, sp.action, p).empty(), "ZM + R^k basis invalid");
  Lattice image_n1 = Lattice::from_generators(sp.n1.matrix());
  Lattice ker = preimage(sp.to_module, m.relations());
  sp.exact = image_n1 == ker && check_invariant_basis(sp.n1, ker, sp.action, p).empty();
  auto n2vec = sp.n2.vectors();
  sp.cover_valid = true;
  for (std::size_t x = 0; x < n; ++x)
    if (!m.equal(sp.to_module * n2vec[sp.cover[x]], sp.pres.elements[x])) sp.cover_valid = false;
  return sp;
}

}  // namespace zcp

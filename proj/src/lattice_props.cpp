#include <algorithm>
#include <map>

#include "zcp/error.hpp"
#include "zcp/lattice_props.hpp"

namespace zcp {

IntMatrix ring_action(const RingElt& lambda, const IntMatrix& action) {
  const std::size_t n = action.rows();
  IntMatrix out(n, n), cur = IntMatrix::identity(n);
  for (unsigned i = 0; i < lambda.p(); ++i) {
    if (lambda[i] != 0) out += lambda[i] * cur;
    cur = action * cur;
  }
  return out;
}

NoncycDetail noncyclotomic_detail(const Lattice& n, const IntMatrix& action, unsigned p) {
  IntMatrix s = ring_action(RingElt::s(p), action);
  Lattice k = kernel_basis(s * n.basis());
  NoncycDetail d;
  d.ker_s = Lattice::from_generators(n.basis() * k.basis());
  d.t_n = n.image(action - IntMatrix::identity(action.rows()));
  d.equal = d.ker_s == d.t_n;
  return d;
}

bool is_noncyclotomic(const Lattice& n, const IntMatrix& action, unsigned p) {
  return noncyclotomic_detail(n, action, p).equal;
}

InclusionPair make_inclusion(const FinMod& m, const Lattice& m0_preimage) {
  Submodule sub = as_submodule(m, m0_preimage);
  AugPresentation pres = build_aug(m);
  AugPresentation pres0 = build_aug(sub.module);
  IntMatrix embed(pres.size(), pres0.size());
  std::vector<std::size_t> idx(pres0.size());
  for (std::size_t j = 0; j < pres0.size(); ++j) {
    idx[j] = m.index_of(sub.include(pres0.elements[j]));
    embed(idx[j], j) = 1;
  }
  Lattice n0 = pres0.N.image(embed);
  Lattice p0 = Lattice::full(pres0.size()).image(embed);
  return InclusionPair{m, std::move(sub), std::move(pres), std::move(pres0), std::move(embed),
                       std::move(idx), std::move(n0), std::move(p0)};
}

IntersectionReport check_tn_intersection(const InclusionPair& pair) {
  IntMatrix t = pair.pres.action - IntMatrix::identity(pair.pres.size());
  IntersectionReport r;
  r.lhs = lattice_intersect(pair.pres.N.image(t), pair.n0);
  r.rhs = pair.n0.image(t);
  r.holds = r.lhs == r.rhs;
  return r;
}

bool check_t_condition(const InclusionPair& pair) {
  const FinMod& m = pair.M;
  const Lattice& m0 = pair.M0.preimage;
  return lattice_intersect(m.t_image(), m0) == m.t_image(m0);
}

bool quotient_torsion_free(const InclusionPair& pair) {
  return quotient_invariants(pair.pres.N, pair.n0).nontrivial().empty();
}

namespace {

IntVec sub(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

void reverify(const InclusionPair& pair, PurityVerdict& v) {
  IntMatrix lam = ring_action(v.lambda, pair.pres.action);
  IntVec lx = lam * v.xi;
  if (v.pure) {
    v.verified = v.eta && pair.n0.contains(*v.eta) && lam * *v.eta == lx;
  } else {
    v.verified = pair.n0.contains(lx) && !pair.n0.image(lam).contains(lx);
  }
  ZCP_CHECK(v.verified, "purity verdict failed re-verification (" + v.route + ")");
}

}  // namespace

PurityVerdict purity_witness(const InclusionPair& pair, const IntVec& xi, const RingElt& lambda) {
  const AugPresentation& pres = pair.pres;
  const FinMod& m = pair.M;
  const unsigned p = m.p();
  if (lambda.p() != p) throw PreconditionError("purity_witness: ring element has the wrong p");
  if (xi.size() != pres.size() || !pres.N.contains(xi)) throw PreconditionError("purity_witness: xi is not in N_M");
  IntMatrix lam = ring_action(lambda, pres.action);
  IntVec lx = lam * xi;
  if (!pair.n0.contains(lx)) throw PreconditionError("purity_witness: lambda xi is not in N_{M0}");

  PurityVerdict v;
  v.xi = xi;
  v.lambda = lambda;
  if (pair.n0.contains(xi)) {
    v.pure = true;
    v.eta = xi;
    v.route = "xi in N0";
    reverify(pair, v);
    return v;
  }

  std::vector<bool> in_m0(pres.size(), false);
  for (auto i : pair.m0_indices) in_m0[i] = true;
  IntVec xi0(pres.size()), xi1(pres.size());
  for (std::size_t i = 0; i < pres.size(); ++i) (in_m0[i] ? xi0 : xi1)[i] = xi[i];

  std::optional<IntVec> eta;
  if (augment(lambda) == 0) {
    // t | lambda: pi(xi_1) is a fixed point of M0 and eta = xi_0 + pi(xi_1)^.
    IntVec y = pres.project(xi1);
    eta = xi0;
    (*eta)[m.index_of(y)] += 1;
    v.route = "t divides lambda";
  } else {
    // t does not divide lambda: pi(xi_1) = t w with w assembled orbit by orbit.
    IntVec w(m.ambient_rank());
    bool ok = true;
    for (const auto& orbit : m.orbits()) {
      bool touched = false;
      for (auto i : orbit) touched = touched || xi1[i] != 0;
      if (!touched) continue;
      if (orbit.size() == 1) {
        ok = false;
        break;
      }
      Int partial = 0, total = 0;
      for (auto i : orbit) total += xi1[i];
      if (total != 0) {
        ok = false;
        break;
      }
      // sum_i c_i a^i = t g, g_i = -(c_0 + ... + c_i)
      for (auto i : orbit) {
        partial += xi1[i];
        for (std::size_t r = 0; r < w.size(); ++r) w[r] -= partial * pres.elements[i][r];
      }
    }
    if (ok) {
      IntVec tw = sub(m.act(w), w);
      ZCP_CHECK(m.equal(tw, pres.project(xi1)), "pi(xi_1) != t w");
      for (auto j : pair.m0_indices) {
        const IntVec& w0 = pres.elements[j];
        if (!m.equal(sub(m.act(w0), w0), tw)) continue;
        eta = xi0;
        (*eta)[m.index_of(m.act(w0))] += 1;
        (*eta)[j] -= 1;
        break;
      }
    }
    v.route = "t does not divide lambda";
  }

  if (eta && pair.n0.contains(*eta) && lam * *eta == lx) {
    v.pure = true;
    v.eta = eta;
    reverify(pair, v);
    return v;
  }
  IntMatrix lb0 = lam * pair.n0.basis();
  if (auto y = solve_integer_system(lb0, lx)) {
    v.pure = true;
    v.eta = pair.n0.basis() * *y;
    v.route += "; integral solve";
  } else {
    v.pure = false;
    v.route += "; lambda xi not in lambda N0";
  }
  reverify(pair, v);
  return v;
}

std::optional<PurityVerdict> impurity_witness(const InclusionPair& pair) {
  const FinMod& m = pair.M;
  const AugPresentation& pres = pair.pres;
  Lattice tm0 = m.t_image(pair.M0.preimage);
  for (std::size_t zi = 0; zi < pres.size(); ++zi) {
    const IntVec& z = pres.elements[zi];
    IntVec az = m.act(z);
    IntVec tz = m.canonical(sub(az, z));
    if (!pair.M0.preimage.contains(tz) || tm0.contains(tz)) continue;
    // xi = zeta_0 - t delta_1 with delta_1 = z^ and zeta_0 = (tz)^.
    IntVec xi(pres.size());
    xi[m.index_of(tz)] += 1;
    xi[m.index_of(az)] -= 1;
    xi[zi] += 1;
    PurityVerdict v;
    v.pure = false;
    v.xi = xi;
    v.lambda = RingElt::s(m.p());
    v.route = "z = " + to_string(z) + " has tz in M0 but not in tM0";
    reverify(pair, v);
    return v;
  }
  return std::nullopt;
}

std::optional<PurityVerdict> find_purity_violation(const InclusionPair& pair, long scalar_bound) {
  const unsigned p = pair.M.p();
  std::vector<RingElt> lambdas{RingElt::t(p), RingElt::s(p)};
  for (long c = 2; c <= scalar_bound; ++c) lambdas.push_back(RingElt::scalar(p, c));
  const Lattice& n = pair.pres.N;
  for (const auto& lambda : lambdas) {
    IntMatrix lam = ring_action(lambda, pair.pres.action);
    Lattice meet = lattice_intersect(n.image(lam), pair.n0);
    Lattice lam_n0 = pair.n0.image(lam);
    if (meet == lam_n0) continue;
    for (std::size_t j = 0; j < meet.rank(); ++j) {
      IntVec v = meet.basis().column(j);
      if (lam_n0.contains(v)) continue;
      auto y = solve_integer_system(lam * n.basis(), v);
      ZCP_CHECK(y.has_value(), "vector of lambda N has no preimage");
      PurityVerdict verdict;
      verdict.pure = false;
      verdict.xi = n.basis() * *y;
      verdict.lambda = lambda;
      verdict.route = "lattice scan at lambda = " + lambda.to_string();
      reverify(pair, verdict);
      return verdict;
    }
  }
  return std::nullopt;
}

ProjectionResult find_equivariant_projection(const Lattice& n, const Lattice& n0, const IntMatrix& action) {
  ProjectionResult res;
  if (!n.contains(n0)) throw PreconditionError("projection: N0 is not inside N");
  if (!n0.contains(n0.image(action))) throw PreconditionError("projection: N0 is not invariant");
  const std::size_t m = n.rank(), k0 = n0.rank(), kc = m - k0;
  IntMatrix an = restricted_action(n, action);
  IntMatrix c0 = n.coordinates_of(n0.basis());
  auto w = unimodular_completion(c0);
  if (!w) {
    res.reason = "N0 is not saturated in N, so it is not a direct summand even as a group";
    return res;
  }
  IntMatrix winv = inverse_unimodular(*w);
  IntMatrix ap = winv * an * *w;  // block upper triangular [[A0, X], [0, Ac]]
  for (std::size_t i = k0; i < m; ++i)
    for (std::size_t j = 0; j < k0; ++j) ZCP_CHECK(ap(i, j) == 0, "N0 invariance lost in adapted basis");

  IntMatrix pp(m, m);
  for (std::size_t i = 0; i < k0; ++i) pp(i, i) = 1;
  if (kc > 0 && k0 > 0) {
    // A0 Y - Y Ac = X, unknowns vec(Y) column-major: Y(i, j) -> j * k0 + i.
    IntMatrix sys(k0 * kc, k0 * kc);
    IntVec rhs(k0 * kc);
    for (std::size_t j = 0; j < kc; ++j)
      for (std::size_t i = 0; i < k0; ++i) {
        const std::size_t row = j * k0 + i;
        rhs[row] = ap(i, k0 + j);
        for (std::size_t l = 0; l < k0; ++l) sys(row, j * k0 + l) += ap(i, l);
        for (std::size_t l = 0; l < kc; ++l) sys(row, l * k0 + i) -= ap(k0 + l, k0 + j);
      }
    auto y = solve_integer_system(sys, rhs);
    if (!y) {
      res.reason = "the equivariance equations have no integral solution";
      return res;
    }
    for (std::size_t j = 0; j < kc; ++j)
      for (std::size_t i = 0; i < k0; ++i) pp(i, k0 + j) = (*y)[j * k0 + i];
  }
  IntMatrix proj = *w * pp * winv;
  ZCP_CHECK(proj * proj == proj, "projection is not idempotent");
  ZCP_CHECK(proj * an == an * proj, "projection is not equivariant");
  ZCP_CHECK(proj * c0 == c0, "projection is not the identity on N0");
  ZCP_CHECK(Lattice::from_generators(proj) == Lattice::from_generators(c0), "projection image is not N0");
  res.p = proj;
  Lattice ker = kernel_basis(proj);
  res.complement = Lattice::from_generators(n.basis() * ker.basis());
  return res;
}

std::vector<Lattice> all_submodules(const FinMod& m) {
  auto elems = m.enumerate();
  std::vector<Lattice> out{m.zero()};
  std::map<std::string, bool> seen{{m.zero().basis().to_string(), true}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& x : elems) {
      if (out[i].contains(x)) continue;
      Lattice s = out[i] + m.generated({x});
      if (seen.emplace(s.basis().to_string(), true).second) out.push_back(s);
    }
  }
  return out;
}

DiagramResult inclusion_diagram(const InclusionPair& pair, const SearchOptions& opts) {
  DiagramResult res;
  res.condition = check_t_condition(pair);
  if (!res.condition) {
    res.witness = impurity_witness(pair);
    ZCP_CHECK(res.witness.has_value(), "condition fails but no impurity witness was found");
    return res;
  }
  const unsigned p = pair.M.p();
  StabilizedPresentation top = stabilize_presentation(pair.M, opts);
  StabilizedPresentation bottom = stabilize_presentation(pair.M0.module, opts);
  const unsigned k = std::max(top.k, bottom.k);
  if (top.k < k) top = stabilize_presentation(pair.M, opts, k);
  if (bottom.k < k) bottom = stabilize_presentation(pair.M0.module, opts, k);

  InclusionDiagram d;
  d.p_embed = IntMatrix::block_diag(pair.embed, IntMatrix::identity(std::size_t{k} * p));
  d.rows_exact = top.exact && bottom.exact && top.cover_valid && bottom.cover_valid;
  d.columns_injective = rank(d.p_embed) == d.p_embed.cols();

  d.commutes = d.p_embed * bottom.action == top.action * d.p_embed;
  IntMatrix via_top = top.to_module * d.p_embed;
  IntMatrix via_bottom = pair.M0.inclusion * bottom.to_module;
  for (std::size_t j = 0; j < via_top.cols() && d.commutes; ++j)
    d.commutes = pair.M.equal(via_top.column(j), via_bottom.column(j));

  Lattice n_top = Lattice::from_generators(top.n1.matrix());
  Lattice n_bottom = Lattice::from_generators(d.p_embed * bottom.n1.matrix());
  Lattice p_top = Lattice::full(top.action.rows());
  Lattice p_bottom = Lattice::from_generators(d.p_embed);
  ProjectionResult pn = find_equivariant_projection(n_top, n_bottom, top.action);
  ProjectionResult pp = find_equivariant_projection(p_top, p_bottom, top.action);
  d.summands = pn.p.has_value() && pp.p.has_value();
  if (pn.p) d.n_projection = *pn.p;
  if (pp.p) d.p_projection = *pp.p;
  d.top = std::move(top);
  d.bottom = std::move(bottom);
  res.diagram = std::move(d);
  return res;
}

}  // namespace zcp

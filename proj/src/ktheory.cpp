#include "zcp/ktheory.hpp"

#include <map>
#include <sstream>

#include "zcp/error.hpp"

namespace zcp {

namespace {

bool is_regular_core(const GadgetGraph& g, const Instantiation& in, std::size_t core) {
  if (g.kinds[core] != VertexKind::Standard) return false;
  const std::size_t i = in.core_index[core];
  auto it = in.edges.lower_bound({i, 0});
  return it != in.edges.end() && it->first.first == i;
}

IntVec vertex_column(const Instantiation& in, std::size_t i) {
  IntVec col(in.vertices.size());
  for (auto it = in.edges.lower_bound({i, 0}); it != in.edges.end() && it->first.first == i; ++it)
    col[it->first.second] += it->second;
  col[i] -= 1;
  return col;
}

}  // namespace

BoundaryMatrix boundary_matrix(const GadgetGraph& g, std::size_t depth, const TruncationOptions& opts) {
  if (depth < 1) throw PreconditionError("boundary_matrix: depth must be at least 1");
  BoundaryMatrix bm;
  bm.depth = depth;
  bm.inst = instantiate(g, depth);
  const Instantiation& in = bm.inst;
  const std::size_t m = in.vertices.size();
  std::vector<IntVec> cols;
  for (std::size_t i = 0; i < m; ++i) {
    const InstVertex& iv = in.vertices[i];
    bool column;
    if (iv.core) column = is_regular_core(g, in, *iv.core);
    else column = g.rays[iv.ray].orientation == RayOrientation::KillsDownward || iv.depth < depth || !opts.row_only_tops;
    if (!column) continue;
    bm.columns.push_back({BoundaryColumn::Kind::Vertex, i, 0});
    bm.col_names.push_back(in.names[i]);
    cols.push_back(vertex_column(in, i));
  }
  for (std::size_t r = 0; r < g.rays.size(); ++r) {
    if (!opts.ghost_columns || g.rays[r].orientation != RayOrientation::KillsDownward) continue;
    IntVec ghost(m);
    ghost[in.ray_index[r][depth - 1]] = 1;
    bm.columns.push_back({BoundaryColumn::Kind::Ghost, 0, r});
    bm.col_names.push_back("ghost:" + g.rays[r].family);
    cols.push_back(std::move(ghost));
  }
  bm.D = IntMatrix::from_columns(cols, m);
  return bm;
}

BoundaryMatrix eliminated_matrix(const GadgetGraph& g) {
  Instantiation full = instantiate(g, 1);
  BoundaryMatrix bm;
  bm.depth = 0;
  Instantiation& in = bm.inst;
  std::vector<long> row_of(full.vertices.size(), -1);
  for (std::size_t i = 0; i < full.vertices.size(); ++i) {
    const InstVertex& iv = full.vertices[i];
    if (!iv.core && g.rays[iv.ray].orientation == RayOrientation::KillsDownward) continue;
    row_of[i] = static_cast<long>(in.vertices.size());
    in.vertices.push_back(iv);
    in.names.push_back(full.names[i]);
  }
  for (std::size_t c = 0; c < g.core_size(); ++c) in.core_index.push_back(static_cast<std::size_t>(row_of[c]));
  for (std::size_t r = 0; r < g.rays.size(); ++r) {
    in.ray_index.emplace_back();
    const long row = row_of[full.ray_index[r][0]];
    if (row >= 0) in.ray_index[r].push_back(static_cast<std::size_t>(row));
  }
  for (const auto& [e, mult] : full.edges)
    if (row_of[e.first] >= 0 && row_of[e.second] >= 0)
      in.edges[{static_cast<std::size_t>(row_of[e.first]), static_cast<std::size_t>(row_of[e.second])}] += mult;

  const std::size_t m = in.vertices.size();
  std::vector<IntVec> cols;
  for (std::size_t c = 0; c < g.core_size(); ++c) {
    if (!is_regular_core(g, full, c)) continue;
    const std::size_t i = full.core_index[c];
    IntVec col(m);
    for (auto it = full.edges.lower_bound({i, 0}); it != full.edges.end() && it->first.first == i; ++it) {
      const long r = row_of[it->first.second];
      ZCP_CHECK(r >= 0, "regular core vertex emits into a downward ray");
      col[static_cast<std::size_t>(r)] += it->second;
    }
    col[static_cast<std::size_t>(row_of[i])] -= 1;
    bm.columns.push_back({BoundaryColumn::Kind::Vertex, static_cast<std::size_t>(row_of[i]), 0});
    bm.col_names.push_back(g.names[c]);
    cols.push_back(std::move(col));
  }
  for (std::size_t r = 0; r < g.rays.size(); ++r) {
    if (g.rays[r].orientation != RayOrientation::KillsDownward) continue;
    IntVec col(m);
    col[in.core_index[g.rays[r].base]] = 1;
    bm.columns.push_back({BoundaryColumn::Kind::EliminatedRay, 0, r});
    bm.col_names.push_back("ray:" + g.rays[r].family);
    cols.push_back(std::move(col));
  }
  bm.D = IntMatrix::from_columns(cols, m);
  return bm;
}

IntVec KResult::k0_class(const IntVec& rows_vec) const {
  IntVec c = class_map * rows_vec;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (moduli[i] != 0) mpz_fdiv_r(c[i].get_mpz_t(), c[i].get_mpz_t(), moduli[i].get_mpz_t());
  return c;
}

IntVec KResult::vertex_class(std::size_t row) const {
  IntVec e(bm.rows());
  e[row] = 1;
  return k0_class(e);
}

Lattice KResult::core_relations() const {
  const std::size_t n = bm.inst.core_index.size();
  IntMatrix embed(bm.rows(), n);
  for (std::size_t c = 0; c < n; ++c) embed(bm.inst.core_index[c], c) = 1;
  return preimage(embed, Lattice::from_generators(bm.D));
}

KResult compute_k(const BoundaryMatrix& bm) {
  KResult kr;
  kr.bm = bm;
  const std::size_t m = bm.rows();
  SnfResult s = snf(bm.D, true);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i) {
    Int d = i < s.rank ? Int(abs(s.S(i, i))) : Int(0);
    if (d == 1) continue;
    keep.push_back(i);
    kr.moduli.push_back(d);
  }
  kr.class_map = IntMatrix(keep.size(), m);
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (std::size_t j = 0; j < m; ++j) kr.class_map(k, j) = s.U(keep[k], j);
  kr.k0 = cokernel_invariants(bm.D);
  kr.k1 = kernel_basis(bm.D);
  return kr;
}

KResult compute_k(const GadgetGraph& g, std::size_t depth, const TruncationOptions& opts) {
  if (depth < 2) throw PreconditionError("compute_k: depth must be at least 2");
  return compute_k(boundary_matrix(g, depth, opts));
}

void induced_action(const GadgetGraph& g, KResult& kr) {
  const BoundaryMatrix& bm = kr.bm;
  if (bm.depth < 1) throw PreconditionError("induced_action: needs a truncated boundary matrix");
  AutomorphismCheck chk = validate_automorphism(g);
  if (!chk.ok) throw PreconditionError("induced_action: " + chk.violation);
  const Instantiation& in = bm.inst;
  const std::size_t m = in.vertices.size();
  std::vector<std::size_t> row_perm(m);
  for (std::size_t i = 0; i < m; ++i) {
    const InstVertex& iv = in.vertices[i];
    row_perm[i] = iv.core ? in.core_index[g.sigma[*iv.core]] : in.ray_index[g.ray_sigma[iv.ray]][iv.depth - 1];
  }
  std::map<std::pair<int, std::size_t>, std::size_t> col_of;
  for (std::size_t j = 0; j < bm.columns.size(); ++j) {
    const auto& c = bm.columns[j];
    col_of[{static_cast<int>(c.kind), c.kind == BoundaryColumn::Kind::Vertex ? c.vertex : c.ray}] = j;
  }
  const std::size_t n = bm.columns.size();
  IntMatrix pr(m, m), pc(n, n);
  for (std::size_t i = 0; i < m; ++i) pr(row_perm[i], i) = 1;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& c = bm.columns[j];
    std::pair<int, std::size_t> key{static_cast<int>(c.kind),
                                    c.kind == BoundaryColumn::Kind::Vertex ? row_perm[c.vertex] : g.ray_sigma[c.ray]};
    auto it = col_of.find(key);
    ZCP_CHECK(it != col_of.end(), "automorphism does not preserve the regular vertices");
    pc(it->second, j) = 1;
  }
  ZCP_CHECK(bm.D * pc == pr * bm.D, "automorphism does not commute with the boundary matrix");

  kr.induced_k1 = kr.k1.rank() == 0 ? IntMatrix(0, 0) : restricted_action(kr.k1, pc);

  SnfResult s = snf(bm.D, true);
  IntMatrix t = s.U * pr * s.U_inv;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i) {
    Int d = i < s.rank ? Int(abs(s.S(i, i))) : Int(0);
    if (d != 1) keep.push_back(i);
  }
  IntMatrix k0(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b) {
      Int v = t(keep[a], keep[b]);
      if (kr.moduli[a] != 0) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), kr.moduli[a].get_mpz_t());
      k0(a, b) = v;
    }
  kr.induced_k0 = k0;
}

std::string KSummary::to_string() const {
  std::ostringstream os;
  os << "(" << k0.to_string() << ", " << (k1_rank == 0 ? std::string("0") : k1_rank == 1 ? std::string("Z") : "Z^" + std::to_string(k1_rank)) << ")";
  return os.str();
}

namespace {

KSummary summarize(const KResult& kr) {
  KSummary s;
  s.depth = kr.bm.depth;
  s.k0 = kr.k0;
  s.k1_rank = kr.k1.rank();
  s.core_relations = kr.core_relations();
  return s;
}

std::string compare(const KSummary& a, const KSummary& b) {
  auto label = [](const KSummary& s) {
    return s.depth == 0 ? std::string("ray elimination") : "depth " + std::to_string(s.depth);
  };
  if (!a.k0.same_group(b.k0)) return "K0 differs between " + label(a) + " and " + label(b);
  if (a.k1_rank != b.k1_rank) return "K1 rank differs between " + label(a) + " and " + label(b);
  if (!(a.core_relations == b.core_relations))
    return "core vertex classes differ between " + label(a) + " and " + label(b);
  return "";
}

}  // namespace

TruncationReport stabilization_check(const GadgetGraph& g, const std::vector<std::size_t>& depths,
                                     const TruncationOptions& opts) {
  if (depths.size() < 2) throw PreconditionError("stabilization_check: need at least two depths");
  TruncationReport rep;
  rep.depths = depths;
  for (auto d : depths) {
    if (d < 2) throw PreconditionError("stabilization_check: depths must be at least 2");
    rep.per_depth.push_back(summarize(compute_k(g, d, opts)));
  }
  rep.eliminated = summarize(compute_k(eliminated_matrix(g)));
  for (const auto& s : rep.per_depth) {
    rep.mismatch = compare(rep.eliminated, s);
    if (!rep.mismatch.empty()) return rep;
  }
  rep.stable = true;
  return rep;
}

TheoremReport verify_theorem(const GadgetGraph& g, const GraphSpecInput& in, std::size_t depth) {
  TheoremReport rep;
  auto fail = [&](bool ok, const std::string& what) {
    if (!ok) rep.failures.push_back(what);
  };
  if (auto msg = check_graph_input(in); !msg.empty()) throw PreconditionError("graph input: " + msg);
  const std::size_t n = in.a_size();
  const std::size_t r = in.group.ambient_rank();
  const Lattice& lam = in.group.relations();

  rep.irreducible = is_irreducible(g);
  fail(rep.irreducible, "graph is not irreducible");
  std::size_t emitters = 0;
  for (auto k : g.kinds) emitters += k == VertexKind::InfiniteEmitter;
  rep.unique_emitter = emitters == 1;
  fail(rep.unique_emitter, "expected exactly one infinite emitter, found " + std::to_string(emitters));
  rep.no_sinks = has_no_sinks(g);
  fail(rep.no_sinks, "graph has a sink");

  AutomorphismCheck chk = validate_automorphism(g);
  rep.automorphism = chk.ok;
  fail(chk.ok, "automorphism: " + chk.violation);
  rep.emitter_fixed = chk.ok && chk.fixes_emitter;
  fail(rep.emitter_fixed, "automorphism moves the emitter");
  rep.sigma_order = chk.order;
  rep.alpha_order = in.group.action_order();
  rep.degenerate = rep.alpha_order == 1;
  rep.order_matches = chk.ok && rep.sigma_order == rep.alpha_order;
  fail(rep.order_matches, "automorphism order " + std::to_string(rep.sigma_order) + " but alpha has order " +
                              std::to_string(rep.alpha_order));

  rep.equivariant_injection = g.a_vertex.size() == n;
  if (rep.equivariant_injection) {
    std::vector<bool> hit(g.core_size(), false);
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t x = g.a_vertex[a];
      if (x >= g.core_size() || hit[x] || g.sigma[x] != g.a_vertex[in.a_perm[a]]) rep.equivariant_injection = false;
      else hit[x] = true;
    }
  }
  fail(rep.equivariant_injection, "A -> E0 is not an equivariant injection");

  rep.k = compute_k(g, depth);
  KResult& kr = rep.k;
  rep.k0 = kr.k0;
  rep.k1_rank = kr.k1.rank();
  rep.k1_zero = rep.k1_rank == 0;
  fail(rep.k1_zero, "K1 has rank " + std::to_string(rep.k1_rank));
  rep.g_invariants = quotient_invariants(Lattice::full(r), lam);
  rep.b_quotient = quotient_invariants(Lattice::full(n), Lattice::from_generators(n, in.b));
  rep.cross_pipeline = rep.b_quotient.same_group(rep.k0);
  fail(rep.cross_pipeline, "K0 = " + rep.k0.to_string() + " but Z^A/<B> = " + rep.b_quotient.to_string());

  // phi: K0 -> G with phi([a]) = pi0(a), defined on a generating set of classes.
  const std::size_t q = kr.k0_rank();
  IntMatrix classes(q, n), dd(q, q);
  for (std::size_t a = 0; a < n; ++a) {
    IntVec c = kr.vertex_class(kr.bm.inst.core_index[g.a_vertex[a]]);
    for (std::size_t i = 0; i < q; ++i) classes(i, a) = c[i];
  }
  for (std::size_t i = 0; i < q; ++i) dd(i, i) = kr.moduli[i];
  IntMatrix gens = IntMatrix::hstack(classes, dd);
  const bool generated = Lattice::from_generators(gens) == Lattice::full(q);
  fail(generated, "classes of A do not generate K0");
  const IntMatrix pi = in.pi_matrix();
  rep.phi = IntMatrix(r, q);
  if (generated) {
    for (std::size_t i = 0; i < q; ++i) {
      IntVec e(q);
      e[i] = 1;
      auto x = solve_integer_system(gens, e);
      ZCP_CHECK(x.has_value(), "generating set failed to express a unit vector");
      IntVec c(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(n));
      rep.phi.set_column(i, pi * c);
    }
    bool well_defined = true;
    for (std::size_t i = 0; i < q; ++i)
      {
        IntVec col = rep.phi.column(i);
        for (auto& x : col) x *= kr.moduli[i];
        if (!lam.contains(col)) well_defined = false;
      }
    rep.class_map = well_defined;
    for (std::size_t a = 0; a < n && rep.class_map; ++a)
      if (!in.group.equal(rep.phi * classes.column(a), in.pi0[a])) rep.class_map = false;
    const bool onto = Lattice::from_generators(IntMatrix::hstack(rep.phi, lam.basis())) == Lattice::full(r);
    const bool into = preimage(rep.phi, lam) == Lattice::from_generators(dd);
    rep.k0_iso = well_defined && onto && into && rep.k0.same_group(rep.g_invariants);
  }
  fail(rep.class_map, "[a] -> pi0(a) does not define a homomorphism K0 -> G");
  fail(rep.k0_iso, "K0 = " + rep.k0.to_string() + " is not carried isomorphically onto G = " +
                       rep.g_invariants.to_string());

  if (chk.ok && rep.k0_iso) {
    induced_action(g, kr);
    rep.induced_matches = true;
    for (std::size_t i = 0; i < q; ++i) {
      IntVec lhs = rep.phi * kr.induced_k0->column(i);
      IntVec rhs = in.group.action() * rep.phi.column(i);
      if (!in.group.equal(lhs, rhs)) rep.induced_matches = false;
    }
  }
  fail(rep.induced_matches, "induced action on K0 does not match alpha");
  return rep;
}

Lattice fixed_sublattice(const IntMatrix& a) {
  return kernel_basis(a - IntMatrix::identity(a.rows()));
}

IntVec characteristic_polynomial(const IntMatrix& a) {
  // Faddeev-LeVerrier; every division is exact.
  const std::size_t n = a.rows();
  IntVec c(n + 1);
  c[n] = 1;
  IntMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = a * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    IntMatrix am = a * mk;
    Int tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    ZCP_CHECK(mpz_divisible_ui_p(tr.get_mpz_t(), k), "trace not divisible");
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

}  // namespace zcp

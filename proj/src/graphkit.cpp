#include "zcp/graphkit.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "zcp/error.hpp"

namespace zcp {

std::optional<std::size_t> GadgetGraph::emitter() const {
  for (std::size_t i = 0; i < kinds.size(); ++i)
    if (kinds[i] == VertexKind::InfiniteEmitter) return i;
  return std::nullopt;
}

std::size_t GadgetGraph::add_vertex(std::string name, VertexKind kind) {
  names.push_back(std::move(name));
  kinds.push_back(kind);
  sigma.push_back(names.size() - 1);
  return names.size() - 1;
}

void GadgetGraph::add_edge(std::size_t from, std::size_t to, long mult) {
  if (mult == 0) return;
  if (mult < 0) throw PreconditionError("add_edge: negative multiplicity");
  edges[{from, to}] += mult;
}

long GadgetGraph::edge_count(std::size_t from, std::size_t to) const {
  auto it = edges.find({from, to});
  return it == edges.end() ? 0 : it->second;
}

std::optional<std::size_t> GadgetGraph::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

Instantiation instantiate(const GadgetGraph& g, std::size_t depth) {
  Instantiation in;
  for (std::size_t i = 0; i < g.core_size(); ++i) {
    in.core_index.push_back(in.vertices.size());
    in.vertices.push_back({i, 0, 0});
    in.names.push_back(g.names[i]);
  }
  for (std::size_t r = 0; r < g.rays.size(); ++r) {
    in.ray_index.emplace_back();
    for (std::size_t d = 1; d <= depth; ++d) {
      in.ray_index[r].push_back(in.vertices.size());
      in.vertices.push_back({std::nullopt, r, d});
      in.names.push_back(g.rays[r].family + "_" + std::to_string(d));
    }
  }
  auto add = [&](std::size_t a, std::size_t b, long m) { in.edges[{a, b}] += m; };
  for (const auto& [e, m] : g.edges) add(in.core_index[e.first], in.core_index[e.second], m);
  const auto em = g.emitter();
  for (std::size_t r = 0; r < g.rays.size(); ++r) {
    const RaySpec& ray = g.rays[r];
    const auto& idx = in.ray_index[r];
    const std::size_t base = in.core_index[ray.base];
    for (std::size_t d = 0; d < depth; ++d) {
      add(idx[d], idx[d], 1);
      if (ray.orientation == RayOrientation::KillsDownward) {
        add(idx[d], d == 0 ? base : idx[d - 1], 1);
      } else {
        if (d + 1 < depth) add(idx[d], idx[d + 1], 1);
        if (em) add(idx[d], in.core_index[*em], 1);
      }
    }
    if (ray.orientation == RayOrientation::FeedsUpward && depth > 0) add(base, idx[0], 1);
  }
  if (em) {
    const std::size_t e = in.core_index[*em];
    for (std::size_t i = 0; i < in.vertices.size(); ++i)
      if (i != e) add(e, i, 1);
  }
  return in;
}

IntMatrix GraphSpecInput::pi_matrix() const {
  return IntMatrix::from_columns(pi0, group.ambient_rank());
}

std::vector<std::vector<std::size_t>> GraphSpecInput::orbits() const {
  std::vector<bool> seen(a_size(), false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t a = 0; a < a_size(); ++a) {
    if (seen[a]) continue;
    std::vector<std::size_t> orbit;
    for (std::size_t x = a; !seen[x]; x = a_perm[x]) {
      seen[x] = true;
      orbit.push_back(x);
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

namespace {

IntVec permute(const std::vector<std::size_t>& perm, const IntVec& v) {
  IntVec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[perm[i]] = v[i];
  return w;
}

IntMatrix perm_matrix(const std::vector<std::size_t>& perm) {
  IntMatrix m(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) m(perm[i], i) = 1;
  return m;
}

bool is_permutation(const std::vector<std::size_t>& perm) {
  std::vector<bool> hit(perm.size(), false);
  for (auto x : perm) {
    if (x >= perm.size() || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

unsigned perm_order(const std::vector<std::size_t>& perm) {
  unsigned order = 1;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    unsigned len = 0;
    for (std::size_t x = i; !seen[x]; x = perm[x]) {
      seen[x] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

}  // namespace

std::vector<std::size_t> GraphSpecInput::b_perm() const {
  std::vector<std::size_t> out(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    IntVec img = permute(a_perm, b[j]);
    auto it = std::find(b.begin(), b.end(), img);
    if (it == b.end()) throw PreconditionError("graph input: B is not invariant under alpha");
    out[j] = static_cast<std::size_t>(it - b.begin());
  }
  return out;
}

std::string check_graph_input(const GraphSpecInput& in) {
  const std::size_t r = in.group.ambient_rank();
  const std::size_t n = in.a_size();
  if (in.group.p() != in.p) return "group and input disagree on p";
  if (!is_permutation(in.a_perm)) return "action on A is not a permutation";
  const unsigned ord = perm_order(in.a_perm);
  if (ord != 1 && ord != in.p) return "action on A has order " + std::to_string(ord);
  if (in.pi0.size() != n) return "pi0 needs one value per element of A";
  for (const auto& x : in.pi0)
    if (x.size() != r) return "pi0 value of wrong length";
  const Lattice& lam = in.group.relations();
  for (std::size_t a = 0; a < n; ++a)
    if (!in.group.equal(in.pi0[in.a_perm[a]], in.group.action() * in.pi0[a]))
      return "pi0 is not equivariant at a = " + std::to_string(a);
  IntMatrix pi = in.pi_matrix();
  if (!(Lattice::from_generators(IntMatrix::hstack(pi, lam.basis())) == Lattice::full(r)))
    return "range of pi0 does not generate G";
  for (std::size_t j = 0; j < in.b.size(); ++j) {
    if (in.b[j].size() != n) return "B vector of wrong length";
    if (!lam.contains(pi * in.b[j])) return "B vector " + std::to_string(j) + " is not in ker(pi)";
  }
  if (!in.b.empty() && rank(IntMatrix::from_columns(in.b, n)) != in.b.size()) return "B is linearly dependent";
  try {
    in.b_perm();
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return "";
}

namespace {

GraphSpecInput extend_input(const FinMod& g, std::vector<std::size_t> a_perm, std::vector<IntVec> pi0,
                            const SearchResult& r) {
  GraphSpecInput in;
  in.p = g.p();
  in.group = g;
  const std::size_t n = a_perm.size();
  for (unsigned c = 0; c < r.k; ++c)
    for (unsigned i = 0; i < g.p(); ++i) {
      a_perm.push_back(n + c * g.p() + (i + 1) % g.p());
      pi0.push_back(IntVec(g.ambient_rank()));
    }
  in.a_perm = std::move(a_perm);
  in.pi0 = std::move(pi0);
  in.b = r.basis.vectors();
  return in;
}

}  // namespace

GraphSpecInput graph_input_for_module(const FinMod& g, const SearchOptions& opts) {
  AugPresentation pres = build_aug(g);
  SearchResult r = invariant_basis_for(pres, opts);
  return extend_input(g, pres.perm, pres.elements, r);
}

GraphSpecInput graph_input_from_generators(const FinMod& g, std::vector<std::size_t> a_perm,
                                           std::vector<IntVec> pi0, const SearchOptions& opts) {
  if (!is_permutation(a_perm) || pi0.size() != a_perm.size())
    throw PreconditionError("graph input: A and pi0 do not match");
  IntMatrix pi = IntMatrix::from_columns(pi0, g.ambient_rank());
  Lattice n = preimage(pi, g.relations());
  SearchResult r = find_invariant_basis(n, perm_matrix(a_perm), g.p(), opts);
  return extend_input(g, std::move(a_perm), std::move(pi0), r);
}

GadgetGraph build_spielberg(const GraphSpecInput& in) {
  if (auto msg = check_graph_input(in); !msg.empty()) throw PreconditionError("graph input: " + msg);
  const std::size_t n = in.a_size();
  const auto bperm = in.b_perm();

  GadgetGraph g;
  const std::size_t v = g.add_vertex("v", VertexKind::InfiniteEmitter);
  g.rays.push_back({"c", v, RayOrientation::KillsDownward});
  g.ray_sigma.push_back(0);

  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t x = g.add_vertex("a" + std::to_string(a));
    g.a_vertex.push_back(x);
    g.add_edge(x, x);
    g.add_edge(x, v);
    g.rays.push_back({"x_a" + std::to_string(a), x, RayOrientation::FeedsUpward});
  }
  for (std::size_t a = 0; a < n; ++a) {
    g.sigma[g.a_vertex[a]] = g.a_vertex[in.a_perm[a]];
    g.ray_sigma.push_back(1 + in.a_perm[a]);
  }

  struct Head {
    std::size_t z;
    std::optional<std::size_t> plus, minus;
  };
  std::vector<Head> heads;
  for (std::size_t j = 0; j < in.b.size(); ++j) {
    const IntVec& b = in.b[j];
    const std::string tag = std::to_string(j);
    Head h{g.add_vertex("z" + tag), std::nullopt, std::nullopt};
    g.add_edge(h.z, v);
    bool any_plus = false, any_minus = false;
    for (const auto& c : b) {
      any_plus |= c > 0;
      any_minus |= c < 0;
    }
    if (any_plus) {
      h.plus = g.add_vertex("z" + tag + "+");
      g.add_edge(h.z, *h.plus);
      g.add_edge(*h.plus, v);
      for (std::size_t a = 0; a < n; ++a)
        if (b[a] > 0) g.add_edge(*h.plus, g.a_vertex[a], b[a].get_si());
    }
    if (any_minus) {
      h.minus = g.add_vertex("z" + tag + "-");
      g.add_edge(h.z, *h.minus);
      g.add_edge(*h.minus, *h.minus, 2);
      g.add_edge(*h.minus, v);
      for (std::size_t a = 0; a < n; ++a)
        if (b[a] < 0) g.add_edge(*h.minus, g.a_vertex[a], Int(-b[a]).get_si());
    }
    g.rays.push_back({"y_z" + tag, h.z, RayOrientation::KillsDownward});
    heads.push_back(h);
  }
  for (std::size_t j = 0; j < heads.size(); ++j) {
    const Head& from = heads[j];
    const Head& to = heads[bperm[j]];
    g.sigma[from.z] = to.z;
    if (from.plus) g.sigma[*from.plus] = *to.plus;
    if (from.minus) g.sigma[*from.minus] = *to.minus;
    g.ray_sigma.push_back(1 + n + bperm[j]);
  }
  return g;
}

GadgetGraph build_strand_graph(std::size_t m, std::size_t cycle_len) {
  if (m == 0) throw PreconditionError("strand graph needs at least one strand");
  if (cycle_len > m) throw PreconditionError("strand graph: cycle longer than the strand count");
  GadgetGraph g;
  const std::size_t v = g.add_vertex("v", VertexKind::InfiniteEmitter);
  for (std::size_t i = 0; i < m; ++i) {
    g.rays.push_back({"x" + std::to_string(i), v, RayOrientation::KillsDownward});
    g.ray_sigma.push_back(i);
  }
  const std::size_t first = m - cycle_len;
  for (std::size_t i = first; i < m; ++i) g.ray_sigma[i] = i + 1 < m ? i + 1 : first;
  return g;
}

GadgetGraph delete_strand(const GadgetGraph& g, std::size_t idx) {
  const auto em = g.emitter();
  if (!em || g.core_size() != 1) throw PreconditionError("delete_strand: not a strand graph");
  for (const auto& r : g.rays)
    if (r.base != *em || r.orientation != RayOrientation::KillsDownward)
      throw PreconditionError("delete_strand: not a strand graph");
  if (idx >= g.rays.size()) throw PreconditionError("delete_strand: no strand " + std::to_string(idx));
  if (g.ray_sigma[idx] != idx)
    throw PreconditionError("delete_strand: strand " + std::to_string(idx) + " is moved by the automorphism");
  GadgetGraph out = g;
  out.rays.erase(out.rays.begin() + static_cast<std::ptrdiff_t>(idx));
  out.ray_sigma.clear();
  for (std::size_t i = 0; i < g.rays.size(); ++i) {
    if (i == idx) continue;
    std::size_t t = g.ray_sigma[i];
    out.ray_sigma.push_back(t > idx ? t - 1 : t);
  }
  return out;
}

AutomorphismCheck validate_automorphism(const GadgetGraph& g) {
  AutomorphismCheck res;
  const std::size_t n = g.core_size();
  if (g.sigma.size() != n || !is_permutation(g.sigma)) {
    res.violation = "sigma is not a permutation of the core vertices";
    return res;
  }
  if (g.ray_sigma.size() != g.rays.size() || !is_permutation(g.ray_sigma)) {
    res.violation = "sigma is not a permutation of the rays";
    return res;
  }
  for (std::size_t x = 0; x < n; ++x)
    if (g.kinds[g.sigma[x]] != g.kinds[x]) {
      res.violation = "sigma changes the kind of vertex " + g.names[x];
      return res;
    }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (g.edge_count(g.sigma[x], g.sigma[y]) != g.edge_count(x, y)) {
        res.violation = "edge " + g.names[x] + " -> " + g.names[y] + " has multiplicity " +
                        std::to_string(g.edge_count(x, y)) + " but its image has " +
                        std::to_string(g.edge_count(g.sigma[x], g.sigma[y]));
        return res;
      }
  for (std::size_t r = 0; r < g.rays.size(); ++r) {
    const RaySpec& a = g.rays[r];
    const RaySpec& b = g.rays[g.ray_sigma[r]];
    if (b.base != g.sigma[a.base] || b.orientation != a.orientation) {
      res.violation = "ray " + a.family + " is not carried to a ray on the image of its base";
      return res;
    }
  }
  const auto em = g.emitter();
  res.fixes_emitter = !em || g.sigma[*em] == *em;
  res.order = std::lcm(perm_order(g.sigma), perm_order(g.ray_sigma));
  res.ok = true;
  return res;
}

bool is_irreducible(const GadgetGraph& g) {
  Instantiation in = instantiate(g, 3);
  const std::size_t n = in.vertices.size();
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  for (const auto& [e, m] : in.edges) {
    fwd[e.first].push_back(e.second);
    bwd[e.second].push_back(e.first);
  }
  auto reaches_all = [&](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (auto y : adj[x])
        if (!seen[y]) {
          seen[y] = true;
          ++count;
          stack.push_back(y);
        }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

bool has_no_sinks(const GadgetGraph& g) {
  std::vector<bool> emits(g.core_size(), false);
  for (const auto& [e, m] : g.edges) emits[e.first] = true;
  for (const auto& r : g.rays)
    if (r.orientation == RayOrientation::FeedsUpward) emits[r.base] = true;
  if (auto em = g.emitter()) emits[*em] = true;
  return std::all_of(emits.begin(), emits.end(), [](bool b) { return b; });
}

std::string to_dot(const GadgetGraph& g, std::size_t depth) {
  if (depth < 1) throw PreconditionError("to_dot: depth must be at least 1");
  Instantiation in = instantiate(g, depth);
  std::ostringstream os;
  os << "digraph E {\n";
  for (std::size_t i = 0; i < in.vertices.size(); ++i) {
    os << "  \"" << in.names[i] << "\"";
    const auto& iv = in.vertices[i];
    if (iv.core && g.kinds[*iv.core] == VertexKind::InfiniteEmitter) os << " [shape=doublecircle]";
    else if (!iv.core && iv.depth == depth) os << " [style=dashed]";
    os << ";\n";
  }
  for (const auto& [e, m] : in.edges) {
    os << "  \"" << in.names[e.first] << "\" -> \"" << in.names[e.second] << "\"";
    if (m > 1) os << " [label=" << m << "]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace zcp

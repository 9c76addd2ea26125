#include "zcp/report.hpp"

#include <sstream>

#include "zcp/error.hpp"

namespace zcp {

Json to_json(const Int& v) {
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(v.get_str());
}

Json to_json(const IntVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

Json to_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

Json to_json(const GroupInvariants& g) {
  return Json{{"text", g.to_string()}, {"factors", to_json(g.nontrivial())}, {"free_rank", g.free_rank}};
}

Json to_json(const Lattice& l) {
  Json basis = Json::array();
  for (std::size_t j = 0; j < l.rank(); ++j) basis.push_back(to_json(l.basis().column(j)));
  return Json{{"ambient", l.ambient_rank()}, {"rank", l.rank()}, {"basis", basis}};
}

Json to_json(const PolyZ& f) { return Json{{"text", f.to_string()}, {"coeffs", to_json(f.coeffs())}}; }

Json to_json(const TPowerIdentities& ids) {
  Json rounds = Json::array();
  for (const auto& r : ids.rounds)
    rounds.push_back(Json{{"lead", r.lead.to_string()}, {"carry", r.carry.to_string()}, {"sfactor", r.sfactor.to_string()}});
  return Json{{"p", ids.p},           {"h", to_json(ids.h)}, {"f", to_json(ids.f)}, {"g", to_json(ids.g)},
              {"beta", to_json(ids.beta)}, {"h_at_1", to_json(ids.h.eval(1))}, {"rounds", rounds}};
}

Json to_json(const FinMod& m) {
  Json j{{"p", m.p()},
         {"ambient", m.ambient_rank()},
         {"relations", to_json(m.relations())},
         {"action", to_json(m.action())},
         {"finite", m.is_finite()},
         {"action_order", m.action_order()}};
  j["group"] = to_json(quotient_invariants(m.whole(), m.zero()));
  if (m.is_finite()) j["order"] = to_json(m.order());
  if (m.provenance()) j["spec"] = m.provenance()->to_string();
  return j;
}

Json to_json(const InvariantBasis& b) {
  Json blocks = Json::array();
  for (const auto& blk : b.orbit_blocks) {
    Json o = Json::array();
    for (const auto& v : blk) o.push_back(to_json(v));
    blocks.push_back(o);
  }
  Json fixed = Json::array();
  for (const auto& v : b.fixed) fixed.push_back(to_json(v));
  return Json{{"ambient", b.ambient},
              {"size", b.size()},
              {"orbits", b.orbit_blocks.size()},
              {"fixed_count", b.fixed.size()},
              {"orbit_blocks", blocks},
              {"fixed", fixed}};
}

Json to_json(const PurityVerdict& v) {
  Json j{{"pure", v.pure}, {"xi", to_json(v.xi)}, {"lambda", v.lambda.to_string()}, {"route", v.route},
         {"verified", v.verified}};
  if (v.eta) j["eta"] = to_json(*v.eta);
  return j;
}

Json to_json(const GadgetGraph& g) {
  Json vertices = Json::array();
  for (std::size_t i = 0; i < g.core_size(); ++i)
    vertices.push_back(Json{{"name", g.names[i]},
                            {"kind", g.kinds[i] == VertexKind::InfiniteEmitter ? "infinite-emitter" : "standard"}});
  Json edges = Json::array();
  for (const auto& [e, m] : g.edges) edges.push_back(Json{{"from", g.names[e.first]}, {"to", g.names[e.second]}, {"count", m}});
  Json rays = Json::array();
  for (const auto& r : g.rays)
    rays.push_back(Json{{"family", r.family},
                        {"base", g.names[r.base]},
                        {"orientation", r.orientation == RayOrientation::KillsDownward ? "down" : "up"}});
  return Json{{"vertices", vertices}, {"edges", edges}, {"rays", rays}, {"sigma", g.sigma}, {"ray_sigma", g.ray_sigma}};
}

Json to_json(const KResult& k) {
  Json classes = Json::object();
  for (std::size_t c = 0; c < k.bm.inst.core_index.size(); ++c)
    classes[k.bm.inst.names[k.bm.inst.core_index[c]]] = to_json(k.vertex_class(k.bm.inst.core_index[c]));
  Json j{{"depth", k.bm.depth},
         {"rows", k.bm.rows()},
         {"columns", k.bm.D.cols()},
         {"k0", to_json(k.k0)},
         {"k0_moduli", to_json(k.moduli)},
         {"k1_rank", k.k1.rank()},
         {"k1_basis", to_json(k.k1)["basis"]},
         {"vertex_classes", classes}};
  if (k.induced_k0) j["induced_k0"] = to_json(*k.induced_k0);
  if (k.induced_k1) j["induced_k1"] = to_json(*k.induced_k1);
  return j;
}

Json to_json(const KSummary& s) {
  return Json{{"depth", s.depth}, {"k", s.to_string()}, {"k0", to_json(s.k0)}, {"k1_rank", s.k1_rank}};
}

Json to_json(const TruncationReport& r) {
  Json per = Json::array();
  for (const auto& s : r.per_depth) per.push_back(to_json(s));
  return Json{{"stable", r.stable}, {"mismatch", r.mismatch}, {"depths", r.depths}, {"per_depth", per},
              {"eliminated", to_json(r.eliminated)}};
}

Json to_json(const TheoremReport& r) {
  Json checks{{"irreducible", r.irreducible},
              {"unique_emitter", r.unique_emitter},
              {"no_sinks", r.no_sinks},
              {"automorphism", r.automorphism},
              {"emitter_fixed", r.emitter_fixed},
              {"order_matches", r.order_matches},
              {"equivariant_injection", r.equivariant_injection},
              {"k0_iso", r.k0_iso},
              {"k1_zero", r.k1_zero},
              {"class_map", r.class_map},
              {"cross_pipeline", r.cross_pipeline},
              {"induced_matches", r.induced_matches}};
  return Json{{"ok", r.all()},
              {"checks", checks},
              {"degenerate", r.degenerate},
              {"sigma_order", r.sigma_order},
              {"alpha_order", r.alpha_order},
              {"k0", to_json(r.k0)},
              {"g", to_json(r.g_invariants)},
              {"b_quotient", to_json(r.b_quotient)},
              {"k1_rank", r.k1_rank},
              {"phi", to_json(r.phi)},
              {"failures", r.failures}};
}

Int int_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return Int(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw ParseError("expected an integer, got " + j.dump());
}

IntVec intvec_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an integer list, got " + j.dump());
  IntVec v;
  for (const auto& x : j) v.push_back(int_from_json(x));
  return v;
}

IntMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a list of rows");
  std::vector<IntVec> rows;
  for (const auto& r : j) rows.push_back(intvec_from_json(r));
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw ParseError("ragged matrix");
  return IntMatrix::from_row_vectors(rows, cols);
}

Json graph_input_to_json(const GraphSpecInput& in) {
  Json pi0 = Json::array(), b = Json::array(), rel = Json::array();
  for (const auto& v : in.pi0) pi0.push_back(to_json(v));
  for (const auto& v : in.b) b.push_back(to_json(v));
  const Lattice& lam = in.group.relations();
  for (std::size_t j = 0; j < lam.rank(); ++j) rel.push_back(to_json(lam.basis().column(j)));
  return Json{{"p", in.p},          {"ambient", in.group.ambient_rank()}, {"relations", rel},
              {"action", to_json(in.group.action())}, {"a_perm", in.a_perm}, {"pi0", pi0}, {"b", b}};
}

GraphSpecInput graph_input_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("graph input must be an object");
  for (const char* key : {"p", "ambient", "relations", "action", "a_perm", "pi0", "b"})
    if (!j.contains(key)) throw ParseError(std::string("graph input lacks \"") + key + "\"");
  GraphSpecInput in;
  try {
    in.p = j["p"].get<unsigned>();
    const auto r = j["ambient"].get<std::size_t>();
    std::vector<IntVec> rel;
    for (const auto& c : j["relations"]) rel.push_back(intvec_from_json(c));
    for (const auto& c : rel)
      if (c.size() != r) throw ParseError("relation of wrong length");
    IntMatrix action = matrix_from_json(j["action"]);
    if (action.rows() != r || action.cols() != r) throw ParseError("action must be ambient x ambient");
    in.group = FinMod(in.p, Lattice::from_generators(r, rel), action);
    in.a_perm = j["a_perm"].get<std::vector<std::size_t>>();
    for (const auto& v : j["pi0"]) in.pi0.push_back(intvec_from_json(v));
    for (const auto& v : j["b"]) in.b.push_back(intvec_from_json(v));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("graph input: ") + e.what());
  }
  return in;
}

namespace {

bool scalar_list(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? " " : "") + scalar_text(j[i]);
    return s + "]";
  }
  return j.dump();
}

void flatten(const Json& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, os);
  } else if (j.is_array() && !scalar_list(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    if (j.empty()) os << path << ": []\n";
  } else {
    os << path << ": " << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string render(const Report& r, Format f) {
  if (f == Format::Json) {
    Json out{{"summary", r.headline}};
    for (const auto& [k, v] : r.data.items()) out[k] = v;
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  os << r.headline << "\n";
  flatten(r.data, "", os);
  return os.str();
}

}  // namespace zcp

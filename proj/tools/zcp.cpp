// zcp: command-line front end.
//
// Exit codes: 0 success / property true, 1 property false (a witness is
// printed), 64 usage or parse error, 65 precondition violated, 2 internal
// invariant breach.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "zcp/error.hpp"
#include "zcp/report.hpp"

using namespace zcp;

namespace {

enum Exit { kOk = 0, kFalse = 1, kInternal = 2, kUsage = 64, kPrecondition = 65 };

struct Config {
  unsigned p = 2;
  std::size_t depth = 3;
  std::uint64_t seed = 1;
  unsigned kmax = 3;
  std::string format = "text";

  Format fmt() const { return format == "json" ? Format::Json : Format::Text; }
  SearchOptions search() const {
    SearchOptions o;
    o.seed = seed;
    o.k_max = kmax;
    return o;
  }
};

int emit(const Config& cfg, const Report& r, int code) {
  std::cout << render(r, cfg.fmt());
  return code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// "@path" reads the spec from a file; lines starting with '#' are comments.
ModSpec load_spec(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return parse_modspec(arg);
  std::istringstream in(read_file(arg.substr(1)));
  std::string text;
  for (std::string line; std::getline(in, line);)
    if (line.find_first_not_of(" \t") != std::string::npos && line[line.find_first_not_of(" \t")] != '#')
      text += line + " ";
  return parse_modspec(text);
}

// "1,0; 0,2" -> two vectors of length r.
std::vector<IntVec> parse_vectors(const std::string& text, std::size_t r) {
  std::vector<IntVec> out;
  std::istringstream rows(text);
  for (std::string row; std::getline(rows, row, ';');) {
    if (row.find_first_not_of(" \t") == std::string::npos) continue;
    IntVec v;
    std::istringstream cells(row);
    for (std::string cell; std::getline(cells, cell, ',');) {
      const auto b = cell.find_first_not_of(" \t"), e = cell.find_last_not_of(" \t");
      if (b == std::string::npos) throw ParseError("empty entry in vector list");
      Int x;
      if (x.set_str(cell.substr(b, e - b + 1), 10) != 0) throw ParseError("bad integer '" + cell + "'");
      v.push_back(x);
    }
    if (v.size() != r) throw ParseError("vector '" + row + "' should have " + std::to_string(r) + " entries");
    out.push_back(v);
  }
  return out;
}

int cmd_ring(const Config& cfg) {
  TPowerIdentities ids = solve_t_power_identities(cfg.p);
  Report r;
  r.headline = "h = " + ids.h.to_string() + ", f = " + ids.f.to_string() + ", g = " + ids.g.to_string();
  r.data = to_json(ids);
  bool ok = verify_t_power_identities(ids);
  Json expansion = Json::object();
  for (unsigned k = 1; k <= 3; ++k) {
    bool e = check_t_power_expansion(cfg.p, k);
    expansion[std::to_string(k)] = e;
    ok = ok && e;
  }
  r.data["identities_hold"] = ok;
  r.data["power_expansion"] = expansion;
  return emit(cfg, r, ok ? kOk : kInternal);
}

int cmd_module(const Config& cfg, const std::string& action, const std::string& spec_text) {
  ModSpec spec = load_spec(spec_text);
  FinMod m = build_module(spec, cfg.p);
  Report r;
  r.data["module"] = to_json(m);
  if (action == "build") {
    r.headline = m.describe();
    if (m.is_finite()) r.data["orbit_count"] = m.orbits().size();
    return emit(cfg, r, kOk);
  }
  if (!m.is_finite()) throw PreconditionError(action + " needs a finite module");
  AugPresentation pres = build_aug(m);
  if (action == "present") {
    r.headline = "N_M has rank " + std::to_string(pres.N.rank()) + " in ZM of rank " + std::to_string(pres.size());
    r.data["elements"] = Json::array();
    for (const auto& e : pres.elements) r.data["elements"].push_back(to_json(e));
    r.data["alpha_perm"] = pres.perm;
    r.data["n"] = to_json(pres.N);
    return emit(cfg, r, kOk);
  }
  if (action == "invariant-basis") {
    SearchResult res = invariant_basis_for(pres, cfg.search());
    const std::string problem =
        check_invariant_basis(res.basis, stabilized_lattice(pres.N, cfg.p, res.k), stabilized_action(pres.action, cfg.p, res.k), cfg.p);
    r.headline = "rank-" + std::to_string(res.basis.size()) + " basis, " + std::to_string(res.basis.orbit_blocks.size()) +
                 " orbit" + (res.basis.orbit_blocks.size() == 1 ? "" : "s") + " + " +
                 std::to_string(res.basis.fixed.size()) + " fixed";
    if (res.k > 0) r.headline += " (after adjoining R^" + std::to_string(res.k) + ")";
    r.data["k"] = res.k;
    r.data["route"] = res.route;
    r.data["candidates_tried"] = res.candidates_tried;
    r.data["basis"] = to_json(res.basis);
    r.data["verified"] = problem.empty();
    if (!problem.empty()) throw InternalError("invariant basis failed its check: " + problem);
    return emit(cfg, r, kOk);
  }
  // check-noncyc
  NoncycDetail d = noncyclotomic_detail(pres.N, pres.action, cfg.p);
  r.headline = std::string("noncyc ") + (d.equal ? "true" : "false");
  r.data["noncyclotomic"] = d.equal;
  r.data["ker_s"] = to_json(d.ker_s);
  r.data["t_n"] = to_json(d.t_n);
  if (!d.equal)
    for (std::size_t j = 0; j < d.ker_s.rank(); ++j)
      if (!d.t_n.contains(d.ker_s.basis().column(j))) {
        r.data["witness"] = to_json(d.ker_s.basis().column(j));
        break;
      }
  return emit(cfg, r, d.equal ? kOk : kFalse);
}

Lattice parse_sub(const FinMod& m, const std::string& text) {
  if (text == "0") return m.zero();
  if (text == "M") return m.whole();
  if (text == "tM") return m.t_image();
  if (text == "fixed") return m.fixed_submodule();
  if (text == "ker-s") return m.s_kernel();
  Lattice s = m.generated(parse_vectors(text, m.ambient_rank()));
  return s;
}

int cmd_inclusion(const Config& cfg, const std::string& action, const std::string& spec_text, const std::string& sub) {
  FinMod m = build_module(load_spec(spec_text), cfg.p);
  if (!m.is_finite()) throw PreconditionError("inclusion needs a finite module");
  InclusionPair pair = make_inclusion(m, parse_sub(m, sub));
  Report r;
  r.data["module"] = m.describe();
  r.data["submodule_order"] = to_json(m.subgroup_order(pair.M0.preimage));
  r.data["submodule"] = to_json(pair.M0.preimage);
  const bool cond = check_t_condition(pair);
  r.data["t_condition"] = cond;

  if (action == "check") {
    IntersectionReport inter = check_tn_intersection(pair);
    ProjectionResult proj = find_equivariant_projection(pair.pres.N, pair.n0, pair.pres.action);
    r.data["tn_intersection"] = inter.holds;
    r.data["torsion_free_quotient"] = quotient_torsion_free(pair);
    r.data["projection_exists"] = proj.p.has_value();
    if (proj.p) r.data["projection"] = to_json(*proj.p);
    else r.data["projection_absent_because"] = proj.reason;
    if (!cond)
      if (auto w = impurity_witness(pair)) r.data["witness"] = to_json(*w);
    r.headline = std::string("condition ") + (cond ? "true" : "false") + ", projection " +
                 (proj.p ? "present" : "absent");
    if (cond != proj.p.has_value()) throw InternalError("condition and projection disagree");
    return emit(cfg, r, cond ? kOk : kFalse);
  }
  if (action == "witness") {
    std::optional<PurityVerdict> w = cond ? find_purity_violation(pair) : impurity_witness(pair);
    if (!w) w = find_purity_violation(pair);
    r.headline = w ? "impure: " + w->lambda.to_string() + " * xi has no preimage in N_M0" : "no purity violation found";
    if (w) r.data["witness"] = to_json(*w);
    return emit(cfg, r, w ? kFalse : kOk);
  }
  // diagram
  DiagramResult d = inclusion_diagram(pair, cfg.search());
  r.headline = d.diagram ? "split diagram built" : "no split diagram: condition fails";
  if (d.diagram) {
    const InclusionDiagram& g = *d.diagram;
    r.data["k"] = g.top.k;
    r.data["rows_exact"] = g.rows_exact;
    r.data["columns_injective"] = g.columns_injective;
    r.data["commutes"] = g.commutes;
    r.data["summands"] = g.summands;
    r.data["top_basis"] = to_json(g.top.n1);
    r.data["bottom_basis"] = to_json(g.bottom.n1);
    r.data["n_projection"] = to_json(g.n_projection);
    r.data["p_projection"] = to_json(g.p_projection);
  }
  if (d.witness) r.data["witness"] = to_json(*d.witness);
  return emit(cfg, r, d.diagram ? kOk : kFalse);
}

struct GraphSource {
  long strand = -1;
  std::size_t cycle = 0;
  long remove = -1;
  std::string module;
  std::string input;
};

// A = union of the orbits of the standard basis vectors.
GraphSpecInput generator_input(const FinMod& m, const SearchOptions& opts) {
  std::vector<IntVec> a;
  auto index = [&](const IntVec& v) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (m.equal(a[i], v)) return i;
    return std::nullopt;
  };
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < m.ambient_rank(); ++i) {
    IntVec e(m.ambient_rank());
    e[i] = 1;
    e = m.canonical(e);
    if (index(e)) continue;
    std::size_t start = a.size();
    for (IntVec x = e; !index(x); x = m.act(x)) a.push_back(x);
    for (std::size_t j = start; j < a.size(); ++j) perm.push_back(*index(m.act(a[j])));
  }
  return graph_input_from_generators(m, perm, a, opts);
}

struct BuiltGraph {
  GadgetGraph g;
  std::optional<GraphSpecInput> input;
};

BuiltGraph build_graph(const Config& cfg, const GraphSource& src) {
  const int given = (src.strand >= 0) + !src.module.empty() + !src.input.empty();
  if (given != 1) throw CLI::ValidationError("graph", "give exactly one of --strand, --module, --input");
  BuiltGraph b;
  if (src.strand >= 0) {
    if (src.cycle != 0 && src.cycle != cfg.p)
      throw PreconditionError("--cycle must be 0 or p");
    b.g = build_strand_graph(static_cast<std::size_t>(src.strand), src.cycle);
    if (src.remove >= 0) b.g = delete_strand(b.g, static_cast<std::size_t>(src.remove));
    return b;
  }
  if (src.remove >= 0) throw CLI::ValidationError("--delete", "only applies to strand graphs");
  GraphSpecInput in;
  if (!src.input.empty()) {
    Json j;
    try {
      j = Json::parse(read_file(src.input));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("graph input: ") + e.what());
    }
    in = graph_input_from_json(j);
  } else {
    FinMod m = build_module(load_spec(src.module), cfg.p);
    in = m.is_finite() ? graph_input_for_module(m, cfg.search()) : generator_input(m, cfg.search());
  }
  if (auto msg = check_graph_input(in); !msg.empty()) throw PreconditionError("graph input: " + msg);
  b.g = build_spielberg(in);
  b.input = in;
  return b;
}

int cmd_graph(const Config& cfg, const std::string& action, const GraphSource& src) {
  const bool computes = action == "ktheory" || action == "verify";
  if (cfg.depth < (computes ? 2u : 1u)) throw CLI::ValidationError("--depth", computes ? "must be at least 2" : "must be at least 1");
  BuiltGraph b = build_graph(cfg, src);
  const GadgetGraph& g = b.g;
  if (action == "dot") {
    std::cout << to_dot(g, cfg.depth);
    return kOk;
  }
  Report r;
  if (action == "build") {
    AutomorphismCheck chk = validate_automorphism(g);
    r.headline = std::to_string(g.core_size()) + " core vertices, " + std::to_string(g.rays.size()) + " rays";
    r.data["irreducible"] = is_irreducible(g);
    r.data["automorphism_ok"] = chk.ok;
    r.data["automorphism_order"] = chk.order;
    if (!chk.ok) r.data["violation"] = chk.violation;
    r.data["graph"] = to_json(g);
    if (b.input) r.data["input"] = graph_input_to_json(*b.input);
    return emit(cfg, r, kOk);
  }
  if (action == "ktheory") {
    KResult k = compute_k(g, cfg.depth);
    if (validate_automorphism(g).ok) induced_action(g, k);
    TruncationReport t = stabilization_check(g, {cfg.depth, cfg.depth + 1});
    KSummary s;
    s.k0 = k.k0;
    s.k1_rank = k.k1.rank();
    r.headline = "K-theory " + s.to_string();
    r.data["k"] = to_json(k);
    if (k.induced_k1) {
      r.data["k1_fixed_rank"] = fixed_sublattice(*k.induced_k1).rank();
      r.data["k1_charpoly"] = PolyZ(characteristic_polynomial(*k.induced_k1)).to_string();
    }
    r.data["stabilization"] = to_json(t);
    if (!t.stable) throw InternalError("truncation unstable: " + t.mismatch);
    return emit(cfg, r, kOk);
  }
  // verify
  if (!b.input) throw PreconditionError("verify needs a module or an input file");
  TheoremReport rep = verify_theorem(g, *b.input, cfg.depth);
  r.headline = "K0 = " + rep.k0.to_string() + ", K1 = " + (rep.k1_rank ? "Z^" + std::to_string(rep.k1_rank) : "0") +
               ", map " + (rep.all() ? "OK" : "FAILED");
  r.data = to_json(rep);
  if (rep.degenerate) r.data["note"] = "alpha acts trivially; automorphism of order 1";
  return emit(cfg, r, rep.all() ? kOk : kFalse);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral representations of C_p and graph K-theory workbench", "zcp"};
  app.fallthrough();
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--p", cfg.p, "prime order of the acting group")->capture_default_str();
  app.add_option("--depth", cfg.depth, "ray truncation depth (>= 2)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized basis search")->capture_default_str();
  app.add_option("--kmax", cfg.kmax, "largest number of R summands to adjoin")->capture_default_str();
  app.add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  auto* ring = app.add_subcommand("ring", "solve and check the t^{p-1} identities");

  std::string spec, sub = "0";
  auto* module = app.add_subcommand("module", "module constructions and presentations");
  module->require_subcommand(1);
  std::vector<CLI::App*> module_cmds;
  for (const char* name : {"build", "present", "invariant-basis", "check-noncyc"}) {
    auto* c = module->add_subcommand(name);
    c->add_option("spec", spec, "module spec, or @file")->required();
    module_cmds.push_back(c);
  }

  auto* inclusion = app.add_subcommand("inclusion", "submodule inclusion M0 <= M");
  inclusion->require_subcommand(1);
  std::vector<CLI::App*> inclusion_cmds;
  for (const char* name : {"check", "witness", "diagram"}) {
    auto* c = inclusion->add_subcommand(name);
    c->add_option("spec", spec, "module spec for M, or @file")->required();
    c->add_option("--sub", sub, "M0: 0, M, tM, fixed, ker-s, or generators '1,0; 0,2'")->capture_default_str();
    inclusion_cmds.push_back(c);
  }

  GraphSource src;
  auto* graph = app.add_subcommand("graph", "graphs with an infinite emitter and their K-theory");
  graph->require_subcommand(1);
  std::vector<CLI::App*> graph_cmds;
  for (const char* name : {"build", "ktheory", "verify", "dot"}) {
    auto* c = graph->add_subcommand(name);
    c->add_option("--strand", src.strand, "strand graph with this many strands");
    c->add_option("--cycle", src.cycle, "cycle the last CYCLE strands (0 or p)");
    c->add_option("--delete", src.remove, "remove a fixed strand");
    c->add_option("--module", src.module, "module spec G; A = G, or the basis orbits when G is infinite");
    c->add_option("--input", src.input, "graph input file (JSON)");
    graph_cmds.push_back(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (!is_prime(static_cast<long>(cfg.p))) throw CLI::ValidationError("--p", "must be prime");
    if (ring->parsed()) return cmd_ring(cfg);
    for (auto* c : module_cmds)
      if (c->parsed()) return cmd_module(cfg, c->get_name(), spec);
    for (auto* c : inclusion_cmds)
      if (c->parsed()) return cmd_inclusion(cfg, c->get_name(), spec, sub);
    for (auto* c : graph_cmds)
      if (c->parsed()) return cmd_graph(cfg, c->get_name(), src);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const SearchExhausted& e) {
    std::cerr << "search exhausted: " << e.what() << " (try a larger --kmax)\n";
    return kPrecondition;
  } catch (const NotNonCyclotomic& e) {
    std::cerr << "not non-cyclotomic: " << e.what() << "\n";
    return kFalse;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

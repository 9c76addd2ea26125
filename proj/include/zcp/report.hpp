#pragma once
// Structured reports. Every report is a JSON object; the text format is a
// headline followed by the same fields flattened to "path: value" lines, so
// both formats carry identical content. Integers that do not fit in 64 bits
// are written as decimal strings.

#include <string>

#include "json.hpp"
#include "zcp/graphkit.hpp"
#include "zcp/ktheory.hpp"
#include "zcp/lattice_props.hpp"
#include "zcp/presentation.hpp"

namespace zcp {

using Json = nlohmann::ordered_json;

Json to_json(const Int& v);
Json to_json(const IntVec& v);
/// Row-major list of rows.
Json to_json(const IntMatrix& m);
Json to_json(const GroupInvariants& g);
/// {"ambient", "rank", "basis": [columns]}.
Json to_json(const Lattice& l);
Json to_json(const PolyZ& f);
Json to_json(const TPowerIdentities& ids);
Json to_json(const FinMod& m);
Json to_json(const InvariantBasis& b);
Json to_json(const PurityVerdict& v);
Json to_json(const GadgetGraph& g);
Json to_json(const KResult& k);
Json to_json(const KSummary& s);
Json to_json(const TruncationReport& r);
Json to_json(const TheoremReport& r);

Int int_from_json(const Json& j);
IntVec intvec_from_json(const Json& j);
IntMatrix matrix_from_json(const Json& j);

/// Graph construction input: {"p", "ambient", "relations": [columns],
/// "action": rows, "a_perm", "pi0", "b"}. Throws ParseError on bad shape.
Json graph_input_to_json(const GraphSpecInput& in);
GraphSpecInput graph_input_from_json(const Json& j);

struct Report {
  std::string headline;
  Json data = Json::object();
};

enum class Format { Text, Json };

/// Text: headline, then one "path: value" line per leaf; vectors of scalars
/// stay on one line. Json: {"summary": headline, ...data} pretty-printed.
std::string render(const Report& r, Format f);

}  // namespace zcp

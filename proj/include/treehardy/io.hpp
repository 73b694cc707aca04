#pragma once

#include <string>

#include "json.hpp"
#include "treehardy/measure.hpp"
#include "treehardy/tree.hpp"
#include "treehardy/weights.hpp"

namespace treehardy {

// 17-significant-digit rendering shared by every emitted document, so runs
// with the same inputs produce identical bytes
std::string fmt17(double x);

// ordered-object serializer using fmt17 for every floating value; two-space
// indentation, trailing newline
std::string json_text(const nlohmann::ordered_json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Tree documents: {"vertices": [...], "edges": [...], "root": id} with edge
// entries either {"child": c, "parent": p} or, for a compressed segment,
// {"chain": {"from": p, "to": c, "length": n}}.  An optional "root_chain"
// carries the length of the root segment when it exceeds one.  Documents
// emitted here always use construction-order ids; loaded documents may use
// arbitrary integer ids, preserved in original_ids().
std::string tree_to_json(const RootedTree& t);
RootedTree tree_from_json(const std::string& text);

// Measures are {"vertex_id": mass} with zero-mass vertices omitted.  Keys
// refer to the ids of the tree document the measure belongs to.
std::string measure_to_json(const RootedTree& t, const TreeMeasure& mu);
TreeMeasure measure_from_json(const RootedTree& t, const std::string& text);

// Weights are {"edge_id": value}, one entry per stored segment, all required.
std::string weight_to_json(const RootedTree& t, const EdgeWeight& w);
EdgeWeight weight_from_json(const RootedTree& t, const std::string& text);

// "canonical" | "const:c" | "besov:a" | "exp:lambda", the last meaning
// 2^(lambda d(alpha))
EdgeWeight weight_rule(const RootedTree& t, const std::string& rule, Exponent p);
bool looks_like_weight_rule(const std::string& s);

// a rule when it parses as one, otherwise a path to a weight document
EdgeWeight resolve_weight(const RootedTree& t, const std::string& rule_or_path,
                          Exponent p);

// Per-edge table with the energy/mass ratio column evaluated at each segment
// top.  Row order follows edge ids.
std::string edge_table_csv(const RootedTree& t, const TreeMeasure& mu,
                           const EdgeWeight& pi, Exponent p);

}  // namespace treehardy

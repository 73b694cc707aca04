#include "treehardy/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "treehardy/conditions.hpp"

namespace treehardy {

namespace {

using nlohmann::ordered_json;

std::int64_t as_id(const ordered_json& j, const char* what) {
  if (!j.is_number_integer())
    throw std::invalid_argument(std::string(what) + ": expected an integer id");
  return j.get<std::int64_t>();
}

std::int64_t parse_key(const std::string& key, const char* what) {
  std::size_t used = 0;
  std::int64_t id = 0;
  try {
    id = std::stoll(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size())
    throw std::invalid_argument(std::string(what) + ": key '" + key +
                                "' is not an integer id");
  return id;
}

ordered_json parse(const std::string& text, const char* what) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::invalid_argument(std::string(what) + ": malformed document");
  return j;
}

// id as written in the source document for vertex v
std::int64_t doc_id(const RootedTree& t, VertexId v) {
  return t.original_ids().empty() ? v : t.original_ids()[v];
}

// map from document ids back to dense ids
std::map<std::int64_t, VertexId> doc_index(const RootedTree& t) {
  std::map<std::int64_t, VertexId> m;
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    m[doc_id(t, (VertexId)v)] = (VertexId)v;
  return m;
}

void emit(const ordered_json& j, std::string& out, int depth) {
  auto pad = [&](int d) { out.append(2 * (std::size_t)d, ' '); };
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        pad(depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      pad(depth);
      out += '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        pad(depth + 1);
        emit(j[i], out, depth + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      pad(depth);
      out += ']';
      return;
    }
    case ordered_json::value_t::number_float:
      out += fmt17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string fmt17(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_text(const nlohmann::ordered_json& j) {
  std::string out;
  emit(j, out, 0);
  out += '\n';
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
  if (!out) throw std::invalid_argument("write failed: " + path);
}

std::string tree_to_json(const RootedTree& t) {
  ordered_json doc;
  ordered_json verts = ordered_json::array();
  for (std::size_t v = 0; v < t.vertex_count(); ++v) verts.push_back((std::int64_t)v);
  doc["vertices"] = std::move(verts);
  ordered_json edges = ordered_json::array();
  for (std::size_t v = 1; v < t.vertex_count(); ++v) {
    if (t.segment_length((VertexId)v) == 1) {
      edges.push_back({{"child", (std::int64_t)v},
                       {"parent", (std::int64_t)t.parent((VertexId)v)}});
    } else {
      edges.push_back(
          {{"chain",
            {{"from", (std::int64_t)t.parent((VertexId)v)},
             {"to", (std::int64_t)v},
             {"length", t.segment_length((VertexId)v)}}}});
    }
  }
  doc["edges"] = std::move(edges);
  doc["root"] = (std::int64_t)0;
  if (t.segment_length(0) > 1) doc["root_chain"] = t.segment_length(0);
  return json_text(doc);
}

RootedTree tree_from_json(const std::string& text) {
  ordered_json doc = parse(text, "tree document");
  if (!doc.is_object() || !doc.contains("edges") || !doc.contains("root"))
    throw std::invalid_argument("tree document: needs edges and root");
  std::int64_t root = as_id(doc["root"], "tree document root");
  std::int64_t root_chain = 1;
  if (doc.contains("root_chain"))
    root_chain = as_id(doc["root_chain"], "tree document root_chain");
  if (!doc["edges"].is_array())
    throw std::invalid_argument("tree document: edges must be an array");

  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> entries;
  for (const ordered_json& e : doc["edges"]) {
    if (e.contains("chain")) {
      const ordered_json& c = e["chain"];
      if (!c.contains("from") || !c.contains("to") || !c.contains("length"))
        throw std::invalid_argument("tree document: chain needs from, to, length");
      entries.push_back({as_id(c["to"], "chain to"), as_id(c["from"], "chain from"),
                         as_id(c["length"], "chain length")});
    } else if (e.contains("child") && e.contains("parent")) {
      entries.push_back(
          {as_id(e["child"], "edge child"), as_id(e["parent"], "edge parent"), 1});
    } else {
      throw std::invalid_argument(
          "tree document: edge entries need child/parent or a chain");
    }
  }
  RootedTree t = RootedTree::from_segment_list(entries, root, root_chain);

  if (doc.contains("vertices")) {
    if (!doc["vertices"].is_array())
      throw std::invalid_argument("tree document: vertices must be an array");
    std::map<std::int64_t, int> listed;
    for (const ordered_json& v : doc["vertices"])
      ++listed[as_id(v, "tree document vertex")];
    if (listed.size() != t.vertex_count())
      throw std::invalid_argument(
          "tree document: vertices array does not match the edge set");
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
      auto it = listed.find(doc_id(t, (VertexId)v));
      if (it == listed.end() || it->second != 1)
        throw std::invalid_argument(
            "tree document: vertices array does not match the edge set");
    }
  }
  return t;
}

std::string measure_to_json(const RootedTree& t, const TreeMeasure& mu) {
  if (mu.mass.size() != t.vertex_count())
    throw std::invalid_argument("measure_to_json: size mismatch");
  ordered_json doc = ordered_json::object();
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    if (mu.mass[v] != 0.0)
      doc[std::to_string(doc_id(t, (VertexId)v))] = mu.mass[v];
  return json_text(doc);
}

TreeMeasure measure_from_json(const RootedTree& t, const std::string& text) {
  ordered_json doc = parse(text, "measure document");
  if (!doc.is_object())
    throw std::invalid_argument("measure document: expected an object");
  std::map<std::int64_t, VertexId> index = doc_index(t);
  std::vector<double> mass(t.vertex_count(), 0.0);
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::int64_t id = parse_key(it.key(), "measure document");
    auto slot = index.find(id);
    if (slot == index.end())
      throw std::invalid_argument("measure document: unknown vertex id " +
                                  it.key());
    if (!it.value().is_number())
      throw std::invalid_argument("measure document: mass must be a number");
    mass[slot->second] = it.value().get<double>();
  }
  return cumulate(t, std::move(mass));
}

std::string weight_to_json(const RootedTree& t, const EdgeWeight& w) {
  w.validate(t);
  ordered_json doc = ordered_json::object();
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    doc[std::to_string(doc_id(t, (VertexId)v))] = w[(VertexId)v];
  return json_text(doc);
}

EdgeWeight weight_from_json(const RootedTree& t, const std::string& text) {
  ordered_json doc = parse(text, "weight document");
  if (!doc.is_object())
    throw std::invalid_argument("weight document: expected an object");
  std::map<std::int64_t, VertexId> index = doc_index(t);
  EdgeWeight w;
  w.value.assign(t.vertex_count(), 0.0);
  std::vector<char> seen(t.vertex_count(), 0);
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::int64_t id = parse_key(it.key(), "weight document");
    auto slot = index.find(id);
    if (slot == index.end())
      throw std::invalid_argument("weight document: unknown edge id " + it.key());
    if (!it.value().is_number())
      throw std::invalid_argument("weight document: weight must be a number");
    w.value[slot->second] = it.value().get<double>();
    seen[slot->second] = 1;
  }
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    if (!seen[v])
      throw std::invalid_argument("weight document: edge " +
                                  std::to_string(doc_id(t, (VertexId)v)) +
                                  " has no weight");
  w.validate(t);
  return w;
}

bool looks_like_weight_rule(const std::string& s) {
  return s == "canonical" || s.rfind("const:", 0) == 0 ||
         s.rfind("besov:", 0) == 0 || s.rfind("exp:", 0) == 0;
}

EdgeWeight weight_rule(const RootedTree& t, const std::string& rule, Exponent p) {
  auto number_after = [&](std::size_t colon) {
    std::string arg = rule.substr(colon + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty())
      throw std::invalid_argument("weight rule '" + rule +
                                  "': bad numeric parameter");
    return x;
  };
  if (rule == "canonical") return canonical_weight(t);
  if (rule.rfind("const:", 0) == 0) return const_weight(t, number_after(5));
  if (rule.rfind("besov:", 0) == 0) return besov_weight(t, number_after(5), p);
  if (rule.rfind("exp:", 0) == 0) return exp_weight(t, number_after(3));
  throw std::invalid_argument("unknown weight rule: " + rule);
}

EdgeWeight resolve_weight(const RootedTree& t, const std::string& rule_or_path,
                          Exponent p) {
  if (looks_like_weight_rule(rule_or_path)) return weight_rule(t, rule_or_path, p);
  return weight_from_json(t, read_file(rule_or_path));
}

std::string edge_table_csv(const RootedTree& t, const TreeMeasure& mu,
                           const EdgeWeight& pi, Exponent p) {
  auto [me, sb] = me_sb_constants(t, mu, pi, p, true);
  (void)sb;
  // edges with an empty tent hold vacuously and report ratio 0
  std::vector<double> ratio(t.vertex_count(), 0.0);
  for (const RatioRow& row : me.table) ratio[row.edge] = row.ratio;
  std::string out = "edge_id, d(alpha), tent, ratio, weight, mass\n";
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    out += std::to_string(doc_id(t, (VertexId)v));
    out += ", ";
    out += std::to_string(t.edge_depth_top((VertexId)v));
    out += ", ";
    out += fmt17(mu.tent[v]);
    out += ", ";
    out += fmt17(ratio[v]);
    out += ", ";
    out += fmt17(pi[(VertexId)v]);
    out += ", ";
    out += fmt17(mu.mass[v]);
    out += '\n';
  }
  return out;
}

}  // namespace treehardy

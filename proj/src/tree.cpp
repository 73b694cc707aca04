#include "treehardy/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace treehardy {

std::string DyadicAddress::bits() const {
  std::string out;
  out.reserve(level);
  for (std::int64_t b = level - 1; b >= 0; --b)
    out.push_back(((index - 1) >> b) & 1 ? '1' : '0');
  return out;
}

DyadicAddress DyadicAddress::from_bits(const std::string& bits) {
  DyadicAddress a;
  a.level = (std::int64_t)bits.size();
  std::uint64_t j = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("dyadic bits must be 0/1");
    j = (j << 1) | (c == '1' ? 1u : 0u);
  }
  a.index = j + 1;
  return a;
}

std::pair<double, double> DyadicAddress::interval() const {
  double h = std::ldexp(1.0, -(int)level);
  return {(double)(index - 1) * h, (double)index * h};
}

TreeBuilder::TreeBuilder(std::int64_t root_chain_len) {
  if (root_chain_len < 1) throw std::invalid_argument("root chain length must be >= 1");
  tree_.parent_.push_back(kNoVertex);
  tree_.children_.emplace_back();
  tree_.seg_len_.push_back(root_chain_len);
  tree_.depth_.push_back(root_chain_len - 1);
}

VertexId TreeBuilder::add_child(VertexId parent, std::int64_t chain_len) {
  if (built_) throw std::logic_error("builder already consumed");
  if (parent < 0 || (std::size_t)parent >= tree_.parent_.size())
    throw std::invalid_argument("add_child: unknown parent");
  if (chain_len < 1) throw std::invalid_argument("chain length must be >= 1");
  VertexId id = (VertexId)tree_.parent_.size();
  tree_.parent_.push_back(parent);
  tree_.children_.emplace_back();
  tree_.seg_len_.push_back(chain_len);
  tree_.depth_.push_back(tree_.depth_[parent] + chain_len);
  tree_.children_[parent].push_back(id);
  return id;
}

RootedTree TreeBuilder::build() {
  built_ = true;
  tree_.finish();
  return std::move(tree_);
}

void RootedTree::finish() {
  leaves_.clear();
  actual_edges_ = 0;
  compressed_ = false;
  for (std::size_t v = 0; v < parent_.size(); ++v) {
    actual_edges_ += seg_len_[v];
    if (seg_len_[v] > 1) compressed_ = true;
    if (children_[v].empty()) leaves_.push_back((VertexId)v);
  }
}

RootedTree RootedTree::homogeneous(int branching, int depth) {
  if (branching < 1) throw std::invalid_argument("homogeneous: branching must be >= 1");
  if (depth < 0) throw std::invalid_argument("homogeneous: depth must be >= 0");
  // edge count = sum q^k, guard against blowup before allocating
  double est = 0, pw = 1;
  for (int k = 0; k <= depth; ++k) {
    est += pw;
    pw *= branching;
    if (est > 1e8) throw std::invalid_argument("homogeneous: edge count overflow");
  }
  TreeBuilder b;
  std::vector<VertexId> level{0};
  for (int d = 1; d <= depth; ++d) {
    std::vector<VertexId> next;
    next.reserve(level.size() * branching);
    for (VertexId v : level)
      for (int c = 0; c < branching; ++c) next.push_back(b.add_child(v));
    level.swap(next);
  }
  RootedTree t = b.build();
  t.homogeneous_q_ = branching;
  t.homogeneous_depth_ = depth;
  return t;
}

RootedTree RootedTree::from_segment_list(
    const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>&
        entries,
    std::int64_t root, std::int64_t root_chain_len) {
  if (root_chain_len < 1)
    throw std::invalid_argument("from_segment_list: nonpositive root chain");
  std::unordered_map<std::int64_t, std::int64_t> par;  // original ids
  std::unordered_map<std::int64_t, std::int64_t> len;
  par.reserve(entries.size() * 2);
  for (const auto& [c, p, l] : entries) {
    if (c == root) throw std::invalid_argument("from_segment_list: root listed as a child");
    if (l < 1) throw std::invalid_argument("from_segment_list: nonpositive chain length");
    if (!par.emplace(c, p).second)
      throw std::invalid_argument("from_segment_list: duplicate parent assignment");
    len[c] = l;
  }
  // every parent must be a known vertex
  for (const auto& [c, p, l] : entries) {
    (void)c;
    (void)l;
    if (p != root && par.find(p) == par.end())
      throw std::invalid_argument("from_segment_list: parent id not in vertex set");
  }
  // cycle detection: walk up from every vertex with path marking
  std::unordered_map<std::int64_t, int> state;  // 0 fresh, 1 on stack, 2 done
  for (const auto& [c0, p0, l0] : entries) {
    (void)p0;
    (void)l0;
    std::int64_t x = c0;
    std::vector<std::int64_t> chain;
    while (x != root) {
      auto st = state.find(x);
      if (st != state.end()) {
        if (st->second == 1) throw std::invalid_argument("from_segment_list: cycle detected");
        break;  // already validated
      }
      state[x] = 1;
      chain.push_back(x);
      x = par.at(x);
    }
    for (std::int64_t v : chain) state[v] = 2;
  }
  // children lists in input order, BFS numbering from the root
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> kids;
  for (const auto& [c, p, l] : entries) {
    (void)l;
    kids[p].push_back(c);
  }
  TreeBuilder b(root_chain_len);
  std::unordered_map<std::int64_t, VertexId> dense{{root, 0}};
  std::vector<std::int64_t> order{root};
  std::vector<std::int64_t> orig{root};
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto it = kids.find(order[i]);
    if (it == kids.end()) continue;
    for (std::int64_t c : it->second) {
      dense[c] = b.add_child(dense.at(order[i]), len.at(c));
      order.push_back(c);
      orig.push_back(c);
    }
  }
  if (order.size() != entries.size() + 1)
    throw std::invalid_argument("from_segment_list: vertex not reachable from root");
  RootedTree t = b.build();
  t.orig_id_ = std::move(orig);
  return t;
}

RootedTree RootedTree::from_parent_list(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& child_parent,
    std::int64_t root) {
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> entries;
  entries.reserve(child_parent.size());
  for (const auto& [c, p] : child_parent) entries.push_back({c, p, 1});
  try {
    return from_segment_list(entries, root, 1);
  } catch (const std::invalid_argument& e) {
    // keep the historical error prefix for plain lists
    std::string msg = e.what();
    auto pos = msg.find("from_segment_list");
    if (pos != std::string::npos) msg.replace(pos, 17, "from_parent_list");
    throw std::invalid_argument(msg);
  }
}

std::pair<VertexId, std::int64_t> RootedTree::confluent(VertexId x, VertexId y) const {
  if (x < 0 || y < 0 || (std::size_t)x >= parent_.size() || (std::size_t)y >= parent_.size())
    throw std::invalid_argument("confluent: vertex out of range");
  std::int64_t dx = path_edge_count(x), dy = path_edge_count(y);
  VertexId a = x, b = y;
  std::int64_t da = dx, db = dy;
  while (a != b) {
    if (da >= db) {
      a = parent_[a];
      da = path_edge_count(a);
    } else {
      b = parent_[b];
      db = path_edge_count(b);
    }
  }
  return {a, dx + dy - 2 * path_edge_count(a)};
}

bool RootedTree::is_ancestor_or_same(VertexId anc, VertexId v) const {
  while (v != kNoVertex && depth_[v] >= depth_[anc]) {
    if (v == anc) return true;
    v = parent_[v];
  }
  return false;
}

std::int64_t RootedTree::subtree_stored_count(VertexId v) const {
  std::int64_t n = 0;
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    ++n;
    for (VertexId c : children_[u]) stack.push_back(c);
  }
  return n;
}

RootedTree RootedTree::expanded(std::vector<VertexId>* old_to_new,
                                std::int64_t max_vertices) const {
  if (actual_edges_ > max_vertices)
    throw std::invalid_argument("expanded: tree too large to materialize");
  TreeBuilder b;
  std::vector<VertexId> map(parent_.size(), kNoVertex);
  // root segment: interiors first so that 0 stays the new root only when
  // seg_len_[0] == 1; with a root chain the topmost new vertex is the root.
  // Keep it simple: rebuild in id order, chains inline.
  if (seg_len_[0] != 1) {
    // expand the omega chain below a fresh root
    VertexId cur = 0;
    for (std::int64_t i = 1; i < seg_len_[0]; ++i) cur = b.add_child(cur);
    map[0] = cur;
  } else {
    map[0] = 0;
  }
  for (std::size_t v = 1; v < parent_.size(); ++v) {
    VertexId cur = map[parent_[v]];
    for (std::int64_t i = 1; i < seg_len_[v]; ++i) cur = b.add_child(cur);
    map[v] = b.add_child(cur);
  }
  if (old_to_new) *old_to_new = map;
  RootedTree t = b.build();
  t.homogeneous_q_ = compressed_ ? 0 : homogeneous_q_;
  t.homogeneous_depth_ = compressed_ ? -1 : homogeneous_depth_;
  return t;
}

VertexId RootedTree::vertex_at(const DyadicAddress& a) const {
  if (!is_dyadic()) throw std::logic_error("dyadic addressing requires homogeneous(2, d)");
  if (a.level < 0 || a.level > homogeneous_depth_)
    throw std::invalid_argument("dyadic address level out of range");
  if (a.index < 1 || a.index > (std::uint64_t)1 << a.level)
    throw std::invalid_argument("dyadic address index out of range");
  VertexId v = 0;
  std::uint64_t path = a.index - 1;
  for (std::int64_t b = a.level - 1; b >= 0; --b)
    v = children_[v][(path >> b) & 1];
  return v;
}

DyadicAddress RootedTree::address_of(VertexId v) const {
  if (!is_dyadic()) throw std::logic_error("dyadic addressing requires homogeneous(2, d)");
  if (v < 0 || (std::size_t)v >= parent_.size())
    throw std::invalid_argument("address_of: vertex out of range");
  DyadicAddress a;
  a.level = depth_[v];
  std::uint64_t path = 0;
  std::int64_t bit = 0;
  for (VertexId u = v; parent_[u] != kNoVertex; u = parent_[u], ++bit) {
    VertexId p = parent_[u];
    if (children_[p][1] == u) path |= (std::uint64_t)1 << bit;
  }
  a.index = path + 1;
  return a;
}

void RootedTree::require_plain(const char* who) const {
  if (compressed_)
    throw std::invalid_argument(std::string(who) + ": compressed chains not supported here, expand first");
}

}  // namespace treehardy

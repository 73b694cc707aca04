#include "treehardy/unrooted.hpp"

#include <random>
#include <stdexcept>
#include <unordered_map>

namespace treehardy {

void UnrootedTruncation::finish() {
  leaves_.clear();
  interior_.clear();
  cubic_ = true;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    if (adj_[v].size() == 1) {
      leaves_.push_back((VertexId)v);
    } else if (adj_[v].size() >= 2 && adj_[v].size() <= 3) {
      interior_.push_back((VertexId)v);
      if (adj_[v].size() != 3) cubic_ = false;
    } else {
      throw std::invalid_argument("truncation: vertex degree must be 1, 2 or 3");
    }
  }
}

UnrootedTruncation UnrootedTruncation::symmetric(int depth) {
  if (depth < 1) throw std::invalid_argument("symmetric truncation needs depth >= 1");
  UnrootedTruncation t;
  t.adj_.emplace_back();  // center 0
  // branch b occupies a contiguous id block so the rotation (block b ->
  // block b+1) is an automorphism by construction
  for (int b = 0; b < 3; ++b) {
    VertexId head = (VertexId)t.adj_.size();
    t.adj_.emplace_back();
    t.adj_[0].push_back(head);
    t.adj_[head].push_back(0);
    std::vector<VertexId> level{head};
    for (int d = 1; d < depth; ++d) {
      std::vector<VertexId> next;
      for (VertexId v : level)
        for (int c = 0; c < 2; ++c) {
          VertexId w = (VertexId)t.adj_.size();
          t.adj_.emplace_back();
          t.adj_[v].push_back(w);
          t.adj_[w].push_back(v);
          next.push_back(w);
        }
      level.swap(next);
    }
  }
  t.finish();
  return t;
}

UnrootedTruncation UnrootedTruncation::random(int interior_target, std::uint64_t seed) {
  if (interior_target < 1) throw std::invalid_argument("need at least one interior vertex");
  UnrootedTruncation t;
  t.adj_.assign(4, {});
  for (VertexId v = 1; v <= 3; ++v) {
    t.adj_[0].push_back(v);
    t.adj_[v].push_back(0);
  }
  std::mt19937_64 rng(seed);
  std::vector<VertexId> leaves{1, 2, 3};
  int interior = 1;
  while (interior < interior_target) {
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    std::size_t i = pick(rng);
    VertexId v = leaves[i];
    leaves[i] = leaves.back();
    leaves.pop_back();
    for (int c = 0; c < 2; ++c) {
      VertexId w = (VertexId)t.adj_.size();
      t.adj_.emplace_back();
      t.adj_[v].push_back(w);
      t.adj_[w].push_back(v);
      leaves.push_back(w);
    }
    ++interior;
  }
  t.finish();
  return t;
}

UnrootedTruncation UnrootedTruncation::from_edges(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
  std::unordered_map<std::int64_t, VertexId> dense;
  UnrootedTruncation t;
  auto id = [&](std::int64_t x) {
    auto [it, fresh] = dense.emplace(x, (VertexId)t.adj_.size());
    if (fresh) t.adj_.emplace_back();
    return it->second;
  };
  for (auto [a, b] : edges) {
    VertexId u = id(a), v = id(b);
    t.adj_[u].push_back(v);
    t.adj_[v].push_back(u);
  }
  if (t.adj_.size() != edges.size() + 1)
    throw std::invalid_argument("truncation edges do not form a tree");
  t.finish();
  return t;
}

RootedTree UnrootedTruncation::rooted_at(VertexId o, std::vector<VertexId>* rooted_of,
                                         std::vector<VertexId>* unrooted_of) const {
  if (o < 0 || (std::size_t)o >= adj_.size() || is_leaf(o))
    throw std::invalid_argument("rooted_at: root must be an interior vertex");
  TreeBuilder b;
  std::vector<VertexId> map(adj_.size(), kNoVertex);
  std::vector<VertexId> inv{o};
  map[o] = 0;
  std::vector<std::pair<VertexId, VertexId>> queue{{o, kNoVertex}};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto [u, from] = queue[i];
    for (VertexId w : adj_[u]) {
      if (w == from) continue;
      map[w] = b.add_child(map[u]);
      inv.push_back(w);
      queue.push_back({w, u});
    }
  }
  if (rooted_of) *rooted_of = map;
  if (unrooted_of) *unrooted_of = inv;
  return b.build();
}

std::vector<VertexId> UnrootedTruncation::arc_leaves(VertexId tail, VertexId head) const {
  std::vector<VertexId> out;
  std::vector<std::pair<VertexId, VertexId>> stack{{head, tail}};
  bool edge_ok = false;
  for (VertexId w : adj_[tail])
    if (w == head) edge_ok = true;
  if (!edge_ok) throw std::invalid_argument("arc_leaves: not an edge");
  while (!stack.empty()) {
    auto [u, from] = stack.back();
    stack.pop_back();
    if (is_leaf(u)) out.push_back(u);
    for (VertexId w : adj_[u])
      if (w != from) stack.push_back({w, u});
  }
  return out;
}

}  // namespace treehardy

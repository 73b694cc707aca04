#pragma once

#include <cstdint>
#include <vector>

#include "treehardy/tree.hpp"

namespace treehardy {

// Finite unrooted tree with vertex degrees at most 3.  Truncations of the
// 3-homogeneous tree are the cubic case (interior degree exactly 3); paths
// and other degree-2 shapes are allowed for electrical fixtures.  Rooting at
// an interior vertex recovers a RootedTree with a synthetic pre-root.
class UnrootedTruncation {
 public:
  // three complete binary branches of the given depth glued at a center
  static UnrootedTruncation symmetric(int depth);
  // grow by repeatedly splitting a random leaf into two until the interior
  // has `interior_target` vertices; deterministic for a fixed seed
  static UnrootedTruncation random(int interior_target, std::uint64_t seed);

  static UnrootedTruncation from_edges(
      const std::vector<std::pair<std::int64_t, std::int64_t>>& edges);

  std::size_t vertex_count() const { return adj_.size(); }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  bool is_leaf(VertexId v) const { return adj_[v].size() == 1; }
  const std::vector<VertexId>& leaves() const { return leaves_; }
  const std::vector<VertexId>& interior() const { return interior_; }
  std::size_t edge_count() const { return vertex_count() - 1; }
  // every interior vertex has degree exactly 3
  bool cubic() const { return cubic_; }

  // rooted view at an interior vertex; rooted_of[u] is the RootedTree id of
  // unrooted vertex u and unrooted_of inverts it
  RootedTree rooted_at(VertexId o, std::vector<VertexId>* rooted_of = nullptr,
                       std::vector<VertexId>* unrooted_of = nullptr) const;

  // leaf set hanging on the `head` side of the edge (tail, head); arcs of the
  // boundary are always of this form and flipping the direction complements
  std::vector<VertexId> arc_leaves(VertexId tail, VertexId head) const;

 private:
  void finish();
  std::vector<std::vector<VertexId>> adj_;
  std::vector<VertexId> leaves_;
  std::vector<VertexId> interior_;
  bool cubic_ = true;
};

}  // namespace treehardy

#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace treehardy {

// Vertices are dense ids, 0 is always the root o.  The pre-root o* is not
// stored; every stored vertex v != o* owns exactly one parent edge, so edge
// ids coincide with the id of their lower endpoint e(alpha).  Edge 0 is the
// root edge omega = (o*, o).
using VertexId = std::int64_t;
inline constexpr VertexId kNoVertex = -1;

struct DyadicAddress {
  std::int64_t level = 0;   // n >= 0, root is (0,1)
  std::uint64_t index = 1;  // j in [1, 2^n], left-to-right

  // MSB-first bits of j-1; bit 0 picks the left child.
  std::string bits() const;
  static DyadicAddress from_bits(const std::string& bits);
  // half-open interval [(j-1)/2^n, j/2^n)
  std::pair<double, double> interval() const;
};

class TreeBuilder;

class RootedTree {
 public:
  // Complete tree where every vertex down to `depth` has `branching`
  // children.  depth 0 is the lone root edge.
  static RootedTree homogeneous(int branching, int depth);

  // (child, parent) pairs over arbitrary ids; the root is given explicitly
  // and must not appear as a child.  Rejects duplicate parents, cycles,
  // unknown parents and vertices not reachable from the root.
  static RootedTree from_parent_list(
      const std::vector<std::pair<std::int64_t, std::int64_t>>& child_parent,
      std::int64_t root);

  // (child, parent, chain length) triples; same validation, compressed
  // segments allowed, root_chain_len is the length of the root segment
  static RootedTree from_segment_list(
      const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>&
          entries,
      std::int64_t root, std::int64_t root_chain_len = 1);

  std::size_t vertex_count() const { return parent_.size(); }
  std::size_t edge_count() const { return parent_.size(); }  // stored segments
  std::int64_t actual_edge_count() const { return actual_edges_; }

  VertexId parent(VertexId v) const { return parent_[v]; }
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
  bool is_leaf(VertexId v) const { return children_[v].empty(); }
  const std::vector<VertexId>& leaves() const { return leaves_; }

  // Parent-edge segment of v: a run of `segment_length` actual edges with no
  // branching or mass strictly inside.  Plain trees have length 1 everywhere.
  std::int64_t segment_length(VertexId v) const { return seg_len_[v]; }
  bool is_compressed() const { return compressed_; }

  // d(alpha) of the deepest actual edge in the segment (the edge arriving at
  // v); d(omega) = 0.  The segment spans [edge_depth_top, edge_depth].
  std::int64_t edge_depth(VertexId v) const { return depth_[v]; }
  std::int64_t edge_depth_top(VertexId v) const {
    return depth_[v] - seg_len_[v] + 1;
  }
  // number of actual edges on [o*, v]
  std::int64_t path_edge_count(VertexId v) const { return depth_[v] + 1; }

  // confluent x ^ y together with the actual-edge distance d(x, y)
  std::pair<VertexId, std::int64_t> confluent(VertexId x, VertexId y) const;
  bool is_ancestor_or_same(VertexId anc, VertexId v) const;

  // number of stored vertices in the closed successor set S(alpha), alpha the
  // parent edge of v (chain interiors are not counted)
  std::int64_t subtree_stored_count(VertexId v) const;

  // materializes chain interiors; old_to_new maps stored ids
  RootedTree expanded(std::vector<VertexId>* old_to_new = nullptr,
                      std::int64_t max_vertices = (std::int64_t)1 << 24) const;

  // dyadic addressing, only valid on trees built via homogeneous(2, depth)
  bool is_dyadic() const { return homogeneous_q_ == 2; }
  int homogeneous_branching() const { return homogeneous_q_; }
  int homogeneous_depth() const { return homogeneous_depth_; }
  VertexId vertex_at(const DyadicAddress& a) const;
  DyadicAddress address_of(VertexId v) const;

  // ids as found in an input file, when the tree was loaded; empty otherwise
  const std::vector<std::int64_t>& original_ids() const { return orig_id_; }

  void require_plain(const char* who) const;  // throws if compressed

 private:
  friend class TreeBuilder;
  RootedTree() = default;
  void finish();

  std::vector<VertexId> parent_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<std::int64_t> seg_len_;
  std::vector<std::int64_t> depth_;
  std::vector<VertexId> leaves_;
  std::vector<std::int64_t> orig_id_;
  std::int64_t actual_edges_ = 0;
  bool compressed_ = false;
  int homogeneous_q_ = 0;
  int homogeneous_depth_ = -1;
};

// Incremental construction; ids come out in insertion order, so parents
// always precede children and id order is a topological order.
class TreeBuilder {
 public:
  explicit TreeBuilder(std::int64_t root_chain_len = 1);
  VertexId add_child(VertexId parent, std::int64_t chain_len = 1);
  std::size_t size() const { return tree_.parent_.size(); }
  RootedTree build();

 private:
  RootedTree tree_;
  bool built_ = false;
};

}  // namespace treehardy

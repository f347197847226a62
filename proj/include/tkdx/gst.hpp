#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tkdx/rmq.hpp"
#include "tkdx/suffix.hpp"

namespace tkdx {

/// Preorder rank of a tree node. The root is 1; 0 is the dummy super-root that
/// acts as the root's parent.
using NodeId = std::uint32_t;
inline constexpr NodeId kDummyNode = 0;
inline constexpr NodeId kRootNode = 1;

/// Suffix range and locus of a pattern.
struct PatternLocus {
  std::size_t lo = 0;  // leaf ranks, 1-based, inclusive
  std::size_t hi = 0;
  NodeId locus = kDummyNode;
  std::size_t length = 0;

  std::size_t occurrences() const { return hi - lo + 1; }
};

/// Generalized suffix tree topology derived from LCP intervals.
///
/// Nodes are numbered in preorder. Leaf i (in left-to-right order)
/// is the suffix of SA rank i. All navigation is O(1) except `child_rank`.
class GstTopology {
 public:
  GstTopology() = default;

  static GstTopology build(const SuffixStructures& ss);

  std::size_t node_count() const { return parent_.size() - 1; }
  std::size_t leaf_count() const { return leaf_node_.size() - 1; }

  NodeId parent(NodeId u) const { return parent_[u]; }
  std::size_t depth(NodeId u) const { return depth_[u]; }
  std::size_t string_depth(NodeId u) const { return sdepth_[u]; }
  std::size_t lmost(NodeId u) const { return lmost_[u]; }
  std::size_t rmost(NodeId u) const { return rmost_[u]; }
  bool is_leaf(NodeId u) const { return u != kDummyNode && degree(u) == 0; }

  std::size_t degree(NodeId u) const { return child_offset_[u + 1] - child_offset_[u]; }
  /// q-th child (1-based) from the left.
  NodeId child(NodeId u, std::size_t q) const;
  std::span<const NodeId> children(NodeId u) const {
    return {children_.data() + child_offset_[u], degree(u)};
  }
  /// Number of siblings to the left of u.
  std::size_t child_rank(NodeId u) const;

  NodeId leaf(std::size_t rank) const { return leaf_node_[rank]; }
  /// Largest preorder rank in the subtree of u.
  NodeId subtree_end(NodeId u) const {
    return u == kDummyNode ? static_cast<NodeId>(node_count()) : leaf_node_[rmost_[u]];
  }
  /// True when a is u or a proper ancestor of u.
  bool is_ancestor(NodeId a, NodeId u) const { return a <= u && u <= subtree_end(a); }

  NodeId lca_leaves(std::size_t i, std::size_t j) const;
  NodeId lca(NodeId u, NodeId v) const;

  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static GstTopology load(Reader& r);

 private:
  void finish();

  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> sdepth_;
  std::vector<std::uint32_t> lmost_;
  std::vector<std::uint32_t> rmost_;
  std::vector<std::uint32_t> child_offset_;
  std::vector<NodeId> children_;
  std::vector<NodeId> leaf_node_;      // rank -> leaf preorder
  std::vector<NodeId> boundary_node_;  // p -> node having leaves p-1 and p in different children
  std::vector<std::uint64_t> lcp_;     // copy of the LCP values for the min-RMQ
  RmqStructure lcp_rmq_;
};

/// Binary search of P over the suffix array (O(p log N)). Returns nullopt when
/// P does not occur. Throws InputError if P is empty or contains the separator.
std::optional<PatternLocus> pattern_search(std::string_view text, char separator, const SuffixStructures& ss,
                                           const GstTopology& gst, std::string_view pattern);

}  // namespace tkdx

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tkdx/gst.hpp"

namespace tkdx {

/// Nodes whose depth is a multiple of pi, and the tree they induce (GST*).
///
/// The dummy super-root counts as marked and is star node 0; the root is star
/// node 1. Star ids follow preorder, so GST* preorder matches GST preorder.
/// zeta(w) = depth(w) mod pi is the distance from w to its lowest marked ancestor.
class MarkedTree {
 public:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  MarkedTree() = default;
  /// Throws std::invalid_argument for pi = 0.
  MarkedTree(const GstTopology& gst, std::uint32_t pi);

  std::uint32_t pi() const { return pi_; }
  std::size_t star_count() const { return from_star_.size(); }

  bool marked(NodeId u) const { return to_star_[u] != kNone; }
  std::uint32_t zeta(const GstTopology& gst, NodeId u) const {
    return u == kDummyNode ? 0 : static_cast<std::uint32_t>(gst.depth(u) % pi_);
  }
  /// Lowest marked ancestor, u itself when marked.
  NodeId lowest_marked(NodeId u) const { return lowest_marked_[u]; }

  std::uint32_t to_star(NodeId u) const { return to_star_[u]; }
  NodeId from_star(std::uint32_t s) const { return from_star_[s]; }
  std::uint32_t star_parent(std::uint32_t s) const { return star_parent_[s]; }
  std::span<const std::uint32_t> star_children(std::uint32_t s) const {
    return {star_children_.data() + child_offset_[s], child_offset_[s + 1] - child_offset_[s]};
  }
  /// 1-based position of s among its GST* siblings.
  std::size_t star_child_rank(std::uint32_t s) const;

  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static MarkedTree load(Reader& r, const GstTopology& gst);

 private:
  void derive(const GstTopology& gst);

  std::uint32_t pi_ = 1;
  std::vector<std::uint32_t> to_star_;       // GST preorder -> star id or kNone
  std::vector<NodeId> from_star_;            // star id -> GST preorder
  std::vector<std::uint32_t> star_parent_;   // kNone for the dummy
  std::vector<std::uint32_t> child_offset_;  // CSR over star ids
  std::vector<std::uint32_t> star_children_;
  std::vector<NodeId> lowest_marked_;
};

}  // namespace tkdx

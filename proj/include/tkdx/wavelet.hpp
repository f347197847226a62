#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tkdx/bits.hpp"

namespace tkdx {

/// Balanced wavelet tree over values in [1, sigma], one node per alphabet range.
///
/// Node 0 is the root. A node covering [lo, hi] with lo < hi stores bit i = 1
/// when the i-th element of its subsequence lies above mid = (lo + hi) / 2.
/// Positions are 1-based everywhere.
class WaveletTree {
 public:
  struct Node {
    std::uint32_t lo = 1, hi = 1;
    std::int32_t left = -1, right = -1, parent = -1;
    std::uint32_t length = 0;  // size of the node's subsequence
    BitVector bits;            // empty for leaves

    bool leaf() const { return lo == hi; }
    std::uint32_t mid() const { return lo + (hi - lo) / 2; }
  };

  WaveletTree() = default;
  /// Throws std::invalid_argument if a value lies outside [1, sigma].
  WaveletTree(std::span<const std::uint32_t> values, std::uint32_t sigma);

  std::size_t size() const { return nodes_.empty() ? 0 : nodes_[0].length; }
  std::uint32_t sigma() const { return sigma_; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_[id]; }
  std::size_t height() const { return height_; }

  std::uint32_t access(std::size_t i) const;
  /// Occurrences of c among positions 1..i.
  std::size_t rank(std::uint32_t c, std::size_t i) const;
  /// Position of the j-th c, or 0 if c occurs fewer than j times.
  std::size_t select(std::uint32_t c, std::size_t j) const;

  /// Number of positions among 1..i of `node`'s subsequence that go to the given child side.
  std::size_t child_rank(std::size_t node_id, bool right, std::size_t i) const {
    const auto& bv = nodes_[node_id].bits;
    return right ? bv.rank1(i) : bv.rank0(i);
  }
  /// Position in the parent's subsequence of position `pos` of `node_id`'s subsequence.
  std::size_t to_parent(std::size_t node_id, std::size_t pos) const;
  /// Position in the original sequence.
  std::size_t to_original(std::size_t node_id, std::size_t pos) const;

  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static WaveletTree load(Reader& r);

 private:
  std::int32_t build_node(std::vector<std::uint32_t>& values, std::uint32_t lo, std::uint32_t hi,
                          std::int32_t parent, std::size_t level);
  std::int32_t leaf_of(std::uint32_t c) const;

  std::vector<Node> nodes_;
  std::uint32_t sigma_ = 0;
  std::size_t height_ = 0;
};

}  // namespace tkdx

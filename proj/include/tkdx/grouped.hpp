#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "tkdx/counters.hpp"
#include "tkdx/linear_index.hpp"
#include "tkdx/result.hpp"
#include "tkdx/text_index.hpp"

namespace tkdx {

/// Ground truth: scan D_A[L..R], count per document, sort, keep k.
TopkResult brute_force_topk(const TextIndex& ti, std::string_view pattern, std::size_t k);
TopkResult brute_force_topk(const TextIndex& ti, const PatternLocus& loc, std::size_t k);

/// The k-th largest value (k >= 1) by deterministic median-of-medians selection.
/// Reorders `values`. Throws std::out_of_range unless 1 <= k <= values.size().
std::uint64_t select_kth_largest(std::vector<std::uint64_t>& values, std::size_t k);

/// Marked nodes of one q: LCAs of every group of g consecutive leaves, closed
/// under pairwise LCA, each with its exact top-q list.
struct GroupedLevel {
  std::size_t q = 1;
  std::size_t g = 1;
  std::vector<NodeId> marked;        // ascending preorder
  std::vector<std::uint32_t> offset;  // marked.size() + 1
  std::vector<DocId> doc;
  std::vector<std::uint32_t> tf;

  std::span<const DocId> docs_of(std::size_t m) const { return {doc.data() + offset[m], offset[m + 1] - offset[m]}; }
  std::span<const std::uint32_t> tfs_of(std::size_t m) const {
    return {tf.data() + offset[m], offset[m + 1] - offset[m]};
  }
};

/// Top-k index storing explicit top-q lists at sparse marked nodes for every
/// power of two q; the rest of a pattern's range is at most 2g fringe leaves.
class GroupedIndex {
 public:
  GroupedIndex() = default;
  /// Levels q = 1, 2, 4, ... up to the first power of two >= D.
  static GroupedIndex build(std::shared_ptr<const TextIndex> ti);

  /// max(1, ceil(q log2 D log2 log2 N)).
  static std::size_t group_size(std::size_t q, std::size_t docs, std::size_t n);

  TopkResult query(std::string_view pattern, std::size_t k, QueryCounters* counters = nullptr) const;
  /// Throws std::logic_error if the fringe exceeds 2g leaves.
  TopkResult query_locus(const PatternLocus& loc, std::size_t k, QueryCounters* counters = nullptr) const;

  const TextIndex& text() const { return *ti_; }
  const std::vector<GroupedLevel>& levels() const { return levels_; }
  /// Level answering k: q = next power of two >= k, capped at the top level.
  std::size_t level_for(std::size_t k) const;
  /// Highest marked descendant of v at level `lv` (v itself when marked), or kDummyNode.
  NodeId highest_marked(std::size_t lv, NodeId v) const;

  /// Per-level list bits: q entries of ceil(log2 D) + ceil(log2 (N+1)) bits at every marked node.
  std::uint64_t level_bits(std::size_t lv) const;
  SpaceReport space_report() const;

  void save(Writer& w) const;
  static GroupedIndex load(Reader& r, std::shared_ptr<const TextIndex> ti);

 private:
  std::shared_ptr<const TextIndex> ti_;
  std::vector<GroupedLevel> levels_;
};

}  // namespace tkdx

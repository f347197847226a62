#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tkdx/corpus.hpp"
#include "tkdx/counters.hpp"
#include "tkdx/rmq.hpp"
#include "tkdx/wavelet.hpp"

namespace tkdx {

/// Ranking key: higher term frequency first, then smaller document id. Keys of
/// distinct documents never tie.
inline std::uint64_t rank_key(std::uint64_t tf, DocId d) {
  return (tf << 32) | (0xFFFFFFFFull - static_cast<std::uint64_t>(d));
}
inline std::uint64_t key_tf(std::uint64_t key) { return key >> 32; }
inline DocId key_doc(std::uint64_t key) { return static_cast<DocId>(0xFFFFFFFFull - (key & 0xFFFFFFFFull)); }

/// Interval [lo, hi] (1-based, inclusive) of the array identified by `source`.
struct TaggedRange {
  std::uint32_t source = 0;
  std::size_t lo = 1, hi = 0;
};

struct RangeHit {
  std::uint32_t source = 0;
  std::size_t pos = 0;
  std::uint64_t value = 0;
};

/// The k largest elements of a union of disjoint ranges, in unsorted order.
///
/// `argbest(source, lo, hi)` returns the position of the largest value in the
/// range (a max-RMQ) and `value_at(source, pos)` its value; `tie_at(source, pos)`
/// orders equal values, smaller first. Elements of one range form a conceptual
/// max-heap where a node covering [lo, hi] with maximum at m has children
/// [lo, m-1] and [m+1, hi]; the t range roots hang below t-1 synthetic nodes of
/// infinite value. Nodes are expanded best first until the (t-1+k)-th largest
/// node X is known, then a preorder walk collects every node not below X.
/// Throws std::invalid_argument when two ranges of one source overlap.
template <class ArgBest, class ValueAt, class TieAt>
std::vector<RangeHit> multi_range_topk(std::span<const TaggedRange> ranges, std::size_t k, ArgBest&& argbest,
                                       ValueAt&& value_at, TieAt&& tie_at, QueryCounters* counters = nullptr) {
  std::vector<TaggedRange> rs;
  for (const auto& r : ranges) {
    if (r.lo <= r.hi) rs.push_back(r);
  }
  {
    std::vector<TaggedRange> sorted = rs;
    std::sort(sorted.begin(), sorted.end(), [](const TaggedRange& a, const TaggedRange& b) {
      return a.source != b.source ? a.source < b.source : a.lo < b.lo;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].source == sorted[i - 1].source && sorted[i].lo <= sorted[i - 1].hi) {
        throw std::invalid_argument("top-k ranges overlap");
      }
    }
  }
  std::vector<RangeHit> out;
  const std::size_t t = rs.size();
  if (k == 0 || t == 0) return out;

  struct Node {
    bool infinite = false;
    std::uint32_t source = 0;
    std::size_t lo = 0, hi = 0, pos = 0;
    std::uint64_t value = 0, tie = 0;
    std::size_t heap_index = 0;  // position in the synthetic heap, 0 for range-heap nodes
    std::int64_t child[2] = {-1, -1};
  };
  std::vector<Node> nodes;
  auto real_node = [&](std::uint32_t source, std::size_t lo, std::size_t hi) {
    Node nd;
    nd.source = source;
    nd.lo = lo;
    nd.hi = hi;
    nd.pos = argbest(source, lo, hi);
    nd.value = value_at(source, nd.pos);
    nd.tie = tie_at(source, nd.pos);
    if (counters) {
      ++counters->rmq_calls;
      ++counters->heap_nodes;
    }
    nodes.push_back(nd);
    return static_cast<std::int64_t>(nodes.size() - 1);
  };
  // Synthetic heap over indices 1..2t-1: 1..t-1 are infinite, t..2t-1 are the range roots.
  auto synthetic_node = [&](std::size_t idx) -> std::int64_t {
    if (idx >= t) {
      const auto& r = rs[idx - t];
      return real_node(r.source, r.lo, r.hi);
    }
    Node nd;
    nd.infinite = true;
    nd.heap_index = idx;
    if (counters) ++counters->heap_nodes;
    nodes.push_back(nd);
    return static_cast<std::int64_t>(nodes.size() - 1);
  };
  // true when a ranks strictly before b
  auto before = [&](std::int64_t a, std::int64_t b) {
    const Node& x = nodes[static_cast<std::size_t>(a)];
    const Node& y = nodes[static_cast<std::size_t>(b)];
    if (x.infinite != y.infinite) return x.infinite;
    if (x.infinite) return x.heap_index < y.heap_index;
    if (x.value != y.value) return x.value > y.value;
    if (x.tie != y.tie) return x.tie < y.tie;
    return x.source < y.source;
  };
  auto expand = [&](std::int64_t id) {
    Node nd = nodes[static_cast<std::size_t>(id)];
    std::int64_t c0 = -1, c1 = -1;
    if (nd.infinite) {
      c0 = synthetic_node(2 * nd.heap_index);
      c1 = synthetic_node(2 * nd.heap_index + 1);
    } else {
      if (nd.pos > nd.lo) c0 = real_node(nd.source, nd.lo, nd.pos - 1);
      if (nd.pos < nd.hi) c1 = real_node(nd.source, nd.pos + 1, nd.hi);
    }
    nodes[static_cast<std::size_t>(id)].child[0] = c0;
    nodes[static_cast<std::size_t>(id)].child[1] = c1;
  };

  nodes.reserve(4 * (t + k));
  std::int64_t root = t == 1 ? real_node(rs[0].source, rs[0].lo, rs[0].hi) : synthetic_node(1);
  auto worse = [&](std::int64_t a, std::int64_t b) { return before(b, a); };
  std::priority_queue<std::int64_t, std::vector<std::int64_t>, decltype(worse)> frontier(worse);
  frontier.push(root);
  const std::size_t target = t - 1 + k;
  std::size_t popped = 0;
  std::int64_t threshold = -1;
  while (!frontier.empty() && popped < target) {
    std::int64_t id = frontier.top();
    frontier.pop();
    ++popped;
    threshold = id;
    expand(id);
    for (auto c : nodes[static_cast<std::size_t>(id)].child) {
      if (c >= 0) frontier.push(c);
    }
  }
  const bool everything = popped < target;

  // Preorder harvest, pruning at nodes ranked after X.
  std::vector<std::int64_t> stack{root};
  while (!stack.empty()) {
    std::int64_t id = stack.back();
    stack.pop_back();
    if (!everything && before(threshold, id)) continue;
    const Node& nd = nodes[static_cast<std::size_t>(id)];
    if (!nd.infinite) out.push_back({nd.source, nd.pos, nd.value});
    for (int c = 1; c >= 0; --c) {
      if (nd.child[c] >= 0) stack.push_back(nd.child[c]);
    }
  }
  if (out.size() > k) {
    // only reachable when fewer than t-1 synthetic nodes were popped, i.e. never for k >= 1
    throw std::logic_error("range top-k harvested too many nodes");
  }
  return out;
}

/// multi_range_topk with ties ordered by position.
template <class ArgBest, class ValueAt>
std::vector<RangeHit> multi_range_topk(std::span<const TaggedRange> ranges, std::size_t k, ArgBest&& argbest,
                                       ValueAt&& value_at, QueryCounters* counters = nullptr) {
  return multi_range_topk(
      ranges, k, argbest, value_at, [](std::uint32_t, std::size_t pos) { return static_cast<std::uint64_t>(pos); },
      counters);
}

/// Wavelet tree over values in [1, sigma] with a max-RMQ over the scores of
/// every node's subsequence. Answers: the k highest-scoring positions i with
/// x1 <= i <= x2 and y1 <= A[i] <= y2. Scores are not stored; the caller
/// supplies them through an accessor at query time.
class WaveletTopk {
 public:
  struct Hit {
    std::size_t index = 0;
    std::uint64_t score = 0;
  };

  WaveletTopk() = default;
  /// Throws std::invalid_argument if a value lies outside [1, sigma] or the sizes differ.
  WaveletTopk(std::span<const std::uint32_t> values, std::uint32_t sigma, std::span<const std::uint64_t> scores);

  std::size_t size() const { return wt_.size(); }
  std::uint32_t sigma() const { return wt_.sigma(); }
  const WaveletTree& tree() const { return wt_; }

  /// Canonical nodes covering [y1, y2] together with the x-range translated into each node.
  std::vector<TaggedRange> decompose(std::size_t x1, std::size_t x2, std::uint32_t y1, std::uint32_t y2) const;

  template <class ScoreAt>
  std::vector<Hit> query(std::size_t x1, std::size_t x2, std::uint32_t y1, std::uint32_t y2, std::size_t k,
                         ScoreAt&& score_at, QueryCounters* counters = nullptr) const {
    std::vector<Hit> out;
    if (x1 > x2 || y1 > y2 || k == 0 || size() == 0) return out;
    auto parts = decompose(x1, x2, y1, y2);
    if (counters) counters->wavelet_nodes = std::max<std::uint64_t>(counters->wavelet_nodes, parts.size());
    auto original = [&](std::uint32_t node, std::size_t pos) { return wt_.to_original(node, pos); };
    auto argbest = [&](std::uint32_t node, std::size_t lo, std::size_t hi) {
      return node_rmq_[node].query(lo, hi, [&](std::size_t p) { return score_at(original(node, p)); });
    };
    auto value_at = [&](std::uint32_t node, std::size_t pos) { return score_at(original(node, pos)); };
    auto tie_at = [&](std::uint32_t node, std::size_t pos) { return static_cast<std::uint64_t>(original(node, pos)); };
    auto hits = multi_range_topk(std::span<const TaggedRange>(parts), k, argbest, value_at, tie_at, counters);
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back({original(h.source, h.pos), h.value});
    return out;
  }

  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static WaveletTopk load(Reader& r);

 private:
  WaveletTree wt_;
  std::vector<RmqStructure> node_rmq_;
};

/// Upper bound on canonical decomposition size: 2 ceil(log2 sigma), and 1 for sigma = 1.
std::size_t decomposition_bound(std::uint32_t sigma);

}  // namespace tkdx

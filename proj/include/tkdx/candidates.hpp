#pragma once

// Three-category candidate collection shared by the linear and encoded indexes.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tkdx/counters.hpp"
#include "tkdx/gst.hpp"
#include "tkdx/marked.hpp"
#include "tkdx/topk.hpp"

namespace tkdx::detail {

/// Top-k ranking keys among the I-entries whose origin lies in the subtree of
/// `locus` and whose holder is a proper ancestor of it. Let u be the lowest
/// marked ancestor of locus and z = zeta(locus):
///   (i)   near entries at the z nodes parent(locus) .. u;
///   (ii)  far entries at u whose holder has zeta < z (only when z > 0);
///   (iii) far entries at every marked proper ancestor of u, up to the dummy.
/// When locus is marked, u = locus and only (iii) applies.
///
/// Store provides, over global 1-based entry positions of structure r (a GST
/// preorder for near entries, a star id for far entries):
///   near_slice(w, lo, hi) / far_slice(star, lo, hi) -> pair [a, b] of entries with origin in [lo, hi]
///   near_argmax(r, a, b), near_key(r, p), far_argmax(r, a, b), far_key(r, p)
///   far_constrained(star, a, b, z, k, counters) -> keys of far entries in [a, b] with holder zeta < z
template <class Store>
std::vector<std::uint64_t> collect_candidates(const GstTopology& gst, const MarkedTree& mt, NodeId locus,
                                              std::size_t k, const Store& store, QueryCounters& counters) {
  std::vector<std::uint64_t> keys;
  if (k == 0) return keys;
  const NodeId lo = locus, hi = gst.subtree_end(locus);
  const std::uint32_t z = mt.zeta(gst, locus);
  const NodeId u = mt.lowest_marked(locus);

  auto take = [&](const std::vector<TaggedRange>& ranges, bool near) {
    auto argbest = [&](std::uint32_t r, std::size_t a, std::size_t b) {
      return near ? store.near_argmax(r, a, b) : store.far_argmax(r, a, b);
    };
    auto value = [&](std::uint32_t r, std::size_t p) { return near ? store.near_key(r, p) : store.far_key(r, p); };
    auto hits = multi_range_topk(std::span<const TaggedRange>(ranges), k, argbest, value, &counters);
    for (const auto& h : hits) keys.push_back(h.value);
  };

  if (z > 0) {
    std::vector<TaggedRange> near;
    for (NodeId w = gst.parent(locus);; w = gst.parent(w)) {
      auto [a, b] = store.near_slice(w, lo, hi);
      ++counters.boundary_searches;
      if (a <= b) near.push_back({w, a, b});
      if (w == u) break;
    }
    take(near, true);
    const std::uint32_t su = mt.to_star(u);
    auto [a, b] = store.far_slice(su, lo, hi);
    ++counters.boundary_searches;
    if (a <= b) {
      auto more = store.far_constrained(su, a, b, z, k, counters);
      keys.insert(keys.end(), more.begin(), more.end());
    }
  }
  std::vector<TaggedRange> far;
  for (std::uint32_t s = mt.star_parent(mt.to_star(u)); s != MarkedTree::kNone; s = mt.star_parent(s)) {
    auto [a, b] = store.far_slice(s, lo, hi);
    ++counters.boundary_searches;
    if (a <= b) far.push_back({s, a, b});
  }
  take(far, false);
  return keys;
}

}  // namespace tkdx::detail

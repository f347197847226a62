#include "tkdx/marked.hpp"

#include <algorithm>
#include <stdexcept>

namespace tkdx {

MarkedTree::MarkedTree(const GstTopology& gst, std::uint32_t pi) : pi_(pi) {
  if (pi == 0) throw std::invalid_argument("pi must be positive");
  derive(gst);
}

void MarkedTree::derive(const GstTopology& gst) {
  const std::size_t m = gst.node_count();
  to_star_.assign(m + 1, kNone);
  from_star_.clear();
  lowest_marked_.assign(m + 1, kDummyNode);
  to_star_[kDummyNode] = 0;
  from_star_.push_back(kDummyNode);
  for (NodeId u = 1; u <= m; ++u) {
    if (gst.depth(u) % pi_ == 0) {
      to_star_[u] = static_cast<std::uint32_t>(from_star_.size());
      from_star_.push_back(u);
      lowest_marked_[u] = u;
    } else {
      lowest_marked_[u] = lowest_marked_[gst.parent(u)];
    }
  }
  const std::size_t s = from_star_.size();
  star_parent_.assign(s, kNone);
  std::vector<std::uint32_t> degree(s + 1, 0);
  for (std::uint32_t x = 1; x < s; ++x) {
    NodeId u = from_star_[x];
    star_parent_[x] = to_star_[lowest_marked_[gst.parent(u)]];
    ++degree[star_parent_[x]];
  }
  child_offset_.assign(s + 1, 0);
  for (std::size_t x = 0; x < s; ++x) child_offset_[x + 1] = child_offset_[x] + degree[x];
  star_children_.assign(child_offset_.back(), 0);
  std::vector<std::uint32_t> fill(child_offset_.begin(), child_offset_.end() - 1);
  for (std::uint32_t x = 1; x < s; ++x) star_children_[fill[star_parent_[x]]++] = x;
}

std::size_t MarkedTree::star_child_rank(std::uint32_t s) const {
  auto sib = star_children(star_parent_[s]);
  return static_cast<std::size_t>(std::lower_bound(sib.begin(), sib.end(), s) - sib.begin()) + 1;
}

std::uint64_t MarkedTree::size_in_bits() const {
  return 32ull * (to_star_.size() + from_star_.size() + star_parent_.size() + child_offset_.size() +
                  star_children_.size() + lowest_marked_.size());
}

void MarkedTree::save(Writer& w) const {
  auto at = w.begin_section(Tag::kMarkedTree);
  w.put<std::uint32_t>(pi_);
  w.end_section(at);
}

MarkedTree MarkedTree::load(Reader& r, const GstTopology& gst) {
  Reader s = r.section(Tag::kMarkedTree);
  auto pi = s.get<std::uint32_t>();
  if (pi == 0) throw FormatError("pi must be positive");
  return MarkedTree(gst, pi);
}

}  // namespace tkdx

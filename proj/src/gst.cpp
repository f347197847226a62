#include "tkdx/gst.hpp"

#include <algorithm>
#include <stdexcept>

#include "tkdx/corpus.hpp"

namespace tkdx {

namespace {

struct Interval {
  std::uint32_t lb, rb, sdepth;
  bool leaf;
};

}  // namespace

GstTopology GstTopology::build(const SuffixStructures& ss) {
  const std::size_t n = ss.size();
  if (n == 0) throw std::invalid_argument("suffix tree of an empty text");
  const auto& lcp = ss.lcp;

  std::vector<Interval> items;
  items.reserve(2 * n + 1);
  struct Open {
    std::uint32_t lcp, lb;
  };
  std::vector<Open> stack{{0, 1}};
  for (std::uint32_t i = 2; i <= n; ++i) {
    std::uint32_t lb = i - 1;
    std::uint32_t cur = lcp[i];
    while (cur < stack.back().lcp) {
      Open top = stack.back();
      stack.pop_back();
      items.push_back({top.lb, i - 1, top.lcp, false});
      lb = top.lb;
    }
    if (cur > stack.back().lcp) stack.push_back({cur, lb});
  }
  while (!stack.empty()) {
    items.push_back({stack.back().lb, static_cast<std::uint32_t>(n), stack.back().lcp, false});
    stack.pop_back();
  }
  for (std::uint32_t i = 1; i <= n; ++i) {
    items.push_back({i, i, static_cast<std::uint32_t>(n - ss.sa[i] + 1), true});
  }
  std::sort(items.begin(), items.end(), [](const Interval& a, const Interval& b) {
    if (a.lb != b.lb) return a.lb < b.lb;
    if (a.rb != b.rb) return a.rb > b.rb;
    if (a.leaf != b.leaf) return !a.leaf;
    return a.sdepth < b.sdepth;
  });

  GstTopology g;
  const std::size_t nodes = items.size();
  g.parent_.assign(nodes + 1, kDummyNode);
  g.depth_.assign(nodes + 1, 0);
  g.sdepth_.assign(nodes + 1, 0);
  g.lmost_.assign(nodes + 1, 0);
  g.rmost_.assign(nodes + 1, 0);
  g.leaf_node_.assign(n + 1, kDummyNode);
  g.lmost_[kDummyNode] = 1;
  g.rmost_[kDummyNode] = static_cast<std::uint32_t>(n);

  std::vector<std::uint32_t> degree(nodes + 2, 0);
  std::vector<NodeId> open;
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto& it = items[k];
    auto id = static_cast<NodeId>(k + 1);
    while (!open.empty() && g.rmost_[open.back()] < it.lb) open.pop_back();
    NodeId par = open.empty() ? kDummyNode : open.back();
    g.parent_[id] = par;
    g.depth_[id] = par == kDummyNode ? 0 : g.depth_[par] + 1;
    g.sdepth_[id] = it.sdepth;
    g.lmost_[id] = it.lb;
    g.rmost_[id] = it.rb;
    ++degree[par];
    if (it.leaf) {
      g.leaf_node_[it.lb] = id;
    } else {
      open.push_back(id);
    }
  }
  if (degree[kDummyNode] != 1 || g.lmost_[kRootNode] != 1 || g.rmost_[kRootNode] != n) {
    throw std::logic_error("suffix tree construction produced several roots");
  }

  g.child_offset_.assign(nodes + 2, 0);
  for (std::size_t u = 0; u <= nodes; ++u) g.child_offset_[u + 1] = g.child_offset_[u] + degree[u];
  g.children_.assign(g.child_offset_.back(), 0);
  std::vector<std::uint32_t> fill(g.child_offset_.begin(), g.child_offset_.end() - 1);
  for (NodeId id = 1; id <= nodes; ++id) g.children_[fill[g.parent_[id]]++] = id;

  g.lcp_.assign(lcp.begin(), lcp.end());
  g.finish();
  return g;
}

void GstTopology::finish() {
  const std::size_t n = leaf_count();
  boundary_node_.assign(n + 1, kDummyNode);
  for (NodeId u = 1; u <= node_count(); ++u) {
    auto ch = children(u);
    for (std::size_t q = 1; q < ch.size(); ++q) boundary_node_[lmost_[ch[q]]] = u;
  }
  std::vector<std::uint64_t> vals(lcp_.begin() + 1, lcp_.end());
  lcp_rmq_ = RmqStructure(vals, RmqMode::kMin);
}

NodeId GstTopology::child(NodeId u, std::size_t q) const {
  if (q < 1 || q > degree(u)) throw std::out_of_range("child index out of range");
  return children_[child_offset_[u] + q - 1];
}

std::size_t GstTopology::child_rank(NodeId u) const {
  if (u == kRootNode || u == kDummyNode) return 0;
  auto sib = children(parent_[u]);
  return static_cast<std::size_t>(std::lower_bound(sib.begin(), sib.end(), u) - sib.begin());
}

NodeId GstTopology::lca_leaves(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j) return leaf_node_[i];
  // lcp_rmq_ indexes lcp_[1..n]; position p there is boundary (p) between leaves p-1 and p
  std::size_t p = lcp_rmq_.query(i + 1, j, [this](std::size_t x) { return lcp_[x]; });
  return boundary_node_[p];
}

NodeId GstTopology::lca(NodeId u, NodeId v) const {
  if (is_ancestor(u, v)) return u;
  if (is_ancestor(v, u)) return v;
  return lca_leaves(lmost_[u], lmost_[v]);
}

std::uint64_t GstTopology::size_in_bits() const {
  std::uint64_t words = parent_.size() + depth_.size() + sdepth_.size() + lmost_.size() + rmost_.size() +
                        child_offset_.size() + children_.size() + leaf_node_.size() + boundary_node_.size() +
                        lcp_.size();
  return 32ull * words + lcp_rmq_.size_in_bits();
}

void GstTopology::save(Writer& w) const {
  auto at = w.begin_section(Tag::kGst);
  w.put_vector(parent_);
  w.put_vector(depth_);
  w.put_vector(sdepth_);
  w.put_vector(lmost_);
  w.put_vector(rmost_);
  w.put_vector(child_offset_);
  w.put_vector(children_);
  w.put_vector(leaf_node_);
  w.put_vector(lcp_);
  w.end_section(at);
}

GstTopology GstTopology::load(Reader& r) {
  Reader s = r.section(Tag::kGst);
  GstTopology g;
  g.parent_ = s.get_vector<NodeId>();
  g.depth_ = s.get_vector<std::uint32_t>();
  g.sdepth_ = s.get_vector<std::uint32_t>();
  g.lmost_ = s.get_vector<std::uint32_t>();
  g.rmost_ = s.get_vector<std::uint32_t>();
  g.child_offset_ = s.get_vector<std::uint32_t>();
  g.children_ = s.get_vector<NodeId>();
  g.leaf_node_ = s.get_vector<NodeId>();
  g.lcp_ = s.get_vector<std::uint64_t>();
  const std::size_t m = g.parent_.size();
  if (m < 2 || g.depth_.size() != m || g.sdepth_.size() != m || g.lmost_.size() != m || g.rmost_.size() != m ||
      g.child_offset_.size() != m + 1 || g.children_.size() != g.child_offset_.back() ||
      g.lcp_.size() != g.leaf_node_.size()) {
    throw FormatError("suffix tree payload shape mismatch");
  }
  g.finish();
  return g;
}

namespace {

inline unsigned order_of(char c, char separator) {
  return c == separator ? 0u : 1u + static_cast<unsigned char>(c);
}

}  // namespace

std::optional<PatternLocus> pattern_search(std::string_view text, char separator, const SuffixStructures& ss,
                                           const GstTopology& gst, std::string_view pattern) {
  if (pattern.empty()) throw InputError("empty pattern");
  if (pattern.find(separator) != std::string_view::npos) throw InputError("pattern contains the separator byte");
  const std::size_t n = text.size();
  // <0 if suffix < pattern (on its first |P| symbols), 0 if pattern is a prefix, >0 otherwise
  auto cmp = [&](std::size_t rank) -> int {
    std::size_t pos = ss.sa[rank];
    for (std::size_t k = 0; k < pattern.size(); ++k) {
      if (pos + k > n) return -1;
      unsigned a = order_of(text[pos + k - 1], separator), b = order_of(pattern[k], separator);
      if (a != b) return a < b ? -1 : 1;
    }
    return 0;
  };
  std::size_t lo = 1, hi = n + 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (cmp(mid) < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const std::size_t first = lo;
  hi = n + 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (cmp(mid) <= 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == first) return std::nullopt;
  PatternLocus loc;
  loc.lo = first;
  loc.hi = lo - 1;
  loc.locus = gst.lca_leaves(loc.lo, loc.hi);
  loc.length = pattern.size();
  return loc;
}

}  // namespace tkdx

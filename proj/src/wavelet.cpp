#include "tkdx/wavelet.hpp"

#include <stdexcept>

namespace tkdx {

WaveletTree::WaveletTree(std::span<const std::uint32_t> values, std::uint32_t sigma) : sigma_(sigma) {
  if (sigma < 1) throw std::invalid_argument("wavelet alphabet must be non-empty");
  std::vector<std::uint32_t> v(values.begin(), values.end());
  for (auto x : v) {
    if (x < 1 || x > sigma) throw std::invalid_argument("wavelet value outside [1, sigma]");
  }
  nodes_.reserve(2 * sigma);
  build_node(v, 1, sigma, -1, 0);
}

std::int32_t WaveletTree::build_node(std::vector<std::uint32_t>& values, std::uint32_t lo, std::uint32_t hi,
                                     std::int32_t parent, std::size_t level) {
  auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  nodes_[id].parent = parent;
  nodes_[id].length = static_cast<std::uint32_t>(values.size());
  height_ = std::max(height_, level);
  if (lo == hi) return id;
  std::uint32_t mid = lo + (hi - lo) / 2;
  BitVector bits;
  std::vector<std::uint32_t> left, right;
  for (auto x : values) {
    bool r = x > mid;
    bits.push_back(r);
    (r ? right : left).push_back(x);
  }
  bits.build_index();
  nodes_[id].bits = std::move(bits);
  values.clear();
  values.shrink_to_fit();
  std::int32_t l = build_node(left, lo, mid, id, level + 1);
  nodes_[id].left = l;
  std::int32_t r = build_node(right, mid + 1, hi, id, level + 1);
  nodes_[id].right = r;
  return id;
}

std::uint32_t WaveletTree::access(std::size_t i) const {
  if (i < 1 || i > size()) throw std::out_of_range("wavelet access out of range");
  std::size_t id = 0;
  while (!nodes_[id].leaf()) {
    const auto& nd = nodes_[id];
    bool r = nd.bits.get(i);
    i = r ? nd.bits.rank1(i) : nd.bits.rank0(i);
    id = static_cast<std::size_t>(r ? nd.right : nd.left);
  }
  return nodes_[id].lo;
}

std::size_t WaveletTree::rank(std::uint32_t c, std::size_t i) const {
  if (i > size()) throw std::out_of_range("wavelet rank out of range");
  if (c < 1 || c > sigma_) return 0;
  std::size_t id = 0;
  while (!nodes_[id].leaf() && i > 0) {
    const auto& nd = nodes_[id];
    bool r = c > nd.mid();
    i = r ? nd.bits.rank1(i) : nd.bits.rank0(i);
    id = static_cast<std::size_t>(r ? nd.right : nd.left);
  }
  return i;
}

std::int32_t WaveletTree::leaf_of(std::uint32_t c) const {
  std::int32_t id = 0;
  while (!nodes_[id].leaf()) id = c > nodes_[id].mid() ? nodes_[id].right : nodes_[id].left;
  return id;
}

std::size_t WaveletTree::select(std::uint32_t c, std::size_t j) const {
  if (c < 1 || c > sigma_ || j < 1) return 0;
  std::int32_t id = leaf_of(c);
  if (j > nodes_[id].length) return 0;
  return to_original(static_cast<std::size_t>(id), j);
}

std::size_t WaveletTree::to_parent(std::size_t node_id, std::size_t pos) const {
  const auto& nd = nodes_[node_id];
  const auto& par = nodes_[static_cast<std::size_t>(nd.parent)];
  bool r = par.right == static_cast<std::int32_t>(node_id);
  return r ? par.bits.select1(pos) : par.bits.select0(pos);
}

std::size_t WaveletTree::to_original(std::size_t node_id, std::size_t pos) const {
  while (nodes_[node_id].parent >= 0) {
    pos = to_parent(node_id, pos);
    node_id = static_cast<std::size_t>(nodes_[node_id].parent);
  }
  return pos;
}

std::uint64_t WaveletTree::size_in_bits() const {
  std::uint64_t bits = 0;
  for (const auto& nd : nodes_) bits += nd.bits.size_in_bits() + 4 * 32;
  return bits;
}

void WaveletTree::save(Writer& w) const {
  auto at = w.begin_section(Tag::kWaveletTree);
  w.put<std::uint32_t>(sigma_);
  w.put<std::uint64_t>(height_);
  w.put<std::uint64_t>(nodes_.size());
  for (const auto& nd : nodes_) {
    w.put(nd.lo);
    w.put(nd.hi);
    w.put(nd.left);
    w.put(nd.right);
    w.put(nd.parent);
    w.put(nd.length);
    nd.bits.save(w);
  }
  w.end_section(at);
}

WaveletTree WaveletTree::load(Reader& r) {
  Reader s = r.section(Tag::kWaveletTree);
  WaveletTree wt;
  wt.sigma_ = s.get<std::uint32_t>();
  wt.height_ = s.get<std::uint64_t>();
  auto n = s.get<std::uint64_t>();
  if (n > s.remaining()) throw FormatError("wavelet node count exceeds payload");
  wt.nodes_.resize(n);
  for (auto& nd : wt.nodes_) {
    nd.lo = s.get<std::uint32_t>();
    nd.hi = s.get<std::uint32_t>();
    nd.left = s.get<std::int32_t>();
    nd.right = s.get<std::int32_t>();
    nd.parent = s.get<std::int32_t>();
    nd.length = s.get<std::uint32_t>();
    nd.bits = BitVector::load(s);
    auto lim = static_cast<std::int32_t>(n);
    if (nd.left >= lim || nd.right >= lim || nd.parent >= lim) throw FormatError("wavelet node link out of range");
  }
  if (n == 0) throw FormatError("empty wavelet tree");
  return wt;
}

}  // namespace tkdx

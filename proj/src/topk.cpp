#include "tkdx/topk.hpp"

namespace tkdx {

WaveletTopk::WaveletTopk(std::span<const std::uint32_t> values, std::uint32_t sigma,
                         std::span<const std::uint64_t> scores)
    : wt_(values, sigma) {
  if (values.size() != scores.size()) throw std::invalid_argument("wavelet top-k needs one score per value");
  node_rmq_.resize(wt_.node_count());
  // scores of each node's subsequence, produced by stable partitioning from the root
  std::vector<std::vector<std::uint64_t>> seq(wt_.node_count());
  seq[0].assign(scores.begin(), scores.end());
  for (std::size_t id = 0; id < wt_.node_count(); ++id) {
    const auto& nd = wt_.node(id);
    node_rmq_[id] = RmqStructure(seq[id], RmqMode::kMax);
    if (!nd.leaf()) {
      auto& l = seq[static_cast<std::size_t>(nd.left)];
      auto& r = seq[static_cast<std::size_t>(nd.right)];
      for (std::size_t i = 1; i <= seq[id].size(); ++i) (nd.bits.get(i) ? r : l).push_back(seq[id][i - 1]);
    }
    seq[id].clear();
    seq[id].shrink_to_fit();
  }
}

std::vector<TaggedRange> WaveletTopk::decompose(std::size_t x1, std::size_t x2, std::uint32_t y1,
                                                std::uint32_t y2) const {
  std::vector<TaggedRange> parts;
  if (y1 > y2 || wt_.node_count() == 0) return parts;
  struct Frame {
    std::size_t node, lo, hi;
  };
  // children are visited left first so parts come out in value order
  std::vector<Frame> stack{{0, x1, x2}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const auto& nd = wt_.node(f.node);
    if (nd.hi < y1 || nd.lo > y2) continue;
    if (y1 <= nd.lo && nd.hi <= y2) {
      parts.push_back({static_cast<std::uint32_t>(f.node), f.lo, f.hi});
      continue;
    }
    // lo = 1 + rank(lo - 1), hi = rank(hi) on each side; empty x-ranges stay empty
    std::size_t before = f.lo > 0 ? f.lo - 1 : 0;
    std::size_t upto = f.hi >= f.lo ? f.hi : before;
    Frame right{static_cast<std::size_t>(nd.right), nd.bits.rank1(before) + 1, nd.bits.rank1(upto)};
    Frame left{static_cast<std::size_t>(nd.left), nd.bits.rank0(before) + 1, nd.bits.rank0(upto)};
    stack.push_back(right);
    stack.push_back(left);
  }
  return parts;
}

std::uint64_t WaveletTopk::size_in_bits() const {
  std::uint64_t bits = wt_.size_in_bits();
  for (const auto& r : node_rmq_) bits += r.size_in_bits();
  return bits;
}

void WaveletTopk::save(Writer& w) const {
  auto at = w.begin_section(Tag::kWaveletTopk);
  wt_.save(w);
  w.put<std::uint64_t>(node_rmq_.size());
  for (const auto& r : node_rmq_) r.save(w);
  w.end_section(at);
}

WaveletTopk WaveletTopk::load(Reader& r) {
  Reader s = r.section(Tag::kWaveletTopk);
  WaveletTopk wk;
  wk.wt_ = WaveletTree::load(s);
  auto n = s.get<std::uint64_t>();
  if (n != wk.wt_.node_count()) throw FormatError("wavelet top-k RMQ count mismatch");
  wk.node_rmq_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    wk.node_rmq_.push_back(RmqStructure::load(s));
    if (wk.node_rmq_.back().size() != wk.wt_.node(i).length) throw FormatError("wavelet top-k RMQ length mismatch");
  }
  return wk;
}

std::size_t decomposition_bound(std::uint32_t sigma) {
  return sigma <= 1 ? 1 : 2 * static_cast<std::size_t>(ceil_log2(sigma));
}

}  // namespace tkdx

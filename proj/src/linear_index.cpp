#include "tkdx/linear_index.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "tkdx/candidates.hpp"

namespace tkdx {

std::vector<IEntry> build_i_entries(const TextIndex& ti, const ScoreFn& score) {
  const auto& g = ti.gst();
  const std::size_t docs = ti.doc_count(), n = ti.size();
  auto ids = ti.doc_ids();
  std::vector<std::uint32_t> off(docs + 2, 0), occ(n);
  for (std::size_t i = 1; i <= n; ++i) ++off[ids[i] + 1];
  for (std::size_t d = 1; d <= docs + 1; ++d) off[d] += off[d - 1];
  {
    std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
    for (std::size_t i = 1; i <= n; ++i) occ[fill[ids[i]]++] = static_cast<std::uint32_t>(i);
  }
  std::vector<IEntry> out;
  out.reserve(2 * n);
  std::vector<NodeId> nodes, stack;
  for (DocId d = 1; d <= docs; ++d) {
    auto b = occ.begin() + off[d], e = occ.begin() + off[d + 1];
    // separator suffixes occupy leaf ranks 1..D and carry no entries
    auto first = std::upper_bound(b, e, static_cast<std::uint32_t>(docs));
    nodes.clear();
    for (auto it = first; it != e; ++it) {
      nodes.push_back(g.leaf(*it));
      if (it + 1 != e) nodes.push_back(g.lca_leaves(*it, *(it + 1)));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    stack.clear();
    for (NodeId v : nodes) {
      while (!stack.empty() && !g.is_ancestor(stack.back(), v)) stack.pop_back();
      NodeId parent = stack.empty() ? kDummyNode : stack.back();
      stack.push_back(v);
      std::uint64_t s;
      if (score) {
        s = score(v, d);
      } else {
        auto lo = std::lower_bound(b, e, static_cast<std::uint32_t>(g.lmost(v)));
        auto hi = std::upper_bound(lo, e, static_cast<std::uint32_t>(g.rmost(v)));
        s = static_cast<std::uint64_t>(hi - lo);
      }
      if (s > 0xFFFFFFFFull) throw std::out_of_range("score exceeds 32 bits");
      out.push_back({d, v, parent, s});
    }
  }
  std::sort(out.begin(), out.end(), [](const IEntry& a, const IEntry& b) {
    if (a.holder != b.holder) return a.holder < b.holder;
    if (a.origin != b.origin) return a.origin < b.origin;
    return a.doc < b.doc;
  });
  return out;
}

void EntryTable::save(Writer& w) const {
  auto at = w.begin_section(Tag::kEntryTable);
  w.put_vector(doc);
  w.put_vector(origin);
  w.put_vector(key);
  w.put_vector(zeta);
  w.put_vector(offset);
  w.end_section(at);
}

EntryTable EntryTable::load(Reader& r) {
  Reader s = r.section(Tag::kEntryTable);
  EntryTable t;
  t.doc = s.get_vector<DocId>();
  t.origin = s.get_vector<NodeId>();
  t.key = s.get_vector<std::uint64_t>();
  t.zeta = s.get_vector<std::uint32_t>();
  t.offset = s.get_vector<std::uint32_t>();
  const std::size_t n = t.doc.size();
  if (t.origin.size() != n || t.key.size() != n || (!t.zeta.empty() && t.zeta.size() != n) || t.offset.empty() ||
      t.offset.front() != 0 || t.offset.back() != n) {
    throw FormatError("entry table shape mismatch");
  }
  for (std::size_t r2 = 1; r2 < t.offset.size(); ++r2) {
    if (t.offset[r2] < t.offset[r2 - 1]) throw FormatError("entry table offsets decrease");
  }
  return t;
}

LinearIndex LinearIndex::build(std::shared_ptr<const TextIndex> ti, Options options) {
  LinearIndex li;
  li.ti_ = std::move(ti);
  li.sample_rate_ = options.sample_rate;
  const auto& g = li.ti_->gst();
  li.mt_ = MarkedTree(g, options.pi);
  const std::uint32_t pi = options.pi;
  auto entries = build_i_entries(*li.ti_, options.score);

  struct Placed {
    std::uint32_t run;
    NodeId origin;
    DocId doc;
    std::uint64_t key;
    std::uint32_t zeta;
  };
  std::vector<Placed> near, far;
  for (const auto& e : entries) {
    std::uint64_t key = rank_key(e.score, e.doc);
    bool is_far = e.holder == kDummyNode || g.depth(e.origin) / pi > g.depth(e.holder) / pi;
    if (is_far) {
      far.push_back({li.mt_.to_star(li.mt_.lowest_marked(e.holder)), e.origin, e.doc, key, li.mt_.zeta(g, e.holder)});
    } else {
      near.push_back({e.holder, e.origin, e.doc, key, 0});
    }
  }
  entries.clear();
  entries.shrink_to_fit();
  auto fill = [](std::vector<Placed>& v, std::size_t runs, EntryTable& t, bool with_zeta) {
    std::sort(v.begin(), v.end(), [](const Placed& a, const Placed& b) {
      if (a.run != b.run) return a.run < b.run;
      if (a.origin != b.origin) return a.origin < b.origin;
      return a.doc < b.doc;
    });
    t.offset.assign(runs + 1, 0);
    for (const auto& p : v) {
      ++t.offset[p.run + 1];
      t.doc.push_back(p.doc);
      t.origin.push_back(p.origin);
      t.key.push_back(p.key);
      if (with_zeta) t.zeta.push_back(p.zeta);
    }
    for (std::size_t r = 1; r <= runs; ++r) t.offset[r] += t.offset[r - 1];
  };
  fill(near, g.node_count() + 1, li.near_, false);
  fill(far, li.mt_.star_count(), li.far_, true);
  li.derive();
  return li;
}

void LinearIndex::derive() {
  near_rmq_ = RmqStructure(near_.key, RmqMode::kMax);
  far_rmq_ = RmqStructure(far_.key, RmqMode::kMax);
  std::vector<std::uint64_t> keys(near_.origin.begin(), near_.origin.end());
  near_pred_ = SampledPredecessor(keys, near_.offset, sample_rate_);
  keys.assign(far_.origin.begin(), far_.origin.end());
  far_pred_ = SampledPredecessor(keys, far_.offset, sample_rate_);
  std::vector<std::uint32_t> y(far_.zeta.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = far_.zeta[i] + 1;
  far_wavelet_ = WaveletTopk(y, mt_.pi(), far_.key);
}

struct LinearStore {
  const LinearIndex& li;

  static std::pair<std::size_t, std::size_t> slice(const EntryTable& t, const SampledPredecessor& pred,
                                                   std::size_t run, NodeId lo, NodeId hi) {
    auto key_at = [&](std::size_t g) { return static_cast<std::uint64_t>(t.origin[g]); };
    std::size_t first = t.offset[run];
    std::size_t a = pred.count_le(run, lo - 1, key_at);
    std::size_t b = pred.count_le(run, hi, key_at);
    return {first + a + 1, first + b};
  }
  std::pair<std::size_t, std::size_t> near_slice(NodeId w, NodeId lo, NodeId hi) const {
    return slice(li.near_, li.near_pred_, w, lo, hi);
  }
  std::pair<std::size_t, std::size_t> far_slice(std::uint32_t s, NodeId lo, NodeId hi) const {
    return slice(li.far_, li.far_pred_, s, lo, hi);
  }
  std::size_t near_argmax(std::uint32_t, std::size_t a, std::size_t b) const {
    return li.near_rmq_.query(a, b, std::span<const std::uint64_t>(li.near_.key));
  }
  std::size_t far_argmax(std::uint32_t, std::size_t a, std::size_t b) const {
    return li.far_rmq_.query(a, b, std::span<const std::uint64_t>(li.far_.key));
  }
  std::uint64_t near_key(std::uint32_t, std::size_t p) const { return li.near_.key[p - 1]; }
  std::uint64_t far_key(std::uint32_t, std::size_t p) const { return li.far_.key[p - 1]; }
  std::vector<std::uint64_t> far_constrained(std::uint32_t, std::size_t a, std::size_t b, std::uint32_t z, std::size_t k,
                                             QueryCounters& c) const {
    auto hits = li.far_wavelet_.query(a, b, 1, z, k, [&](std::size_t i) { return li.far_.key[i - 1]; }, &c);
    std::vector<std::uint64_t> keys;
    for (const auto& h : hits) keys.push_back(h.score);
    return keys;
  }
};

TopkResult rows_from_keys(std::vector<std::uint64_t> keys, std::size_t k) {
  std::sort(keys.begin(), keys.end(), std::greater<>());
  std::unordered_set<DocId> seen;
  TopkResult rows;
  for (auto key : keys) {
    if (!seen.insert(key_doc(key)).second) {
      throw std::logic_error("document " + std::to_string(key_doc(key)) + " reported by two I-entries");
    }
    if (rows.size() < k) rows.push_back({key_doc(key), static_cast<std::size_t>(key_tf(key))});
  }
  return rows;
}

TopkResult LinearIndex::query(std::string_view pattern, std::size_t k, QueryCounters* counters) const {
  if (k == 0) return {};
  auto loc = ti_->search(pattern);
  if (!loc) return {};
  return query_locus(*loc, k, counters);
}

TopkResult LinearIndex::query_locus(const PatternLocus& loc, std::size_t k, QueryCounters* counters) const {
  QueryCounters local;
  QueryCounters& c = counters ? *counters : local;
  LinearStore store{*this};
  auto keys = detail::collect_candidates(ti_->gst(), mt_, loc.locus, k, store, c);
  return rows_from_keys(std::move(keys), k);
}

SpaceReport LinearIndex::space_report() const {
  auto table_bits = [](const EntryTable& t) {
    return 32ull * (t.doc.size() + t.origin.size() + t.zeta.size() + t.offset.size()) + 64ull * t.key.size();
  };
  return {
      {"linear.near_entries", table_bits(near_)},
      {"linear.far_entries", table_bits(far_)},
      {"linear.near_rmq", near_rmq_.size_in_bits()},
      {"linear.far_rmq", far_rmq_.size_in_bits()},
      {"linear.near_predecessor", near_pred_.size_in_bits()},
      {"linear.far_predecessor", far_pred_.size_in_bits()},
      {"linear.far_wavelet", far_wavelet_.size_in_bits()},
      {"linear.marked_tree", mt_.size_in_bits()},
  };
}

void LinearIndex::save(Writer& w) const {
  auto at = w.begin_section(Tag::kLinearIndex);
  mt_.save(w);
  w.put<std::uint64_t>(sample_rate_);
  near_.save(w);
  far_.save(w);
  near_rmq_.save(w);
  far_rmq_.save(w);
  far_wavelet_.save(w);
  w.end_section(at);
}

LinearIndex LinearIndex::load(Reader& r, std::shared_ptr<const TextIndex> ti) {
  Reader s = r.section(Tag::kLinearIndex);
  LinearIndex li;
  li.ti_ = std::move(ti);
  li.mt_ = MarkedTree::load(s, li.ti_->gst());
  li.sample_rate_ = s.get<std::uint64_t>();
  if (li.sample_rate_ < 1) throw FormatError("sample rate must be positive");
  li.near_ = EntryTable::load(s);
  li.far_ = EntryTable::load(s);
  if (li.near_.runs() != li.ti_->gst().node_count() + 1 || li.far_.runs() != li.mt_.star_count() ||
      li.far_.zeta.size() != li.far_.size()) {
    throw FormatError("linear index tables do not match the tree");
  }
  for (auto z : li.far_.zeta) {
    if (z >= li.mt_.pi()) throw FormatError("zeta value out of range");
  }
  const std::size_t nodes = li.ti_->gst().node_count();
  for (auto o : li.near_.origin) {
    if (o < 1 || o > nodes) throw FormatError("origin out of range");
  }
  for (auto o : li.far_.origin) {
    if (o < 1 || o > nodes) throw FormatError("origin out of range");
  }
  li.near_rmq_ = RmqStructure::load(s);
  li.far_rmq_ = RmqStructure::load(s);
  li.far_wavelet_ = WaveletTopk::load(s);
  if (li.near_rmq_.size() != li.near_.size() || li.far_rmq_.size() != li.far_.size() ||
      li.far_wavelet_.size() != li.far_.size()) {
    throw FormatError("linear index RMQ sizes do not match");
  }
  std::vector<std::uint64_t> keys(li.near_.origin.begin(), li.near_.origin.end());
  li.near_pred_ = SampledPredecessor(keys, li.near_.offset, li.sample_rate_);
  keys.assign(li.far_.origin.begin(), li.far_.origin.end());
  li.far_pred_ = SampledPredecessor(keys, li.far_.offset, li.sample_rate_);
  return li;
}

}  // namespace tkdx

#include "tkdx/grouped.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tkdx {

TopkResult brute_force_topk(const TextIndex& ti, std::string_view pattern, std::size_t k) {
  if (k == 0) return {};
  auto loc = ti.search(pattern);
  if (!loc) return {};
  return brute_force_topk(ti, *loc, k);
}

TopkResult brute_force_topk(const TextIndex& ti, const PatternLocus& loc, std::size_t k) {
  if (k == 0) return {};
  const auto& da = ti.doc_array();
  std::vector<std::size_t> count(ti.doc_count() + 1, 0);
  for (std::size_t i = loc.lo; i <= loc.hi; ++i) ++count[da.access(i)];
  TopkResult rows;
  for (DocId d = 1; d <= ti.doc_count(); ++d) {
    if (count[d]) rows.push_back({d, count[d]});
  }
  sort_rows(rows);
  if (rows.size() > k) rows.resize(k);
  return rows;
}

namespace {

std::uint64_t median_of_medians(std::vector<std::uint64_t>& v, std::size_t lo, std::size_t hi) {
  std::vector<std::uint64_t> medians;
  medians.reserve((hi - lo + 4) / 5);
  for (std::size_t a = lo; a < hi; a += 5) {
    std::size_t b = std::min(hi, a + 5);
    std::sort(v.begin() + static_cast<std::ptrdiff_t>(a), v.begin() + static_cast<std::ptrdiff_t>(b));
    medians.push_back(v[a + (b - a) / 2]);
  }
  return select_kth_largest(medians, (medians.size() + 1) / 2);
}

}  // namespace

std::uint64_t select_kth_largest(std::vector<std::uint64_t>& v, std::size_t k) {
  if (k < 1 || k > v.size()) throw std::out_of_range("selection rank out of range");
  std::size_t lo = 0, hi = v.size(), want = k - 1;  // want: 0-based rank in descending order within [lo, hi)
  while (true) {
    if (hi - lo <= 5) {
      std::sort(v.begin() + static_cast<std::ptrdiff_t>(lo), v.begin() + static_cast<std::ptrdiff_t>(hi),
                std::greater<>());
      return v[lo + want];
    }
    const std::uint64_t pivot = median_of_medians(v, lo, hi);
    // three-way partition: greater | equal | smaller
    std::size_t gt = lo, i = lo, lt = hi;
    while (i < lt) {
      if (v[i] > pivot) {
        std::swap(v[i++], v[gt++]);
      } else if (v[i] < pivot) {
        std::swap(v[i], v[--lt]);
      } else {
        ++i;
      }
    }
    const std::size_t n_gt = gt - lo, n_eq = lt - gt;
    if (want < n_gt) {
      hi = gt;
    } else if (want < n_gt + n_eq) {
      return pivot;
    } else {
      want -= n_gt + n_eq;
      lo = lt;
    }
  }
}

std::size_t GroupedIndex::group_size(std::size_t q, std::size_t docs, std::size_t n) {
  const double lg_d = docs > 1 ? std::log2(static_cast<double>(docs)) : 0.0;
  const double lglg_n = n > 2 ? std::log2(std::log2(static_cast<double>(n))) : 0.0;
  const double g = std::ceil(static_cast<double>(q) * lg_d * lglg_n);
  return g < 1.0 ? 1 : static_cast<std::size_t>(g);
}

GroupedIndex GroupedIndex::build(std::shared_ptr<const TextIndex> ti) {
  GroupedIndex gi;
  gi.ti_ = std::move(ti);
  const auto& gst = gi.ti_->gst();
  const std::size_t n = gi.ti_->size(), docs = gi.ti_->doc_count();
  auto ids = gi.ti_->doc_ids();
  std::vector<std::uint32_t> count(docs + 1, 0);
  std::vector<DocId> touched;
  for (std::size_t q = 1;; q *= 2) {
    GroupedLevel lv;
    lv.q = q;
    lv.g = group_size(q, docs, n);
    std::vector<NodeId> m;
    for (std::size_t a = 1; a <= n; a += lv.g) m.push_back(gst.lca_leaves(a, std::min(n, a + lv.g - 1)));
    // LCA closure: LCAs of preorder-adjacent marked nodes, to a fixpoint
    while (true) {
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      std::vector<NodeId> add;
      for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        NodeId l = gst.lca(m[i], m[i + 1]);
        if (!std::binary_search(m.begin(), m.end(), l)) add.push_back(l);
      }
      if (add.empty()) break;
      m.insert(m.end(), add.begin(), add.end());
    }
    lv.marked = std::move(m);
    lv.offset.assign(1, 0);
    for (NodeId v : lv.marked) {
      touched.clear();
      for (std::size_t i = gst.lmost(v); i <= gst.rmost(v); ++i) {
        if (count[ids[i]]++ == 0) touched.push_back(ids[i]);
      }
      auto better = [&](DocId a, DocId b) { return count[a] != count[b] ? count[a] > count[b] : a < b; };
      std::size_t keep = std::min(q, touched.size());
      std::partial_sort(touched.begin(), touched.begin() + static_cast<std::ptrdiff_t>(keep), touched.end(), better);
      for (std::size_t j = 0; j < keep; ++j) {
        lv.doc.push_back(touched[j]);
        lv.tf.push_back(count[touched[j]]);
      }
      lv.offset.push_back(static_cast<std::uint32_t>(lv.doc.size()));
      for (DocId d : touched) count[d] = 0;
    }
    gi.levels_.push_back(std::move(lv));
    if (q >= docs) break;
  }
  return gi;
}

std::size_t GroupedIndex::level_for(std::size_t k) const {
  std::size_t lv = static_cast<std::size_t>(std::bit_width(std::bit_ceil(std::max<std::size_t>(k, 1)))) - 1;
  return std::min(lv, levels_.size() - 1);
}

NodeId GroupedIndex::highest_marked(std::size_t lv, NodeId v) const {
  const auto& m = levels_[lv].marked;
  const auto& gst = ti_->gst();
  const NodeId end = gst.subtree_end(v);
  auto first = std::lower_bound(m.begin(), m.end(), v);
  if (first == m.end() || *first > end) return kDummyNode;
  // LCA closure makes the first marked node in preorder an ancestor of the others
  auto last = std::upper_bound(first, m.end(), end) - 1;
  if (!gst.is_ancestor(*first, *last)) throw std::logic_error("highest marked descendant is not unique");
  return *first;
}

TopkResult GroupedIndex::query(std::string_view pattern, std::size_t k, QueryCounters* counters) const {
  if (k == 0) return {};
  auto loc = ti_->search(pattern);
  if (!loc) return {};
  return query_locus(*loc, k, counters);
}

TopkResult GroupedIndex::query_locus(const PatternLocus& loc, std::size_t k, QueryCounters* counters) const {
  if (k == 0) return {};
  QueryCounters local;
  QueryCounters& c = counters ? *counters : local;
  const auto& gst = ti_->gst();
  const auto& da = ti_->doc_array();
  const std::size_t li = level_for(k);
  const GroupedLevel& lv = levels_[li];
  const NodeId m = highest_marked(li, loc.locus);

  std::vector<DocId> cand;
  std::size_t fringe;
  auto scan = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = a; i <= b; ++i) cand.push_back(da.access(i));
  };
  std::vector<std::uint64_t> keys;
  if (m == kDummyNode) {
    // no full group inside the range
    fringe = loc.hi - loc.lo + 1;
    scan(loc.lo, loc.hi);
  } else {
    const std::size_t ls = gst.lmost(m), rs = gst.rmost(m);
    fringe = (ls - loc.lo) + (loc.hi - rs);
    std::size_t mi = static_cast<std::size_t>(std::lower_bound(lv.marked.begin(), lv.marked.end(), m) -
                                              lv.marked.begin());
    auto docs = lv.docs_of(mi);
    if (m == loc.locus) {
      auto tfs = lv.tfs_of(mi);
      for (std::size_t j = 0; j < docs.size() && j < k; ++j) keys.push_back(rank_key(tfs[j], docs[j]));
    } else {
      cand.assign(docs.begin(), docs.end());
      scan(loc.lo, ls - 1);
      scan(rs + 1, loc.hi);
    }
  }
  c.fringe_leaves += fringe;
  if (fringe > 2 * lv.g) {
    throw std::logic_error("fringe of " + std::to_string(fringe) + " leaves exceeds 2g = " + std::to_string(2 * lv.g));
  }
  std::vector<char> seen(ti_->doc_count() + 1, 0);
  for (DocId d : cand) {
    if (seen[d]) continue;
    seen[d] = 1;
    ++c.decode_calls;
    keys.push_back(rank_key(da.range_count(d, loc.lo, loc.hi), d));
  }
  if (keys.size() > k) {
    std::vector<std::uint64_t> tmp = keys;
    const std::uint64_t kth = select_kth_largest(tmp, k);
    std::erase_if(keys, [&](std::uint64_t key) { return key < kth; });
  }
  TopkResult rows;
  for (auto key : keys) rows.push_back({key_doc(key), static_cast<std::size_t>(key_tf(key))});
  sort_rows(rows);
  return rows;
}

std::uint64_t GroupedIndex::level_bits(std::size_t lv) const {
  const std::uint64_t entry = ceil_log2(ti_->doc_count()) + ceil_log2(ti_->size() + 1);
  return entry * levels_[lv].doc.size();
}

SpaceReport GroupedIndex::space_report() const {
  SpaceReport out;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    std::string p = "grouped.q" + std::to_string(levels_[i].q);
    out.push_back({p + ".lists", level_bits(i)});
    out.push_back({p + ".marked", 32ull * (levels_[i].marked.size() + levels_[i].offset.size())});
  }
  out.push_back({"grouped.doc_array", ti_->doc_array().size_in_bits()});
  return out;
}

void GroupedIndex::save(Writer& w) const {
  auto at = w.begin_section(Tag::kGroupedIndex);
  w.put<std::uint64_t>(levels_.size());
  for (const auto& lv : levels_) {
    w.put<std::uint64_t>(lv.q);
    w.put<std::uint64_t>(lv.g);
    w.put_vector(lv.marked);
    w.put_vector(lv.offset);
    w.put_vector(lv.doc);
    w.put_vector(lv.tf);
  }
  w.end_section(at);
}

GroupedIndex GroupedIndex::load(Reader& r, std::shared_ptr<const TextIndex> ti) {
  Reader s = r.section(Tag::kGroupedIndex);
  GroupedIndex gi;
  gi.ti_ = std::move(ti);
  const std::size_t nodes = gi.ti_->gst().node_count(), docs = gi.ti_->doc_count();
  auto count = s.get<std::uint64_t>();
  if (count == 0 || count > 64) throw FormatError("grouped level count out of range");
  for (std::uint64_t i = 0; i < count; ++i) {
    GroupedLevel lv;
    lv.q = s.get<std::uint64_t>();
    lv.g = s.get<std::uint64_t>();
    lv.marked = s.get_vector<NodeId>();
    lv.offset = s.get_vector<std::uint32_t>();
    lv.doc = s.get_vector<DocId>();
    lv.tf = s.get_vector<std::uint32_t>();
    if (lv.q != (std::size_t{1} << i) || lv.g < 1 || lv.offset.size() != lv.marked.size() + 1 ||
        lv.offset.front() != 0 || lv.offset.back() != lv.doc.size() || lv.tf.size() != lv.doc.size()) {
      throw FormatError("grouped level shape mismatch");
    }
    for (std::size_t j = 0; j < lv.marked.size(); ++j) {
      if (lv.marked[j] < 1 || lv.marked[j] > nodes || (j && lv.marked[j] <= lv.marked[j - 1]) ||
          lv.offset[j + 1] < lv.offset[j] || lv.offset[j + 1] - lv.offset[j] > lv.q) {
        throw FormatError("grouped level marked nodes malformed");
      }
    }
    for (DocId d : lv.doc) {
      if (d < 1 || d > docs) throw FormatError("grouped level document out of range");
    }
    gi.levels_.push_back(std::move(lv));
  }
  return gi;
}

}  // namespace tkdx

#include "tkdx/encoded_index.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "tkdx/candidates.hpp"

namespace tkdx {

std::string_view mode_name(EncodedMode m) {
  switch (m) {
    case EncodedMode::kT1:
      return "t1";
    case EncodedMode::kT1Stripped:
      return "t1-stripped";
    case EncodedMode::kT2:
      return "t2";
  }
  return "?";
}

EncodedMode parse_mode(std::string_view name) {
  if (name == "t1") return EncodedMode::kT1;
  if (name == "t1-stripped") return EncodedMode::kT1Stripped;
  if (name == "t2") return EncodedMode::kT2;
  throw InputError("unknown encoded mode '" + std::string(name) + "'");
}

std::uint32_t EncodedTable::child(std::size_t r, std::size_t g) const {
  std::size_t ones = child_.rank1(child_.select0(g + 1));
  std::size_t b = begin(r);
  std::size_t base = b == 0 ? 0 : child_.rank1(child_.select0(b));
  return static_cast<std::uint32_t>(ones - base);
}

void EncodedTable::save(Writer& w) const {
  auto at = w.begin_section(Tag::kEncodedTable);
  w.put<std::uint64_t>(sample_rate_);
  bounds_.save(w);
  child_.save(w);
  docs_.save(w);
  zeta_.save(w);
  err_.save(w);
  w.put_vector(samples_);
  rmq_.save(w);
  w.end_section(at);
}

EncodedTable EncodedTable::load(Reader& r) {
  Reader s = r.section(Tag::kEncodedTable);
  EncodedTable t;
  t.sample_rate_ = s.get<std::uint64_t>();
  t.bounds_ = BitVector::load(s);
  t.child_ = BitVector::load(s);
  t.docs_ = IntVector::load(s);
  t.zeta_ = IntVector::load(s);
  t.err_ = IntVector::load(s);
  t.samples_ = s.get_vector<NodeId>();
  t.rmq_ = RmqStructure::load(s);
  const std::size_t n = t.docs_.size();
  if (t.sample_rate_ < 1 || t.bounds_.zeros() != n || t.bounds_.ones() == 0 || !t.bounds_.get(1) ||
      t.child_.zeros() != n || (t.zeta_.size() && t.zeta_.size() != n) || (t.err_.size() && t.err_.size() != n) ||
      t.samples_.size() != (n + t.sample_rate_ - 1) / t.sample_rate_ || t.rmq_.size() != n) {
    throw FormatError("encoded table shape mismatch");
  }
  return t;
}

namespace {

// Origins and keys of the kept entries, in encoded order; only needed at build.
struct Plain {
  std::vector<NodeId> origin;
  std::vector<std::uint64_t> key;
};

}  // namespace

EncodedIndex EncodedIndex::build(const LinearIndex& li, Options options) {
  if (options.sample_rate < 1) throw std::invalid_argument("sample rate must be positive");
  if (options.rho < 1) throw std::invalid_argument("rho must be positive");
  EncodedIndex ei;
  ei.ti_ = li.text_ptr();
  ei.options_ = options;
  if (ei.sampled_tf()) ei.options_.backend = DaBackend::kCsaSim;
  ei.mt_ = li.marked();
  ei.da_ = ei.ti_->make_doc_array(ei.options_.backend, options.sample_rate);
  if (ei.sampled_tf()) ei.sampled_ = SampledDocArray(ei.da_, options.rho);

  const auto& g = ei.ti_->gst();
  const auto& mt = ei.mt_;
  const std::size_t docs = ei.ti_->doc_count();
  const std::uint32_t pi = mt.pi();
  const std::size_t rho = options.rho;
  const std::size_t s = options.sample_rate;

  auto encode = [&](const EntryTable& t, bool far, EncodedTable& out) {
    Plain kept;
    std::vector<DocId> doc;
    std::vector<std::uint32_t> zeta, err;
    out.bounds_ = BitVector();
    out.child_ = BitVector();
    for (std::size_t r = 0; r < t.runs(); ++r) {
      out.bounds_.push_back(true);
      std::uint32_t prev = 0;
      for (std::size_t i = t.offset[r]; i < t.offset[r + 1]; ++i) {
        const NodeId v = t.origin[i];
        if (ei.stripped() && g.is_leaf(v)) {
          ++ei.stripped_count_;
          continue;
        }
        NodeId c;
        std::uint32_t qi;
        if (far) {
          auto kids = mt.star_children(static_cast<std::uint32_t>(r));
          auto it = std::upper_bound(kids.begin(), kids.end(), v,
                                     [&](NodeId x, std::uint32_t k) { return x < mt.from_star(k); });
          if (it == kids.begin()) throw std::logic_error("far origin precedes every marked child");
          qi = static_cast<std::uint32_t>(it - kids.begin());
          c = mt.from_star(*(it - 1));
        } else {
          auto kids = g.children(static_cast<NodeId>(r));
          auto it = std::upper_bound(kids.begin(), kids.end(), v);
          if (it == kids.begin()) throw std::logic_error("near origin precedes every child");
          qi = static_cast<std::uint32_t>(it - kids.begin());
          c = *(it - 1);
        }
        if (!g.is_ancestor(c, v)) {
          throw std::logic_error("origin " + std::to_string(v) + " lies below no child of structure " +
                                 std::to_string(r));
        }
        if (qi < prev) throw std::logic_error("origin-child sequence decreases");
        for (std::uint32_t u = prev; u < qi; ++u) out.child_.push_back(true);
        out.child_.push_back(false);
        prev = qi;
        out.bounds_.push_back(false);
        doc.push_back(t.doc[i]);
        if (far) zeta.push_back(t.zeta[i]);
        if (ei.sampled_tf()) {
          const std::size_t tf = static_cast<std::size_t>(key_tf(t.key[i]));
          const std::size_t approx = ei.sampled_.approx_tf(t.doc[i], g.lmost(v), g.rmost(v));
          if (tf + rho - 1 < approx || tf + rho - 1 - approx > 2 * rho - 2) {
            throw std::logic_error("sampled tf error outside (-rho, rho)");
          }
          err.push_back(static_cast<std::uint32_t>(tf + rho - 1 - approx));
        }
        kept.origin.push_back(v);
        kept.key.push_back(t.key[i]);
      }
    }
    out.bounds_.build_index();
    out.child_.build_index();
    const std::size_t n = doc.size();
    out.docs_ = IntVector(n, std::max<std::uint32_t>(1, ceil_log2(docs)));
    for (std::size_t i = 0; i < n; ++i) out.docs_.set(i, doc[i] - 1);
    out.zeta_ = IntVector();
    if (far && pi > 1) {
      out.zeta_ = IntVector(n, ceil_log2(pi));
      for (std::size_t i = 0; i < n; ++i) out.zeta_.set(i, zeta[i]);
    }
    out.err_ = IntVector();
    if (ei.sampled_tf()) {
      out.err_ = IntVector(n, std::max<std::uint32_t>(1, ceil_log2(2 * rho + 1)));
      for (std::size_t i = 0; i < n; ++i) out.err_.set(i, err[i]);
    }
    out.sample_rate_ = s;
    out.samples_.clear();
    for (std::size_t i = 0; i < n; i += s) out.samples_.push_back(kept.origin[i]);
    out.rmq_ = RmqStructure(kept.key, RmqMode::kMax);
    if (far) {
      std::vector<std::uint32_t> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = zeta[i] + 1;
      ei.far_wavelet_ = WaveletTopk(y, pi, kept.key);
    }
    return kept;
  };

  Plain near = encode(li.near(), false, ei.near_);
  Plain far = encode(li.far(), true, ei.far_);
  if (ei.stripped()) ei.listing_ = ChainListing(ei.da_);

  // Every kept entry must decode to its origin and score.
  auto check = [&](const EncodedTable& t, const Plain& p, bool is_far) {
    for (std::size_t r = 0; r < t.runs(); ++r) {
      for (std::size_t gi = t.begin(r), e = t.end(r); gi < e; ++gi) {
        NodeId v = is_far ? ei.decode_far_origin(static_cast<std::uint32_t>(r), gi)
                          : ei.decode_near_origin(static_cast<NodeId>(r), gi);
        if (v != p.origin[gi]) {
          throw std::logic_error("origin round-trip failed at entry " + std::to_string(gi) + ": decoded " +
                                 std::to_string(v) + ", stored " + std::to_string(p.origin[gi]));
        }
        std::uint64_t key = rank_key(ei.decode_tf(v, t.doc(gi), t.err_.size() ? t.err(gi) : 0), t.doc(gi));
        if (key != p.key[gi]) throw std::logic_error("score round-trip failed at entry " + std::to_string(gi));
      }
    }
  };
  check(ei.near_, near, false);
  check(ei.far_, far, true);
  return ei;
}

NodeId EncodedIndex::origin_below(NodeId c, DocId d, QueryCounters* counters) const {
  const auto& g = ti_->gst();
  // separator suffixes (ranks 1..D) hold no entries but sit below the root
  const std::size_t lo = std::max(g.lmost(c), ti_->doc_count() + 1), hi = g.rmost(c);
  const std::size_t r0 = da_.rank(d, lo - 1), r1 = da_.rank(d, hi);
  if (r1 <= r0) throw std::logic_error("document absent below its origin child");
  if (counters) ++counters->decode_calls;
  return g.lca_leaves(static_cast<std::size_t>(da_.select(d, r0 + 1)), static_cast<std::size_t>(da_.select(d, r1)));
}

NodeId EncodedIndex::decode_near_origin(NodeId w, std::size_t g, QueryCounters* counters) const {
  return origin_below(ti_->gst().child(w, near_.child(w, g)), near_.doc(g), counters);
}

NodeId EncodedIndex::decode_far_origin(std::uint32_t star, std::size_t g, QueryCounters* counters) const {
  std::uint32_t q = far_.child(star, g);
  return origin_below(mt_.from_star(mt_.star_children(star)[q - 1]), far_.doc(g), counters);
}

std::size_t EncodedIndex::decode_tf(NodeId origin, DocId d, std::uint32_t err, QueryCounters* counters) const {
  const auto& g = ti_->gst();
  if (counters) ++counters->decode_calls;
  if (!sampled_tf()) return da_.range_count(d, g.lmost(origin), g.rmost(origin));
  // err is stored biased by rho - 1
  return sampled_.approx_tf(d, g.lmost(origin), g.rmost(origin)) + err - (options_.rho - 1);
}

std::uint64_t EncodedIndex::near_key(NodeId w, std::size_t g, QueryCounters* c) const {
  DocId d = near_.doc(g);
  return rank_key(decode_tf(decode_near_origin(w, g, c), d, near_.err_.size() ? near_.err(g) : 0, c), d);
}

std::uint64_t EncodedIndex::far_key(std::uint32_t star, std::size_t g, QueryCounters* c) const {
  DocId d = far_.doc(g);
  return rank_key(decode_tf(decode_far_origin(star, g, c), d, far_.err_.size() ? far_.err(g) : 0, c), d);
}

struct EncodedStore {
  const EncodedIndex& ei;
  QueryCounters& c;

  // Entries of structure r with origin <= x, found over the sampled origins and
  // finished by decoding at most log2(s) + 1 origins.
  template <class Decode>
  static std::size_t count_le(const EncodedTable& t, std::size_t b, std::size_t e, NodeId x, Decode&& decode) {
    if (b == e) return 0;
    const std::size_t s = t.sample_rate();
    const std::size_t j0 = (b + s - 1) / s, j1 = (e + s - 1) / s;
    std::size_t lo = j0, hi = j1;
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (t.sample(mid) <= x) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    std::size_t from, to;
    if (lo == j0) {
      from = b;
      to = j0 < j1 ? j0 * s : e;
    } else {
      from = (lo - 1) * s + 1;
      to = std::min(e, lo * s);
    }
    while (from < to) {
      std::size_t mid = from + (to - from) / 2;
      if (decode(mid) <= x) {
        from = mid + 1;
      } else {
        to = mid;
      }
    }
    return from - b;
  }

  std::pair<std::size_t, std::size_t> near_slice(NodeId w, NodeId lo, NodeId hi) const {
    const auto& t = ei.near_;
    std::size_t b = t.begin(w), e = t.end(w);
    auto decode = [&](std::size_t g) { return ei.decode_near_origin(w, g, &c); };
    return {b + count_le(t, b, e, lo - 1, decode) + 1, b + count_le(t, b, e, hi, decode)};
  }
  std::pair<std::size_t, std::size_t> far_slice(std::uint32_t s, NodeId lo, NodeId hi) const {
    const auto& t = ei.far_;
    std::size_t b = t.begin(s), e = t.end(s);
    auto decode = [&](std::size_t g) { return ei.decode_far_origin(s, g, &c); };
    return {b + count_le(t, b, e, lo - 1, decode) + 1, b + count_le(t, b, e, hi, decode)};
  }
  std::size_t near_argmax(std::uint32_t w, std::size_t a, std::size_t b) const {
    return ei.near_.rmq().query(a, b, [&](std::size_t p) { return ei.near_key(w, p - 1, &c); });
  }
  std::size_t far_argmax(std::uint32_t s, std::size_t a, std::size_t b) const {
    return ei.far_.rmq().query(a, b, [&](std::size_t p) { return ei.far_key(s, p - 1, &c); });
  }
  std::uint64_t near_key(std::uint32_t w, std::size_t p) const { return ei.near_key(w, p - 1, &c); }
  std::uint64_t far_key(std::uint32_t s, std::size_t p) const { return ei.far_key(s, p - 1, &c); }
  std::vector<std::uint64_t> far_constrained(std::uint32_t s, std::size_t a, std::size_t b, std::uint32_t z,
                                             std::size_t k, QueryCounters& qc) const {
    auto hits = ei.far_wavelet_.query(a, b, 1, z, k, [&](std::size_t i) { return ei.far_key(s, i - 1, &qc); }, &qc);
    std::vector<std::uint64_t> keys;
    for (const auto& h : hits) keys.push_back(h.score);
    return keys;
  }
};

TopkResult EncodedIndex::query(std::string_view pattern, std::size_t k, QueryCounters* counters) const {
  if (k == 0) return {};
  auto loc = ti_->search(pattern);
  if (!loc) return {};
  return query_locus(*loc, k, counters);
}

TopkResult EncodedIndex::query_locus(const PatternLocus& loc, std::size_t k, QueryCounters* counters) const {
  QueryCounters local;
  QueryCounters& c = counters ? *counters : local;
  EncodedStore store{*this, c};
  auto keys = detail::collect_candidates(ti_->gst(), mt_, loc.locus, k, store, c);
  TopkResult rows = rows_from_keys(std::move(keys), k);
  if (stripped() && rows.size() < k) {
    // Every document with tf >= 2 was found; the rest occur exactly once.
    std::unordered_set<DocId> found;
    for (const auto& row : rows) found.insert(row.doc);
    auto listed = listing_.list_distinct(
        da_, loc.lo, loc.hi, std::numeric_limits<std::size_t>::max(), [&](DocId d) { return found.count(d) > 0; },
        &c);
    std::vector<DocId> ones;
    ones.reserve(listed.size());
    for (const auto& [d, pos] : listed) ones.push_back(d);
    std::sort(ones.begin(), ones.end());
    for (DocId d : ones) {
      if (rows.size() == k) break;
      rows.push_back({d, 1});
    }
  }
  return rows;
}

std::uint64_t EncodedIndex::payload_bits() const {
  std::uint64_t bits = 0;
  for (const EncodedTable* t : {&near_, &far_}) {
    bits += t->doc_bits() + t->zeta_bits() + t->err_bits() + t->child_bits_size() + t->bound_bits() + t->sample_bits();
  }
  return bits;
}

std::uint64_t EncodedIndex::payload_bound() const {
  return 2ull * ti_->size() * (ceil_log2(ti_->doc_count()) + ceil_log2(mt_.pi()) + kPayloadSlack);
}

SpaceReport EncodedIndex::space_report() const {
  SpaceReport out;
  for (auto [name, t] : {std::pair{"near", &near_}, std::pair{"far", &far_}}) {
    std::string p = std::string("encoded.") + name;
    out.push_back({p + ".docs", t->doc_bits()});
    if (t->zeta_bits()) out.push_back({p + ".zeta", t->zeta_bits()});
    if (t->err_bits()) out.push_back({p + ".err", t->err_bits()});
    out.push_back({p + ".origin_child", t->child_bits_size()});
    out.push_back({p + ".bounds", t->bound_bits()});
    out.push_back({p + ".origin_samples", t->sample_bits()});
  }
  out.push_back({"encoded.near_rmq", near_.rmq().size_in_bits()});
  out.push_back({"encoded.far_rmq", far_.rmq().size_in_bits()});
  out.push_back({"encoded.far_wavelet", far_wavelet_.size_in_bits()});
  out.push_back({"encoded.doc_array", da_.size_in_bits()});
  if (stripped()) out.push_back({"encoded.chain_listing", listing_.size_in_bits()});
  if (sampled_tf()) out.push_back({"encoded.sampled_doc_array", sampled_.size_in_bits()});
  out.push_back({"encoded.marked_tree", mt_.size_in_bits()});
  return out;
}

void EncodedIndex::save(Writer& w) const {
  auto at = w.begin_section(Tag::kEncodedIndex);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(options_.mode));
  w.put<std::uint64_t>(options_.rho);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(options_.backend));
  w.put<std::uint64_t>(options_.sample_rate);
  w.put<std::uint64_t>(stripped_count_);
  mt_.save(w);
  da_.save(w);
  near_.save(w);
  far_.save(w);
  far_wavelet_.save(w);
  if (stripped()) listing_.save(w);
  if (sampled_tf()) sampled_.save(w);
  w.end_section(at);
}

EncodedIndex EncodedIndex::load(Reader& r, std::shared_ptr<const TextIndex> ti) {
  Reader s = r.section(Tag::kEncodedIndex);
  EncodedIndex ei;
  ei.ti_ = std::move(ti);
  auto mode = s.get<std::uint8_t>();
  if (mode > 2) throw FormatError("unknown encoded mode");
  ei.options_.mode = static_cast<EncodedMode>(mode);
  ei.options_.rho = s.get<std::uint64_t>();
  auto backend = s.get<std::uint8_t>();
  if (backend > 2) throw FormatError("unknown document-array backend");
  ei.options_.backend = static_cast<DaBackend>(backend);
  ei.options_.sample_rate = s.get<std::uint64_t>();
  if (ei.options_.rho < 1 || ei.options_.sample_rate < 1) throw FormatError("encoded index rates must be positive");
  ei.stripped_count_ = s.get<std::uint64_t>();
  ei.mt_ = MarkedTree::load(s, ei.ti_->gst());
  ei.da_ = DocumentArray::load(s, ei.ti_->text_ptr(), ei.ti_->suffix_ptr());
  ei.near_ = EncodedTable::load(s);
  ei.far_ = EncodedTable::load(s);
  ei.far_wavelet_ = WaveletTopk::load(s);
  if (ei.stripped()) ei.listing_ = ChainListing::load(s);
  if (ei.sampled_tf()) ei.sampled_ = SampledDocArray::load(s);
  if (ei.near_.runs() != ei.ti_->gst().node_count() + 1 || ei.far_.runs() != ei.mt_.star_count() ||
      ei.far_wavelet_.size() != ei.far_.size() || ei.da_.size() != ei.ti_->size() ||
      ei.da_.backend() != ei.options_.backend || (ei.stripped() && ei.listing_.size() != ei.ti_->size()) ||
      (ei.sampled_tf() && (ei.near_.err_.size() != ei.near_.size() || ei.far_.err_.size() != ei.far_.size()))) {
    throw FormatError("encoded index does not match the text");
  }
  return ei;
}

}  // namespace tkdx

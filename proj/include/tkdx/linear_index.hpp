#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tkdx/counters.hpp"
#include "tkdx/marked.hpp"
#include "tkdx/predecessor.hpp"
#include "tkdx/result.hpp"
#include "tkdx/rmq.hpp"
#include "tkdx/text_index.hpp"
#include "tkdx/topk.hpp"

namespace tkdx {

/// One I-entry before near/far relocation: origin v holds an N-entry for doc
/// whose parent link is `holder`.
struct IEntry {
  DocId doc = 0;
  NodeId origin = kDummyNode;
  NodeId holder = kDummyNode;
  std::uint64_t score = 0;
};

/// Relevance of document d for the path label of node v; term frequency when empty.
using ScoreFn = std::function<std::uint64_t(NodeId v, DocId d)>;

/// All I-entries of the collection, sorted by (holder, origin, doc). Their count
/// equals the number of N-entries.
std::vector<IEntry> build_i_entries(const TextIndex& ti, const ScoreFn& score = {});

/// Origin-sorted I-entries of many structures stored back to back; structure r
/// occupies global positions offset[r]+1 .. offset[r+1] (1-based).
struct EntryTable {
  std::vector<DocId> doc;
  std::vector<NodeId> origin;
  std::vector<std::uint64_t> key;     // rank_key(score, doc)
  std::vector<std::uint32_t> zeta;    // zeta of the original holder; far table only
  std::vector<std::uint32_t> offset;  // runs + 1

  std::size_t size() const { return doc.size(); }
  std::size_t runs() const { return offset.empty() ? 0 : offset.size() - 1; }

  void save(Writer& w) const;
  static EntryTable load(Reader& r);
};

struct SpaceItem {
  std::string component;
  std::uint64_t bits = 0;
};
using SpaceReport = std::vector<SpaceItem>;

/// Linear-space top-k index: I-structures at every node for near entries and
/// combined I-structures at marked nodes for far entries.
class LinearIndex {
 public:
  struct Options {
    std::uint32_t pi = 4;
    std::size_t sample_rate = SampledPredecessor::kDefaultRate;
    ScoreFn score;  // empty: term frequency
  };

  LinearIndex() = default;
  static LinearIndex build(std::shared_ptr<const TextIndex> ti, Options options);
  static LinearIndex build(std::shared_ptr<const TextIndex> ti) { return build(std::move(ti), Options{}); }

  TopkResult query(std::string_view pattern, std::size_t k, QueryCounters* counters = nullptr) const;
  TopkResult query_locus(const PatternLocus& loc, std::size_t k, QueryCounters* counters = nullptr) const;

  const TextIndex& text() const { return *ti_; }
  std::shared_ptr<const TextIndex> text_ptr() const { return ti_; }
  const MarkedTree& marked() const { return mt_; }
  std::uint32_t pi() const { return mt_.pi(); }
  std::size_t sample_rate() const { return sample_rate_; }
  const EntryTable& near() const { return near_; }
  const EntryTable& far() const { return far_; }
  std::size_t entry_count() const { return near_.size() + far_.size(); }

  SpaceReport space_report() const;

  void save(Writer& w) const;
  static LinearIndex load(Reader& r, std::shared_ptr<const TextIndex> ti);

 private:
  friend struct LinearStore;
  void derive();

  std::shared_ptr<const TextIndex> ti_;
  MarkedTree mt_;
  std::size_t sample_rate_ = SampledPredecessor::kDefaultRate;
  EntryTable near_;  // runs indexed by GST preorder, dummy included
  EntryTable far_;   // runs indexed by star id
  RmqStructure near_rmq_, far_rmq_;
  SampledPredecessor near_pred_, far_pred_;
  WaveletTopk far_wavelet_;  // over zeta + 1
};

/// Sorted rows from ranking keys. Throws std::logic_error when a document repeats.
TopkResult rows_from_keys(std::vector<std::uint64_t> keys, std::size_t k);

}  // namespace tkdx

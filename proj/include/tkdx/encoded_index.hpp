#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "tkdx/bits.hpp"
#include "tkdx/counters.hpp"
#include "tkdx/doc_array.hpp"
#include "tkdx/linear_index.hpp"
#include "tkdx/marked.hpp"
#include "tkdx/result.hpp"
#include "tkdx/rmq.hpp"
#include "tkdx/text_index.hpp"
#include "tkdx/topk.hpp"

namespace tkdx {

/// t1: exact tf by two ranks. t1-stripped: t1 without leaf-origin entries,
/// tf-1 documents listed through the chain array. t2: stripped, tf from the
/// rho-sampled document array plus a stored error, csa-sim document array.
enum class EncodedMode : std::uint8_t { kT1 = 0, kT1Stripped = 1, kT2 = 2 };

std::string_view mode_name(EncodedMode m);
/// Accepts "t1", "t1-stripped", "t2". Throws InputError otherwise.
EncodedMode parse_mode(std::string_view name);

/// Entries of many structures in one origin-sorted global order, with scores
/// and origins discarded. Structure r owns global positions begin(r) .. end(r)-1
/// (0-based).
///
/// bounds:  1 0^{|I_0|} 1 0^{|I_1|} ...
/// child:   per entry 1^{q - q_prev} 0, with q_prev = 0 at each structure start,
///          where q is the (1-based) child of the structure's node containing the origin.
class EncodedTable {
 public:
  EncodedTable() = default;

  std::size_t size() const { return docs_.size(); }
  std::size_t runs() const { return bounds_.ones(); }
  std::size_t begin(std::size_t r) const { return bounds_.select1(r + 1) - r - 1; }
  std::size_t end(std::size_t r) const { return r + 1 < runs() ? bounds_.select1(r + 2) - r - 2 : size(); }

  DocId doc(std::size_t g) const { return static_cast<DocId>(docs_.get(g) + 1); }
  std::uint32_t zeta(std::size_t g) const { return zeta_.size() ? static_cast<std::uint32_t>(zeta_.get(g)) : 0; }
  std::uint32_t err(std::size_t g) const { return static_cast<std::uint32_t>(err_.get(g)); }
  /// Origin-child index of entry g of structure r.
  std::uint32_t child(std::size_t r, std::size_t g) const;
  std::size_t sample_rate() const { return sample_rate_; }
  /// Sampled origin preorder at global position j * sample_rate.
  NodeId sample(std::size_t j) const { return samples_[j]; }
  std::size_t sample_count() const { return samples_.size(); }

  const BitVector& child_bits() const { return child_; }
  const RmqStructure& rmq() const { return rmq_; }

  std::uint64_t doc_bits() const { return docs_.size_in_bits(); }
  std::uint64_t zeta_bits() const { return zeta_.size_in_bits(); }
  std::uint64_t err_bits() const { return err_.size_in_bits(); }
  std::uint64_t child_bits_size() const { return child_.size_in_bits(); }
  std::uint64_t bound_bits() const { return bounds_.size_in_bits(); }
  std::uint64_t sample_bits() const { return 32ull * samples_.size(); }

  void save(Writer& w) const;
  static EncodedTable load(Reader& r);

 private:
  friend class EncodedIndex;

  BitVector bounds_;
  BitVector child_;
  IntVector docs_;  // d - 1
  IntVector zeta_;  // far table only
  IntVector err_;   // t2 only
  std::vector<NodeId> samples_;
  std::size_t sample_rate_ = 64;
  RmqStructure rmq_;  // max over the discarded ranking keys
};

/// Linear index with score fields discarded and origins replaced by
/// origin-child indexes. An origin is recovered as the LCA of the first and
/// last leaves of its document below the recorded child.
class EncodedIndex {
 public:
  /// Payload slack per 2N units: see `payload_bound`.
  static constexpr std::uint32_t kPayloadSlack = 24;
  /// Size-independent part of the payload: per table, two bit vectors with at most
  /// 208 bits of padding and directory sentinels each, three packed vectors with
  /// at most 128 each, and the sample at entry 0.
  static constexpr std::uint64_t kPayloadFixedBits = 2 * (2 * 208 + 3 * 128 + 32);
  /// The slack covers 32-bit origin samples only when s >= 8.
  static constexpr std::size_t kPayloadMinSampleRate = 8;

  struct Options {
    EncodedMode mode = EncodedMode::kT1;
    std::size_t rho = 4;                     // t2 only
    DaBackend backend = DaBackend::kPlain;   // t1 modes; t2 always uses csa-sim
    std::size_t sample_rate = 64;            // origin samples and csa-sim sampling
  };

  EncodedIndex() = default;
  /// Throws std::logic_error if some entry fails to round-trip through decoding.
  static EncodedIndex build(const LinearIndex& li, Options options);

  TopkResult query(std::string_view pattern, std::size_t k, QueryCounters* counters = nullptr) const;
  TopkResult query_locus(const PatternLocus& loc, std::size_t k, QueryCounters* counters = nullptr) const;

  const Options& options() const { return options_; }
  bool stripped() const { return options_.mode != EncodedMode::kT1; }
  bool sampled_tf() const { return options_.mode == EncodedMode::kT2; }
  std::uint32_t pi() const { return mt_.pi(); }
  const TextIndex& text() const { return *ti_; }
  const MarkedTree& marked() const { return mt_; }
  const DocumentArray& doc_array() const { return da_; }
  const EncodedTable& near() const { return near_; }
  const EncodedTable& far() const { return far_; }
  std::size_t entry_count() const { return near_.size() + far_.size(); }
  /// Leaf-origin entries removed by stripping.
  std::size_t stripped_count() const { return stripped_count_; }

  /// Origin of entry g of near structure w (or far structure star).
  NodeId decode_near_origin(NodeId w, std::size_t g, QueryCounters* counters = nullptr) const;
  NodeId decode_far_origin(std::uint32_t star, std::size_t g, QueryCounters* counters = nullptr) const;
  /// Score of the entry whose origin has been decoded.
  std::size_t decode_tf(NodeId origin, DocId d, std::uint32_t err, QueryCounters* counters = nullptr) const;

  /// Payload: packed doc ids, zeta, origin-child bits, boundaries, sampled origins, errors.
  std::uint64_t payload_bits() const;
  /// 2N (ceil(log2 D) + ceil(log2 pi) + kPayloadSlack).
  std::uint64_t payload_bound() const;
  SpaceReport space_report() const;

  void save(Writer& w) const;
  static EncodedIndex load(Reader& r, std::shared_ptr<const TextIndex> ti);

 private:
  friend struct EncodedStore;

  NodeId origin_below(NodeId c, DocId d, QueryCounters* counters) const;
  std::uint64_t near_key(NodeId w, std::size_t g, QueryCounters* c) const;
  std::uint64_t far_key(std::uint32_t star, std::size_t g, QueryCounters* c) const;

  std::shared_ptr<const TextIndex> ti_;
  Options options_;
  MarkedTree mt_;
  DocumentArray da_;
  EncodedTable near_, far_;
  WaveletTopk far_wavelet_;  // over zeta + 1
  ChainListing listing_;     // stripped modes
  SampledDocArray sampled_;  // t2
  std::size_t stripped_count_ = 0;
};

}  // namespace tkdx

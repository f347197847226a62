#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tkdx/bits.hpp"
#include "tkdx/corpus.hpp"
#include "tkdx/counters.hpp"
#include "tkdx/gst.hpp"
#include "tkdx/predecessor.hpp"
#include "tkdx/rmq.hpp"
#include "tkdx/suffix.hpp"
#include "tkdx/wavelet.hpp"

namespace tkdx {

enum class DaBackend : std::uint8_t { kPlain = 0, kWavelet = 1, kCsaSim = 2 };

std::string_view backend_name(DaBackend b);
/// Accepts "plain", "wavelet", "csa-sim" (or "csa_sim"). Throws InputError otherwise.
DaBackend parse_backend(std::string_view name);

/// D_A[i] = doc_of_position(SA[i]) for i in 1..N; index 0 is unused.
std::vector<DocId> compute_document_array(const ConcatText& text, const SuffixStructures& ss);

/// Explicit packed sequence plus per-document sorted occurrence lists.
class PlainDocArray {
 public:
  PlainDocArray() = default;
  PlainDocArray(std::span<const DocId> da, std::size_t doc_count);

  std::size_t size() const { return n_; }
  DocId access(std::size_t i) const;
  std::size_t rank(DocId d, std::size_t i) const;
  std::size_t select(DocId d, std::size_t j) const;  // 0 when absent
  std::size_t count(DocId d) const { return occ_offset_[d] - occ_offset_[d - 1]; }

  /// N ceil(log2 D): the packed sequence alone.
  std::uint64_t sequence_bits() const;
  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static PlainDocArray load(Reader& r);

 private:
  IntVector seq_;                         // stores d - 1; empty when D = 1
  std::vector<std::uint32_t> occ_;        // positions grouped by document, ascending
  std::vector<std::uint32_t> occ_offset_;  // size D + 1
  std::size_t n_ = 0;
  std::size_t docs_ = 0;
};

class WaveletDocArray {
 public:
  WaveletDocArray() = default;
  WaveletDocArray(std::span<const DocId> da, std::size_t doc_count);

  std::size_t size() const { return wt_.size(); }
  DocId access(std::size_t i) const { return wt_.access(i); }
  std::size_t rank(DocId d, std::size_t i) const { return wt_.rank(d, i); }
  std::size_t select(DocId d, std::size_t j) const { return wt_.select(d, j); }
  std::size_t count(DocId d) const { return wt_.rank(d, wt_.size()); }

  std::uint64_t size_in_bits() const { return wt_.size_in_bits(); }

  void save(Writer& w) const;
  static WaveletDocArray load(Reader& r);

 private:
  WaveletTree wt_;
};

/// Document-array operations simulated over the global SA/ISA and
/// per-document suffix arrays of "d#".
///
/// select(d, j) maps local rank j to its text position and then to a global
/// rank. rank(d, i) finds the sampled local rank preceding i and finishes with
/// a binary search over at most s local ranks. chain steps one local rank back.
class CsaSimDocArray {
 public:
  CsaSimDocArray() = default;
  /// Throws std::logic_error if some document's local suffix order disagrees with the global one.
  CsaSimDocArray(std::shared_ptr<const ConcatText> text, std::shared_ptr<const SuffixStructures> ss,
                 std::size_t sample_rate);

  std::size_t size() const { return ss_->size(); }
  DocId access(std::size_t i) const { return text_->doc_of_position(ss_->sa[i]); }
  std::size_t rank(DocId d, std::size_t i) const;
  std::size_t select(DocId d, std::size_t j) const;
  std::size_t count(DocId d) const { return text_->doc_length(d); }
  std::size_t chain(std::size_t i) const;
  std::size_t sample_rate() const { return sampled_.rate(); }

  /// Global rank of local rank j of d (1-based j).
  std::size_t global_leaf(DocId d, std::size_t j) const {
    return ss_->isa[text_->doc_start(d) + local_sa_[local_offset_[d - 1] + j - 1] - 1];
  }

  /// Per-document SA_d and ISA_d plus the sampled mapping; the global SA/ISA are counted elsewhere.
  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static CsaSimDocArray load(Reader& r, std::shared_ptr<const ConcatText> text,
                             std::shared_ptr<const SuffixStructures> ss);

 private:
  void check_order() const;

  std::shared_ptr<const ConcatText> text_;
  std::shared_ptr<const SuffixStructures> ss_;
  std::vector<std::uint32_t> local_sa_;      // per document, 1-based local positions
  std::vector<std::uint32_t> local_isa_;     // per document, local position -> local rank
  std::vector<std::uint32_t> local_offset_;  // size D + 1
  SampledPredecessor sampled_;               // runs = documents, keys = global ranks
};

/// D_A behind one of three interchangeable backends. All results agree exactly.
class DocumentArray {
 public:
  DocumentArray() = default;
  static DocumentArray plain(std::span<const DocId> da, std::size_t doc_count);
  static DocumentArray wavelet(std::span<const DocId> da, std::size_t doc_count);
  static DocumentArray csa_sim(std::shared_ptr<const ConcatText> text, std::shared_ptr<const SuffixStructures> ss,
                               std::size_t sample_rate);

  DaBackend backend() const { return static_cast<DaBackend>(impl_.index()); }
  std::size_t size() const;
  std::size_t doc_count() const { return docs_; }

  DocId access(std::size_t i) const;
  /// Occurrences of d among D_A[1..i].
  std::size_t rank(DocId d, std::size_t i) const;
  /// Position of the j-th occurrence of d, or -1 when d occurs fewer than j times.
  std::int64_t select(DocId d, std::size_t j) const;
  /// Number of suffixes of d (|d| + 1).
  std::size_t count(DocId d) const;
  /// Largest j < i with D_A[j] = D_A[i], or 0.
  std::size_t chain(std::size_t i) const;

  /// Occurrences of d among D_A[lo..hi]; 0 for an empty range.
  std::size_t range_count(DocId d, std::size_t lo, std::size_t hi) const {
    return hi < lo ? 0 : rank(d, hi) - rank(d, lo - 1);
  }

  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static DocumentArray load(Reader& r, std::shared_ptr<const ConcatText> text,
                            std::shared_ptr<const SuffixStructures> ss);

 private:
  void check_doc(DocId d) const;

  std::variant<PlainDocArray, WaveletDocArray, CsaSimDocArray> impl_;
  std::size_t docs_ = 0;
};

/// Term frequency of d in the subtree of v: rank(d, rmost(v)) - rank(d, lmost(v) - 1).
std::size_t term_frequency(const DocumentArray& da, const GstTopology& gst, NodeId v, DocId d);

/// Min-RMQ over the chain array, the document-listing primitive.
class ChainListing {
 public:
  ChainListing() = default;
  explicit ChainListing(const DocumentArray& da);

  std::size_t size() const { return rmq_.size(); }
  const RmqStructure& rmq() const { return rmq_; }

  template <class Exclude>
  std::vector<std::pair<DocId, std::size_t>> list_distinct(const DocumentArray& da, std::size_t lo, std::size_t hi,
                                                           std::size_t limit, Exclude&& exclude,
                                                           QueryCounters* counters = nullptr) const;

  std::uint64_t size_in_bits() const { return rmq_.size_in_bits(); }

  void save(Writer& w) const;
  static ChainListing load(Reader& r);

 private:
  RmqStructure rmq_;
};

/// Distinct documents of D_A[lo..hi] with one witness position each, in no
/// particular order. Reports stop after `limit` non-excluded documents.
template <class Exclude>
std::vector<std::pair<DocId, std::size_t>> ChainListing::list_distinct(const DocumentArray& da, std::size_t lo,
                                                                       std::size_t hi, std::size_t limit,
                                                                       Exclude&& exclude,
                                                                       QueryCounters* counters) const {
  std::vector<std::pair<DocId, std::size_t>> out;
  if (hi < lo || limit == 0) return out;
  auto chain_at = [&](std::size_t p) { return static_cast<std::uint64_t>(da.chain(p)); };
  std::vector<std::pair<std::size_t, std::size_t>> stack{{lo, hi}};
  while (!stack.empty() && out.size() < limit) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (a > b) continue;
    std::size_t p = rmq_.query(a, b, chain_at);
    if (counters) ++counters->rmq_calls;
    if (da.chain(p) >= lo) continue;
    DocId d = da.access(p);
    if (!exclude(d)) {
      out.emplace_back(d, p);
      if (counters) ++counters->listing_reports;
    }
    stack.emplace_back(p + 1, b);
    stack.emplace_back(a, p - 1);
  }
  return out;
}

/// Every rho-th occurrence of every document, stored as sorted global ranks.
class SampledDocArray {
 public:
  SampledDocArray() = default;
  SampledDocArray(const DocumentArray& da, std::size_t rho);

  std::size_t rho() const { return rho_; }
  std::size_t samples() const { return ranks_.size(); }
  /// rho times the number of samples of d inside [lo, hi]. Differs from the true count by less than rho.
  std::size_t approx_tf(DocId d, std::size_t lo, std::size_t hi) const;

  std::uint64_t size_in_bits() const { return 32ull * (ranks_.size() + offset_.size()); }

  void save(Writer& w) const;
  static SampledDocArray load(Reader& r);

 private:
  std::vector<std::uint32_t> ranks_;
  std::vector<std::uint32_t> offset_;  // size D + 1
  std::size_t rho_ = 1;
};

}  // namespace tkdx

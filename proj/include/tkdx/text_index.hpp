#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "tkdx/corpus.hpp"
#include "tkdx/doc_array.hpp"
#include "tkdx/gst.hpp"
#include "tkdx/suffix.hpp"

namespace tkdx {

/// Corpus, concatenated text, suffix structures, suffix-tree topology and the
/// document array: the shared base of every index.
class TextIndex {
 public:
  struct Options {
    DaBackend backend = DaBackend::kPlain;
    std::size_t sample_rate = SampledPredecessor::kDefaultRate;  // csa-sim only
  };

  static std::shared_ptr<const TextIndex> build(Corpus corpus, Options options);
  static std::shared_ptr<const TextIndex> build(Corpus corpus) { return build(std::move(corpus), Options{}); }

  const Corpus& corpus() const { return corpus_; }
  const ConcatText& text() const { return *text_; }
  const SuffixStructures& suffixes() const { return *ss_; }
  const GstTopology& gst() const { return gst_; }
  const DocumentArray& doc_array() const { return da_; }
  const Options& options() const { return options_; }

  std::size_t size() const { return text_->size(); }
  std::size_t doc_count() const { return text_->doc_count(); }

  /// Suffix range and locus of P, nullopt if P does not occur.
  std::optional<PatternLocus> search(std::string_view pattern) const;

  /// Builds another document array over the same text.
  DocumentArray make_doc_array(DaBackend backend, std::size_t sample_rate) const;
  /// D_A[0..N] as a plain vector (index 0 unused).
  std::vector<DocId> doc_ids() const { return compute_document_array(*text_, *ss_); }

  std::shared_ptr<const ConcatText> text_ptr() const { return text_; }
  std::shared_ptr<const SuffixStructures> suffix_ptr() const { return ss_; }

  void save(Writer& w) const;
  static std::shared_ptr<const TextIndex> load(Reader& r);

 private:
  Corpus corpus_;
  std::shared_ptr<const ConcatText> text_;
  std::shared_ptr<const SuffixStructures> ss_;
  GstTopology gst_;
  DocumentArray da_;
  Options options_;
};

}  // namespace tkdx

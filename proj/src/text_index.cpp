#include "tkdx/text_index.hpp"

namespace tkdx {

std::shared_ptr<const TextIndex> TextIndex::build(Corpus corpus, Options options) {
  auto ti = std::make_shared<TextIndex>();
  ti->text_ = std::make_shared<const ConcatText>(ConcatText::build(corpus));
  ti->corpus_ = std::move(corpus);
  ti->ss_ = std::make_shared<const SuffixStructures>(SuffixStructures::build(ti->text_->text(), ti->text_->separator()));
  ti->gst_ = GstTopology::build(*ti->ss_);
  ti->options_ = options;
  ti->da_ = ti->make_doc_array(options.backend, options.sample_rate);
  return ti;
}

std::optional<PatternLocus> TextIndex::search(std::string_view pattern) const {
  return pattern_search(text_->text(), text_->separator(), *ss_, gst_, pattern);
}

DocumentArray TextIndex::make_doc_array(DaBackend backend, std::size_t sample_rate) const {
  switch (backend) {
    case DaBackend::kPlain:
    case DaBackend::kWavelet: {
      auto ids = doc_ids();
      std::span<const DocId> body(ids.data() + 1, ids.size() - 1);
      return backend == DaBackend::kPlain ? DocumentArray::plain(body, doc_count())
                                          : DocumentArray::wavelet(body, doc_count());
    }
    case DaBackend::kCsaSim:
      return DocumentArray::csa_sim(text_, ss_, sample_rate);
  }
  throw std::invalid_argument("unknown document-array backend");
}

void TextIndex::save(Writer& w) const {
  corpus_.save(w);
  ss_->save(w);
  gst_.save(w);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(options_.backend));
  w.put<std::uint64_t>(options_.sample_rate);
  da_.save(w);
}

std::shared_ptr<const TextIndex> TextIndex::load(Reader& r) {
  auto ti = std::make_shared<TextIndex>();
  ti->corpus_ = Corpus::load(r);
  try {
    ti->text_ = std::make_shared<const ConcatText>(ConcatText::build(ti->corpus_));
  } catch (const InputError& e) {
    throw FormatError(std::string("snapshot corpus invalid: ") + e.what());
  }
  ti->ss_ = std::make_shared<const SuffixStructures>(SuffixStructures::load(r));
  if (ti->ss_->size() != ti->text_->size()) throw FormatError("suffix array length differs from text length");
  ti->gst_ = GstTopology::load(r);
  if (ti->gst_.leaf_count() != ti->text_->size()) throw FormatError("suffix tree leaf count differs from text length");
  auto backend = r.get<std::uint8_t>();
  if (backend > 2) throw FormatError("unknown document-array backend tag");
  ti->options_.backend = static_cast<DaBackend>(backend);
  ti->options_.sample_rate = r.get<std::uint64_t>();
  ti->da_ = DocumentArray::load(r, ti->text_, ti->ss_);
  if (ti->da_.size() != ti->text_->size() || ti->da_.backend() != ti->options_.backend) {
    throw FormatError("document array does not match the text");
  }
  return ti;
}

}  // namespace tkdx

#include "tkdx/doc_array.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tkdx {

std::string_view backend_name(DaBackend b) {
  switch (b) {
    case DaBackend::kPlain:
      return "plain";
    case DaBackend::kWavelet:
      return "wavelet";
    case DaBackend::kCsaSim:
      return "csa-sim";
  }
  return "unknown";
}

DaBackend parse_backend(std::string_view name) {
  if (name == "plain") return DaBackend::kPlain;
  if (name == "wavelet") return DaBackend::kWavelet;
  if (name == "csa-sim" || name == "csa_sim") return DaBackend::kCsaSim;
  throw InputError("unknown document-array backend '" + std::string(name) + "'");
}

std::vector<DocId> compute_document_array(const ConcatText& text, const SuffixStructures& ss) {
  std::vector<DocId> da(ss.size() + 1, 0);
  for (std::size_t i = 1; i <= ss.size(); ++i) da[i] = text.doc_of_position(ss.sa[i]);
  return da;
}

// ---------------------------------------------------------------- plain

PlainDocArray::PlainDocArray(std::span<const DocId> da, std::size_t doc_count) : n_(da.size()), docs_(doc_count) {
  if (doc_count > 1) {
    seq_ = IntVector(n_, bits_for(doc_count - 1));
    for (std::size_t i = 0; i < n_; ++i) seq_.set(i, da[i] - 1);
  }
  occ_offset_.assign(doc_count + 1, 0);
  for (auto d : da) {
    if (d < 1 || d > doc_count) throw std::invalid_argument("document id out of range");
    ++occ_offset_[d];
  }
  for (std::size_t d = 1; d <= doc_count; ++d) occ_offset_[d] += occ_offset_[d - 1];
  occ_.assign(n_, 0);
  std::vector<std::uint32_t> fill(occ_offset_.begin(), occ_offset_.end() - 1);
  for (std::size_t i = 0; i < n_; ++i) occ_[fill[da[i] - 1]++] = static_cast<std::uint32_t>(i + 1);
}

DocId PlainDocArray::access(std::size_t i) const {
  if (i < 1 || i > n_) throw std::out_of_range("document array access out of range");
  return docs_ == 1 ? 1 : static_cast<DocId>(seq_.get(i - 1) + 1);
}

std::size_t PlainDocArray::rank(DocId d, std::size_t i) const {
  auto b = occ_.begin() + occ_offset_[d - 1], e = occ_.begin() + occ_offset_[d];
  return static_cast<std::size_t>(std::upper_bound(b, e, static_cast<std::uint32_t>(i)) - b);
}

std::size_t PlainDocArray::select(DocId d, std::size_t j) const {
  if (j < 1 || j > count(d)) return 0;
  return occ_[occ_offset_[d - 1] + j - 1];
}

std::uint64_t PlainDocArray::sequence_bits() const { return static_cast<std::uint64_t>(n_) * ceil_log2(docs_); }

std::uint64_t PlainDocArray::size_in_bits() const {
  return sequence_bits() + 32ull * (occ_.size() + occ_offset_.size());
}

void PlainDocArray::save(Writer& w) const {
  auto at = w.begin_section(Tag::kDocArrayPlain);
  w.put<std::uint64_t>(n_);
  w.put<std::uint64_t>(docs_);
  if (docs_ > 1) seq_.save(w);
  w.end_section(at);
}

PlainDocArray PlainDocArray::load(Reader& r) {
  Reader s = r.section(Tag::kDocArrayPlain);
  auto n = s.get<std::uint64_t>();
  auto docs = s.get<std::uint64_t>();
  if (docs == 0) throw FormatError("document array without documents");
  std::vector<DocId> da(n, 1);
  if (docs > 1) {
    IntVector seq = IntVector::load(s);
    if (seq.size() != n) throw FormatError("document array length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      da[i] = static_cast<DocId>(seq.get(i) + 1);
      if (da[i] > docs) throw FormatError("document id out of range");
    }
  }
  return PlainDocArray(da, docs);
}

// ---------------------------------------------------------------- wavelet

WaveletDocArray::WaveletDocArray(std::span<const DocId> da, std::size_t doc_count)
    : wt_(da, static_cast<std::uint32_t>(doc_count)) {}

void WaveletDocArray::save(Writer& w) const {
  auto at = w.begin_section(Tag::kDocArrayWavelet);
  wt_.save(w);
  w.end_section(at);
}

WaveletDocArray WaveletDocArray::load(Reader& r) {
  Reader s = r.section(Tag::kDocArrayWavelet);
  WaveletDocArray w;
  w.wt_ = WaveletTree::load(s);
  return w;
}

// ---------------------------------------------------------------- csa_sim

CsaSimDocArray::CsaSimDocArray(std::shared_ptr<const ConcatText> text, std::shared_ptr<const SuffixStructures> ss,
                               std::size_t sample_rate)
    : text_(std::move(text)), ss_(std::move(ss)) {
  const std::size_t docs = text_->doc_count();
  local_offset_.assign(docs + 1, 0);
  for (DocId d = 1; d <= docs; ++d) local_offset_[d] = local_offset_[d - 1] + text_->doc_length(d);
  local_sa_.assign(local_offset_.back(), 0);
  local_isa_.assign(local_offset_.back(), 0);
  std::vector<std::uint64_t> keys(local_offset_.back(), 0);
  for (DocId d = 1; d <= docs; ++d) {
    std::string_view local = text_->text().substr(text_->doc_start(d) - 1, text_->doc_length(d));
    auto sa0 = suffix_array_sais(remap_with_separator(local, text_->separator()), 257);
    for (std::size_t j = 0; j < sa0.size(); ++j) {
      local_sa_[local_offset_[d - 1] + j] = sa0[j] + 1;
      local_isa_[local_offset_[d - 1] + sa0[j]] = static_cast<std::uint32_t>(j + 1);
    }
    for (std::size_t j = 1; j <= sa0.size(); ++j) keys[local_offset_[d - 1] + j - 1] = global_leaf(d, j);
  }
  check_order();
  sampled_ = SampledPredecessor(keys, local_offset_, sample_rate);
}

void CsaSimDocArray::check_order() const {
  for (DocId d = 1; d <= text_->doc_count(); ++d) {
    std::size_t len = local_offset_[d] - local_offset_[d - 1];
    for (std::size_t j = 2; j <= len; ++j) {
      if (global_leaf(d, j - 1) >= global_leaf(d, j)) {
        throw std::logic_error("local suffix order of document " + std::to_string(d) + " disagrees with global order");
      }
    }
  }
}

std::size_t CsaSimDocArray::select(DocId d, std::size_t j) const {
  if (j < 1 || j > count(d)) return 0;
  return global_leaf(d, j);
}

std::size_t CsaSimDocArray::rank(DocId d, std::size_t i) const {
  std::size_t first = local_offset_[d - 1];
  return sampled_.count_le(d - 1, i, [&](std::size_t g) { return global_leaf(d, g - first + 1); });
}

std::size_t CsaSimDocArray::chain(std::size_t i) const {
  std::size_t a = ss_->sa[i];
  DocId d = text_->doc_of_position(a);
  std::size_t local_pos = a - text_->doc_start(d) + 1;
  std::size_t j = local_isa_[local_offset_[d - 1] + local_pos - 1];
  return j == 1 ? 0 : global_leaf(d, j - 1);
}

std::uint64_t CsaSimDocArray::size_in_bits() const {
  return 32ull * (local_sa_.size() + local_isa_.size() + local_offset_.size()) + sampled_.size_in_bits();
}

void CsaSimDocArray::save(Writer& w) const {
  auto at = w.begin_section(Tag::kDocArrayCsaSim);
  w.put<std::uint64_t>(sampled_.rate());
  w.put_vector(local_sa_);
  w.put_vector(local_offset_);
  w.end_section(at);
}

CsaSimDocArray CsaSimDocArray::load(Reader& r, std::shared_ptr<const ConcatText> text,
                                    std::shared_ptr<const SuffixStructures> ss) {
  Reader s = r.section(Tag::kDocArrayCsaSim);
  auto rate = s.get<std::uint64_t>();
  CsaSimDocArray c;
  c.text_ = std::move(text);
  c.ss_ = std::move(ss);
  c.local_sa_ = s.get_vector<std::uint32_t>();
  c.local_offset_ = s.get_vector<std::uint32_t>();
  const std::size_t docs = c.text_->doc_count();
  if (rate < 1 || c.local_offset_.size() != docs + 1 || c.local_offset_.back() != c.local_sa_.size() ||
      c.local_sa_.size() != c.ss_->size()) {
    throw FormatError("csa-sim payload shape mismatch");
  }
  c.local_isa_.assign(c.local_sa_.size(), 0);
  std::vector<std::uint64_t> keys(c.local_sa_.size(), 0);
  for (DocId d = 1; d <= docs; ++d) {
    std::size_t len = c.local_offset_[d] - c.local_offset_[d - 1];
    if (len != c.text_->doc_length(d)) throw FormatError("csa-sim document length mismatch");
    for (std::size_t j = 1; j <= len; ++j) {
      std::uint32_t p = c.local_sa_[c.local_offset_[d - 1] + j - 1];
      if (p < 1 || p > len) throw FormatError("csa-sim local suffix out of range");
      c.local_isa_[c.local_offset_[d - 1] + p - 1] = static_cast<std::uint32_t>(j);
      keys[c.local_offset_[d - 1] + j - 1] = c.global_leaf(d, j);
    }
  }
  c.check_order();
  c.sampled_ = SampledPredecessor(keys, c.local_offset_, rate);
  return c;
}

// ---------------------------------------------------------------- facade

DocumentArray DocumentArray::plain(std::span<const DocId> da, std::size_t doc_count) {
  DocumentArray a;
  a.impl_ = PlainDocArray(da, doc_count);
  a.docs_ = doc_count;
  return a;
}

DocumentArray DocumentArray::wavelet(std::span<const DocId> da, std::size_t doc_count) {
  DocumentArray a;
  a.impl_ = WaveletDocArray(da, doc_count);
  a.docs_ = doc_count;
  return a;
}

DocumentArray DocumentArray::csa_sim(std::shared_ptr<const ConcatText> text,
                                     std::shared_ptr<const SuffixStructures> ss, std::size_t sample_rate) {
  DocumentArray a;
  a.docs_ = text->doc_count();
  a.impl_ = CsaSimDocArray(std::move(text), std::move(ss), sample_rate);
  return a;
}

std::size_t DocumentArray::size() const {
  return std::visit([](const auto& x) { return x.size(); }, impl_);
}

void DocumentArray::check_doc(DocId d) const {
  if (d < 1 || d > docs_) throw std::out_of_range("document id " + std::to_string(d) + " out of range");
}

DocId DocumentArray::access(std::size_t i) const {
  if (i < 1 || i > size()) throw std::out_of_range("document array access out of range");
  return std::visit([i](const auto& x) { return x.access(i); }, impl_);
}

std::size_t DocumentArray::rank(DocId d, std::size_t i) const {
  check_doc(d);
  if (i > size()) throw std::out_of_range("document array rank out of range");
  if (i == 0) return 0;
  return std::visit([d, i](const auto& x) { return x.rank(d, i); }, impl_);
}

std::int64_t DocumentArray::select(DocId d, std::size_t j) const {
  check_doc(d);
  std::size_t p = std::visit([d, j](const auto& x) { return x.select(d, j); }, impl_);
  return p == 0 ? -1 : static_cast<std::int64_t>(p);
}

std::size_t DocumentArray::count(DocId d) const {
  check_doc(d);
  return std::visit([d](const auto& x) { return x.count(d); }, impl_);
}

std::size_t DocumentArray::chain(std::size_t i) const {
  if (i < 1 || i > size()) throw std::out_of_range("chain position out of range");
  if (const auto* c = std::get_if<CsaSimDocArray>(&impl_)) return c->chain(i);
  DocId d = access(i);
  std::size_t r = rank(d, i);
  return r <= 1 ? 0 : static_cast<std::size_t>(select(d, r - 1));
}

std::uint64_t DocumentArray::size_in_bits() const {
  return std::visit([](const auto& x) { return x.size_in_bits(); }, impl_);
}

void DocumentArray::save(Writer& w) const {
  w.put<std::uint8_t>(static_cast<std::uint8_t>(backend()));
  w.put<std::uint64_t>(docs_);
  std::visit([&w](const auto& x) { x.save(w); }, impl_);
}

DocumentArray DocumentArray::load(Reader& r, std::shared_ptr<const ConcatText> text,
                                  std::shared_ptr<const SuffixStructures> ss) {
  auto tag = r.get<std::uint8_t>();
  DocumentArray a;
  a.docs_ = r.get<std::uint64_t>();
  switch (static_cast<DaBackend>(tag)) {
    case DaBackend::kPlain:
      a.impl_ = PlainDocArray::load(r);
      break;
    case DaBackend::kWavelet:
      a.impl_ = WaveletDocArray::load(r);
      break;
    case DaBackend::kCsaSim:
      a.impl_ = CsaSimDocArray::load(r, std::move(text), std::move(ss));
      break;
    default:
      throw FormatError("unknown document-array backend tag " + std::to_string(tag));
  }
  if (a.docs_ == 0) throw FormatError("document array without documents");
  return a;
}

std::size_t term_frequency(const DocumentArray& da, const GstTopology& gst, NodeId v, DocId d) {
  return da.range_count(d, gst.lmost(v), gst.rmost(v));
}

// ---------------------------------------------------------------- listing

ChainListing::ChainListing(const DocumentArray& da) {
  std::vector<std::uint64_t> chain(da.size());
  for (std::size_t i = 1; i <= da.size(); ++i) chain[i - 1] = da.chain(i);
  rmq_ = RmqStructure(chain, RmqMode::kMin);
}

void ChainListing::save(Writer& w) const {
  auto at = w.begin_section(Tag::kChainListing);
  rmq_.save(w);
  w.end_section(at);
}

ChainListing ChainListing::load(Reader& r) {
  Reader s = r.section(Tag::kChainListing);
  ChainListing c;
  c.rmq_ = RmqStructure::load(s);
  return c;
}

// ---------------------------------------------------------------- sampled

SampledDocArray::SampledDocArray(const DocumentArray& da, std::size_t rho) : rho_(rho) {
  if (rho < 1) throw std::invalid_argument("sampling rate rho must be positive");
  const std::size_t docs = da.doc_count();
  std::vector<std::uint32_t> seen(docs + 1, 0);
  std::vector<std::vector<std::uint32_t>> per(docs + 1);
  for (std::size_t i = 1; i <= da.size(); ++i) {
    DocId d = da.access(i);
    if (++seen[d] % rho == 0) per[d].push_back(static_cast<std::uint32_t>(i));
  }
  offset_.assign(docs + 1, 0);
  for (DocId d = 1; d <= docs; ++d) {
    offset_[d] = offset_[d - 1] + static_cast<std::uint32_t>(per[d].size());
    ranks_.insert(ranks_.end(), per[d].begin(), per[d].end());
  }
}

std::size_t SampledDocArray::approx_tf(DocId d, std::size_t lo, std::size_t hi) const {
  if (hi < lo) return 0;
  auto b = ranks_.begin() + offset_[d - 1], e = ranks_.begin() + offset_[d];
  auto from = std::lower_bound(b, e, static_cast<std::uint32_t>(lo));
  auto to = std::upper_bound(from, e, static_cast<std::uint32_t>(hi));
  return rho_ * static_cast<std::size_t>(to - from);
}

void SampledDocArray::save(Writer& w) const {
  auto at = w.begin_section(Tag::kSampledDocArray);
  w.put<std::uint64_t>(rho_);
  w.put_vector(ranks_);
  w.put_vector(offset_);
  w.end_section(at);
}

SampledDocArray SampledDocArray::load(Reader& r) {
  Reader s = r.section(Tag::kSampledDocArray);
  SampledDocArray a;
  a.rho_ = s.get<std::uint64_t>();
  a.ranks_ = s.get_vector<std::uint32_t>();
  a.offset_ = s.get_vector<std::uint32_t>();
  if (a.rho_ < 1 || a.offset_.empty() || a.offset_.back() != a.ranks_.size()) {
    throw FormatError("sampled document array shape mismatch");
  }
  return a;
}

}  // namespace tkdx

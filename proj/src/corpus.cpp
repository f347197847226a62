#include "tkdx/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tkdx {

void Corpus::save(Writer& w) const {
  auto at = w.begin_section(Tag::kCorpus);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(separator));
  w.put<std::uint64_t>(documents.size());
  for (const auto& d : documents) w.put_bytes(d);
  w.end_section(at);
}

Corpus Corpus::load(Reader& r) {
  Reader s = r.section(Tag::kCorpus);
  Corpus c;
  c.separator = static_cast<char>(s.get<std::uint8_t>());
  auto n = s.get<std::uint64_t>();
  if (n > s.remaining()) throw FormatError("corpus document count exceeds payload");
  c.documents.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) c.documents.push_back(s.get_bytes());
  return c;
}

Corpus parse_lines_corpus(std::string_view text, char separator) {
  Corpus c;
  c.separator = separator;
  std::string cur;
  bool pending = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '\n') {
      c.documents.push_back(std::move(cur));
      cur.clear();
      pending = false;
      continue;
    }
    pending = true;
    if (ch == '\\' && i + 1 < text.size()) {
      char nx = text[i + 1];
      if (nx == 'n') {
        cur.push_back('\n');
        ++i;
        continue;
      }
      if (nx == '\\') {
        cur.push_back('\\');
        ++i;
        continue;
      }
    }
    if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
    cur.push_back(ch);
  }
  if (pending) c.documents.push_back(std::move(cur));
  return c;
}

Corpus load_lines_corpus(const std::filesystem::path& path, char separator) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lines_corpus(ss.str(), separator);
}

Corpus load_dir_corpus(const std::filesystem::path& dir, char separator) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw InputError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  Corpus c;
  c.separator = separator;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw InputError("cannot read document " + f.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    c.documents.push_back(ss.str());
  }
  return c;
}

ConcatText ConcatText::build(const Corpus& corpus) {
  if (corpus.documents.empty()) throw InputError("corpus contains no documents");
  ConcatText ct;
  ct.separator_ = corpus.separator;
  std::size_t total = corpus.documents.size();
  for (const auto& d : corpus.documents) total += d.size();
  if (total >= 0xFFFFFFFFull) throw InputError("corpus too large (text length must be < 2^32)");
  ct.text_.reserve(total);
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& d = corpus.documents[i];
    if (d.find(corpus.separator) != std::string::npos) {
      throw InputError("document " + std::to_string(i + 1) + " contains the separator byte");
    }
    ct.starts_.push_back(ct.text_.size() + 1);
    ct.text_ += d;
    ct.text_.push_back(corpus.separator);
  }
  ct.boundaries_ = BitVector(ct.text_.size());
  for (std::size_t a = 1; a <= ct.text_.size(); ++a) {
    if (ct.text_[a - 1] == corpus.separator) ct.boundaries_.set(a);
  }
  ct.boundaries_.build_index();
  return ct;
}

std::size_t ConcatText::doc_length(DocId d) const {
  std::size_t end = d < starts_.size() ? starts_[d] : text_.size() + 1;
  return end - starts_[d - 1];
}

DocId ConcatText::doc_of_position(std::size_t a) const {
  if (a < 1 || a > text_.size()) throw std::out_of_range("text position out of range");
  auto r = static_cast<DocId>(boundaries_.rank1(a));
  return text_[a - 1] == separator_ ? r : r + 1;
}

}  // namespace tkdx

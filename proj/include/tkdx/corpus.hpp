#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tkdx/bits.hpp"

namespace tkdx {

using DocId = std::uint32_t;

/// Raised for unusable user input: malformed corpora, bad patterns, bad flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr char kDefaultSeparator = '#';

/// Document collection d_1..d_D (ids are 1-based).
struct Corpus {
  std::vector<std::string> documents;
  char separator = kDefaultSeparator;

  std::size_t size() const { return documents.size(); }

  void save(Writer& w) const;
  static Corpus load(Reader& r);
};

/// One document per line; `\n` and `\\` escape a newline and a backslash.
Corpus load_lines_corpus(const std::filesystem::path& path, char separator = kDefaultSeparator);
/// One document per regular file, ordered by file name.
Corpus load_dir_corpus(const std::filesystem::path& dir, char separator = kDefaultSeparator);
/// Parses the text of a lines-format corpus.
Corpus parse_lines_corpus(std::string_view text, char separator = kDefaultSeparator);

/// T = d_1 # d_2 # ... # d_D # with a boundary bit vector (B[i] = 1 iff T[i] = #).
class ConcatText {
 public:
  ConcatText() = default;

  /// Throws InputError for an empty corpus or a document containing the separator.
  static ConcatText build(const Corpus& corpus);

  std::string_view text() const { return text_; }
  /// 1-based character access.
  char at(std::size_t a) const { return text_[a - 1]; }
  std::size_t size() const { return text_.size(); }
  std::size_t doc_count() const { return starts_.size(); }
  char separator() const { return separator_; }
  const BitVector& boundaries() const { return boundaries_; }

  /// 1-based position of the first character of document d (its separator if d is empty).
  std::size_t doc_start(DocId d) const { return starts_[d - 1]; }
  /// Length of document d including its terminating separator.
  std::size_t doc_length(DocId d) const;

  /// Document owning text position a; a separator belongs to the document it terminates.
  DocId doc_of_position(std::size_t a) const;

  /// Sum of document lengths without separators.
  std::size_t content_length() const { return text_.size() - starts_.size(); }

 private:
  std::string text_;
  BitVector boundaries_;
  std::vector<std::size_t> starts_;
  char separator_ = kDefaultSeparator;
};

}  // namespace tkdx

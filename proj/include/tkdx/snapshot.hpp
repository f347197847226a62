#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "tkdx/encoded_index.hpp"
#include "tkdx/grouped.hpp"
#include "tkdx/linear_index.hpp"
#include "tkdx/text_index.hpp"

namespace tkdx {

enum class IndexKind : std::uint8_t { kLinear = 0, kEncoded = 1, kGrouped = 2 };

std::string_view kind_name(IndexKind k);
/// Accepts "linear", "encoded", "grouped". Throws InputError otherwise.
IndexKind parse_kind(std::string_view name);

struct BuildOptions {
  IndexKind kind = IndexKind::kLinear;
  std::uint32_t pi = 4;
  EncodedMode mode = EncodedMode::kT1;
  std::size_t rho = 4;
  std::size_t sample_rate = 64;
  DaBackend backend = DaBackend::kPlain;
};

/// Fixed-size snapshot header; see docs/snapshot_format.md.
struct SnapshotHeader {
  static constexpr char kMagic[4] = {'T', 'K', 'D', 'X'};
  static constexpr std::uint16_t kVersion = 1;

  std::uint16_t version = kVersion;
  IndexKind kind = IndexKind::kLinear;
  EncodedMode mode = EncodedMode::kT1;
  std::uint32_t pi = 0;   // 0 for grouped
  std::uint32_t rho = 0;  // 0 unless encoded t2
  std::uint32_t sample_rate = 0;
  DaBackend text_backend = DaBackend::kPlain;
  DaBackend index_backend = DaBackend::kPlain;
  std::uint64_t docs = 0;
  std::uint64_t length = 0;
};

/// A text index plus one top-k index over it. Immutable once built.
class Snapshot {
 public:
  /// Throws InputError for an unusable corpus.
  static Snapshot build(Corpus corpus, const BuildOptions& options);

  const SnapshotHeader& header() const { return header_; }
  const TextIndex& text() const { return *text_; }
  std::shared_ptr<const TextIndex> text_ptr() const { return text_; }
  IndexKind kind() const { return header_.kind; }

  const LinearIndex* linear() const { return std::get_if<LinearIndex>(&index_); }
  const EncodedIndex* encoded() const { return std::get_if<EncodedIndex>(&index_); }
  const GroupedIndex* grouped() const { return std::get_if<GroupedIndex>(&index_); }

  TopkResult query(std::string_view pattern, std::size_t k, QueryCounters* counters = nullptr) const;
  /// I-entries of the linear or encoded index, 0 for grouped.
  std::size_t entry_count() const;
  SpaceReport space_report() const;

  /// Header, text payload, index payload, then an FNV-1a 64 checksum of all preceding bytes.
  std::string serialize() const;
  /// Throws FormatError on a bad magic, version, checksum or payload.
  static Snapshot deserialize(std::string_view bytes);

  void save_file(const std::filesystem::path& path) const;
  /// Throws InputError when the file cannot be read, FormatError when it is malformed.
  static Snapshot load_file(const std::filesystem::path& path);

 private:
  SnapshotHeader header_;
  std::shared_ptr<const TextIndex> text_;
  std::variant<LinearIndex, EncodedIndex, GroupedIndex> index_;
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tkdx

#include "tkdx/snapshot.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace tkdx {

std::string_view kind_name(IndexKind k) {
  switch (k) {
    case IndexKind::kLinear:
      return "linear";
    case IndexKind::kEncoded:
      return "encoded";
    case IndexKind::kGrouped:
      return "grouped";
  }
  return "?";
}

IndexKind parse_kind(std::string_view name) {
  if (name == "linear") return IndexKind::kLinear;
  if (name == "encoded") return IndexKind::kEncoded;
  if (name == "grouped") return IndexKind::kGrouped;
  throw InputError("unknown index kind '" + std::string(name) + "'");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Snapshot Snapshot::build(Corpus corpus, const BuildOptions& o) {
  if (o.pi < 1) throw InputError("pi must be positive");
  if (o.rho < 1) throw InputError("rho must be positive");
  if (o.sample_rate < 1 || o.sample_rate > 0xFFFFFFFFu) throw InputError("sample rate must be positive");
  if (o.rho > 0xFFFFFFFFu) throw InputError("rho out of range");
  Snapshot s;
  s.text_ = TextIndex::build(std::move(corpus), {o.backend, o.sample_rate});
  auto& h = s.header_;
  h.kind = o.kind;
  h.sample_rate = static_cast<std::uint32_t>(o.sample_rate);
  h.text_backend = o.backend;
  h.index_backend = o.backend;
  h.docs = s.text_->doc_count();
  h.length = s.text_->size();
  switch (o.kind) {
    case IndexKind::kLinear:
      h.pi = o.pi;
      s.index_ = LinearIndex::build(s.text_, {o.pi, o.sample_rate, {}});
      break;
    case IndexKind::kEncoded: {
      h.pi = o.pi;
      h.mode = o.mode;
      auto li = LinearIndex::build(s.text_, {o.pi, o.sample_rate, {}});
      EncodedIndex::Options eo{o.mode, o.rho, o.backend, o.sample_rate};
      auto ei = EncodedIndex::build(li, eo);
      if (ei.sampled_tf()) h.rho = static_cast<std::uint32_t>(o.rho);
      h.index_backend = ei.options().backend;
      s.index_ = std::move(ei);
      break;
    }
    case IndexKind::kGrouped:
      s.index_ = GroupedIndex::build(s.text_);
      break;
  }
  return s;
}

TopkResult Snapshot::query(std::string_view pattern, std::size_t k, QueryCounters* counters) const {
  return std::visit([&](const auto& idx) { return idx.query(pattern, k, counters); }, index_);
}

std::size_t Snapshot::entry_count() const {
  if (auto* li = linear()) return li->entry_count();
  if (auto* ei = encoded()) return ei->entry_count();
  return 0;
}

SpaceReport Snapshot::space_report() const {
  SpaceReport out{
      {"text.suffix_structures", text_->suffixes().size_in_bits()},
      {"text.gst", text_->gst().size_in_bits()},
      {"text.doc_array", text_->doc_array().size_in_bits()},
  };
  auto more = std::visit([](const auto& idx) { return idx.space_report(); }, index_);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

std::string Snapshot::serialize() const {
  Writer w;
  for (char c : SnapshotHeader::kMagic) w.put<std::uint8_t>(static_cast<std::uint8_t>(c));
  w.put<std::uint16_t>(header_.version);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(header_.kind));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(header_.mode));
  w.put<std::uint32_t>(header_.pi);
  w.put<std::uint32_t>(header_.rho);
  w.put<std::uint32_t>(header_.sample_rate);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(header_.text_backend));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(header_.index_backend));
  w.put<std::uint64_t>(header_.docs);
  w.put<std::uint64_t>(header_.length);
  text_->save(w);
  std::visit([&](const auto& idx) { idx.save(w); }, index_);
  std::string bytes = w.take();
  Writer tail;
  tail.put<std::uint64_t>(fnv1a64(bytes));
  bytes += tail.bytes();
  return bytes;
}

Snapshot Snapshot::deserialize(std::string_view bytes) {
  if (bytes.size() < 4 + 8 || bytes.substr(0, 4) != std::string_view(SnapshotHeader::kMagic, 4)) {
    throw FormatError("not a TKDX snapshot");
  }
  std::string_view body = bytes.substr(0, bytes.size() - 8);
  Reader tail(bytes.substr(bytes.size() - 8));
  if (tail.get<std::uint64_t>() != fnv1a64(body)) throw FormatError("snapshot checksum mismatch");
  Reader r(body.substr(4));
  Snapshot s;
  auto& h = s.header_;
  h.version = r.get<std::uint16_t>();
  if (h.version != SnapshotHeader::kVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(h.version));
  }
  auto kind = r.get<std::uint8_t>();
  auto mode = r.get<std::uint8_t>();
  if (kind > 2 || mode > 2) throw FormatError("unknown index kind or mode");
  h.kind = static_cast<IndexKind>(kind);
  h.mode = static_cast<EncodedMode>(mode);
  h.pi = r.get<std::uint32_t>();
  h.rho = r.get<std::uint32_t>();
  h.sample_rate = r.get<std::uint32_t>();
  auto tb = r.get<std::uint8_t>(), ib = r.get<std::uint8_t>();
  if (tb > 2 || ib > 2) throw FormatError("unknown document-array backend");
  h.text_backend = static_cast<DaBackend>(tb);
  h.index_backend = static_cast<DaBackend>(ib);
  h.docs = r.get<std::uint64_t>();
  h.length = r.get<std::uint64_t>();
  s.text_ = TextIndex::load(r);
  if (s.text_->doc_count() != h.docs || s.text_->size() != h.length) {
    throw FormatError("snapshot header disagrees with its text payload");
  }
  switch (h.kind) {
    case IndexKind::kLinear:
      s.index_ = LinearIndex::load(r, s.text_);
      break;
    case IndexKind::kEncoded:
      s.index_ = EncodedIndex::load(r, s.text_);
      break;
    case IndexKind::kGrouped:
      s.index_ = GroupedIndex::load(r, s.text_);
      break;
  }
  if (!r.done()) throw FormatError("trailing bytes after snapshot payload");
  return s;
}

void Snapshot::save_file(const std::filesystem::path& path) const {
  std::string bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

Snapshot Snapshot::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace tkdx

#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "tkdx/snapshot.hpp"

using namespace tkdx;

namespace {

Corpus corpus_a() { return Corpus{{"abab", "ab", "b"}, '#'}; }

std::vector<BuildOptions> all_variants() {
  std::vector<BuildOptions> v;
  for (std::uint32_t pi : {1u, 3u}) v.push_back({IndexKind::kLinear, pi});
  for (auto m : {EncodedMode::kT1, EncodedMode::kT1Stripped, EncodedMode::kT2}) {
    BuildOptions o{IndexKind::kEncoded, 2, m, 3, 4, DaBackend::kWavelet};
    v.push_back(o);
  }
  v.push_back({IndexKind::kGrouped});
  return v;
}

}  // namespace

TEST(Snapshot, CorpusAHeader) {
  auto s = Snapshot::build(corpus_a(), {});
  auto back = Snapshot::deserialize(s.serialize());
  EXPECT_EQ(back.header().length, 10u);
  EXPECT_EQ(back.header().docs, 3u);
  EXPECT_EQ(back.query("ab", 2), (TopkResult{{1, 2}, {2, 1}}));
}

TEST(Snapshot, RoundTripAllVariants) {
  std::mt19937_64 rng(501);
  auto c = oracle::random_corpus(rng, 6, 700, 3);
  auto pats = oracle::all_substrings(c);
  for (const auto& o : all_variants()) {
    auto s = Snapshot::build(c, o);
    std::string bytes = s.serialize();
    auto back = Snapshot::deserialize(bytes);
    EXPECT_EQ(back.kind(), o.kind);
    EXPECT_EQ(back.serialize(), bytes);
    for (const auto& p : pats) {
      if (p.size() > 5) continue;
      ASSERT_EQ(back.query(p, 3), s.query(p, 3)) << kind_name(o.kind) << " " << p;
    }
  }
}

TEST(Snapshot, BuildIsDeterministic) {
  std::mt19937_64 rng(511);
  auto c = oracle::random_corpus(rng, 4, 400, 4);
  for (const auto& o : all_variants()) EXPECT_EQ(Snapshot::build(c, o).serialize(), Snapshot::build(c, o).serialize());
}

TEST(Snapshot, CorruptionDetected) {
  auto bytes = Snapshot::build(corpus_a(), {IndexKind::kEncoded}).serialize();
  for (std::size_t at : {std::size_t{5}, bytes.size() / 2, bytes.size() - 9}) {
    std::string bad = bytes;
    bad[at] = static_cast<char>(bad[at] ^ 0x40);
    EXPECT_THROW(Snapshot::deserialize(bad), FormatError) << at;
  }
  EXPECT_THROW(Snapshot::deserialize(bytes.substr(0, bytes.size() - 1)), FormatError);
  EXPECT_THROW(Snapshot::deserialize("TKDY"), FormatError);
  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(Snapshot::deserialize(magic), FormatError);
}

TEST(Snapshot, VersionChecked) {
  auto bytes = Snapshot::build(corpus_a(), {}).serialize();
  bytes[4] = 9;  // version low byte
  std::string body = bytes.substr(0, bytes.size() - 8);
  Writer tail;
  tail.put<std::uint64_t>(fnv1a64(body));
  EXPECT_THROW(Snapshot::deserialize(body + tail.bytes()), FormatError);
}

TEST(Snapshot, InputErrors) {
  EXPECT_THROW(Snapshot::build(Corpus{{}, '#'}, {}), InputError);
  EXPECT_THROW(Snapshot::build(Corpus{{"a#b"}, '#'}, {}), InputError);
  BuildOptions o;
  o.pi = 0;
  EXPECT_THROW(Snapshot::build(corpus_a(), o), InputError);
  EXPECT_THROW(parse_kind("tree"), InputError);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

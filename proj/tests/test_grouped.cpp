#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "tkdx/grouped.hpp"

using namespace tkdx;

namespace {

Corpus corpus_a() { return Corpus{{"abab", "ab", "b"}, '#'}; }

TopkResult to_rows(const oracle::Ranking& r) {
  TopkResult out;
  for (auto& [d, tf] : r) out.push_back({d, tf});
  return out;
}

}  // namespace

TEST(BruteForce, CorpusA) {
  auto ti = TextIndex::build(corpus_a());
  EXPECT_EQ(brute_force_topk(*ti, "ab", 10), (TopkResult{{1, 2}, {2, 1}}));
  EXPECT_EQ(brute_force_topk(*ti, "b", 3), (TopkResult{{1, 2}, {2, 1}, {3, 1}}));
  EXPECT_TRUE(brute_force_topk(*ti, "aa", 3).empty());
  EXPECT_TRUE(brute_force_topk(*ti, "ab", 0).empty());
}

TEST(BruteForce, MatchesStringCounting) {
  std::mt19937_64 rng(401);
  for (int it = 0; it < 10; ++it) {
    auto c = oracle::random_corpus(rng, 1 + rng() % 7, 1 + rng() % 300, 2 + rng() % 3);
    for (auto backend : {DaBackend::kPlain, DaBackend::kWavelet, DaBackend::kCsaSim}) {
      auto ti = TextIndex::build(c, {backend, 4});
      for (const auto& p : oracle::all_substrings(c)) {
        if (p.size() > 8) continue;
        ASSERT_EQ(brute_force_topk(*ti, p, 3), to_rows(oracle::topk(c, p, 3))) << p;
      }
    }
  }
}

TEST(Selection, MatchesSorting) {
  std::mt19937_64 rng(411);
  for (int it = 0; it < 2000; ++it) {
    std::size_t n = 1 + rng() % 200;
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = rng() % (it % 2 ? 5 : 100000);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::size_t k = 1 + rng() % n;
    ASSERT_EQ(select_kth_largest(v, k), sorted[k - 1]);
  }
  std::vector<std::uint64_t> empty;
  EXPECT_THROW(select_kth_largest(empty, 1), std::out_of_range);
}

TEST(GroupedIndex, GroupSize) {
  EXPECT_EQ(GroupedIndex::group_size(1, 1, 1000), 1u);
  EXPECT_EQ(GroupedIndex::group_size(4, 3, 2), 1u);
  // log2 8 = 3, log2 log2 65536 = 4
  EXPECT_EQ(GroupedIndex::group_size(1, 8, 65536), 12u);
  EXPECT_EQ(GroupedIndex::group_size(2, 8, 65536), 24u);
}

TEST(GroupedIndex, MarkedSetClosedAndSparse) {
  std::mt19937_64 rng(421);
  for (int it = 0; it < 10; ++it) {
    auto c = oracle::random_corpus(rng, 2 + rng() % 7, 50 + rng() % 400, 2 + rng() % 3);
    auto ti = TextIndex::build(c);
    auto gi = GroupedIndex::build(ti);
    const auto& g = ti->gst();
    ASSERT_GE(std::size_t{1} << (gi.levels().size() - 1), ti->doc_count());
    for (const auto& lv : gi.levels()) {
      const auto& m = lv.marked;
      for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
          ASSERT_TRUE(std::binary_search(m.begin(), m.end(), g.lca(m[i], m[j])));
        }
      }
      std::size_t groups = (ti->size() + lv.g - 1) / lv.g;
      EXPECT_LE(m.size(), 2 * groups);
    }
  }
}

TEST(GroupedIndex, StoredListsExact) {
  std::mt19937_64 rng(431);
  for (int it = 0; it < 8; ++it) {
    auto c = oracle::random_corpus(rng, 1 + rng() % 9, 20 + rng() % 500, 2 + rng() % 3);
    auto ti = TextIndex::build(c);
    auto gi = GroupedIndex::build(ti);
    const auto& g = ti->gst();
    auto ids = ti->doc_ids();
    for (const auto& lv : gi.levels()) {
      for (std::size_t j = 0; j < lv.marked.size(); ++j) {
        NodeId v = lv.marked[j];
        oracle::Ranking want;
        std::vector<std::size_t> cnt(ti->doc_count() + 1, 0);
        for (std::size_t i = g.lmost(v); i <= g.rmost(v); ++i) ++cnt[ids[i]];
        for (DocId d = 1; d <= ti->doc_count(); ++d) {
          if (cnt[d]) want.emplace_back(d, cnt[d]);
        }
        oracle::sort_ranking(want);
        if (lv.q >= ti->doc_count()) ASSERT_EQ(lv.docs_of(j).size(), want.size());
        if (want.size() > lv.q) want.resize(lv.q);
        oracle::Ranking got;
        for (std::size_t e = 0; e < lv.docs_of(j).size(); ++e) got.emplace_back(lv.docs_of(j)[e], lv.tfs_of(j)[e]);
        ASSERT_EQ(got, want);
      }
    }
  }
}

TEST(GroupedIndex, CorpusA) {
  auto ti = TextIndex::build(corpus_a());
  auto gi = GroupedIndex::build(ti);
  EXPECT_EQ(gi.query("b", 2), (TopkResult{{1, 2}, {2, 1}}));
  EXPECT_EQ(gi.query("ab", 2), (TopkResult{{1, 2}, {2, 1}}));
  EXPECT_EQ(gi.query("b", 3), (TopkResult{{1, 2}, {2, 1}, {3, 1}}));
  EXPECT_TRUE(gi.query("abb", 3).empty());
  EXPECT_TRUE(gi.query("b", 0).empty());
}

TEST(GroupedIndex, MarkedLocusHasEmptyFringe) {
  std::mt19937_64 rng(441);
  auto c = oracle::random_corpus(rng, 6, 800, 3);
  auto ti = TextIndex::build(c);
  auto gi = GroupedIndex::build(ti);
  std::size_t hits = 0;
  for (const auto& p : oracle::all_substrings(c)) {
    if (p.size() > 6) continue;
    auto loc = ti->search(p);
    for (std::size_t k : {1u, 2u, 4u}) {
      std::size_t lv = gi.level_for(k);
      if (gi.highest_marked(lv, loc->locus) != loc->locus) continue;
      ++hits;
      QueryCounters qc;
      ASSERT_EQ(gi.query(p, k, &qc), to_rows(oracle::topk(c, p, k)));
      ASSERT_EQ(qc.fringe_leaves, 0u);
      ASSERT_EQ(qc.decode_calls, 0u);
    }
  }
  EXPECT_GT(hits, 0u);
}

TEST(GroupedIndex, OracleExhaustiveSmall) {
  std::mt19937_64 rng(451);
  for (int it = 0; it < 20; ++it) {
    auto c = oracle::random_corpus(rng, 1 + rng() % 8, 1 + rng() % 300, 2 + rng() % 3);
    auto ti = TextIndex::build(c);
    auto gi = GroupedIndex::build(ti);
    for (const auto& p : oracle::all_substrings(c)) {
      for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{3}, c.size(), c.size() + 5}) {
        QueryCounters qc;
        ASSERT_EQ(gi.query(p, k, &qc), to_rows(oracle::topk(c, p, k))) << p << " k=" << k;
        ASSERT_LE(qc.fringe_leaves, 2 * gi.levels()[gi.level_for(k)].g);
      }
    }
  }
}

TEST(GroupedIndex, SaveLoadRoundTrip) {
  std::mt19937_64 rng(461);
  auto c = oracle::random_corpus(rng, 7, 900, 4);
  auto ti = TextIndex::build(c);
  auto gi = GroupedIndex::build(ti);
  Writer w;
  gi.save(w);
  Reader r(w.bytes());
  auto back = GroupedIndex::load(r, ti);
  EXPECT_TRUE(r.done());
  for (const auto& p : oracle::all_substrings(c)) {
    if (p.size() > 5) continue;
    for (std::size_t k : {1u, 3u, 9u}) ASSERT_EQ(back.query(p, k), gi.query(p, k));
  }
}

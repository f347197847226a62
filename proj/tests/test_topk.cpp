#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "tkdx/topk.hpp"

using namespace tkdx;

namespace {

struct ArrayFixture {
  std::vector<std::uint64_t> a;
  RmqStructure rmq;

  explicit ArrayFixture(std::vector<std::uint64_t> v) : a(std::move(v)), rmq(a, RmqMode::kMax) {}

  std::vector<RangeHit> run(const std::vector<TaggedRange>& ranges, std::size_t k, QueryCounters* c = nullptr) {
    auto arg = [&](std::uint32_t, std::size_t lo, std::size_t hi) {
      return rmq.query(lo, hi, std::span<const std::uint64_t>(a));
    };
    auto val = [&](std::uint32_t, std::size_t p) { return a[p - 1]; };
    return multi_range_topk(std::span<const TaggedRange>(ranges), k, arg, val, c);
  }
};

std::set<std::pair<std::size_t, std::uint64_t>> as_set(const std::vector<RangeHit>& v) {
  std::set<std::pair<std::size_t, std::uint64_t>> s;
  for (auto& h : v) s.emplace(h.pos, h.value);
  return s;
}

}  // namespace

TEST(MultiRangeTopk, WorkedExample) {
  ArrayFixture f({5, 1, 4, 2, 3});
  auto got = f.run({{0, 1, 2}, {0, 4, 5}}, 2);
  EXPECT_EQ(as_set(got), (std::set<std::pair<std::size_t, std::uint64_t>>{{1, 5}, {5, 3}}));
  EXPECT_TRUE(f.run({{0, 1, 2}, {0, 4, 5}}, 0).empty());
  EXPECT_EQ(f.run({{0, 1, 5}}, 5).size(), 5u);
  EXPECT_THROW(f.run({{0, 1, 3}, {0, 3, 5}}, 1), std::invalid_argument);
}

TEST(MultiRangeTopk, MatchesSortRandom) {
  std::mt19937_64 rng(101);
  for (int it = 0; it < 3000; ++it) {
    std::size_t m = 1 + rng() % 200;
    std::vector<std::uint64_t> a(m);
    for (auto& x : a) x = rng() % (it % 2 ? 5 : 1000);
    ArrayFixture f(a);
    std::vector<std::size_t> cuts;
    std::size_t t = 1 + rng() % 8;
    for (std::size_t i = 0; i < 2 * t; ++i) cuts.push_back(1 + rng() % m);
    std::sort(cuts.begin(), cuts.end());
    std::vector<TaggedRange> ranges;
    std::size_t last = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2) {
      std::size_t lo = std::max(cuts[i], last + 1), hi = cuts[i + 1];
      if (lo > hi) continue;
      ranges.push_back({0, lo, hi});
      last = hi;
    }
    std::size_t k = rng() % 20;
    std::vector<std::pair<std::uint64_t, std::size_t>> all;
    for (auto& r : ranges) {
      for (std::size_t p = r.lo; p <= r.hi; ++p) all.emplace_back(a[p - 1], p);
    }
    std::sort(all.begin(), all.end(), [](auto& x, auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
    if (all.size() > k) all.resize(k);
    std::set<std::pair<std::size_t, std::uint64_t>> want;
    for (auto& [v, p] : all) want.emplace(p, v);
    QueryCounters c;
    auto got = f.run(ranges, k, &c);
    ASSERT_EQ(got.size(), want.size());
    ASSERT_EQ(as_set(got), want);
    ASSERT_LE(c.heap_nodes, 8 * (ranges.size() + k) + 1);
  }
}

TEST(WaveletTopk, WorkedExample) {
  std::vector<std::uint32_t> a{2, 1, 2, 1};
  std::vector<std::uint64_t> s{9, 8, 7, 6};
  WaveletTopk wk(a, 2, s);
  auto score = [&](std::size_t i) { return s[i - 1]; };
  auto got = wk.query(1, 4, 1, 1, 1, score);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].index, 2u);
  EXPECT_EQ(got[0].score, 8u);
  EXPECT_TRUE(wk.query(1, 4, 2, 1, 3, score).empty());
  auto all = wk.query(1, 4, 1, 2, 4, score);
  EXPECT_EQ(all.size(), 4u);
}

TEST(WaveletTopk, SingleLeafAndDegenerate) {
  std::vector<std::uint32_t> a{1};
  std::vector<std::uint64_t> s{3};
  WaveletTopk wk(a, 1, s);
  EXPECT_EQ(wk.tree().node_count(), 1u);
  auto got = wk.query(1, 1, 1, 1, 1, [&](std::size_t i) { return s[i - 1]; });
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].index, 1u);
  std::vector<std::uint32_t> bad{3};
  EXPECT_THROW(WaveletTopk(bad, 2, s), std::invalid_argument);
}

TEST(WaveletTopk, MatchesFilterSortRandom) {
  std::mt19937_64 rng(111);
  for (int it = 0; it < 2000; ++it) {
    std::uint32_t pi = 1 + rng() % 16;
    std::size_t n = 1 + rng() % 150;
    std::vector<std::uint32_t> a(n);
    std::vector<std::uint64_t> s(n);
    for (auto& x : a) x = 1 + rng() % pi;
    for (auto& x : s) x = rng() % (it % 2 ? 4 : 10000);
    WaveletTopk wk(a, pi, s);
    std::size_t x1 = 1 + rng() % n, x2 = 1 + rng() % n;
    if (x1 > x2) std::swap(x1, x2);
    std::uint32_t y1 = 1 + rng() % pi, y2 = 1 + rng() % pi;
    if (y1 > y2) std::swap(y1, y2);
    std::size_t k = rng() % 12;
    std::vector<std::pair<std::uint64_t, std::size_t>> all;
    for (std::size_t i = x1; i <= x2; ++i) {
      if (a[i - 1] >= y1 && a[i - 1] <= y2) all.emplace_back(s[i - 1], i);
    }
    std::sort(all.begin(), all.end(), [](auto& x, auto& y) { return x.first != y.first ? x.first > y.first : x.second < y.second; });
    if (all.size() > k) all.resize(k);
    std::set<std::size_t> want;
    for (auto& [v, i] : all) want.insert(i);
    QueryCounters c;
    auto got = wk.query(x1, x2, y1, y2, k, [&](std::size_t i) { return s[i - 1]; }, &c);
    std::set<std::size_t> gs;
    for (auto& h : got) {
      gs.insert(h.index);
      ASSERT_EQ(h.score, s[h.index - 1]);
    }
    ASSERT_EQ(gs, want);
    ASSERT_LE(wk.decompose(x1, x2, y1, y2).size(), decomposition_bound(pi));
  }
}

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "tkdx/bits.hpp"
#include "tkdx/monotone.hpp"
#include "tkdx/predecessor.hpp"
#include "tkdx/rmq.hpp"

using namespace tkdx;

TEST(BitVector, CorpusABoundaries) {
  auto b = BitVector::from_string("0000100101");
  EXPECT_EQ(b.rank1(6), 1u);
  EXPECT_EQ(b.rank1(0), 0u);
  EXPECT_EQ(b.select1(2), 8u);
  EXPECT_EQ(b.select1(3), 10u);
  EXPECT_THROW(b.rank1(11), std::out_of_range);
  EXPECT_THROW(b.select1(4), std::out_of_range);
  EXPECT_THROW(b.select1(0), std::out_of_range);
}

TEST(BitVector, Trivial) {
  auto ones = BitVector::from_string("11111");
  EXPECT_EQ(ones.rank1(5), 5u);
  auto one = BitVector::from_string("1");
  EXPECT_EQ(one.select1(1), 1u);
}

TEST(BitVector, RankSelectInverseRandom) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 63u, 64u, 65u, 511u, 512u, 513u, 5000u, 70000u}) {
    for (double density : {0.01, 0.5, 0.99}) {
      BitVector b(n);
      std::vector<int> naive(n + 1, 0);
      std::bernoulli_distribution coin(density);
      for (std::size_t p = 1; p <= n; ++p) {
        if (coin(rng)) {
          b.set(p);
          naive[p] = 1;
        }
      }
      b.build_index();
      std::size_t r = 0;
      for (std::size_t p = 1; p <= n; ++p) {
        r += naive[p];
        ASSERT_EQ(b.get(p), naive[p] == 1);
        ASSERT_EQ(b.rank1(p), r);
      }
      ASSERT_EQ(b.ones(), r);
      for (std::size_t j = 1; j <= b.ones(); ++j) ASSERT_EQ(b.rank1(b.select1(j)), j);
      for (std::size_t j = 1; j <= b.zeros(); ++j) {
        auto p = b.select0(j);
        ASSERT_FALSE(b.get(p));
        ASSERT_EQ(b.rank0(p), j);
      }
    }
  }
}

TEST(BitVector, SaveLoad) {
  auto b = BitVector::from_string("0110100111010");
  Writer w;
  b.save(w);
  Reader r(w.bytes());
  auto c = BitVector::load(r);
  EXPECT_EQ(b, c);
  EXPECT_EQ(c.select1(3), 5u);
  EXPECT_TRUE(r.done());
}

TEST(IntVector, PackRoundTrip) {
  std::vector<std::uint32_t> v{0, 5, 7, 1, 3, 6, 2};
  auto iv = IntVector::pack(v);
  EXPECT_EQ(iv.width(), 3u);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(iv[i], v[i]);
  EXPECT_THROW(iv.set(0, 8), std::out_of_range);
}

TEST(Rmq, WorkedExamples) {
  std::vector<std::uint64_t> v{2, 1, 2};
  RmqStructure mx(v, RmqMode::kMax);
  EXPECT_EQ(mx.query(1, 3, std::span<const std::uint64_t>(v)), 1u);
  std::vector<std::uint64_t> one{5};
  RmqStructure s(one, RmqMode::kMax);
  EXPECT_EQ(s.query(1, 1, std::span<const std::uint64_t>(one)), 1u);
  // chain array of CORPUS-A
  std::vector<std::uint64_t> chain{0, 0, 0, 2, 3, 4, 1, 6, 5, 8};
  RmqStructure mn(chain, RmqMode::kMin);
  EXPECT_EQ(mn.query(4, 6, std::span<const std::uint64_t>(chain)), 4u);
  EXPECT_THROW(mn.query(3, 2, std::span<const std::uint64_t>(chain)), std::invalid_argument);
}

namespace {

std::size_t naive_rmq(const std::vector<std::uint64_t>& v, std::size_t l, std::size_t r, RmqMode m) {
  std::size_t best = l;
  for (std::size_t p = l + 1; p <= r; ++p) {
    bool better = m == RmqMode::kMax ? v[p - 1] > v[best - 1] : v[p - 1] < v[best - 1];
    if (better) best = p;
  }
  return best;
}

}  // namespace

TEST(Rmq, ExhaustiveSmall) {
  std::mt19937_64 rng(11);
  for (std::size_t m : {1u, 2u, 31u, 32u, 33u, 100u, 256u}) {
    for (auto mode : {RmqMode::kMax, RmqMode::kMin}) {
      std::vector<std::uint64_t> v(m);
      for (auto& x : v) x = rng() % 8;  // many ties
      RmqStructure st(v, mode);
      std::span<const std::uint64_t> sv(v);
      for (std::size_t l = 1; l <= m; ++l) {
        for (std::size_t r = l; r <= m; ++r) ASSERT_EQ(st.query(l, r, sv), naive_rmq(v, l, r, mode)) << l << " " << r;
      }
    }
  }
}

TEST(Rmq, SampledLarge) {
  std::mt19937_64 rng(12);
  const std::size_t m = 100000;
  std::vector<std::uint64_t> v(m);
  for (auto& x : v) x = rng() % 1000;
  for (auto mode : {RmqMode::kMax, RmqMode::kMin}) {
    RmqStructure st(v, mode);
    Writer w;
    st.save(w);
    Reader rd(w.bytes());
    auto st2 = RmqStructure::load(rd);
    std::span<const std::uint64_t> sv(v);
    for (int it = 0; it < 2000; ++it) {
      std::size_t l = 1 + rng() % m, r = 1 + rng() % m;
      if (l > r) std::swap(l, r);
      auto want = naive_rmq(v, l, r, mode);
      ASSERT_EQ(st.query(l, r, sv), want);
      ASSERT_EQ(st2.query(l, r, sv), want);
    }
  }
}

TEST(Monotone, WorkedExample) {
  std::vector<std::uint32_t> s{1, 3, 3, 3, 4, 4, 5};
  MonotoneSequence m(s);
  EXPECT_EQ(m.bits().to_string(), "101100010010");
  for (std::size_t i = 1; i <= s.size(); ++i) EXPECT_EQ(m.access(i), s[i - 1]);
}

TEST(Monotone, SmallCases) {
  std::vector<std::uint32_t> a{1};
  EXPECT_EQ(MonotoneSequence(a).bits().to_string(), "10");
  std::vector<std::uint32_t> b{2, 2, 2};
  MonotoneSequence mb(b);
  EXPECT_EQ(mb.bits().to_string(), "11000");
  for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(mb.access(i), 2u);
  std::vector<std::uint32_t> bad{2, 1};
  EXPECT_THROW(MonotoneSequence{bad}, std::invalid_argument);
  std::vector<std::uint32_t> zero{0, 1};
  EXPECT_THROW(MonotoneSequence{zero}, std::invalid_argument);
}

TEST(Monotone, RoundTripRandomRuns) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    std::size_t runs = 1 + rng() % 6;
    std::vector<std::uint32_t> values, offsets{0};
    for (std::size_t r = 0; r < runs; ++r) {
      std::size_t len = rng() % 20;
      std::uint32_t cur = 1 + rng() % 3;
      for (std::size_t i = 0; i < len; ++i) {
        cur += static_cast<std::uint32_t>(rng() % 3);
        values.push_back(cur);
      }
      offsets.push_back(static_cast<std::uint32_t>(values.size()));
    }
    MonotoneSequence m(values, offsets);
    std::size_t expect_bits = values.size();
    for (std::size_t r = 0; r < runs; ++r) {
      std::uint32_t mx = 0;
      for (std::size_t i = offsets[r]; i < offsets[r + 1]; ++i) {
        ASSERT_EQ(m.access(r, i - offsets[r] + 1), values[i]);
        mx = values[i];
      }
      ASSERT_EQ(m.run_max(r), mx);
      expect_bits += mx;
    }
    ASSERT_EQ(m.bits().size(), expect_bits);
    Writer w;
    m.save(w);
    Reader rd(w.bytes());
    auto m2 = MonotoneSequence::load(rd);
    for (std::size_t r = 0; r < runs; ++r) {
      for (std::size_t i = 1; i <= m.run_size(r); ++i) ASSERT_EQ(m2.access(r, i), m.access(r, i));
    }
  }
}

TEST(Predecessor, WorkedExamples) {
  std::vector<std::uint64_t> keys{4, 5, 6};
  SampledPredecessor sp(keys, 2);
  EXPECT_EQ(sp.predecessor(5, keys), std::optional<std::size_t>(2));
  EXPECT_EQ(sp.predecessor(3, keys), std::nullopt);
  EXPECT_EQ(sp.predecessor(100, keys), std::optional<std::size_t>(3));
}

TEST(Predecessor, MatchesScanForAllRates) {
  std::mt19937_64 rng(9);
  std::vector<std::uint64_t> keys(10000);
  for (auto& k : keys) k = rng() % 50000;
  std::sort(keys.begin(), keys.end());
  for (std::size_t rate : {1u, 2u, 16u, 1024u}) {
    SampledPredecessor sp(keys, rate);
    for (int it = 0; it < 10000; ++it) {
      std::uint64_t x = rng() % 51000;
      auto want = static_cast<std::size_t>(std::upper_bound(keys.begin(), keys.end(), x) - keys.begin());
      auto got = sp.predecessor(x, keys);
      if (want == 0) {
        ASSERT_FALSE(got.has_value());
      } else {
        ASSERT_EQ(got.value(), want);
      }
    }
  }
}

TEST(Predecessor, Runs) {
  std::vector<std::uint64_t> keys{1, 5, 9, 2, 3, 10, 11, 12};
  std::vector<std::uint32_t> off{0, 3, 3, 8};
  SampledPredecessor sp(keys, off, 2);
  auto at = [&](std::size_t g) { return keys[g]; };
  EXPECT_EQ(sp.count_le(0, 6, at), 2u);
  EXPECT_EQ(sp.count_le(1, 6, at), 0u);
  EXPECT_EQ(sp.count_le(2, 1, at), 0u);
  EXPECT_EQ(sp.count_le(2, 10, at), 3u);
  EXPECT_EQ(sp.count_le(2, 99, at), 5u);
}

#include <gtest/gtest.h>

#include <random>

#include "scsg/bits.hpp"

using namespace scsg;

namespace {

BitVector from_string(const std::string& s) {
  std::vector<uint8_t> b;
  for (char c : s) b.push_back(c == '1');
  return BitVector(std::span<const uint8_t>(b));
}

std::vector<uint8_t> random_bits(size_t n, double density, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<uint8_t> b(n);
  for (auto& x : b) x = coin(rng);
  return b;
}

}  // namespace

TEST(BitVector, HandCounts) {
  auto bv = from_string("101101");
  EXPECT_EQ(bv.size(), 6u);
  EXPECT_EQ(bv.rank1(6), 4u);
  EXPECT_EQ(bv.rank0(3), 1u);
  EXPECT_EQ(bv.select1(3), 3u);
  EXPECT_EQ(bv.select0(1), 1u);
  EXPECT_THROW(bv.rank1(7), std::out_of_range);
  EXPECT_THROW(bv.select1(5), std::out_of_range);
  EXPECT_THROW(bv.select0(0), std::out_of_range);
}

TEST(BitVector, EmptyAndAllOnes) {
  BitVector empty(std::span<const uint8_t>{});
  EXPECT_EQ(empty.size(), 0u);
  EXPECT_EQ(empty.rank1(0), 0u);
  std::vector<uint8_t> ones(64, 1);
  BitVector all{std::span<const uint8_t>(ones)};
  EXPECT_EQ(all.rank1(64), 64u);
  EXPECT_EQ(all.select1(64), 63u);
}

TEST(BitVector, MatchesScanOracle) {
  for (double density : {0.01, 0.5, 0.97}) {
    auto bits = random_bits(10000, density, 42);
    BitVector bv{std::span<const uint8_t>(bits)};
    size_t ones = 0, zeros = 0;
    for (size_t i = 0; i <= bits.size(); ++i) {
      ASSERT_EQ(bv.rank1(i), ones);
      ASSERT_EQ(bv.rank0(i), zeros);
      ASSERT_EQ(bv.rank1(i) + bv.rank0(i), i);
      if (i == bits.size()) break;
      if (bits[i]) {
        ++ones;
        ASSERT_EQ(bv.select1(ones), i);
      } else {
        ++zeros;
        ASSERT_EQ(bv.select0(zeros), i);
      }
    }
  }
}

TEST(BitVector, RankSelectInverseProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    size_t n = rng() % 20000 + 1;
    auto bits = random_bits(n, (rng() % 100) / 100.0, rng());
    BitVector bv{std::span<const uint8_t>(bits)};
    for (size_t j = 1; j <= bv.ones(); j += 1 + rng() % 17) {
      size_t p = bv.select1(j);
      ASSERT_TRUE(bv[p]);
      ASSERT_EQ(bv.rank1(p), j - 1);
    }
    for (size_t i = 0; i < n; i += 1 + rng() % 31)
      if (bv.rank1(i) < bv.ones()) {
        ASSERT_GE(bv.select1(bv.rank1(i) + 1), i);  // strictly-before rank
      }
  }
}

TEST(BitVector, DirectoryIsSublinearProxy) {
  auto bits = random_bits(1 << 16, 0.5, 3);
  BitVector bv{std::span<const uint8_t>(bits)};
  EXPECT_LE(bv.directory_bits(), bv.size() / 2);
  auto bits2 = random_bits(1 << 20, 0.1, 4);
  BitVector bv2{std::span<const uint8_t>(bits2)};
  EXPECT_LE(bv2.directory_bits(), bv2.size() / 2);
}

TEST(BitVector, SerializationIsLengthThenWords) {
  auto bv = from_string("1011010000000000000000000000000000000000000000000000000000000000001");
  Writer w;
  bv.save(w);
  ASSERT_EQ(w.data().size(), 8u + 16u);
  EXPECT_EQ(w.data()[0], bv.size());
  EXPECT_EQ(w.data()[8], 0b101101);
  Reader r(w.data());
  auto back = BitVector::load(r);
  EXPECT_EQ(back, bv);
  EXPECT_EQ(back.rank1(back.size()), bv.ones());
}

TEST(IntVector, PackedRoundTrip) {
  std::mt19937_64 rng(11);
  for (unsigned width : {1u, 3u, 7u, 13u, 33u, 64u}) {
    std::vector<uint64_t> vals(500);
    for (auto& v : vals) v = width == 64 ? rng() : rng() & ((uint64_t(1) << width) - 1);
    IntVector iv(vals.size(), width);
    for (size_t i = 0; i < vals.size(); ++i) iv.set(i, vals[i]);
    for (size_t i = 0; i < vals.size(); ++i) ASSERT_EQ(iv[i], vals[i]);
    Writer w;
    iv.save(w);
    Reader r(w.data());
    EXPECT_EQ(IntVector::load(r), iv);
  }
}

TEST(SparseDict, HandExamples) {
  SparseDict d(10, std::vector<uint64_t>{2, 7}, std::vector<uint64_t>{'A', 'B'});
  EXPECT_EQ(d.rank(8), 2u);
  EXPECT_EQ(d.rank(7), 1u);
  EXPECT_EQ(d.select(2), 7u);
  EXPECT_EQ(d.satellite(2), uint64_t('B'));
  EXPECT_TRUE(d.member(2));
  EXPECT_FALSE(d.member(3));
  EXPECT_THROW(d.select(3), std::out_of_range);

  SparseDict empty(10, std::vector<uint64_t>{});
  for (uint64_t x = 0; x <= 10; ++x) EXPECT_EQ(empty.rank(x), 0u);
}

TEST(SparseDict, RejectsNonMonotone) {
  EXPECT_THROW(SparseDict(10, std::vector<uint64_t>{3, 3}), std::invalid_argument);
  EXPECT_THROW(SparseDict(10, std::vector<uint64_t>{5, 2}), std::invalid_argument);
  EXPECT_THROW(SparseDict(10, std::vector<uint64_t>{10}), std::invalid_argument);
}

TEST(SparseDict, MatchesScanOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const uint64_t universe = 100000;
    std::vector<uint64_t> members;
    while (members.size() < 1000) members.push_back(rng() % universe);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<uint64_t> sat(members.size());
    for (auto& s : sat) s = rng() % 1000;
    SparseDict d(universe, members, sat);
    ASSERT_EQ(d.size(), members.size());
    for (size_t j = 1; j <= members.size(); ++j) {
      ASSERT_EQ(d.select(j), members[j - 1]);
      ASSERT_EQ(d.satellite(j), sat[j - 1]);
    }
    for (int q = 0; q < 20000; ++q) {
      uint64_t x = rng() % (universe + 1);
      size_t expect = std::lower_bound(members.begin(), members.end(), x) - members.begin();
      ASSERT_EQ(d.rank(x), expect);
    }
    Writer w;
    d.save(w);
    Reader r(w.data());
    auto back = SparseDict::load(r);
    for (uint64_t x = 0; x < universe; x += 97) ASSERT_EQ(back.rank(x), d.rank(x));
  }
}

TEST(EscapedVector, MatchesInputOnSkewedValues) {
  std::mt19937_64 rng(11);
  for (int mode = 0; mode < 4; ++mode) {
    std::vector<uint64_t> v(3000);
    for (auto& x : v) {
      uint64_t r = rng() % 100;
      if (mode == 0) x = 0;
      else if (mode == 1) x = r < 90 ? 0 : rng() % 500;
      else if (mode == 2) x = r < 80 ? rng() % 4 : rng() % (uint64_t(1) << 40);
      else x = rng() % 256;
    }
    auto e = EscapedVector::from(v);
    for (size_t i = 0; i < v.size(); ++i) ASSERT_EQ(e[i], v[i]) << "mode " << mode << " at " << i;
    EXPECT_LE(e.bit_size(), IntVector::from(v).bit_size() + 512);
    Writer w;
    e.save(w);
    Reader r(w.data());
    auto back = EscapedVector::load(r);
    for (size_t i = 0; i < v.size(); ++i) ASSERT_EQ(back[i], v[i]);
  }
}

TEST(EscapedVector, SparseValuesUseFewBits) {
  std::vector<uint64_t> v(10000, 0);
  for (size_t i = 0; i < v.size(); i += 20) v[i] = 300 + i;
  auto e = EscapedVector::from(v);
  EXPECT_LT(e.bit_size(), v.size() * 3);
  for (size_t i = 0; i < v.size(); ++i) ASSERT_EQ(e[i], v[i]);
}

TEST(EscapedVector, AllOnesBoundaryAndEmpty) {
  std::vector<uint64_t> v{1, 1, 1, 0, 3, 7, 7, 0};
  auto e = EscapedVector::from(v);
  for (size_t i = 0; i < v.size(); ++i) EXPECT_EQ(e[i], v[i]);
  auto z = EscapedVector::from(std::vector<uint64_t>{});
  EXPECT_EQ(z.size(), 0u);
}

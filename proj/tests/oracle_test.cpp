#include <gtest/gtest.h>

#include <cmath>

#include "scsg/oracle.hpp"

using namespace scsg;

namespace {

MultiGraph from_edges(size_t n, std::initializer_list<std::pair<vertex_t, vertex_t>> es) {
  MultiGraph g(n);
  for (auto [u, v] : es) g.add_edge(u, v);
  return g;
}

MultiGraph complete(size_t n) {
  MultiGraph g(n);
  for (vertex_t i = 0; i < n; ++i)
    for (vertex_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

}  // namespace

TEST(Oracle, DoubleEdge) {
  auto g = from_edges(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(o_degree(g, 0), 2u);
  EXPECT_EQ(o_neighborhood(g, 0).size(), 1u);
  EXPECT_EQ(o_multiplicity(g, 0, 1), 2u);
  EXPECT_TRUE(o_adjacent(g, 1, 0));
  EXPECT_THROW(o_degree(g, 2), std::out_of_range);
  EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
}

TEST(Oracle, CompleteGraphDegrees) {
  auto g = complete(4);
  for (vertex_t u = 0; u < 4; ++u) EXPECT_EQ(o_degree(g, u), 3u);
}

TEST(Oracle, HandshakeIdentity) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    for (const MultiGraph& g : {gen_sp(50, seed), gen_bc(60, seed), gen_lp(40, seed)}) {
      size_t total = 0;
      for (vertex_t u = 0; u < g.n(); ++u) total += o_degree(g, u);
      EXPECT_EQ(total, 2 * g.m());
    }
  }
}

TEST(Generators, SingleEdgeAndSizes) {
  auto g = gen_sp(1, 5);
  EXPECT_EQ(g.n(), 2u);
  EXPECT_EQ(g.m(), 1u);
  for (size_t m : {2u, 17u, 1000u}) EXPECT_EQ(gen_sp(m, 3).m(), m);
  for (size_t n : {1u, 2u, 9u, 500u}) {
    EXPECT_EQ(gen_bc(n, 3).n(), n);
    EXPECT_EQ(gen_lp(n, 3).n(), n);
  }
}

TEST(Generators, SeedDeterministic) {
  EXPECT_EQ(gen_sp(300, 11), gen_sp(300, 11));
  EXPECT_EQ(gen_bc(300, 11, BcMode::Cactus), gen_bc(300, 11, BcMode::Cactus));
  EXPECT_EQ(gen_lp(300, 11), gen_lp(300, 11));
  EXPECT_FALSE(gen_sp(300, 11) == gen_sp(300, 12));
}

TEST(Generators, OutputsAreConnected) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_TRUE(connected(gen_sp(200, seed)));
    EXPECT_TRUE(connected(gen_bc(200, seed)));
    EXPECT_TRUE(connected(gen_lp(200, seed)));
  }
}

TEST(Generators, CactusBlocksAreCyclesOrBridges) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto g = gen_bc(300, seed, BcMode::Cactus);
    ASSERT_TRUE(g.simple());
    auto b = blocks(g);
    for (size_t i = 0; i < b.edges.size(); ++i) {
      size_t k = b.vertices[i].size(), e = b.edges[i].size();
      EXPECT_TRUE((k == 2 && e == 1) || (k >= 3 && e == k)) << k << " " << e;
    }
  }
}

TEST(Generators, BlockModeBlocksAreCliques) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto g = gen_bc(300, seed, BcMode::Block);
    auto b = blocks(g);
    for (size_t i = 0; i < b.edges.size(); ++i) {
      size_t k = b.vertices[i].size();
      EXPECT_EQ(b.edges[i].size(), k * (k - 1) / 2);
    }
  }
}

TEST(Blocks, HandExamples) {
  // K4 plus a triangle hanging off vertex 3
  auto g = from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
  auto b = blocks(g);
  ASSERT_EQ(b.edges.size(), 2u);
  EXPECT_TRUE(b.is_cut[3]);
  EXPECT_EQ(std::count(b.is_cut.begin(), b.is_cut.end(), 1), 1);
  auto p = from_edges(3, {{0, 1}, {1, 2}, {0, 1}});
  auto bp = blocks(p);
  ASSERT_EQ(bp.edges.size(), 2u);
  EXPECT_TRUE(bp.is_cut[1]);
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_sp(1).size(), 1u);
  EXPECT_EQ(enumerate_sp(2).size(), 2u);
  EXPECT_EQ(enumerate_sp(3).size(), 4u);
}

TEST(Enumerate, GrowthRateIsLoose184) {
  // log2 of successive ratios should sit near 1.84 bits per edge, checked loosely
  std::vector<double> c;
  for (size_t k = 1; k <= 6; ++k) c.push_back(static_cast<double>(enumerate_sp(k).size()));
  for (size_t k = 3; k < c.size(); ++k) {
    double r = std::log2(c[k] / c[k - 1]);
    EXPECT_GT(r, 0.5);
    EXPECT_LT(r, 3.0);
  }
}

TEST(BruteIso, DistinguishesAndMatches) {
  auto a = from_edges(3, {{0, 1}, {1, 2}});
  auto b = from_edges(3, {{2, 0}, {0, 1}});
  auto c = from_edges(3, {{0, 1}, {0, 1}, {1, 2}});
  EXPECT_TRUE(brute_isomorphic(a, b));
  EXPECT_FALSE(brute_isomorphic(a, c));
}

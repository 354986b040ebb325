#include <gtest/gtest.h>

#include <random>

#include "query_check.hpp"
#include "scsg/blockcactus.hpp"
#include "scsg/oracle.hpp"

using namespace scsg;
using namespace scsg::testing;

namespace {

MultiGraph clique(size_t k) {
  MultiGraph g(k);
  for (vertex_t i = 0; i < k; ++i)
    for (vertex_t j = i + 1; j < k; ++j) g.add_edge(i, j);
  return g;
}

MultiGraph cycle(size_t k) {
  MultiGraph g(k);
  for (vertex_t i = 0; i < k; ++i) g.add_edge(i, static_cast<vertex_t>((i + 1) % k));
  return g;
}

size_t dummies(const BlockTree& bt) { return std::count(bt.vertex.begin(), bt.vertex.end(), -1); }

}  // namespace

TEST(BcRecognize, CliqueAndCycle) {
  auto k4 = bc_recognize(clique(4));
  EXPECT_EQ(dummies(k4), 1u);
  EXPECT_EQ(k4.kids[0].size(), 4u);
  EXPECT_FALSE(k4.cycle[0]);
  auto c5 = bc_recognize(cycle(5));
  EXPECT_EQ(dummies(c5), 1u);
  ASSERT_EQ(c5.kids[0].size(), 5u);
  EXPECT_TRUE(c5.cycle[0]);
  for (size_t i = 0; i < 5; ++i) EXPECT_EQ(c5.vertex[c5.kids[0][i]], static_cast<int64_t>(i));
  auto k3 = bc_recognize(cycle(3));
  EXPECT_FALSE(k3.cycle[0]);
}

TEST(BcRecognize, PendantTriangleOnK4) {
  MultiGraph g = clique(4);
  vertex_t a = g.add_vertex(), b = g.add_vertex();
  g.add_edge(3, a);
  g.add_edge(3, b);
  g.add_edge(a, b);
  auto bt = bc_recognize(g);
  ASSERT_EQ(dummies(bt), 2u);
  // the second dummy hangs below the node of the shared cut vertex 3
  int64_t cut = -1;
  for (size_t x = 0; x < bt.kids.size(); ++x)
    if (bt.vertex[x] >= 0 && !bt.kids[x].empty()) cut = bt.vertex[x];
  EXPECT_EQ(cut, 3);
  EXPECT_EQ(bc_tree_graph(bt), g);
}

TEST(BcRecognize, SingleEdgeAndVertex) {
  auto e = bc_recognize(clique(2));
  EXPECT_EQ(dummies(e), 1u);
  EXPECT_EQ(e.kids[0].size(), 2u);
  auto v = bc_recognize(MultiGraph(1));
  EXPECT_EQ(v.kids.size(), 2u);
}

TEST(BcRecognize, RejectsOutsideClass) {
  MultiGraph diamond = cycle(4);
  diamond.add_edge(0, 2);
  EXPECT_THROW(bc_recognize(diamond), not_in_class);
  MultiGraph dbl(2);
  dbl.add_edge(0, 1);
  dbl.add_edge(0, 1);
  EXPECT_THROW(bc_recognize(dbl), not_in_class);
  EXPECT_THROW(bc_recognize(cycle(5), BcClass::Block), not_in_class);
  EXPECT_THROW(bc_recognize(clique(4), BcClass::Cactus), not_in_class);
  EXPECT_NO_THROW(bc_recognize(clique(3), BcClass::Cactus));
  EXPECT_NO_THROW(bc_recognize(clique(3), BcClass::Block));
  EXPECT_THROW(bc_recognize(MultiGraph(2)), std::invalid_argument);
}

TEST(BcRecognize, TreeGraphRoundTripsAndDummiesAreFewer) {
  for (auto mode : {BcMode::Block, BcMode::Cactus, BcMode::BlockCactus}) {
    for (uint64_t seed = 0; seed < 40; ++seed) {
      auto g = gen_bc(2 + seed * 25, seed, mode);
      auto cls = mode == BcMode::Block ? BcClass::Block : mode == BcMode::Cactus ? BcClass::Cactus : BcClass::BlockCactus;
      auto bt = bc_recognize(g, cls);
      EXPECT_EQ(bc_tree_graph(bt), g);
      EXPECT_LT(dummies(bt), g.n());
      for (size_t x = 0; x < bt.kids.size(); ++x) {
        if (bt.vertex[x] >= 0) continue;
        size_t around = bt.kids[x].size() + (x != 0);
        EXPECT_GE(around, bt.cycle[x] ? 4u : 2u);
      }
    }
  }
}

TEST(BcStructure, HandExamples) {
  std::vector<uint64_t> lab;
  auto k4 = BcStructure::build(clique(4), BcClass::BlockCactus, 8, &lab);
  for (uint64_t u = 1; u <= 4; ++u) {
    EXPECT_EQ(k4.degree(u), 3u);
    for (uint64_t v = 1; v <= 4; ++v) EXPECT_EQ(k4.adjacent(u, v), u != v);
  }
  auto c5 = BcStructure::build(cycle(5), BcClass::BlockCactus, 8, &lab);
  for (vertex_t x = 0; x < 5; ++x) {
    EXPECT_EQ(c5.degree(lab[x]), 2u);
    EXPECT_TRUE(c5.adjacent(lab[x], lab[(x + 1) % 5]));
    EXPECT_FALSE(c5.adjacent(lab[x], lab[(x + 2) % 5]));
  }
  MultiGraph bow = from_pairs(5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}});
  auto b = BcStructure::build(bow, BcClass::BlockCactus, 8, &lab);
  EXPECT_EQ(b.degree(lab[0]), 4u);
  MultiGraph path = from_pairs(4, {{0, 1}, {1, 2}, {2, 3}});
  auto p = BcStructure::build(path, BcClass::BlockCactus, 8, &lab);
  EXPECT_EQ(p.degree(lab[1]), 2u);
  EXPECT_EQ(p.degree(lab[0]), 1u);
  EXPECT_TRUE(p.adjacent(lab[1], lab[2]));
  EXPECT_FALSE(p.adjacent(lab[0], lab[2]));
  auto one = BcStructure::build(MultiGraph(1), BcClass::BlockCactus, 8, &lab);
  EXPECT_EQ(one.degree(1), 0u);
  EXPECT_TRUE(one.neighborhood(1).empty());
  EXPECT_THROW(one.degree(2), std::out_of_range);
}

TEST(BcStructure, LabelsAreABijection) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto g = gen_bc(50 + seed * 60, seed);
    CoverConfig cfg = tiny(4 + seed % 9, 1 + seed % 3, 2.092);
    auto st = BcStructure::build(g, BcClass::BlockCactus, 8, nullptr, &cfg);
    std::vector<int> hit(st.vertices() + 1, 0);
    for (node_t v = 1; v <= st.tree().nodes(); ++v) {
      if (st.is_dummy(v)) continue;
      uint64_t j = st.label(v);
      ASSERT_GE(j, 1u);
      ASSERT_LE(j, st.vertices());
      ++hit[j];
      ASSERT_EQ(st.node(j), v);
    }
    for (uint64_t j = 1; j <= st.vertices(); ++j) ASSERT_EQ(hit[j], 1);
  }
}

TEST(BcStructure, SmallGraphsAllPairs) {
  std::mt19937_64 rng(1);
  for (auto mode : {BcMode::Block, BcMode::Cactus, BcMode::BlockCactus}) {
    for (uint64_t seed = 0; seed < 60; ++seed) {
      auto g = gen_bc(1 + seed % 40, seed, mode);
      std::vector<uint64_t> lab;
      auto st = BcStructure::build(g, BcClass::BlockCactus, 8, &lab);
      check_queries(g, st, lab, true, rng);
      std::vector<vertex_t> perm(g.n());
      for (vertex_t x = 0; x < g.n(); ++x) perm[x] = static_cast<vertex_t>(lab[x] - 1);
      ASSERT_EQ(st.decode(), g.relabeled(perm));
    }
  }
}

TEST(BcStructure, TinyCoversMatchOracle) {
  std::mt19937_64 rng(2);
  for (auto [L, ell] : {std::pair<size_t, size_t>{4, 2}, {9, 3}, {16, 1}, {25, 4}}) {
    for (uint64_t seed = 0; seed < 15; ++seed) {
      auto g = gen_bc(100 + seed * 70, seed + 7 * L);
      CoverConfig cfg = tiny(L, ell, 2.092);
      std::vector<uint64_t> lab;
      auto st = BcStructure::build(g, BcClass::BlockCactus, 8, &lab, &cfg);
      check_queries(g, st, lab, false, rng);
    }
  }
}

TEST(BcStructure, SplitCycleReconstructs) {
  auto g = cycle(100);
  for (auto [L, ell] : {std::pair<size_t, size_t>{16, 8}, {8, 8}, {64, 8}}) {
    CoverConfig cfg = tiny(L, ell, 2.092);
    std::vector<uint64_t> lab;
    auto st = BcStructure::build(g, BcClass::BlockCactus, 8, &lab, &cfg);
    EXPECT_GT(st.cover().micros(), 10u);
    std::vector<vertex_t> perm(g.n());
    for (vertex_t x = 0; x < g.n(); ++x) perm[x] = static_cast<vertex_t>(lab[x] - 1);
    EXPECT_EQ(st.decode(), g.relabeled(perm));
    std::mt19937_64 rng(3);
    check_queries(g, st, lab, true, rng);
  }
}

TEST(BcStructure, LargerGraphsMatchOracle) {
  std::mt19937_64 rng(4);
  for (auto mode : {BcMode::Block, BcMode::Cactus, BcMode::BlockCactus}) {
    auto g = gen_bc(10000, 11, mode);
    std::vector<uint64_t> lab;
    auto st = BcStructure::build(g, BcClass::BlockCactus, 8, &lab);
    check_queries(g, st, lab, false, rng);
  }
}

TEST(BcStructure, SaveLoadKeepsAnswers) {
  std::mt19937_64 rng(5);
  for (uint64_t seed = 0; seed < 8; ++seed) {
    auto g = gen_bc(300 + seed * 400, seed);
    std::vector<uint64_t> lab;
    auto st = BcStructure::build(g, BcClass::BlockCactus, 8, &lab);
    Writer w;
    st.save(w);
    Reader r(w.data());
    auto back = BcStructure::load(r);
    EXPECT_EQ(r.remaining(), 0u);
    check_queries(g, back, lab, false, rng);
  }
}

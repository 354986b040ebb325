#include <gtest/gtest.h>

#include "scsg/oracle.hpp"
#include "scsg/sp_tree.hpp"

using namespace scsg;

namespace {

MultiGraph from_pairs(size_t n, const std::vector<std::pair<vertex_t, vertex_t>>& es) {
  MultiGraph g(n);
  for (auto [u, v] : es) g.add_edge(u, v);
  return g;
}

// Hand-built fragment: nested vectors of child specs.
struct Sketch {
  char type;  // 'e', 'S', 'P'
  std::vector<Sketch> kids;
};

uint32_t build(SpTree& t, const Sketch& s) {
  uint32_t v = t.add(s.type == 'e' ? SpType::Leaf : s.type == 'S' ? SpType::S : SpType::P);
  for (auto& k : s.kids) {
    uint32_t c = build(t, k);
    t.kids[v].push_back(c);
  }
  return v;
}

std::string key(const Sketch& s) {
  SpTree t;
  uint32_t r = build(t, s);
  return sp_canonical(t, r);
}

const Sketch E{'e', {}};

}  // namespace

TEST(SpRecognize, ParallelPair) {
  auto t = sp_recognize(from_pairs(2, {{0, 1}, {1, 0}}));
  EXPECT_EQ(t.type[t.root], SpType::P);
  EXPECT_EQ(t.kids[t.root].size(), 2u);
}

TEST(SpRecognize, PathIsSeries) {
  auto t = sp_recognize(from_pairs(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(t.type[t.root], SpType::S);
  EXPECT_EQ(t.kids[t.root].size(), 2u);
  EXPECT_EQ(t.gaps[t.root][0], 1u);
}

TEST(SpRecognize, TriangleWithTerminals) {
  auto t = sp_recognize(from_pairs(3, {{0, 1}, {1, 2}, {0, 2}}), std::make_pair(vertex_t{0}, vertex_t{2}));
  ASSERT_EQ(t.type[t.root], SpType::P);
  const auto& k = t.kids[t.root];
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(t.type[k[0]], SpType::S);
  EXPECT_EQ(t.type[k[1]], SpType::Leaf);
  EXPECT_EQ(sp_canonical(t, t.root), key({'P', {E, {'S', {E, E}}}}));
}

TEST(SpRecognize, RejectsNonSeriesParallel) {
  MultiGraph k4(4);
  for (vertex_t i = 0; i < 4; ++i)
    for (vertex_t j = i + 1; j < 4; ++j) k4.add_edge(i, j);
  EXPECT_THROW(sp_recognize(k4), not_in_class);
  auto star = from_pairs(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_THROW(sp_recognize(star), not_in_class);
}

TEST(SpCanonical, SymmetryRules) {
  Sketch a{'P', {E, E}}, b{'S', {E, E}};
  EXPECT_EQ(key({'P', {b, E}}), key({'P', {E, b}}));
  Sketch c{'P', {b, E, E}};
  EXPECT_EQ(key({'S', {a, E, c}}), key({'S', {c, E, a}}));
  EXPECT_EQ(key({'S', {a, c}}), key({'S', {c, a}}));
  EXPECT_NE(key({'S', {a, a, c}}), key({'S', {a, c, a}}));
}

TEST(SpCanonical, AgreesWithBruteIsomorphism) {
  // terminal-marked classes up to four edges: equal keys iff isomorphic
  for (size_t k = 1; k <= 4; ++k) {
    auto gs = enumerate_two_terminal_sp(k);
    std::vector<std::string> keys, iso;
    for (auto& g : gs) {
      keys.push_back(sp_canonical(sp_recognize(g, std::make_pair(vertex_t{0}, vertex_t{1})), 0));
      iso.push_back(brute_terminal_canonical(g));
    }
    for (size_t i = 0; i < gs.size(); ++i)
      for (size_t j = 0; j < gs.size(); ++j) EXPECT_EQ(keys[i] == keys[j], iso[i] == iso[j]) << k;
  }
}

TEST(SpRecognize, RoundTripsGeneratedGraphs) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    auto g = gen_sp(1 + seed % 300, seed);
    auto t = sp_recognize(g);
    auto es = sp_tree_edges(t);
    ASSERT_EQ(es.size(), g.m());
    MultiGraph h(g.n());
    for (auto [u, v] : es) h.add_edge(u, v);
    ASSERT_EQ(h, g) << seed;
    uint32_t d1, d2;
    auto p = sp_pad(t, &d1, &d2);
    auto es2 = sp_tree_edges(p);
    ASSERT_EQ(es2.size(), g.m());
  }
}

TEST(SpRecognize, TypesAlternate) {
  auto g = gen_sp(2000, 9);
  auto t = sp_recognize(g);
  for (uint32_t v = 0; v < t.size(); ++v)
    for (uint32_t c : t.kids[v]) {
      ASSERT_TRUE(t.type[c] == SpType::Leaf || t.type[c] != t.type[v]);
      if (t.type[v] == SpType::S) {
        ASSERT_EQ(t.gaps[v].size() + 1, t.kids[v].size());
      }
    }
}

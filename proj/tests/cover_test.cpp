#include <gtest/gtest.h>

#include <random>
#include <set>

#include "scsg/cover.hpp"
#include "test_trees.hpp"

using namespace scsg;

namespace {

BpTree tree_of(size_t n, Shape s, std::mt19937_64& rng) { return BpTree::from_children(make_tree(n, s, rng), 0); }

void expect_cover_bounds(const BpTree& t, const std::vector<Subtree>& pieces, size_t L) {
  auto c = check_pieces(t, pieces);
  EXPECT_TRUE(c.partition);
  EXPECT_TRUE(c.connected);
  EXPECT_TRUE(c.ordered);
  EXPECT_TRUE(c.records);
  EXPECT_LE(c.max_size, 2 * L);
  EXPECT_LE(c.max_nonroot_boundary, 1u);
  EXPECT_LE(c.pieces, 8 * t.nodes() / L + 1);
}

}  // namespace

TEST(Decompose, PathOfSixteen) {
  std::mt19937_64 rng(1);
  auto t = tree_of(16, Shape::Path, rng);
  auto pieces = decompose(t, 4);
  expect_cover_bounds(t, pieces, 4);
  EXPECT_LE(pieces.size(), 16u);
}

TEST(Decompose, SingleNode) {
  std::mt19937_64 rng(1);
  auto t = tree_of(1, Shape::Path, rng);
  for (size_t L : {1u, 5u, 100u}) {
    auto pieces = decompose(t, L);
    ASSERT_EQ(pieces.size(), 1u);
    EXPECT_EQ(pieces[0].nodes.size(), 1u);
    EXPECT_FALSE(pieces[0].root_shared);
  }
}

TEST(Decompose, StarSharesRoot) {
  std::mt19937_64 rng(1);
  auto t = tree_of(10, Shape::Star, rng);
  auto pieces = decompose(t, 2);
  expect_cover_bounds(t, pieces, 2);
  size_t shared = 0;
  for (auto& p : pieces) shared += p.root_shared && p.root == 1;
  EXPECT_GE(shared, 1u);
  EXPECT_LE(pieces.size(), 4u * 9 / 2);
}

TEST(Decompose, UnitParameterGivesSingletons) {
  std::mt19937_64 rng(2);
  auto t = tree_of(200, Shape::Random, rng);
  auto pieces = decompose(t, 1);
  expect_cover_bounds(t, pieces, 1);
}

TEST(Decompose, RandomShapesHoldInvariants) {
  std::mt19937_64 rng(3);
  for (Shape s : {Shape::Random, Shape::Path, Shape::Star, Shape::Caterpillar, Shape::Binary})
    for (size_t L : {2u, 4u, 16u, 64u})
      for (size_t n : {1u, 7u, 100u, 2000u}) {
        auto t = tree_of(n, s, rng);
        expect_cover_bounds(t, decompose(t, L), L);
      }
}

TEST(TwoLevel, SmallTreeIsOnePiece) {
  std::mt19937_64 rng(4);
  CoverConfig cfg;
  cfg.L = 16;
  cfg.ell = 8;
  auto t = tree_of(5, Shape::Random, rng);
  auto tc = two_level(t, cfg);
  ASSERT_EQ(tc.minis.size(), 1u);
  ASSERT_EQ(tc.micros.size(), 1u);
  EXPECT_EQ(tc.tree_over_minis, std::vector<int64_t>{-1});
  ASSERT_EQ(tc.mini_over_micros.size(), 1u);
  EXPECT_EQ(tc.mini_over_micros[0], std::vector<int64_t>{-1});
}

TEST(TwoLevel, RandomTreesHoldInvariants) {
  std::mt19937_64 rng(5);
  CoverConfig cfg;
  cfg.L = 64;
  cfg.ell = 8;
  for (int trial = 0; trial < 5; ++trial) {
    auto t = tree_of(10000, trial % 2 ? Shape::Random : Shape::Caterpillar, rng);
    auto tc = two_level(t, cfg);
    expect_cover_bounds(t, tc.minis, cfg.L);
    auto c = check_pieces(t, tc.micros);
    EXPECT_TRUE(c.partition);
    EXPECT_TRUE(c.connected);
    EXPECT_TRUE(c.ordered);
    EXPECT_TRUE(c.records);
    EXPECT_LE(c.max_size, 2 * cfg.ell);
    EXPECT_LE(c.max_nonroot_boundary, 1u);
    for (size_t i = 0; i < tc.micros.size(); ++i) {
      const Subtree& m = tc.minis[tc.micro_mini[i]];
      for (node_t x : tc.micros[i].nodes) EXPECT_TRUE(std::binary_search(m.nodes.begin(), m.nodes.end(), x));
    }
  }
}

TEST(TwoLevel, CompleteBinaryPartition) {
  std::mt19937_64 rng(6);
  CoverConfig cfg;
  cfg.L = 100;
  cfg.ell = 8;
  auto t = tree_of(1023, Shape::Binary, rng);
  auto tc = two_level(t, cfg);
  std::vector<int> count(t.nodes() + 1, 0);
  for (auto& u : tc.micros)
    for (node_t x : u.nodes)
      if (x != u.root || !u.root_shared) ++count[x];
  for (size_t x = 1; x <= t.nodes(); ++x) EXPECT_EQ(count[x], 1) << x;
}

TEST(TwoLevel, OverTreeDummiesHaveTwoSharedChildren) {
  std::mt19937_64 rng(7);
  CoverConfig cfg;
  cfg.L = 8;
  cfg.ell = 2;
  auto t = tree_of(3000, Shape::Random, rng);
  auto tc = two_level(t, cfg);
  auto parent = t.parent_array();
  auto check = [&](const std::vector<int64_t>& par, const std::vector<const Subtree*>& pieces) {
    size_t k = pieces.size();
    std::vector<size_t> kids(par.size(), 0);
    size_t roots = 0;
    for (size_t i = 0; i < par.size(); ++i) {
      if (par[i] < 0) {
        ++roots;
      } else {
        ++kids[par[i]];
      }
    }
    EXPECT_EQ(roots, 1u);
    for (size_t d = k; d < par.size(); ++d) {
      EXPECT_GE(kids[d], 2u);
      for (size_t i = 0; i < k; ++i)
        if (par[i] == static_cast<int64_t>(d)) {
          const Subtree& p = *pieces[i];
          bool below_outside_root = !p.root_shared && std::find(p.nodes.begin(), p.nodes.end(), parent[p.root]) == p.nodes.end();
          EXPECT_TRUE(p.root_shared || below_outside_root);
        }
    }
  };
  std::vector<const Subtree*> mp;
  for (auto& m : tc.minis) mp.push_back(&m);
  check(tc.tree_over_minis, mp);
  for (size_t mi = 0; mi < tc.minis.size(); ++mi) {
    std::vector<const Subtree*> up;
    for (uint32_t id : tc.mini_micros[mi]) up.push_back(&tc.micros[id]);
    check(tc.mini_over_micros[mi], up);
  }
}

namespace {

CoverIndex plain_index(const BpTree& t, const TwoLevelCover& tc) {
  return CoverIndex::build(t, tc, [](node_t) { return uint8_t(0); }, [](const Subtree&) { return uint8_t(0); });
}

}  // namespace

TEST(ShapeTable, InternIsIdempotent) {
  ShapeTable tab;
  LocalShape a;
  a.parent = {0, 0, 0};
  a.attr = {0, 0, 0};
  a.derive();
  LocalShape b = a;
  b.parent = {0, 0, 1};
  b.derive();
  uint32_t ia = tab.intern(a.key());
  EXPECT_EQ(tab.intern(a.key()), ia);
  EXPECT_NE(tab.intern(b.key()), ia);
  EXPECT_EQ(tab.size(), 2u);
  Writer w;
  tab.save(w);
  EXPECT_EQ(w.data().size() * 8, tab.bit_size());
  Reader r(w.data());
  auto back = ShapeTable::load(r);
  EXPECT_EQ(back.key(ia), a.key());
}

TEST(ShapeTable, CountsDistinctKeys) {
  std::mt19937_64 rng(8);
  ShapeTable tab;
  std::set<std::string> keys;
  for (int i = 0; i < 1000; ++i) {
    size_t n = 1 + rng() % 8;
    LocalShape s;
    s.parent.assign(n, 0);
    s.attr.assign(n, 0);
    for (size_t j = 1; j < n; ++j) s.parent[j] = static_cast<uint8_t>(rng() % j);
    // keep preorder: parent chain must be an ancestor of the previous node
    for (size_t j = 2; j < n; ++j) {
      uint8_t p = static_cast<uint8_t>(j - 1);
      size_t steps = rng() % 3;
      while (steps-- > 0 && p != 0) p = s.parent[p];
      s.parent[j] = p;
    }
    s.derive();
    keys.insert(s.key());
    tab.intern(s.key());
  }
  EXPECT_EQ(tab.size(), keys.size());
}

TEST(CoverIndex, LocateAgreesWithPartition) {
  std::mt19937_64 rng(9);
  for (Shape s : {Shape::Random, Shape::Caterpillar, Shape::Star, Shape::Path, Shape::Binary}) {
    for (size_t n : {1u, 20u, 3000u}) {
      auto t = tree_of(n, s, rng);
      for (auto [L, ell] : {std::pair<size_t, size_t>{16, 2}, {64, 8}, {4, 1}}) {
        CoverConfig cfg;
        cfg.L = L;
        cfg.ell = ell;
        auto tc = two_level(t, cfg);
        auto ix = plain_index(t, tc);
        ASSERT_EQ(ix.micros(), tc.micros.size());
        for (node_t v = 1; v <= t.nodes(); ++v) {
          auto loc = ix.locate(t, v);
          ASSERT_EQ(loc.micro, tc.owner_micro[v]) << v;
          ASSERT_EQ(ix.global(t, loc.micro, loc.local), v);
          ASSERT_EQ(ix.mini_of(t, v), tc.owner_mini[v]);
        }
        for (uint32_t mu = 0; mu < ix.micros(); ++mu) {
          const Subtree& u = tc.micros[mu];
          ASSERT_EQ(ix.root(t, mu), u.root);
          ASSERT_EQ(ix.shape(mu).nodes(), u.nodes.size());
          uint32_t mi = ix.mini_of_micro(t, mu);
          ASSERT_EQ(mi, tc.micro_mini[mu]);
          size_t li = ix.mini_local_index(mi, mu);
          ASSERT_EQ(ix.mini_micro(mi, li), mu);
          ASSERT_EQ(tc.mini_micros[mi][li], mu);
          if (u.boundary) {
            auto loc = ix.locate(t, u.boundary->first);
            EXPECT_EQ(loc.micro, mu);
            EXPECT_EQ(static_cast<int>(loc.local), ix.shape(mu).boundary);
          }
          if (!u.root_shared && tc.minis[tc.micro_mini[mu]].root == u.root) {
            EXPECT_EQ(ix.locate(t, u.root).local, 0u);
          }
        }
        Writer w;
        ix.save(w);
        Reader r(w.data());
        auto back = CoverIndex::load(r);
        for (node_t v = 1; v <= t.nodes(); v += 7) {
          auto a = ix.locate(t, v), b = back.locate(t, v);
          ASSERT_EQ(a.micro, b.micro);
          ASSERT_EQ(a.local, b.local);
        }
      }
    }
  }
}

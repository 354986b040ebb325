#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "scsg/container.hpp"
#include "scsg/edgelist.hpp"
#include "scsg/oracle.hpp"

using namespace scsg;

namespace {

MultiGraph disjoint(const MultiGraph& a, const MultiGraph& b, size_t isolated) {
  MultiGraph g(a.n() + b.n() + isolated);
  for (auto [u, v] : a.edges()) g.add_edge(u, v);
  for (auto [u, v] : b.edges()) g.add_edge(static_cast<vertex_t>(u + a.n()), static_cast<vertex_t>(v + a.n()));
  return g;
}

MultiGraph shuffle(const MultiGraph& g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<vertex_t> perm(g.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return g.relabeled(perm);
}

void same_answers(const MultiGraph& g, const Encoded& e) {
  ASSERT_EQ(e.n(), g.n());
  ASSERT_EQ(e.m(), g.m());
  for (vertex_t x = 0; x < g.n(); ++x) {
    ASSERT_EQ(e.degree(x), o_degree(g, x));
    auto nb = e.neighborhood(x);
    std::sort(nb.begin(), nb.end());
    ASSERT_EQ(nb, o_neighborhood(g, x));
  }
  for (auto [u, v] : g.edges()) ASSERT_EQ(e.multiplicity(u, v), o_multiplicity(g, u, v));
  std::mt19937_64 rng(g.n());
  for (int i = 0; i < 2000 && g.n(); ++i) {
    vertex_t u = rng() % g.n(), v = rng() % g.n();
    ASSERT_EQ(e.adjacent(u, v), o_adjacent(g, u, v));
  }
  ASSERT_EQ(e.decode(), g);
}

MultiGraph instance(GraphClass c, size_t size, uint64_t seed) {
  switch (c) {
    case GraphClass::SP: return gen_sp(size, seed);
    case GraphClass::Block: return gen_bc(size, seed, BcMode::Block);
    case GraphClass::Cactus: return gen_bc(size, seed, BcMode::Cactus);
    case GraphClass::BlockCactus: return gen_bc(size, seed, BcMode::BlockCactus);
    case GraphClass::Leaf3: return gen_lp(size, seed);
  }
  return {};
}

const GraphClass kAll[] = {GraphClass::SP, GraphClass::Block, GraphClass::Cactus, GraphClass::BlockCactus,
                           GraphClass::Leaf3};

}  // namespace

TEST(EdgeList, ParsesCommentsAndMultiplicity) {
  std::istringstream in("# header comment\n3 3\n1 2\n1 2 # again\n\n2 3\n");
  auto g = read_edge_list(in);
  EXPECT_EQ(g.n(), 3u);
  EXPECT_EQ(g.multiplicity(0, 1), 2u);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream back(out.str());
  EXPECT_EQ(read_edge_list(back), g);
}

TEST(EdgeList, RejectsMalformedInput) {
  for (const char* bad : {"", "3\n", "2 1\n1 3\n", "2 1\n1 1\n", "2 2\n1 2\n", "2 1\n1 2\n2 1\n", "2 1\n1 x\n",
                          "-1 0\n", "2 1\n1 2 3\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_edge_list(in), parse_error) << bad;
  }
}

TEST(Container, RoundTripsEveryClass) {
  for (GraphClass c : kAll) {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      auto g = instance(c, 5 + seed * 97, seed);
      auto e = Encoded::build(g, c);
      auto bytes = e.save();
      auto back = Encoded::load(bytes);
      EXPECT_EQ(back.save(), bytes);
      EXPECT_EQ(back.graph_class(), c);
      same_answers(g, back);
    }
  }
}

TEST(Container, DisconnectedInputsPerComponent) {
  for (GraphClass c : kAll) {
    auto g = shuffle(disjoint(instance(c, 40, 1), instance(c, 25, 2), 3), 5);
    auto e = Encoded::build(g, c);
    EXPECT_EQ(e.component_count(), 5u);
    same_answers(g, e);
    same_answers(g, Encoded::load(e.save()));
  }
  auto empty = Encoded::build(MultiGraph(0), GraphClass::SP);
  EXPECT_EQ(Encoded::load(empty.save()).n(), 0u);
}

TEST(Container, RejectsCorruption) {
  auto bytes = Encoded::build(gen_sp(300, 1), GraphClass::SP).save();
  auto flip = bytes;
  flip[flip.size() / 2] ^= 0x10;
  EXPECT_THROW(Encoded::load(flip), format_error);
  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(Encoded::load(magic), format_error);
  std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bytes.size() / 3));
  EXPECT_THROW(Encoded::load(cut), format_error);
  EXPECT_THROW(Encoded::load({}), format_error);
}

TEST(Container, RejectsGraphsOutsideTheClass) {
  MultiGraph k4(4);
  for (vertex_t i = 0; i < 4; ++i)
    for (vertex_t j = i + 1; j < 4; ++j) k4.add_edge(i, j);
  EXPECT_THROW(Encoded::build(k4, GraphClass::SP), not_in_class);
  EXPECT_THROW(Encoded::build(k4, GraphClass::Cactus), not_in_class);
  EXPECT_NO_THROW(Encoded::build(k4, GraphClass::Leaf3));
  EXPECT_THROW(Encoded::build(gen_sp(50, 3), GraphClass::Leaf3), not_in_class);
}

TEST(Container, SpaceReportAddsUp) {
  auto e = Encoded::build(gen_sp(4000, 2), GraphClass::SP);
  auto r = e.space();
  size_t sum = 0;
  for (auto& [k, b] : r.parts) sum += b;
  EXPECT_EQ(r.total(), sum);
  EXPECT_EQ(r.unit, "m");
  EXPECT_DOUBLE_EQ(r.baseline, 1.84);
  EXPECT_NEAR(r.ratio(), static_cast<double>(r.total()) / (1.84 * 4000), 1e-9);
  EXPECT_NE(r.text().find("baseline 1.840m"), std::string::npos);
}

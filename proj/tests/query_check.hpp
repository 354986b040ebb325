#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "scsg/cover.hpp"
#include "scsg/oracle.hpp"

namespace scsg::testing {

inline MultiGraph from_pairs(size_t n, const std::vector<std::pair<vertex_t, vertex_t>>& es) {
  MultiGraph g(n);
  for (auto [u, v] : es) g.add_edge(u, v);
  return g;
}

inline CoverConfig tiny(size_t L, size_t ell, double alpha = 1.84) {
  CoverConfig c;
  c.L = L;
  c.ell = ell;
  c.ell_cap = 8;
  c.alpha = alpha;
  return c;
}

// Compares every query against the oracle through the relabeling lab (input
// vertex -> 1-based label).
template <class Structure>
void check_queries(const MultiGraph& g, const Structure& st, const std::vector<uint64_t>& lab, bool all_pairs,
                   std::mt19937_64& rng) {
  size_t n = g.n();
  ASSERT_EQ(st.vertices(), n);
  std::vector<vertex_t> back(n + 1);
  for (vertex_t x = 0; x < n; ++x) back[lab[x]] = x;
  for (vertex_t x = 0; x < n; ++x) {
    uint64_t u = lab[x];
    ASSERT_EQ(st.degree(u), o_degree(g, x)) << "vertex " << x;
    auto nb = st.neighborhood(u);
    std::vector<vertex_t> got;
    for (uint64_t w : nb) got.push_back(back[w]);
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, o_neighborhood(g, x)) << "vertex " << x;
  }
  auto pair_check = [&](vertex_t x, vertex_t y) {
    ASSERT_EQ(st.adjacent(lab[x], lab[y]), o_adjacent(g, x, y)) << x << " " << y;
    ASSERT_EQ(st.multiplicity(lab[x], lab[y]), o_multiplicity(g, x, y)) << x << " " << y;
  };
  if (all_pairs) {
    for (vertex_t x = 0; x < n; ++x)
      for (vertex_t y = 0; y < n; ++y) pair_check(x, y);
  } else {
    for (auto [x, y] : g.edges()) pair_check(x, y);
    for (int q = 0; q < 20000; ++q) pair_check(rng() % n, rng() % n);
  }
}

}  // namespace scsg::testing

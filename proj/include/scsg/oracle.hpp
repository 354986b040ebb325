#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scsg/graph.hpp"

namespace scsg {

// Brute-force query answers straight from the adjacency lists.
inline bool o_adjacent(const MultiGraph& g, vertex_t u, vertex_t v) { return g.multiplicity(u, v) > 0; }
inline size_t o_multiplicity(const MultiGraph& g, vertex_t u, vertex_t v) { return g.multiplicity(u, v); }
inline size_t o_degree(const MultiGraph& g, vertex_t u) { return g.degree(u); }
inline std::vector<vertex_t> o_neighborhood(const MultiGraph& g, vertex_t u) { return g.neighbors(u); }

enum class BcMode { Block, Cactus, BlockCactus };

namespace detail {

inline MultiGraph shuffled(const MultiGraph& g, std::mt19937_64& rng) {
  std::vector<vertex_t> perm(g.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto h = g.relabeled(perm);
  // shuffle edge order as well so builders cannot lean on it
  auto es = h.edges();
  std::shuffle(es.begin(), es.end(), rng);
  MultiGraph out(h.n());
  for (auto [u, v] : es) {
    if (rng() & 1) std::swap(u, v);
    out.add_edge(u, v);
  }
  return out;
}

}  // namespace detail

// Random series-parallel multigraph with exactly m edges: a random
// composition tree with geometric part sizes, realized between two terminals.
inline MultiGraph gen_sp(size_t m, uint64_t seed) {
  if (m == 0) throw std::invalid_argument("gen_sp: m must be positive");
  std::mt19937_64 rng(seed);
  MultiGraph g(2);
  struct Task {
    size_t size;
    vertex_t s, t;
  };
  std::vector<Task> work{{m, 0, 1}};
  while (!work.empty()) {
    Task k = work.back();
    work.pop_back();
    if (k.size == 1) {
      g.add_edge(k.s, k.t);
      continue;
    }
    bool series = rng() % 100 < 55;
    size_t parts = 2 + rng() % std::min<size_t>(3, k.size - 1);
    std::vector<size_t> sizes;
    size_t left = k.size;
    for (size_t i = 0; i + 1 < parts; ++i) {
      size_t room = left - (parts - 1 - i);
      // geometric-ish: mostly small pieces, occasionally large ones
      size_t take = 1 + static_cast<size_t>(std::pow(static_cast<double>(rng() % 1000) / 1000.0, 2.0) * room);
      take = std::min(take, room);
      sizes.push_back(take);
      left -= take;
    }
    sizes.push_back(left);
    std::shuffle(sizes.begin(), sizes.end(), rng);
    if (series) {
      vertex_t prev = k.s;
      for (size_t i = 0; i < sizes.size(); ++i) {
        vertex_t next = i + 1 == sizes.size() ? k.t : g.add_vertex();
        work.push_back({sizes[i], prev, next});
        prev = next;
      }
    } else {
      for (size_t sz : sizes) work.push_back({sz, k.s, k.t});
    }
  }
  return detail::shuffled(g, rng);
}

// Random connected block-cactus graph on n vertices: blocks glued at random
// cut vertices. Block mode uses cliques only, cactus mode cycles and bridges.
inline MultiGraph gen_bc(size_t n, uint64_t seed, BcMode mode = BcMode::BlockCactus) {
  if (n == 0) throw std::invalid_argument("gen_bc: n must be positive");
  std::mt19937_64 rng(seed);
  MultiGraph g(1);
  while (g.n() < n) {
    vertex_t at = static_cast<vertex_t>(rng() % g.n());
    size_t room = n - g.n();
    bool cycle = mode == BcMode::Cactus || (mode == BcMode::BlockCactus && rng() % 2 == 0);
    size_t k = 1 + std::min<size_t>(room, cycle ? 1 + rng() % 7 : 1 + rng() % 4);  // block size
    std::vector<vertex_t> vs{at};
    for (size_t i = 1; i < k; ++i) vs.push_back(g.add_vertex());
    if (k == 2) {
      g.add_edge(vs[0], vs[1]);
    } else if (cycle) {
      std::shuffle(vs.begin() + 1, vs.end(), rng);
      for (size_t i = 0; i < k; ++i) g.add_edge(vs[i], vs[(i + 1) % k]);
    } else {
      for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) g.add_edge(vs[i], vs[j]);
    }
  }
  return detail::shuffled(g, rng);
}

// Random connected 3-leaf power on n vertices: a random skeleton tree with a
// non-empty clique substituted for every skeleton node.
inline MultiGraph gen_lp(size_t n, uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_lp: n must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<vertex_t>> bag;
  std::vector<size_t> skel_parent;
  size_t used = 0;
  while (used < n) {
    size_t c = std::min<size_t>(n - used, 1 + (rng() % 10 < 7 ? 0 : rng() % 4));
    std::vector<vertex_t> b;
    for (size_t i = 0; i < c; ++i) b.push_back(static_cast<vertex_t>(used++));
    skel_parent.push_back(bag.empty() ? SIZE_MAX : rng() % bag.size());
    bag.push_back(std::move(b));
  }
  MultiGraph g(n);
  for (size_t i = 0; i < bag.size(); ++i) {
    for (size_t a = 0; a < bag[i].size(); ++a)
      for (size_t b = a + 1; b < bag[i].size(); ++b) g.add_edge(bag[i][a], bag[i][b]);
    if (skel_parent[i] != SIZE_MAX)
      for (vertex_t x : bag[i])
        for (vertex_t y : bag[skel_parent[i]]) g.add_edge(x, y);
  }
  return detail::shuffled(g, rng);
}

// Canonical form of a small multigraph: the lexicographically least
// multiplicity matrix over all vertex orders that keep the first `fixed`
// vertices in place. Intended for n <= 8.
inline std::string brute_canonical(const MultiGraph& g, size_t fixed = 0) {
  size_t n = g.n();
  if (n > 9) throw std::invalid_argument("brute_canonical: graph too large");
  std::vector<vertex_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool have = false;
  do {
    std::string s(n * n, 0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) s[i * n + j] = static_cast<char>(g.multiplicity(perm[i], perm[j]));
    if (!have || s < best) {
      best = s;
      have = true;
    }
  } while (std::next_permutation(perm.begin() + static_cast<std::ptrdiff_t>(std::min(fixed, n)), perm.end()));
  return std::to_string(n) + ":" + best;
}

inline bool brute_isomorphic(const MultiGraph& a, const MultiGraph& b) {
  return a.n() == b.n() && a.m() == b.m() && brute_canonical(a) == brute_canonical(b);
}

// Canonical form of a two-terminal graph with terminals 0 and 1, unordered.
inline std::string brute_terminal_canonical(const MultiGraph& g) {
  std::vector<vertex_t> swap01(g.n());
  std::iota(swap01.begin(), swap01.end(), 0);
  if (g.n() >= 2) std::swap(swap01[0], swap01[1]);
  return std::min(brute_canonical(g, 2), brute_canonical(g.relabeled(swap01), 2));
}

// All two-terminal SP multigraphs with exactly k edges, terminals 0 and 1,
// one representative per ordered-terminal isomorphism class.
inline std::vector<MultiGraph> enumerate_two_terminal_sp(size_t k) {
  std::vector<std::vector<MultiGraph>> by(k + 1);
  MultiGraph e(2);
  e.add_edge(0, 1);
  if (k >= 1) by[1].push_back(e);
  auto compose = [](const MultiGraph& a, const MultiGraph& b, bool series) {
    MultiGraph g(a.n());
    for (auto [u, v] : a.edges()) g.add_edge(u, v);
    std::vector<vertex_t> map(b.n());
    map[0] = series ? 1 : 0;
    map[1] = series ? g.add_vertex() : 1;
    for (size_t x = 2; x < b.n(); ++x) map[x] = g.add_vertex();
    for (auto [u, v] : b.edges()) g.add_edge(map[u], map[v]);
    if (series) {  // move the far terminal to slot 1
      vertex_t t = map[1];
      std::vector<vertex_t> perm(g.n());
      std::iota(perm.begin(), perm.end(), 0);
      perm[1] = t;
      perm[t] = 1;
      return g.relabeled(perm);
    }
    return g;
  };
  for (size_t j = 2; j <= k; ++j) {
    std::set<std::string> seen;
    for (size_t i = 1; i < j; ++i)
      for (const auto& a : by[i])
        for (const auto& b : by[j - i])
          for (bool series : {true, false}) {
            MultiGraph g = compose(a, b, series);
            std::string key = brute_canonical(g, 2);
            if (seen.insert(key).second) by[j].push_back(g);
          }
  }
  return by[k];
}

// Non-isomorphic (unmarked) SP multigraphs with exactly k edges, k <= 6.
inline std::vector<MultiGraph> enumerate_sp(size_t k) {
  if (k == 0 || k > 6) throw std::invalid_argument("enumerate_sp: 1 <= k <= 6");
  std::set<std::string> seen;
  std::vector<MultiGraph> out;
  for (auto& g : enumerate_two_terminal_sp(k))
    if (seen.insert(brute_canonical(g)).second) out.push_back(g);
  return out;
}

// Whether a connected simple graph on at most 8 vertices has a 3-leaf root,
// by trying every tree. In a root of a connected graph every internal node
// has a leaf child (a leafless one would separate the graph), so it suffices
// to split the vertices into k non-empty groups and join the groups by every
// labeled tree on k nodes; leaves meet at distance 2 within a group, 3 across
// a tree edge and at least 4 otherwise.
inline bool brute_has_3leaf_root(const MultiGraph& g) {
  size_t n = g.n();
  if (n > 8) throw std::invalid_argument("brute_has_3leaf_root: graph too large");
  if (!connected(g) || !g.simple()) return false;
  std::vector<uint32_t> grp(n, 0);
  auto fits = [&](const std::vector<std::vector<uint8_t>>& tadj) {
    for (vertex_t u = 0; u < n; ++u)
      for (vertex_t v = u + 1; v < n; ++v) {
        bool near = grp[u] == grp[v] || tadj[grp[u]][grp[v]];
        if (near != (g.multiplicity(u, v) > 0)) return false;
      }
    return true;
  };
  auto trees = [&](size_t k) {
    std::vector<std::vector<uint8_t>> tadj(k, std::vector<uint8_t>(k, 0));
    if (k <= 2) {
      if (k == 2) tadj[0][1] = tadj[1][0] = 1;
      return fits(tadj);
    }
    std::vector<uint32_t> code(k - 2, 0);
    while (true) {
      for (auto& row : tadj) std::fill(row.begin(), row.end(), 0);
      std::vector<size_t> deg(k, 1);
      for (uint32_t c : code) ++deg[c];
      for (uint32_t c : code) {
        uint32_t leaf = 0;
        while (deg[leaf] != 1) ++leaf;
        tadj[leaf][c] = tadj[c][leaf] = 1;
        --deg[leaf];
        --deg[c];
      }
      uint32_t a = 0;
      while (deg[a] != 1) ++a;
      uint32_t b = a + 1;
      while (deg[b] != 1) ++b;
      tadj[a][b] = tadj[b][a] = 1;
      if (fits(tadj)) return true;
      size_t i = 0;
      while (i < code.size() && ++code[i] == k) code[i++] = 0;
      if (i == code.size()) return false;
    }
  };
  // restricted growth strings enumerate the set partitions
  while (true) {
    size_t k = *std::max_element(grp.begin(), grp.end()) + 1;
    if (trees(k)) return true;
    size_t i = n;
    while (i-- > 1) {
      uint32_t mx = *std::max_element(grp.begin(), grp.begin() + i);
      if (grp[i] <= mx) {
        ++grp[i];
        std::fill(grp.begin() + i + 1, grp.end(), 0);
        break;
      }
    }
    if (i == 0) return false;
  }
}

}  // namespace scsg

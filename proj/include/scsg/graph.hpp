#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scsg {

using vertex_t = uint32_t;

struct not_in_class : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Loop-free multigraph on vertices 0..n-1. Adjacency lists keep one entry per
// edge copy and are sorted on demand.
class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(size_t n) : adj_(n) {}

  size_t n() const { return adj_.size(); }
  size_t m() const { return edges_.size(); }
  const std::vector<std::pair<vertex_t, vertex_t>>& edges() const { return edges_; }

  vertex_t add_vertex() {
    adj_.emplace_back();
    return static_cast<vertex_t>(adj_.size() - 1);
  }
  void add_edge(vertex_t u, vertex_t v) {
    check(u);
    check(v);
    if (u == v) throw std::invalid_argument("self-loops are not supported");
    edges_.push_back({u, v});
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    sorted_ = false;
  }

  const std::vector<vertex_t>& adj(vertex_t u) const {
    check(u);
    sort_once();
    return adj_[u];
  }
  size_t degree(vertex_t u) const { return adj(u).size(); }
  size_t multiplicity(vertex_t u, vertex_t v) const {
    const auto& a = adj(u);
    check(v);
    auto [lo, hi] = std::equal_range(a.begin(), a.end(), v);
    return static_cast<size_t>(hi - lo);
  }
  std::vector<vertex_t> neighbors(vertex_t u) const {
    auto a = adj(u);
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  }
  bool simple() const {
    for (size_t u = 0; u < n(); ++u) {
      const auto& a = adj(static_cast<vertex_t>(u));
      if (std::adjacent_find(a.begin(), a.end()) != a.end()) return false;
    }
    return true;
  }

  // Same graph with vertex x renamed to perm[x].
  MultiGraph relabeled(const std::vector<vertex_t>& perm) const {
    MultiGraph g(n());
    for (auto [u, v] : edges_) g.add_edge(perm[u], perm[v]);
    return g;
  }

  friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
    if (a.n() != b.n() || a.m() != b.m()) return false;
    for (size_t u = 0; u < a.n(); ++u)
      if (a.adj(static_cast<vertex_t>(u)) != b.adj(static_cast<vertex_t>(u))) return false;
    return true;
  }

 private:
  void check(vertex_t u) const {
    if (u >= adj_.size()) throw std::out_of_range("vertex " + std::to_string(u) + " out of range");
  }
  void sort_once() const {
    if (sorted_) return;
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    sorted_ = true;
  }

  mutable std::vector<std::vector<vertex_t>> adj_;
  std::vector<std::pair<vertex_t, vertex_t>> edges_;
  mutable bool sorted_ = true;
};

// Connected components as vertex lists (ascending), ordered by smallest vertex.
inline std::vector<std::vector<vertex_t>> components(const MultiGraph& g) {
  std::vector<int64_t> comp(g.n(), -1);
  std::vector<std::vector<vertex_t>> out;
  for (size_t s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<vertex_t> cur{static_cast<vertex_t>(s)}, stack{static_cast<vertex_t>(s)};
    comp[s] = static_cast<int64_t>(out.size());
    while (!stack.empty()) {
      vertex_t u = stack.back();
      stack.pop_back();
      for (vertex_t v : g.adj(u))
        if (comp[v] < 0) {
          comp[v] = comp[s];
          cur.push_back(v);
          stack.push_back(v);
        }
    }
    std::sort(cur.begin(), cur.end());
    out.push_back(std::move(cur));
  }
  return out;
}

inline bool connected(const MultiGraph& g) { return g.n() > 0 && components(g).size() == 1; }

// Induced subgraph on `vs` (ascending), renumbered 0..|vs|-1 in that order.
inline MultiGraph induced(const MultiGraph& g, const std::vector<vertex_t>& vs) {
  std::vector<int64_t> idx(g.n(), -1);
  for (size_t i = 0; i < vs.size(); ++i) idx[vs[i]] = static_cast<int64_t>(i);
  MultiGraph h(vs.size());
  for (auto [u, v] : g.edges())
    if (idx[u] >= 0 && idx[v] >= 0) h.add_edge(static_cast<vertex_t>(idx[u]), static_cast<vertex_t>(idx[v]));
  return h;
}

struct Blocks {
  std::vector<std::vector<size_t>> edges;     // edge ids per block
  std::vector<std::vector<vertex_t>> vertices;  // ascending per block
  std::vector<uint8_t> is_cut;
};

// Biconnected components of a connected multigraph (iterative edge-stack
// Tarjan; parallel edges fall into the same block).
inline Blocks blocks(const MultiGraph& g) {
  size_t n = g.n();
  Blocks b;
  b.is_cut.assign(n, 0);
  if (n == 0) return b;
  std::vector<std::vector<std::pair<vertex_t, size_t>>> inc(n);
  for (size_t e = 0; e < g.m(); ++e) {
    auto [u, v] = g.edges()[e];
    inc[u].push_back({v, e});
    inc[v].push_back({u, e});
  }
  std::vector<int64_t> disc(n, -1), low(n, 0);
  std::vector<size_t> estack;
  struct Frame {
    vertex_t u;
    size_t parent_edge;
    size_t i;
  };
  int64_t timer = 0;
  for (size_t s = 0; s < n; ++s) {
    if (disc[s] >= 0) continue;
    std::vector<Frame> st{{static_cast<vertex_t>(s), SIZE_MAX, 0}};
    disc[s] = low[s] = timer++;
    size_t root_children = 0;
    while (!st.empty()) {
      Frame& f = st.back();
      if (f.i < inc[f.u].size()) {
        auto [v, e] = inc[f.u][f.i++];
        if (e == f.parent_edge) continue;
        if (disc[v] < 0) {
          estack.push_back(e);
          disc[v] = low[v] = timer++;
          if (f.u == s) ++root_children;
          st.push_back({v, e, 0});
        } else if (disc[v] < disc[f.u]) {
          estack.push_back(e);
          low[f.u] = std::min(low[f.u], disc[v]);
        }
      } else {
        Frame done = f;
        st.pop_back();
        if (st.empty()) break;
        vertex_t p = st.back().u;
        low[p] = std::min(low[p], low[done.u]);
        if (low[done.u] >= disc[p]) {
          if (p != s) b.is_cut[p] = 1;
          std::vector<size_t> blk;
          while (true) {
            size_t e = estack.back();
            estack.pop_back();
            blk.push_back(e);
            if (e == done.parent_edge) break;
          }
          std::vector<vertex_t> vs;
          for (size_t e : blk) {
            vs.push_back(g.edges()[e].first);
            vs.push_back(g.edges()[e].second);
          }
          std::sort(vs.begin(), vs.end());
          vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
          b.edges.push_back(std::move(blk));
          b.vertices.push_back(std::move(vs));
        }
      }
    }
    if (root_children > 1) b.is_cut[s] = 1;
  }
  return b;
}

}  // namespace scsg

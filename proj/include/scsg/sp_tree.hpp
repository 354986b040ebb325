#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "scsg/graph.hpp"

namespace scsg {

enum class SpType : uint8_t { Leaf, S, P };

// Explicit ordered SP tree. gaps[v][i] is the vertex shared by children i and
// i+1 of S node v. Internal types alternate; P children are ordered with
// non-leaf children first and leaf children last.
struct SpTree {
  std::vector<SpType> type;
  std::vector<std::vector<uint32_t>> kids;
  std::vector<std::vector<vertex_t>> gaps;
  uint32_t root = 0;
  vertex_t s = 0, t = 0;

  size_t size() const { return type.size(); }
  uint32_t add(SpType ty) {
    type.push_back(ty);
    kids.emplace_back();
    gaps.emplace_back();
    return static_cast<uint32_t>(type.size() - 1);
  }
};

namespace detail {

constexpr vertex_t kNoVertex = UINT32_MAX;

struct SpRef {
  uint32_t node;
  bool flip;
};

// Series-parallel reduction over reference nodes. Every raw node keeps the
// orientation (a, b) it was created with; a reference may flip it.
class SpReducer {
 public:
  struct Raw {
    SpType type;
    vertex_t a, b;
    std::vector<SpRef> kids;
  };
  std::vector<Raw> raw;

  uint32_t make(SpType ty, vertex_t a, vertex_t b) {
    raw.push_back({ty, a, b, {}});
    return static_cast<uint32_t>(raw.size() - 1);
  }
  std::pair<vertex_t, vertex_t> ends(SpRef r) const {
    const Raw& x = raw[r.node];
    return r.flip ? std::make_pair(x.b, x.a) : std::make_pair(x.a, x.b);
  }
  // Adds r as a child of P node p, oriented like p.
  void attach(uint32_t p, SpRef r) {
    bool f = r.flip != (ends(r).first != raw[p].a);
    raw[p].kids.push_back({r.node, f});
  }

  // Reduces the multigraph on `edges` to one reference oriented s -> t, or
  // returns nothing when the reduction stalls.
  std::optional<SpRef> reduce(const std::vector<std::pair<vertex_t, vertex_t>>& edges, vertex_t s, vertex_t t) {
    std::unordered_map<vertex_t, uint32_t> idx;
    std::vector<vertex_t> vs;
    auto id = [&](vertex_t x) {
      auto [it, fresh] = idx.emplace(x, static_cast<uint32_t>(vs.size()));
      if (fresh) vs.push_back(x);
      return it->second;
    };
    struct Slot {
      uint32_t u, v;
      SpRef r;  // oriented vs[u] -> vs[v]
    };
    std::vector<Slot> slots;
    std::vector<std::unordered_map<uint32_t, uint32_t>> nb;
    size_t live = 0;
    auto add = [&](uint32_t u, uint32_t v, SpRef r) {
      if (nb.size() < vs.size()) nb.resize(vs.size());
      auto it = nb[u].find(v);
      if (it == nb[u].end()) {
        slots.push_back({u, v, r});
        nb[u][v] = nb[v][u] = static_cast<uint32_t>(slots.size() - 1);
        ++live;
        return;
      }
      Slot& e = slots[it->second];
      SpRef nr = e.u == u ? r : SpRef{r.node, !r.flip};
      if (raw[e.r.node].type == SpType::P) {
        attach(e.r.node, nr);
      } else {
        uint32_t p = make(SpType::P, vs[e.u], vs[e.v]);
        attach(p, e.r);
        attach(p, nr);
        e.r = {p, false};
      }
    };
    uint32_t ls = id(s), lt = id(t);
    for (auto [u, v] : edges) {
      uint32_t a = id(u), b = id(v);
      add(a, b, {make(SpType::Leaf, u, v), false});
    }
    nb.resize(vs.size());
    std::vector<uint32_t> queue;
    for (uint32_t x = 0; x < vs.size(); ++x)
      if (x != ls && x != lt && nb[x].size() == 2) queue.push_back(x);
    while (!queue.empty()) {
      uint32_t x = queue.back();
      queue.pop_back();
      if (x == ls || x == lt || nb[x].size() != 2) continue;
      auto it = nb[x].begin();
      auto [a, ea] = *it++;
      auto [b, eb] = *it;
      SpRef ra = slots[ea].u == a ? slots[ea].r : SpRef{slots[ea].r.node, !slots[ea].r.flip};
      SpRef rb = slots[eb].u == x ? slots[eb].r : SpRef{slots[eb].r.node, !slots[eb].r.flip};
      uint32_t sn = make(SpType::S, vs[a], vs[b]);
      raw[sn].kids = {ra, rb};
      nb[x].clear();
      nb[a].erase(x);
      nb[b].erase(x);
      live -= 2;
      add(a, b, {sn, false});
      if (a != ls && a != lt) queue.push_back(a);
      if (b != ls && b != lt) queue.push_back(b);
    }
    if (live != 1 || ls == lt) return std::nullopt;
    auto it = nb[ls].find(lt);
    if (it == nb[ls].end()) return std::nullopt;
    const Slot& e = slots[it->second];
    return e.u == ls ? e.r : SpRef{e.r.node, !e.r.flip};
  }

  // Children of r in its orientation, with same-type descendants spliced in.
  std::vector<SpRef> expand(SpRef r) const {
    SpType ty = raw[r.node].type;
    std::vector<SpRef> out, st;
    auto push_kids = [&](SpRef x) {
      const auto& k = raw[x.node].kids;
      size_t n = k.size();
      for (size_t i = n; i-- > 0;) {
        size_t j = (x.flip && ty == SpType::S) ? n - 1 - i : i;
        st.push_back({k[j].node, k[j].flip != x.flip});
      }
    };
    push_kids(r);
    while (!st.empty()) {
      SpRef y = st.back();
      st.pop_back();
      if (raw[y.node].type == ty) {
        push_kids(y);
      } else {
        out.push_back(y);
      }
    }
    return out;
  }

  SpTree materialize(SpRef top, vertex_t s, vertex_t t) const {
    SpTree out;
    out.s = s;
    out.t = t;
    out.root = out.add(raw[top.node].type);
    std::vector<std::pair<SpRef, uint32_t>> work{{top, out.root}};
    while (!work.empty()) {
      auto [r, dst] = work.back();
      work.pop_back();
      if (raw[r.node].type == SpType::Leaf) continue;
      auto ks = expand(r);
      bool series = raw[r.node].type == SpType::S;
      for (size_t i = 0; i < ks.size(); ++i) {
        uint32_t c = out.add(raw[ks[i].node].type);
        out.kids[dst].push_back(c);
        if (series && i + 1 < ks.size()) out.gaps[dst].push_back(ends(ks[i]).second);
        work.push_back({ks[i], c});
      }
    }
    return out;
  }
};

struct VecHash {
  size_t operator()(const std::vector<uint32_t>& v) const {
    size_t h = v.size();
    for (uint32_t x : v) h = h * 1000003u ^ x;
    return h;
  }
};

}  // namespace detail

// Sorts P children (non-leaf children by shape id, then leaves) and returns
// the forward shape id of every node. Children always have larger ids than
// their parent in trees produced here.
inline std::vector<uint32_t> sp_order_children(SpTree& t) {
  size_t n = t.size();
  std::unordered_map<std::vector<uint32_t>, uint32_t, detail::VecHash> table;
  auto intern = [&](std::vector<uint32_t> key) {
    auto [it, fresh] = table.emplace(std::move(key), static_cast<uint32_t>(table.size()));
    return it->second;
  };
  std::vector<uint32_t> fwd(n), bwd(n);
  for (size_t v = n; v-- > 0;) {
    auto& ks = t.kids[v];
    std::vector<uint32_t> kf{static_cast<uint32_t>(t.type[v])}, kb{static_cast<uint32_t>(t.type[v])};
    if (t.type[v] == SpType::P) {
      std::stable_sort(ks.begin(), ks.end(), [&](uint32_t a, uint32_t b) {
        bool la = t.type[a] == SpType::Leaf, lb = t.type[b] == SpType::Leaf;
        if (la != lb) return lb;
        return fwd[a] < fwd[b];
      });
      std::vector<uint32_t> fs, bs;
      for (uint32_t c : ks) {
        fs.push_back(fwd[c]);
        bs.push_back(bwd[c]);
      }
      std::sort(fs.begin(), fs.end());
      std::sort(bs.begin(), bs.end());
      kf.insert(kf.end(), fs.begin(), fs.end());
      kb.insert(kb.end(), bs.begin(), bs.end());
    } else {
      for (uint32_t c : ks) kf.push_back(fwd[c]);
      for (size_t i = ks.size(); i-- > 0;) kb.push_back(bwd[ks[i]]);
    }
    fwd[v] = intern(std::move(kf));
    bwd[v] = intern(std::move(kb));
  }
  return fwd;
}

namespace detail {

inline std::pair<std::string, std::string> sp_codes(const SpTree& t, uint32_t v) {
  if (t.type[v] == SpType::Leaf) return {"e", "e"};
  std::vector<std::string> f, b;
  for (uint32_t c : t.kids[v]) {
    auto [x, y] = sp_codes(t, c);
    f.push_back(std::move(x));
    b.push_back(std::move(y));
  }
  std::string head = t.type[v] == SpType::S ? "S(" : "P(";
  if (t.type[v] == SpType::P) {
    std::sort(f.begin(), f.end());
    std::sort(b.begin(), b.end());
  } else {
    std::reverse(b.begin(), b.end());
  }
  std::string fs = head, bs = head;
  for (auto& x : f) fs += x + ",";
  for (auto& x : b) bs += x + ",";
  return {fs + ")", bs + ")"};
}

}  // namespace detail

// Canonical key of the fragment rooted at v: invariant under P-children
// permutation and full reversal of the series direction.
inline std::string sp_canonical(const SpTree& t, uint32_t v) {
  auto [f, b] = detail::sp_codes(t, v);
  return std::min(f, b);
}

// Auto-detected terminals: the block-cut tree must be a path. Each end block
// contributes a neighbour of its cut vertex; a single block uses the ends of
// its first edge.
inline std::pair<vertex_t, vertex_t> sp_terminals(const MultiGraph& g) {
  auto b = blocks(g);
  size_t k = b.edges.size();
  if (k == 1) return g.edges()[0];
  std::vector<size_t> cut_count(k, 0);
  std::vector<size_t> in_blocks(g.n(), 0);
  for (size_t i = 0; i < k; ++i)
    for (vertex_t x : b.vertices[i])
      if (b.is_cut[x]) {
        ++cut_count[i];
        ++in_blocks[x];
      }
  for (vertex_t x = 0; x < g.n(); ++x)
    if (in_blocks[x] > 2) throw not_in_class("not series-parallel: a cut vertex joins three blocks");
  std::vector<vertex_t> ends;
  for (size_t i = 0; i < k; ++i) {
    if (cut_count[i] > 2) throw not_in_class("not series-parallel: block-cut tree is not a path");
    if (cut_count[i] != 1) continue;
    vertex_t c = *std::find_if(b.vertices[i].begin(), b.vertices[i].end(), [&](vertex_t x) { return b.is_cut[x]; });
    for (size_t e : b.edges[i]) {
      auto [u, v] = g.edges()[e];
      if (u == c || v == c) {
        ends.push_back(u == c ? v : u);
        break;
      }
    }
  }
  if (ends.size() != 2) throw not_in_class("not series-parallel: block-cut tree is not a path");
  return {ends[0], ends[1]};
}

// SP tree of a connected multigraph with terminals s and t (auto-detected
// when not given). Throws not_in_class when the reduction stalls.
inline SpTree sp_recognize(const MultiGraph& g, std::optional<std::pair<vertex_t, vertex_t>> terminals = {}) {
  if (g.m() == 0) throw std::invalid_argument("sp_recognize: graph has no edges");
  if (!connected(g)) throw std::invalid_argument("sp_recognize: graph is not connected");
  auto [s, t] = terminals ? *terminals : sp_terminals(g);
  if (s >= g.n() || t >= g.n()) throw std::out_of_range("sp_recognize: terminal out of range");
  detail::SpReducer red;
  auto top = red.reduce(g.edges(), s, t);
  if (!top) throw not_in_class("not series-parallel");
  SpTree tree = red.materialize(*top, s, t);
  sp_order_children(tree);
  return tree;
}

// Pads the tree with an S root whose first and last children are dummy
// leaves, so the terminals become inorder numbers of the root.
inline SpTree sp_pad(const SpTree& in, uint32_t* first_dummy, uint32_t* last_dummy) {
  SpTree out = in;
  uint32_t r = in.root;
  std::vector<uint32_t> mid{in.root};
  std::vector<vertex_t> gaps{in.s};
  if (in.type[in.root] == SpType::S) {
    mid = in.kids[in.root];
    gaps.insert(gaps.end(), in.gaps[in.root].begin(), in.gaps[in.root].end());
  } else {
    r = out.add(SpType::S);
  }
  gaps.push_back(in.t);
  uint32_t d1 = out.add(SpType::Leaf);
  uint32_t d2 = out.add(SpType::Leaf);
  out.kids[r] = {d1};
  out.kids[r].insert(out.kids[r].end(), mid.begin(), mid.end());
  out.kids[r].push_back(d2);
  out.gaps[r] = gaps;
  out.root = r;
  out.s = out.t = detail::kNoVertex;
  if (first_dummy) *first_dummy = d1;
  if (last_dummy) *last_dummy = d2;
  return out;
}

// Edges of the graph an SP tree describes, as terminal pairs of its leaves.
// Leaves whose terminal is kNoVertex (padding dummies) are skipped.
inline std::vector<std::pair<vertex_t, vertex_t>> sp_tree_edges(const SpTree& t) {
  std::vector<std::pair<vertex_t, vertex_t>> out;
  std::vector<std::tuple<uint32_t, vertex_t, vertex_t>> st{{t.root, t.s, t.t}};
  while (!st.empty()) {
    auto [v, a, b] = st.back();
    st.pop_back();
    const auto& ks = t.kids[v];
    if (t.type[v] == SpType::Leaf) {
      if (a != detail::kNoVertex && b != detail::kNoVertex) out.push_back({a, b});
    } else if (t.type[v] == SpType::P) {
      for (uint32_t c : ks) st.push_back({c, a, b});
    } else {
      for (size_t i = 0; i < ks.size(); ++i)
        st.push_back({ks[i], i == 0 ? a : t.gaps[v][i - 1], i + 1 == ks.size() ? b : t.gaps[v][i]});
    }
  }
  return out;
}

}  // namespace scsg

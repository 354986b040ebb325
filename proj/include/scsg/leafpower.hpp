#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scsg/bits.hpp"
#include "scsg/cover.hpp"
#include "scsg/graph.hpp"
#include "scsg/io.hpp"
#include "scsg/ordtree.hpp"

namespace scsg {

// 3-leaf root: internal nodes are true-twin classes, leaves are vertices.
// Node 0 is the root; every node lists its leaf children first, then its
// internal children by non-decreasing subtree size.
struct LeafRoot {
  std::vector<std::vector<uint32_t>> kids;
  std::vector<int64_t> vertex;  // input vertex at a leaf, -1 for internal nodes
};

namespace lp_detail {

struct VecHash {
  size_t operator()(const std::vector<vertex_t>& v) const {
    size_t h = v.size();
    for (vertex_t x : v) h = h * 1000003u ^ x;
    return h;
  }
};

}  // namespace lp_detail

inline LeafRoot lp_recognize(const MultiGraph& g) {
  size_t n = g.n();
  if (n == 0) throw std::invalid_argument("lp_recognize: empty graph");
  if (!connected(g)) throw std::invalid_argument("lp_recognize: graph is not connected");
  if (!g.simple()) throw not_in_class("3-leaf powers are simple");

  // true-twin classes: equal closed neighborhoods
  std::unordered_map<std::vector<vertex_t>, uint32_t, lp_detail::VecHash> ids;
  std::vector<uint32_t> cls(n);
  std::vector<std::vector<vertex_t>> members;
  for (vertex_t x = 0; x < n; ++x) {
    auto nb = g.adj(x);
    nb.insert(std::lower_bound(nb.begin(), nb.end(), x), x);
    auto [it, fresh] = ids.emplace(std::move(nb), static_cast<uint32_t>(members.size()));
    if (fresh) members.emplace_back();
    cls[x] = it->second;
    members[it->second].push_back(x);
  }
  size_t k = members.size();
  std::vector<std::vector<uint32_t>> adj(k);
  for (auto [u, v] : g.edges()) {
    if (cls[u] == cls[v]) continue;
    adj[cls[u]].push_back(cls[v]);
    adj[cls[v]].push_back(cls[u]);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  size_t qe = 0;
  for (auto& a : adj) qe += a.size();
  if (qe / 2 != k - 1) throw not_in_class("twin quotient is not a tree");

  // centers by peeling
  std::vector<size_t> deg(k);
  std::vector<uint32_t> layer;
  for (uint32_t a = 0; a < k; ++a) {
    deg[a] = adj[a].size();
    if (deg[a] <= 1) layer.push_back(a);
  }
  size_t left = k;
  while (left > 2) {
    left -= layer.size();
    std::vector<uint32_t> next;
    for (uint32_t a : layer)
      for (uint32_t b : adj[a])
        if (--deg[b] == 1) next.push_back(b);
    layer = std::move(next);
  }
  std::vector<uint32_t> centers = layer;
  std::sort(centers.begin(), centers.end());

  // rooted at the center (or between the two centers): parent, order, height, size
  std::vector<int64_t> par(k, -1);
  std::vector<uint32_t> order(centers.begin(), centers.end());
  std::vector<uint8_t> seen(k, 0);
  for (uint32_t c : centers) seen[c] = 1;
  for (size_t i = 0; i < order.size(); ++i)
    for (uint32_t b : adj[order[i]])
      if (!seen[b]) {
        seen[b] = 1;
        par[b] = order[i];
        order.push_back(b);
      }
  std::vector<size_t> height(k, 0), size(k, 0);
  std::vector<std::vector<uint32_t>> ch(k);
  for (size_t i = order.size(); i-- > 0;) {
    uint32_t a = order[i];
    size[a] += 1 + members[a].size();
    if (par[a] >= 0) {
      ch[par[a]].push_back(a);
      size[par[a]] += size[a];
      height[par[a]] = std::max(height[par[a]], height[a] + 1);
    }
  }
  // canonical labels per height: rank of (leaf count, sorted child labels)
  size_t hmax = 0;
  for (uint32_t a = 0; a < k; ++a) hmax = std::max(hmax, height[a]);
  std::vector<std::vector<uint32_t>> by_h(hmax + 1);
  for (uint32_t a = 0; a < k; ++a) by_h[height[a]].push_back(a);
  std::vector<uint64_t> label(k, 0);
  auto child_key = [&](uint32_t c) { return std::array<uint64_t, 3>{size[c], height[c], label[c]}; };
  std::vector<std::vector<uint64_t>> key(k);
  for (size_t h = 0; h <= hmax; ++h) {
    for (uint32_t a : by_h[h]) {
      std::sort(ch[a].begin(), ch[a].end(), [&](uint32_t x, uint32_t y) { return child_key(x) < child_key(y); });
      key[a] = {members[a].size()};
      for (uint32_t c : ch[a])
        for (uint64_t w : child_key(c)) key[a].push_back(w);
    }
    auto& grp = by_h[h];
    std::sort(grp.begin(), grp.end(), [&](uint32_t x, uint32_t y) { return key[x] < key[y]; });
    for (size_t i = 0; i < grp.size(); ++i)
      label[grp[i]] = i == 0 ? 0 : label[grp[i - 1]] + (key[grp[i]] != key[grp[i - 1]]);
  }
  uint32_t root = centers[0];
  if (centers.size() == 2) {
    uint32_t other = centers[1];
    if (label[other] < label[root]) std::swap(root, other);
    ch[root].push_back(other);
    std::sort(ch[root].begin(), ch[root].end(), [&](uint32_t x, uint32_t y) { return child_key(x) < child_key(y); });
  }

  LeafRoot lr;
  std::vector<uint32_t> node_of(k);
  auto add = [&](int64_t vx) {
    lr.kids.emplace_back();
    lr.vertex.push_back(vx);
    return static_cast<uint32_t>(lr.kids.size() - 1);
  };
  std::vector<uint32_t> stack{root};
  node_of[root] = add(-1);
  while (!stack.empty()) {
    uint32_t a = stack.back();
    stack.pop_back();
    uint32_t na = node_of[a];
    for (vertex_t x : members[a]) {
      uint32_t leaf = add(x);
      lr.kids[na].push_back(leaf);
    }
    for (uint32_t c : ch[a]) {
      node_of[c] = add(-1);
      lr.kids[na].push_back(node_of[c]);
      stack.push_back(c);
    }
  }
  return lr;
}

// Graph whose edges join leaves at distance at most 3.
inline MultiGraph lp_root_graph(const LeafRoot& lr) {
  size_t n = 0;
  for (int64_t x : lr.vertex) n += x >= 0;
  MultiGraph g(n);
  auto leaves = [&](uint32_t a) {
    std::vector<vertex_t> out;
    for (uint32_t c : lr.kids[a])
      if (lr.vertex[c] >= 0) out.push_back(static_cast<vertex_t>(lr.vertex[c]));
    return out;
  };
  for (uint32_t a = 0; a < lr.kids.size(); ++a) {
    if (lr.vertex[a] >= 0) continue;
    auto la = leaves(a);
    for (size_t i = 0; i < la.size(); ++i)
      for (size_t j = i + 1; j < la.size(); ++j) g.add_edge(la[i], la[j]);
    for (uint32_t c : lr.kids[a]) {
      if (lr.vertex[c] >= 0) continue;
      for (vertex_t x : la)
        for (vertex_t y : leaves(c)) g.add_edge(x, y);
    }
  }
  return g;
}

namespace lp_detail {

// Per-shape lookup payload over LocalShape numbering.
struct LpMemo {
  std::vector<uint8_t> lead;      // leading local leaf children
  std::vector<uint16_t> below;    // leading leaf children summed over local internal children
  std::vector<uint8_t> has_bnd;   // the boundary node is a local child

  static LpMemo from(const LocalShape& sh) {
    size_t k = sh.nodes();
    LpMemo m;
    m.lead.assign(k, 0);
    m.below.assign(k, 0);
    m.has_bnd.assign(k, 0);
    for (size_t y = 0; y < k; ++y)
      for (uint8_t c : sh.children[y]) {
        if (!sh.is_leaf(c)) break;
        ++m.lead[y];
      }
    for (size_t y = 0; y < k; ++y)
      for (uint8_t c : sh.children[y]) {
        if (sh.is_leaf(c)) continue;
        m.below[y] += m.lead[c];
        if (static_cast<int>(c) == sh.boundary) m.has_bnd[y] = 1;
      }
    return m;
  }
};

}  // namespace lp_detail

// Succinct 3-leaf power. Vertex j is the j-th leaf of the 3-leaf root in
// preorder; build() reports the relabeling.
class LpStructure {
 public:
  LpStructure() = default;

  static LpStructure build(const MultiGraph& g, size_t ell_cap = 8, std::vector<uint64_t>* label_of = nullptr,
                           const CoverConfig* forced = nullptr);

  size_t vertices() const { return t_.leaf_rank_end(); }
  size_t edges() const { return m_; }
  const BpTree& tree() const { return t_; }
  const CoverIndex& cover() const { return ix_; }

  node_t node(uint64_t j) const {
    if (j == 0 || j > vertices()) throw std::out_of_range("vertex " + std::to_string(j) + " out of range");
    return t_.leaf_select(j);
  }
  uint64_t label(node_t v) const { return t_.leaf_rank(v) + 1; }

  // Leaf children of internal node y.
  size_t leaf_children(node_t y) const {
    auto loc = ix_.locate(t_, y);
    const LocalShape& sh = ix_.shape(loc.micro);
    size_t a = memo(loc.micro).lead[loc.local];
    if (sh.out(loc.local)) a += beyond(loc.micro, loc.local, a_);
    return a;
  }
  // Leaf children of the internal children of y, summed.
  size_t grandleaves(node_t y) const {
    auto loc = ix_.locate(t_, y);
    const LocalShape& sh = ix_.shape(loc.micro);
    const auto& m = memo(loc.micro);
    size_t b = m.below[loc.local];
    if (m.has_bnd[loc.local]) b += beyond(loc.micro, static_cast<size_t>(sh.boundary), a_);
    if (sh.out(loc.local)) b += beyond(loc.micro, loc.local, b_);
    return b;
  }

  size_t degree(uint64_t u) const {
    node_t p = *t_.parent(node(u));
    return leaf_children(p) - 1 + (p != 1 ? leaf_children(*t_.parent(p)) : 0) + grandleaves(p);
  }
  bool adjacent(uint64_t i, uint64_t j) const {
    node_t a = node(i), b = node(j);
    if (a == b) return false;
    node_t pa = *t_.parent(a), pb = *t_.parent(b);
    return pa == pb || (pa != 1 && *t_.parent(pa) == pb) || (pb != 1 && *t_.parent(pb) == pa);
  }
  size_t multiplicity(uint64_t i, uint64_t j) const { return adjacent(i, j) ? 1 : 0; }

  // Siblings, then leaves of the grandparent, then leaves of internal siblings.
  std::vector<uint64_t> neighborhood(uint64_t u) const {
    node_t v = node(u), p = *t_.parent(v);
    std::vector<uint64_t> out;
    auto leaves_of = [&](node_t y, node_t skip) {
      std::optional<node_t> c = t_.child(y, 1);
      for (; c && t_.is_leaf(*c); c = t_.next_sibling(*c))
        if (*c != skip) out.push_back(label(*c));
      return c;
    };
    std::optional<node_t> c = leaves_of(p, v);
    if (p != 1) leaves_of(*t_.parent(p), 0);
    for (; c; c = t_.next_sibling(*c)) leaves_of(*c, 0);
    return out;
  }

  // Graph over labels - 1.
  MultiGraph decode() const {
    MultiGraph g(vertices());
    auto par = t_.parent_array();
    std::vector<std::vector<vertex_t>> leaves(t_.nodes() + 1);
    for (node_t v = 2; v <= t_.nodes(); ++v)
      if (t_.is_leaf(v)) leaves[par[v]].push_back(static_cast<vertex_t>(label(v) - 1));
    for (node_t y = 1; y <= t_.nodes(); ++y) {
      const auto& ly = leaves[y];
      for (size_t i = 0; i < ly.size(); ++i)
        for (size_t j = i + 1; j < ly.size(); ++j) g.add_edge(ly[i], ly[j]);
      if (y == 1 || ly.empty()) continue;
      for (vertex_t x : ly)
        for (vertex_t z : leaves[par[y]]) g.add_edge(z, x);
    }
    return g;
  }

  std::vector<std::pair<std::string, size_t>> space() const {
    size_t counts = 0;
    for (int k = 0; k < 2; ++k) counts += a_[k].bit_size() + b_[k].bit_size();
    for (int k = 0; k < 3; ++k) counts += ax_[k].bit_size() + bx_[k].bit_size();
    return {{"bp", t_.bit_size()}, {"cover", ix_.bit_size()}, {"shapes", ix_.table_bits()}, {"roots", 0},
            {"leaf_counts", counts}};
  }
  size_t bit_size() const {
    size_t b = 0;
    for (auto& [name, bits] : space()) b += bits;
    return b;
  }

  void save(Writer& w) const;
  static LpStructure load(Reader& r);

 private:
  const lp_detail::LpMemo& memo(uint32_t micro) const { return memo_[ix_.shape_id(micro)]; }
  void make_memo() {
    memo_.clear();
    for (uint32_t i = 0; i < ix_.table().size(); ++i) memo_.push_back(lp_detail::LpMemo::from(ix_.table().shape(i)));
  }
  // Count stored for an out-flagged local node (root or boundary) of a micro.
  size_t beyond(uint32_t micro, size_t local, const std::array<EscapedVector, 2>& inner) const {
    uint64_t code = inner[local == 0 ? 0 : 1][micro];
    size_t v = code >> 2;
    if (code & 3) {
      uint32_t mini = ix_.mini_of_micro(t_, micro);
      const auto& x = &inner == &a_ ? ax_ : bx_;
      v += x[(code & 3) - 1][mini];
    }
    return v;
  }

  BpTree t_;
  CoverIndex ix_;
  std::vector<lp_detail::LpMemo> memo_;
  size_t m_ = 0;
  // per micro and slot (root, boundary): in-mini count << 2 | mini target + 1
  std::array<EscapedVector, 2> a_, b_;
  // per mini target: counts beyond the mini
  std::array<IntVector, 3> ax_, bx_;
};

inline LpStructure LpStructure::build(const MultiGraph& g, size_t ell_cap, std::vector<uint64_t>* label_of,
                                      const CoverConfig* forced) {
  LeafRoot lr = lp_recognize(g);
  std::vector<node_t> pre;
  LpStructure st;
  st.t_ = BpTree::from_children(lr.kids, 0, &pre);
  st.m_ = g.m();
  size_t s = st.t_.nodes();
  if (label_of) {
    label_of->assign(g.n(), 0);
    for (size_t i = 0; i < lr.kids.size(); ++i)
      if (lr.vertex[i] >= 0) (*label_of)[lr.vertex[i]] = st.label(pre[i]);
  }
  CoverConfig cfg = forced ? *forced : CoverConfig::for_size(s, 1.35, ell_cap);
  TwoLevelCover tc = two_level(st.t_, cfg);
  st.ix_ = CoverIndex::build(st.t_, tc, [](node_t) { return uint8_t{0}; }, [](const Subtree&) { return uint8_t{0}; });
  st.make_memo();

  auto par = st.t_.parent_array();
  std::vector<std::vector<node_t>> kids(s + 1);
  for (node_t v = 2; v <= s; ++v) kids[par[v]].push_back(v);
  auto leafy = [&](node_t x) { return kids[x].empty(); };
  size_t nm = tc.micros.size(), nk = tc.minis.size();
  std::array<std::vector<uint64_t>, 2> a, b;
  std::array<std::vector<uint64_t>, 3> ax, bx;
  for (int k = 0; k < 2; ++k) a[k].assign(nm, 0), b[k].assign(nm, 0);
  for (int k = 0; k < 3; ++k) ax[k].assign(nk, 0), bx[k].assign(nk, 0);
  std::vector<std::vector<node_t>> targets(nk);
  for (uint32_t mu = 0; mu < nm; ++mu) {
    const LocalShape& sh = st.ix_.shape(mu);
    uint32_t mi = tc.micro_mini[mu];
    for (int slot = 0; slot < 2; ++slot) {
      int local = slot == 0 ? 0 : sh.boundary;
      if (local < 0 || (slot == 0 && sh.shared) || !sh.out(static_cast<size_t>(local))) continue;
      node_t y = st.ix_.global(st.t_, mu, static_cast<size_t>(local));
      uint64_t a_all = 0, a_in = 0, b_all = 0, b_in = 0;
      for (node_t c : kids[y]) {
        if (tc.owner_micro[c] == mu) continue;
        bool in = tc.owner_mini[c] == mi;
        if (leafy(c)) {
          ++a_all;
          a_in += in;
          continue;
        }
        for (node_t z : kids[c]) {
          if (!leafy(z)) break;
          ++b_all;
          b_in += in && tc.owner_mini[z] == mi;
        }
      }
      uint64_t t = 0;
      if (a_all != a_in || b_all != b_in) {
        auto& tg = targets[mi];
        size_t k = std::find(tg.begin(), tg.end(), y) - tg.begin();
        if (k == tg.size()) {
          if (k == 3) throw std::logic_error("more than three nodes of a mini need outside leaf counts");
          tg.push_back(y);
          ax[k][mi] = a_all - a_in;
          bx[k][mi] = b_all - b_in;
        }
        t = k + 1;
      }
      a[slot][mu] = a_in << 2 | t;
      b[slot][mu] = b_in << 2 | t;
    }
  }
  for (int k = 0; k < 2; ++k) {
    st.a_[k] = EscapedVector::from(a[k]);
    st.b_[k] = EscapedVector::from(b[k]);
  }
  for (int k = 0; k < 3; ++k) {
    st.ax_[k] = IntVector::from(ax[k]);
    st.bx_[k] = IntVector::from(bx[k]);
  }
  return st;
}

inline void LpStructure::save(Writer& w) const {
  t_.save(w);
  ix_.save(w);
  w.u64(m_);
  for (int k = 0; k < 2; ++k) {
    a_[k].save(w);
    b_[k].save(w);
  }
  for (int k = 0; k < 3; ++k) {
    ax_[k].save(w);
    bx_[k].save(w);
  }
}

inline LpStructure LpStructure::load(Reader& r) {
  LpStructure st;
  st.t_ = BpTree::load(r);
  st.ix_ = CoverIndex::load(r);
  st.m_ = r.u64();
  for (int k = 0; k < 2; ++k) {
    st.a_[k] = EscapedVector::load(r);
    st.b_[k] = EscapedVector::load(r);
    if (st.a_[k].size() != st.ix_.micros() || st.b_[k].size() != st.ix_.micros())
      throw format_error("3-leaf power payload does not match its cover");
  }
  for (int k = 0; k < 3; ++k) {
    st.ax_[k] = IntVector::load(r);
    st.bx_[k] = IntVector::load(r);
    if (st.ax_[k].size() != st.ix_.minis() || st.bx_[k].size() != st.ix_.minis())
      throw format_error("3-leaf power payload does not match its cover");
  }
  st.make_memo();
  return st;
}

}  // namespace scsg

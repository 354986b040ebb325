#pragma once

#include <array>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "scsg/bits.hpp"
#include "scsg/cover.hpp"
#include "scsg/graph.hpp"
#include "scsg/io.hpp"
#include "scsg/ordtree.hpp"
#include "scsg/sp_tree.hpp"

namespace scsg {

namespace sp_detail {

constexpr uint8_t kDummy = 2;  // node attribute: padding leaf
constexpr int16_t kEscape = -1;

// Per-shape lookup payload. Locals follow LocalShape numbering.
struct SpMemo {
  std::vector<uint8_t> is_g;                 // member owning an inorder number
  std::vector<uint8_t> g_before;             // owning members before it in its run
  std::array<std::vector<uint8_t>, 2> g_list;  // owning members per run
  std::vector<int16_t> left, right;          // stop node of the label walks, or kEscape
  // frontier counts per direction (0 = first-child rule, 1 = last-child rule)
  std::array<std::vector<uint16_t>, 2> count;
  std::array<std::vector<uint8_t>, 2> hit_b, hit_r;

  static SpMemo from(const LocalShape& sh) {
    size_t k = sh.nodes();
    SpMemo m;
    bool odd_root = sh.root_flags & shape_bits::kOddDepth;
    auto odd = [&](size_t y) { return ((sh.depth[y] & 1) != 0) != odd_root; };
    auto rank_of = [&](size_t y) {
      const auto& c = sh.children[sh.parent[y]];
      return static_cast<size_t>(std::find(c.begin(), c.end(), y) - c.begin());
    };
    auto is_first = [&](size_t y) {
      if (y == 0) return (sh.root_flags & shape_bits::kFirst) != 0;
      size_t i = rank_of(y);
      if (sh.parent[y] == 0 && sh.shared) return i == 0 && (sh.root_flags & shape_bits::kFirst);
      return i == 0;
    };
    auto is_last = [&](size_t y) {
      if (y == 0) return (sh.root_flags & shape_bits::kLast) != 0;
      size_t p = sh.parent[y];
      if (rank_of(y) + 1 != sh.children[p].size()) return false;
      if (p == 0 && sh.shared) return (sh.root_flags & shape_bits::kLast) != 0;
      return !sh.out(p);
    };
    // a node's parent is an S node exactly when the node sits at odd depth
    m.is_g.assign(k, 0);
    m.g_before.assign(k, 0);
    size_t start = sh.shared ? 1 : 0;
    std::array<size_t, 2> seen{0, 0};
    for (size_t y = start; y < k; ++y) {
      size_t run = (y - start) < sh.run1 ? 0 : 1;
      m.g_before[y] = static_cast<uint8_t>(seen[run]);
      if (odd(y) && !is_first(y)) {
        m.is_g[y] = 1;
        m.g_list[run].push_back(static_cast<uint8_t>(y));
        ++seen[run];
      }
    }
    auto walk = [&](size_t y, bool right) -> int16_t {
      size_t c = y;
      while (true) {
        if (c == 0 && sh.shared) return kEscape;
        if (odd(c) && !(right ? is_last(c) : is_first(c))) return static_cast<int16_t>(c);
        if (c == 0) return kEscape;
        c = sh.parent[c];
      }
    };
    m.left.assign(k, kEscape);
    m.right.assign(k, kEscape);
    for (size_t y = start; y < k; ++y) {
      m.left[y] = walk(y, false);
      m.right[y] = walk(y, true);
    }
    for (int dir = 0; dir < 2; ++dir) {
      m.count[dir].assign(k, 0);
      m.hit_b[dir].assign(k, 0);
      m.hit_r[dir].assign(k, 0);
      for (size_t y = start; y < k; ++y) {
        std::vector<size_t> st{y};
        size_t cnt = 0;
        bool hb = false, hr = false;
        auto hit = [&](size_t w) { (w == 0 ? hr : hb) = true; };
        while (!st.empty()) {
          size_t w = st.back();
          st.pop_back();
          const auto& ch = sh.children[w];
          if (sh.is_leaf(w)) {
            cnt += (sh.attr[w] & kDummy) ? 0 : 1;
          } else if (!odd(w)) {  // S node
            if (dir == 1) {
              if (sh.out(w)) {
                hit(w);
              } else {
                st.push_back(ch.back());
              }
            } else if (ch.empty()) {
              hit(w);
            } else {
              st.push_back(ch.front());
            }
          } else {
            for (uint8_t c : ch) st.push_back(c);
            if (sh.out(w)) hit(w);
          }
        }
        m.count[dir][y] = static_cast<uint16_t>(cnt);
        m.hit_b[dir][y] = hb;
        m.hit_r[dir][y] = hr;
      }
    }
    return m;
  }
};

}  // namespace sp_detail

// Succinct series-parallel multigraph. Vertices are the inorder numbers
// 1..vertices() of the padded SP tree; build() reports the relabeling.
class SpStructure {
 public:
  SpStructure() = default;

  // `forced` overrides the size-derived cover parameters (used by tests).
  static SpStructure build(const MultiGraph& g, size_t ell_cap = 8, std::vector<uint64_t>* label_of = nullptr,
                           const CoverConfig* forced = nullptr);

  size_t vertices() const { return n_; }
  size_t edges() const { return m_; }
  const BpTree& tree() const { return t_; }
  const CoverIndex& cover() const { return ix_; }

  bool is_leaf(node_t v) const { return t_.is_leaf(v); }
  bool is_s(node_t v) const { return !t_.is_leaf(v) && t_.depth(v) % 2 == 0; }
  bool is_p(node_t v) const { return !t_.is_leaf(v) && t_.depth(v) % 2 == 1; }
  bool is_dummy(node_t v) const { return v == 2 || v == t_.nodes(); }

  uint64_t irank(node_t k, size_t i) const {
    if (!is_s(k)) throw std::invalid_argument("irank: not an S node");
    if (i == 0 || i >= t_.degree(k)) throw std::out_of_range("irank: index out of range");
    return ino(t_.child(k, i + 1));
  }

  std::pair<node_t, size_t> iselect(uint64_t j) const {
    node_t x = owner(j);
    return {*t_.parent(x), t_.child_rank(x) - 1};
  }

  // (left, right) terminals of the subgraph below v; 0 marks a missing side
  // (only the padding leaves have one).
  std::pair<uint64_t, uint64_t> node_label(node_t v) const {
    if (v == 1) throw std::invalid_argument("node_label: the root has no label");
    return {left(v), right(v)};
  }

  node_t b_of(uint64_t u) const {
    node_t x = owner(u);
    return *t_.prev_sibling(x);
  }
  node_t f_of(uint64_t u) const { return owner(u); }

  bool adjacent(uint64_t u, uint64_t v) const { return witness(u, v) != 0; }

  size_t multiplicity(uint64_t u, uint64_t v) const {
    node_t w = witness(u, v);
    if (w == 0) return 0;
    return t_.is_leaf(w) ? 1 : trailing_leaves(w);
  }

  size_t degree(uint64_t u) const {
    node_t y = owner(u);
    node_t x = *t_.prev_sibling(y);
    return frontier(x, 1) + frontier(y, 0);
  }

  std::vector<uint64_t> neighborhood(uint64_t u) const {
    node_t y = owner(u);
    node_t x = *t_.prev_sibling(y);
    std::vector<uint64_t> out;
    explore(x, 1, out);
    explore(y, 0, out);
    return out;
  }

  // Graph on vertices 0..vertices()-1 (label minus one).
  MultiGraph decode() const {
    MultiGraph g(n_);
    for (size_t j = 1; j <= t_.leaf_rank_end(); ++j) {
      node_t x = t_.leaf_select(j);
      if (is_dummy(x)) continue;
      auto [a, b] = node_label(x);
      g.add_edge(static_cast<vertex_t>(a - 1), static_cast<vertex_t>(b - 1));
    }
    return g;
  }

  // Inorder intervals [lo, hi] owned by a micro, one per non-empty run.
  std::vector<std::pair<uint64_t, uint64_t>> micro_intervals(uint32_t micro) const {
    const auto& m = memo_[ix_.shape_id(micro)];
    uint32_t mini = ix_.mini_of_micro(t_, micro);
    std::vector<std::pair<uint64_t, uint64_t>> out;
    for (int r = 0; r < 2; ++r) {
      size_t c = m.g_list[r].size();
      if (c == 0) continue;
      uint64_t q = r == 0 ? run1_start(mini, micro) : q2_[micro];
      out.push_back({mini_pos(mini, q), mini_pos(mini, q + c - 1)});
    }
    return out;
  }

  std::vector<std::pair<std::string, size_t>> space() const {
    return {{"bp", t_.bit_size()},
            {"cover", ix_.bit_size()},
            {"shapes", ix_.table_bits()},
            {"inorder", qrun_.bit_size() + ubase_.bit_size() + q2_.bit_size() + l1_.bit_size() + l2_.bit_size() +
                            c1_.bit_size() + base_.bit_size() + dmini_.bit_size() + dmicro_.bit_size()},
            {"labels", esc_[0].bit_size() + esc_[1].bit_size() + val_[0].bit_size() + val_[1].bit_size()},
            {"degrees", ob_[0].bit_size() + ob_[1].bit_size() + or_[0].bit_size() + or_[1].bit_size() +
                            xb_[0].bit_size() + xb_[1].bit_size() + xr_[0].bit_size() + xr_[1].bit_size()}};
  }
  size_t bit_size() const {
    size_t b = 0;
    for (auto& [name, bits] : space()) b += bits;
    return b;
  }

  void save(Writer& w) const;
  static SpStructure load(Reader& r);

 private:
  const sp_detail::SpMemo& memo(uint32_t micro) const { return memo_[ix_.shape_id(micro)]; }

  uint64_t mini_pos(uint32_t mini, uint64_t q) const {
    uint64_t c1 = c1_[mini];
    return q < c1 ? l1_[mini] + q : l2_[mini] + (q - c1);
  }

  // Inorder number owned by x (x is a non-first child of an S node).
  uint64_t ino(node_t x) const {
    auto loc = ix_.locate(t_, x);
    const auto& sh = ix_.shape(loc.micro);
    const auto& m = memo(loc.micro);
    size_t off = loc.local - (sh.shared ? 1 : 0);
    uint32_t mini = ix_.mini_of(t_, x);
    uint64_t q = (off < sh.run1 ? run1_start(mini, loc.micro) : q2_[loc.micro]) + m.g_before[loc.local];
    return mini_pos(mini, q);
  }

  // Run starts are non-decreasing in (mini, local index) order, so they are
  // kept as one strictly increasing sequence shifted by position.
  uint64_t run1_start(uint32_t mini, uint32_t micro) const {
    uint64_t p = ubase_[mini] + ix_.mini_local_index(mini, micro);
    return qrun_.select(p + 1) - p - base_[mini];
  }

  // Node owning inorder number j.
  node_t owner(uint64_t j) const {
    if (j == 0 || j > n_) throw std::out_of_range("vertex out of range");
    size_t a = dmini_.predecessor(j);
    uint64_t start = dmini_.select(a), sat = dmini_.satellite(a);
    uint32_t mini = static_cast<uint32_t>(sat >> 1);
    uint64_t q = ((sat & 1) ? c1_[mini] : 0) + (j - start);
    uint64_t f = base_[mini] + q;
    size_t b = dmicro_.predecessor(f);
    uint64_t fs = dmicro_.select(b), ms = dmicro_.satellite(b);
    uint32_t micro = ix_.mini_micro(mini, ms >> 1);
    size_t local = memo(micro).g_list[ms & 1][f - fs];
    return ix_.global(t_, micro, local);
  }

  // Label walks. dir 0 gives the left label, 1 the right one.
  uint64_t label(node_t v, int dir) const {
    auto loc = ix_.locate(t_, v);
    const auto& m = memo(loc.micro);
    int16_t c = dir ? m.right[loc.local] : m.left[loc.local];
    node_t stop;
    if (c != sp_detail::kEscape) {
      stop = ix_.global(t_, loc.micro, static_cast<size_t>(c));
    } else {
      uint64_t code = esc_[dir][loc.micro];
      if (code == 0) return val_[dir][ix_.mini_of_micro(t_, loc.micro)];
      node_t r = ix_.root(t_, loc.micro);
      stop = t_.level_ancestor(r, t_.depth(r) - (code - 1));
    }
    return ino(dir ? *t_.next_sibling(stop) : stop);
  }
  uint64_t left(node_t v) const { return label(v, 0); }
  uint64_t right(node_t v) const { return label(v, 1); }

  bool edgeish(node_t w) const {
    if (t_.is_leaf(w)) return !is_dummy(w);
    return is_p(w) && t_.is_leaf(*t_.last_child(w));
  }

  node_t witness(uint64_t u, uint64_t v) const {
    if (u == v) {
      owner(u);
      return 0;
    }
    if (u > v) std::swap(u, v);
    node_t fu = owner(u);
    node_t bv = *t_.prev_sibling(owner(v));
    if (fu == bv) return edgeish(fu) ? fu : 0;
    size_t du = t_.depth(fu), dv = t_.depth(bv);
    if (du > dv) return right(fu) == v && edgeish(fu) ? fu : 0;
    if (du < dv) return left(bv) == u && edgeish(bv) ? bv : 0;
    return 0;
  }

  // Leaf children at the end of P node w, read off the parentheses.
  size_t trailing_leaves(node_t w) const {
    const BitVector& bp = t_.bits();
    size_t pos = t_.close(w), k = 0;
    while (pos >= 2 && !bp[pos - 1] && bp[pos - 2]) {
      ++k;
      pos -= 2;
    }
    return k;
  }

  // Edges at the first (dir 0) or last (dir 1) terminal of x's subgraph.
  size_t frontier(node_t x, int dir) const {
    auto loc = ix_.locate(t_, x);
    const auto& m = memo(loc.micro);
    uint32_t mini = ~0u;
    auto expand = [&](uint64_t val) -> size_t {
      size_t s = val >> 2;
      if (val & 3) {
        if (mini == ~0u) mini = ix_.mini_of(t_, x);
        if (val & 2) s += xb_[dir][mini];
        if (val & 1) s += xr_[dir][mini];
      }
      return s;
    };
    size_t s = m.count[dir][loc.local];
    if (m.hit_b[dir][loc.local]) s += expand(ob_[dir][loc.micro]);
    if (m.hit_r[dir][loc.local]) s += expand(or_[dir][loc.micro]);
    return s;
  }

  void explore(node_t start, int dir, std::vector<uint64_t>& out) const {
    std::vector<std::pair<node_t, uint64_t>> st{{start, 0}};
    while (!st.empty()) {
      auto [w, other] = st.back();
      st.pop_back();
      if (t_.is_leaf(w)) {
        if (!is_dummy(w)) out.push_back(other ? other : label(w, 1 - dir));
      } else if (is_s(w)) {
        node_t z = dir ? *t_.last_child(w) : t_.child(w, 1);
        st.push_back({z, dir ? ino(z) : ino(*t_.next_sibling(z))});
      } else {
        for (std::optional<node_t> c = t_.child(w, 1); c; c = t_.next_sibling(*c)) {
          if (t_.is_leaf(*c)) {
            out.push_back(other ? other : label(w, 1 - dir));
            break;
          }
          st.push_back({*c, other});
        }
      }
    }
  }

  BpTree t_;
  CoverIndex ix_;
  std::vector<sp_detail::SpMemo> memo_;
  size_t n_ = 0, m_ = 0;
  // inorder: per-micro run offsets in the mini's concatenated runs, per-mini runs
  IntVector ubase_, l1_, l2_, c1_, base_;
  SparseDict qrun_;
  EscapedVector q2_;
  SparseDict dmini_, dmicro_;
  // label escapes: per-micro ancestor distance code, per-mini absolute answer
  std::array<EscapedVector, 2> esc_;
  std::array<IntVector, 2> val_;
  // frontier contributions beyond a micro (boundary and root) and beyond a mini
  std::array<EscapedVector, 2> ob_, or_;
  std::array<IntVector, 2> xb_, xr_;
};

inline SpStructure SpStructure::build(const MultiGraph& g, size_t ell_cap, std::vector<uint64_t>* label_of,
                                      const CoverConfig* forced) {
  using sp_detail::kDummy;
  SpTree base = sp_recognize(g);
  uint32_t d1 = 0, d2 = 0;
  SpTree pt = sp_pad(base, &d1, &d2);
  std::vector<node_t> pre;
  SpStructure st;
  st.t_ = BpTree::from_children(pt.kids, pt.root, &pre);
  const BpTree& t = st.t_;
  size_t s = t.nodes();
  if (pre[d1] != 2 || pre[d2] != s) throw std::logic_error("padding leaves are not at the ends of the preorder");

  // explicit preorder-indexed view of the tree, used only while building
  std::vector<node_t> par = t.parent_array();
  std::vector<std::vector<node_t>> kids(s + 1);
  std::vector<uint32_t> depth(s + 1, 0), crank(s + 1, 0);
  for (uint32_t x = 0; x < pt.size(); ++x)
    for (uint32_t c : pt.kids[x]) kids[pre[x]].push_back(pre[c]);
  for (node_t p = 2; p <= s; ++p) depth[p] = depth[par[p]] + 1;
  for (node_t p = 1; p <= s; ++p)
    for (size_t i = 0; i < kids[p].size(); ++i) crank[kids[p][i]] = static_cast<uint32_t>(i);
  auto is_s = [&](node_t p) { return !kids[p].empty() && depth[p] % 2 == 0; };
  for (uint32_t x = 0; x < pt.size(); ++x)
    if ((pt.type[x] == SpType::S) != is_s(pre[x])) throw std::logic_error("SP node types do not follow depth parity");

  std::vector<uint64_t> gpre(s + 2, 0);
  for (node_t p = 1; p <= s; ++p) gpre[p + 1] = gpre[p] + (p > 1 && is_s(par[p]) && crank[p] > 0 ? 1 : 0);
  auto ino = [&](node_t p) { return gpre[p] + 1; };
  st.n_ = gpre[s + 1];
  st.m_ = g.m();
  if (st.n_ != g.n()) throw std::logic_error("inorder numbers do not match the vertex count");
  if (label_of) {
    label_of->assign(g.n(), 0);
    for (uint32_t x = 0; x < pt.size(); ++x)
      for (size_t i = 0; i < pt.gaps[x].size(); ++i) (*label_of)[pt.gaps[x][i]] = ino(pre[pt.kids[x][i + 1]]);
  }

  CoverConfig cfg = forced ? *forced : CoverConfig::for_size(s, 1.84, ell_cap);
  auto tc = two_level(t, cfg);
  st.ix_ = CoverIndex::build(
      t, tc, [&](node_t x) -> uint8_t { return x == 2 || x == s ? kDummy : 0; },
      [](const Subtree&) -> uint8_t { return 0; });
  const CoverIndex& ix = st.ix_;
  for (uint32_t i = 0; i < ix.table().size(); ++i) st.memo_.push_back(sp_detail::SpMemo::from(ix.table().shape(i)));

  auto runs_of = [](const Subtree& u) {
    std::vector<std::pair<node_t, node_t>> runs;
    for (node_t x : u.nodes) {
      if (x == u.root && u.root_shared) continue;
      if (!runs.empty() && runs.back().second == x) {
        ++runs.back().second;
      } else {
        runs.push_back({x, x + 1});
      }
    }
    return runs;
  };

  // inorder intervals
  size_t nm = tc.minis.size(), nu = tc.micros.size();
  std::vector<std::pair<node_t, node_t>> mr1(nm), mr2(nm, {0, 0});
  std::vector<uint64_t> l1(nm), l2(nm, 0), c1(nm), c2(nm, 0), mbase(nm);
  std::vector<std::pair<uint64_t, uint64_t>> dm;
  uint64_t acc = 0;
  for (size_t i = 0; i < nm; ++i) {
    auto runs = runs_of(tc.minis[i]);
    mr1[i] = runs[0];
    l1[i] = gpre[runs[0].first] + 1;
    c1[i] = gpre[runs[0].second] - gpre[runs[0].first];
    if (runs.size() == 2) {
      mr2[i] = runs[1];
      l2[i] = gpre[runs[1].first] + 1;
      c2[i] = gpre[runs[1].second] - gpre[runs[1].first];
    }
    if (c1[i]) dm.push_back({l1[i], 2 * i});
    if (c2[i]) dm.push_back({l2[i], 2 * i + 1});
    mbase[i] = acc;
    acc += c1[i] + c2[i];
  }
  std::sort(dm.begin(), dm.end());
  std::vector<uint64_t> q1(nu, 0), q2(nu, 0);
  std::vector<std::pair<uint64_t, uint64_t>> du;
  for (uint32_t mu = 0; mu < nu; ++mu) {
    uint32_t mi = tc.micro_mini[mu];
    auto runs = runs_of(tc.micros[mu]);
    const auto& m = st.memo_[ix.shape_id(mu)];
    for (size_t r = 0; r < runs.size(); ++r) {
      node_t a = runs[r].first;
      bool in1 = a >= mr1[mi].first && a < mr1[mi].second;
      uint64_t q = in1 ? gpre[a] - gpre[mr1[mi].first] : c1[mi] + gpre[a] - gpre[mr2[mi].first];
      uint64_t cnt = gpre[runs[r].second] - gpre[a];
      if (cnt != m.g_list[r].size()) throw std::logic_error("micro inorder count disagrees with its shape");
      (r == 0 ? q1 : q2)[mu] = q;
      if (cnt) du.push_back({mbase[mi] + q, 2 * ix.mini_local_index(mi, mu) + r});
    }
  }
  std::sort(du.begin(), du.end());
  auto split = [](const std::vector<std::pair<uint64_t, uint64_t>>& v, uint64_t universe) {
    std::vector<uint64_t> a, b;
    for (auto [x, y] : v) {
      a.push_back(x);
      b.push_back(y);
    }
    return SparseDict(universe, a, b);
  };
  st.dmini_ = split(dm, st.n_ + 1);
  st.dmicro_ = split(du, st.n_ + 1);
  std::vector<uint64_t> ubase(nm), qseq;
  for (size_t i = 0; i < nm; ++i) {
    ubase[i] = qseq.size();
    uint64_t prev = mbase[i];
    for (uint32_t mu : tc.mini_micros[i]) {
      if (ix.mini_local_index(static_cast<uint32_t>(i), mu) != qseq.size() - ubase[i])
        throw std::logic_error("mini micros out of local order");
      uint64_t v = mbase[i] + q1[mu];
      if (st.memo_[ix.shape_id(mu)].g_list[0].empty()) v = prev;
      if (v < prev) throw std::logic_error("micro run starts not monotone in their mini");
      prev = v;
      qseq.push_back(v + qseq.size());
    }
  }
  st.ubase_ = IntVector::from(ubase);
  st.qrun_ = SparseDict(acc + qseq.size() + 1, qseq);
  st.q2_ = EscapedVector::from(q2);
  st.l1_ = IntVector::from(l1);
  st.l2_ = IntVector::from(l2);
  st.c1_ = IntVector::from(c1);
  st.base_ = IntVector::from(mbase);

  // label escapes
  auto walk = [&](node_t x, int dir) -> node_t {
    for (node_t c = x; c != 1; c = par[c]) {
      bool edge_side = dir ? crank[c] + 1 == kids[par[c]].size() : crank[c] == 0;
      if (depth[c] % 2 == 1 && !edge_side) return c;
    }
    return 0;
  };
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<uint64_t> esc(nu, 0), val(nm, 0);
    for (size_t i = 0; i < nm; ++i) {
      node_t c = walk(tc.minis[i].root, dir);
      if (c) val[i] = ino(dir ? kids[par[c]][crank[c] + 1] : c);
    }
    for (uint32_t mu = 0; mu < nu; ++mu) {
      node_t r = tc.micros[mu].root, big = tc.minis[tc.micro_mini[mu]].root;
      node_t c = walk(r, dir);
      if (c && depth[c] >= depth[big]) esc[mu] = depth[r] - depth[c] + 1;
    }
    st.esc_[dir] = EscapedVector::from(esc);
    st.val_[dir] = IntVector::from(val);
  }

  // frontier contributions
  std::array<std::vector<uint64_t>, 2> full;
  full[0].assign(s + 1, 0);
  full[1].assign(s + 1, 0);
  for (node_t p = s; p >= 1; --p) {
    if (kids[p].empty()) {
      full[0][p] = full[1][p] = (p == 2 || p == s) ? 0 : 1;
    } else if (is_s(p)) {
      full[0][p] = full[0][kids[p].front()];
      full[1][p] = full[1][kids[p].back()];
    } else {
      for (node_t c : kids[p]) {
        full[0][p] += full[0][c];
        full[1][p] += full[1][c];
      }
    }
  }
  auto pick = [&](node_t w, int dir) -> std::vector<node_t> {
    if (kids[w].empty()) return {};
    if (is_s(w)) return {dir ? kids[w].back() : kids[w].front()};
    return kids[w];
  };
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<uint64_t> xb(nm, 0), xr(nm, 0), ob(nu, 0), orr(nu, 0);
    std::vector<node_t> mb(nm, 0);
    for (size_t i = 0; i < nm; ++i) {
      const Subtree& M = tc.minis[i];
      if (M.boundary) {
        mb[i] = M.boundary->first;
        for (node_t c : pick(mb[i], dir))
          if (tc.owner_mini[c] != i) xb[i] += full[dir][c];
      }
      if (!M.root_shared)
        for (node_t c : pick(M.root, dir))
          if (tc.owner_mini[c] != i) xr[i] += full[dir][c];
    }
    auto beyond = [&](node_t w, uint32_t mu) -> uint64_t {
      uint32_t mi = tc.micro_mini[mu];
      node_t big = tc.minis[mi].root;
      uint64_t cnt = 0;
      bool hb = false, hr = false;
      auto hit = [&](node_t x) {
        if (x == mb[mi]) {
          hb = true;
        } else if (x == big) {
          hr = true;
        } else {
          throw std::logic_error("frontier leaves a mini away from its boundary");
        }
      };
      std::vector<node_t> stack;
      for (node_t c : pick(w, dir)) {
        if (tc.owner_micro[c] == mu && !(c == tc.micros[mu].root && tc.micros[mu].root_shared)) continue;
        if (tc.owner_mini[c] == mi) {
          stack.push_back(c);
        } else {
          hit(w);
        }
      }
      while (!stack.empty()) {
        node_t x = stack.back();
        stack.pop_back();
        if (kids[x].empty()) {
          cnt += (x == 2 || x == s) ? 0 : 1;
          continue;
        }
        for (node_t c : pick(x, dir)) {
          if (tc.owner_mini[c] == mi) {
            stack.push_back(c);
          } else {
            hit(x);
          }
        }
      }
      return cnt * 4 + (hb ? 2 : 0) + (hr ? 1 : 0);
    };
    for (uint32_t mu = 0; mu < nu; ++mu) {
      const Subtree& u = tc.micros[mu];
      if (u.boundary) ob[mu] = beyond(u.boundary->first, mu);
      if (!u.root_shared) orr[mu] = beyond(u.root, mu);
    }
    st.xb_[dir] = IntVector::from(xb);
    st.xr_[dir] = IntVector::from(xr);
    st.ob_[dir] = EscapedVector::from(ob);
    st.or_[dir] = EscapedVector::from(orr);
  }
  return st;
}

inline void SpStructure::save(Writer& w) const {
  t_.save(w);
  ix_.save(w);
  w.u64(n_);
  w.u64(m_);
  for (const IntVector* v : {&ubase_, &l1_, &l2_, &c1_, &base_}) v->save(w);
  qrun_.save(w);
  q2_.save(w);
  dmini_.save(w);
  dmicro_.save(w);
  for (int d = 0; d < 2; ++d) {
    esc_[d].save(w);
    val_[d].save(w);
    ob_[d].save(w);
    or_[d].save(w);
    xb_[d].save(w);
    xr_[d].save(w);
  }
}

inline SpStructure SpStructure::load(Reader& r) {
  SpStructure st;
  st.t_ = BpTree::load(r);
  st.ix_ = CoverIndex::load(r);
  st.n_ = r.u64();
  st.m_ = r.u64();
  for (IntVector* v : {&st.ubase_, &st.l1_, &st.l2_, &st.c1_, &st.base_}) *v = IntVector::load(r);
  st.qrun_ = SparseDict::load(r);
  st.q2_ = EscapedVector::load(r);
  st.dmini_ = SparseDict::load(r);
  st.dmicro_ = SparseDict::load(r);
  for (int d = 0; d < 2; ++d) {
    st.esc_[d] = EscapedVector::load(r);
    st.val_[d] = IntVector::load(r);
    st.ob_[d] = EscapedVector::load(r);
    st.or_[d] = EscapedVector::load(r);
    st.xb_[d] = IntVector::load(r);
    st.xr_[d] = IntVector::load(r);
  }
  if (st.q2_.size() != st.ix_.micros() || st.qrun_.size() != st.ix_.micros() || st.l1_.size() != st.ix_.minis() ||
      st.ubase_.size() != st.ix_.minis())
    throw format_error("SP payload does not match its cover");
  for (uint32_t i = 0; i < st.ix_.table().size(); ++i)
    st.memo_.push_back(sp_detail::SpMemo::from(st.ix_.table().shape(i)));
  return st;
}

}  // namespace scsg

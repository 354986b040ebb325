#pragma once

#include <algorithm>
#include <array>
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

enum class BcClass { Block, Cactus, BlockCactus };

// Star-replacement tree of a block-cactus graph. Node 0 is the root dummy;
// dummies and vertices alternate by depth. Vertex nodes carry the input id.
struct BlockTree {
  std::vector<std::vector<uint32_t>> kids;
  std::vector<int64_t> vertex;   // input vertex, or -1 for a dummy
  std::vector<uint8_t> cycle;    // dummy stands for a cycle of length >= 4
};

namespace bc_detail {

// Ring order of a cycle block starting at `from`, stepping first to the
// smallest neighbor of `from` on the ring.
inline std::vector<vertex_t> ring_from(const MultiGraph& g, const std::vector<size_t>& edges, vertex_t from) {
  std::unordered_map<vertex_t, std::vector<vertex_t>> nb;
  for (size_t e : edges) {
    auto [u, v] = g.edges()[e];
    nb[u].push_back(v);
    nb[v].push_back(u);
  }
  for (auto& [x, a] : nb) std::sort(a.begin(), a.end());
  std::vector<vertex_t> ring{from};
  vertex_t prev = from, cur = nb.at(from)[0];
  while (cur != from) {
    ring.push_back(cur);
    const auto& a = nb.at(cur);
    vertex_t nxt = a[0] == prev ? a[1] : a[0];
    prev = cur;
    cur = nxt;
  }
  return ring;
}

}  // namespace bc_detail

inline BlockTree bc_recognize(const MultiGraph& g, BcClass cls = BcClass::BlockCactus) {
  if (g.n() == 0) throw std::invalid_argument("bc_recognize: empty graph");
  if (!connected(g)) throw std::invalid_argument("bc_recognize: graph is not connected");
  if (!g.simple()) throw not_in_class("block-cactus graphs are simple");
  BlockTree bt;
  auto add = [&](int64_t vx, bool cyc) {
    bt.kids.emplace_back();
    bt.vertex.push_back(vx);
    bt.cycle.push_back(cyc ? 1 : 0);
    return static_cast<uint32_t>(bt.kids.size() - 1);
  };
  if (g.n() == 1) {
    add(-1, false);
    uint32_t only = add(0, false);
    bt.kids[0].push_back(only);
    return bt;
  }
  Blocks b = blocks(g);
  size_t nb = b.edges.size();
  std::vector<uint8_t> cyc(nb, 0);
  for (size_t i = 0; i < nb; ++i) {
    size_t k = b.vertices[i].size(), e = b.edges[i].size();
    bool clique = e == k * (k - 1) / 2;
    bool cycle = !clique && k >= 4 && e == k;
    if (!clique && !cycle) throw not_in_class("a block is neither a clique nor a cycle");
    if (cls == BcClass::Block && cycle) throw not_in_class("a block is a cycle");
    if (cls == BcClass::Cactus && clique && k > 3) throw not_in_class("a block is a clique on more than three vertices");
    cyc[i] = cycle;
  }
  std::vector<std::vector<size_t>> blocks_of(g.n());
  for (size_t i = 0; i < nb; ++i)
    for (vertex_t x : b.vertices[i]) blocks_of[x].push_back(i);

  // breadth-first over blocks from the first block holding vertex 0
  struct Item {
    size_t block;
    int64_t via;  // parent cut vertex or -1
    uint32_t node;
  };
  std::vector<uint8_t> seen(nb, 0);
  size_t rb = blocks_of[0][0];
  seen[rb] = 1;
  std::vector<Item> queue{{rb, -1, add(-1, cyc[rb])}};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Item it = queue[qi];
    std::vector<vertex_t> order;
    if (cyc[it.block]) {
      vertex_t from = it.via < 0 ? b.vertices[it.block][0] : static_cast<vertex_t>(it.via);
      order = bc_detail::ring_from(g, b.edges[it.block], from);
      if (it.via >= 0) order.erase(order.begin());
    } else {
      for (vertex_t x : b.vertices[it.block])
        if (static_cast<int64_t>(x) != it.via) order.push_back(x);
    }
    for (vertex_t x : order) {
      uint32_t vn = add(x, false);
      bt.kids[it.node].push_back(vn);
      for (size_t nbk : blocks_of[x]) {
        if (seen[nbk]) continue;
        seen[nbk] = 1;
        uint32_t dn = add(-1, cyc[nbk]);
        bt.kids[vn].push_back(dn);
        queue.push_back({nbk, x, dn});
      }
    }
  }
  return bt;
}

// Edges of the graph a block tree stands for, over input vertex ids.
inline MultiGraph bc_tree_graph(const BlockTree& bt) {
  size_t n = 0;
  for (int64_t x : bt.vertex) n += x >= 0;
  MultiGraph g(n);
  std::vector<int64_t> par(bt.kids.size(), -1);
  for (size_t d = 0; d < bt.kids.size(); ++d)
    for (uint32_t c : bt.kids[d]) par[c] = static_cast<int64_t>(d);
  for (size_t d = 0; d < bt.kids.size(); ++d) {
    if (bt.vertex[d] >= 0) continue;
    std::vector<vertex_t> ring;
    if (par[d] >= 0) ring.push_back(static_cast<vertex_t>(bt.vertex[par[d]]));
    for (uint32_t c : bt.kids[d]) ring.push_back(static_cast<vertex_t>(bt.vertex[c]));
    if (bt.cycle[d]) {
      for (size_t i = 0; i < ring.size(); ++i) g.add_edge(ring[i], ring[(i + 1) % ring.size()]);
    } else {
      for (size_t i = 0; i < ring.size(); ++i)
        for (size_t j = i + 1; j < ring.size(); ++j) g.add_edge(ring[i], ring[j]);
    }
  }
  return g;
}


namespace bc_detail {

constexpr uint8_t kCycle = 2;  // node attribute: cycle dummy

// Per-shape lookup payload. A node is a vertex exactly at odd global depth.
struct BcMemo {
  std::vector<uint8_t> vlist;     // vertex members in local order
  std::vector<uint8_t> vrank;     // position in vlist
  std::vector<uint16_t> childsum; // neighbors reached through local child dummies
  std::vector<int16_t> out_child; // local clique child with children elsewhere, or -1

  static BcMemo from(const LocalShape& sh) {
    size_t k = sh.nodes();
    BcMemo m;
    bool odd_root = sh.root_flags & shape_bits::kOddDepth;
    m.vrank.assign(k, 0);
    m.childsum.assign(k, 0);
    m.out_child.assign(k, -1);
    for (size_t y = sh.shared ? 1 : 0; y < k; ++y) {
      if (((sh.depth[y] & 1) != 0) == odd_root) continue;
      m.vrank[y] = static_cast<uint8_t>(m.vlist.size());
      m.vlist.push_back(static_cast<uint8_t>(y));
      for (uint8_t x : sh.children[y]) {
        bool cyc = sh.attr[x] & kCycle;
        m.childsum[y] += cyc ? 2 : static_cast<uint16_t>(sh.children[x].size());
        if (!cyc && sh.out(x)) m.out_child[y] = x;
      }
    }
    return m;
  }
};

}  // namespace bc_detail

// Succinct block-cactus graph. Vertices are labeled 1..vertices(); build()
// reports the relabeling.
class BcStructure {
 public:
  BcStructure() = default;

  static BcStructure build(const MultiGraph& g, BcClass cls = BcClass::BlockCactus, size_t ell_cap = 8,
                           std::vector<uint64_t>* label_of = nullptr, const CoverConfig* forced = nullptr);

  size_t vertices() const { return n_; }
  size_t edges() const { return m_; }
  const BpTree& tree() const { return t_; }
  const CoverIndex& cover() const { return ix_; }

  bool is_dummy(node_t v) const { return t_.depth(v) % 2 == 0; }
  bool is_cycle(node_t v) const {
    auto loc = ix_.locate(t_, v);
    return ix_.shape(loc.micro).attr[loc.local] & bc_detail::kCycle;
  }

  node_t node(uint64_t j) const {
    if (j == 0 || j > n_) throw std::out_of_range("vertex " + std::to_string(j) + " out of range");
    size_t a = dmini_.predecessor(j);
    uint32_t mini = static_cast<uint32_t>(dmini_.satellite(a));
    size_t b = dmicro_.predecessor(j);
    uint32_t mu = ix_.mini_micro(mini, dmicro_.satellite(b));
    const auto& m = memo(mu);
    return ix_.global(t_, mu, m.vlist[j - dmicro_.select(b)]);
  }
  uint64_t label(node_t v) const {
    auto loc = ix_.locate(t_, v);
    uint32_t mini = ix_.mini_of_micro(t_, loc.micro);
    uint64_t p = ubase_[mini] + ix_.mini_local_index(mini, loc.micro);
    return lstart_.select(p + 1) - p + memo(loc.micro).vrank[loc.local];
  }

  size_t degree(uint64_t u) const {
    node_t v = node(u);
    auto loc = ix_.locate(t_, v);
    const LocalShape& sh = ix_.shape(loc.micro);
    const auto& m = memo(loc.micro);
    node_t p = *t_.parent(v);
    size_t d = is_cycle(p) ? 2 : t_.degree(p) - 1 + (p != 1);
    d += m.childsum[loc.local];
    if (int16_t oc = m.out_child[loc.local]; oc >= 0)
      d += t_.degree(ix_.global(t_, loc.micro, static_cast<size_t>(oc))) - sh.children[oc].size();
    if (sh.out(loc.local)) {
      uint64_t code = corr_[loc.local == 0 ? 0 : 1][loc.micro];
      d += code >> 2;
      if (code & 3) {
        uint32_t mini = ix_.mini_of_micro(t_, loc.micro);
        if (code & 1) d += outer_[0][mini];
        if (code & 2) d += outer_[1][mini];
      }
    }
    return d;
  }

  bool adjacent(uint64_t i, uint64_t j) const {
    node_t a = node(i), b = node(j);
    if (a == b) return false;
    node_t pa = *t_.parent(a), pb = *t_.parent(b);
    if (pa == pb) {
      if (!is_cycle(pa)) return true;
      size_t ra = t_.child_rank(a), rb = t_.child_rank(b);
      if (ra > rb) std::swap(ra, rb);
      return rb - ra == 1 || (pa == 1 && ra == 1 && rb == t_.degree(pa));
    }
    auto below = [&](node_t x, node_t px, node_t top) {  // top is x's grandparent
      if (px == 1 || *t_.parent(px) != top) return false;
      if (!is_cycle(px)) return true;
      size_t r = t_.child_rank(x);
      return r == 1 || r == t_.degree(px);
    };
    return below(a, pa, b) || below(b, pb, a);
  }
  size_t multiplicity(uint64_t i, uint64_t j) const { return adjacent(i, j) ? 1 : 0; }

  // Neighbors in tree-walk order: through the parent dummy, then each child dummy.
  std::vector<uint64_t> neighborhood(uint64_t u) const {
    node_t v = node(u);
    std::vector<uint64_t> out;
    node_t p = *t_.parent(v);
    if (is_cycle(p)) {
      size_t k = t_.degree(p), r = t_.child_rank(v);
      if (p == 1) {
        out.push_back(label(t_.child(p, r == 1 ? k : r - 1)));
        out.push_back(label(t_.child(p, r == k ? 1 : r + 1)));
      } else {
        out.push_back(label(r == 1 ? *t_.parent(p) : t_.child(p, r - 1)));
        out.push_back(label(r == k ? *t_.parent(p) : t_.child(p, r + 1)));
      }
    } else {
      if (p != 1) out.push_back(label(*t_.parent(p)));
      for (std::optional<node_t> c = t_.child(p, 1); c; c = t_.next_sibling(*c))
        if (*c != v) out.push_back(label(*c));
    }
    if (!t_.is_leaf(v)) {
      for (std::optional<node_t> x = t_.child(v, 1); x; x = t_.next_sibling(*x)) {
        if (is_cycle(*x)) {
          out.push_back(label(t_.child(*x, 1)));
          out.push_back(label(*t_.last_child(*x)));
        } else {
          for (std::optional<node_t> c = t_.child(*x, 1); c; c = t_.next_sibling(*c)) out.push_back(label(*c));
        }
      }
    }
    return out;
  }

  // Graph over labels - 1.
  MultiGraph decode() const {
    MultiGraph g(n_);
    auto par = t_.parent_array();
    std::vector<std::vector<node_t>> kids(t_.nodes() + 1);
    std::vector<uint32_t> depth(t_.nodes() + 1, 0);
    for (node_t v = 2; v <= t_.nodes(); ++v) {
      kids[par[v]].push_back(v);
      depth[v] = depth[par[v]] + 1;
    }
    for (node_t d = 1; d <= t_.nodes(); ++d) {
      if (depth[d] % 2) continue;
      std::vector<vertex_t> ring;
      if (d != 1) ring.push_back(static_cast<vertex_t>(label(par[d]) - 1));
      for (node_t c : kids[d]) ring.push_back(static_cast<vertex_t>(label(c) - 1));
      if (is_cycle(d)) {
        for (size_t i = 0; i < ring.size(); ++i) g.add_edge(ring[i], ring[(i + 1) % ring.size()]);
      } else {
        for (size_t i = 0; i < ring.size(); ++i)
          for (size_t j = i + 1; j < ring.size(); ++j) g.add_edge(ring[i], ring[j]);
      }
    }
    return g;
  }

  std::vector<std::pair<std::string, size_t>> space() const {
    return {{"bp", t_.bit_size()},
            {"cover", ix_.bit_size()},
            {"shapes", ix_.table_bits()},
            {"dummy_flags", 0},
            {"cycle_info", 0},
            {"labels", ubase_.bit_size() + lstart_.bit_size() + dmini_.bit_size() + dmicro_.bit_size()},
            {"degrees", corr_[0].bit_size() + corr_[1].bit_size() + outer_[0].bit_size() + outer_[1].bit_size()}};
  }
  size_t bit_size() const {
    size_t b = 0;
    for (auto& [name, bits] : space()) b += bits;
    return b;
  }

  void save(Writer& w) const;
  static BcStructure load(Reader& r);

 private:
  const bc_detail::BcMemo& memo(uint32_t micro) const { return memo_[ix_.shape_id(micro)]; }
  void make_memo() {
    memo_.clear();
    for (uint32_t i = 0; i < ix_.table().size(); ++i) memo_.push_back(bc_detail::BcMemo::from(ix_.table().shape(i)));
  }

  BpTree t_;
  CoverIndex ix_;
  std::vector<bc_detail::BcMemo> memo_;
  size_t n_ = 0, m_ = 0;
  // First label of each micro, shifted by its (mini, local) position.
  IntVector ubase_;
  SparseDict lstart_;
  SparseDict dmini_, dmicro_;
  // neighbor counts beyond a micro for its root and boundary vertex; beyond a mini
  std::array<EscapedVector, 2> corr_;
  std::array<IntVector, 2> outer_;
};

inline BcStructure BcStructure::build(const MultiGraph& g, BcClass cls, size_t ell_cap, std::vector<uint64_t>* label_of,
                                      const CoverConfig* forced) {
  BlockTree bt = bc_recognize(g, cls);
  std::vector<node_t> pre;
  BcStructure st;
  st.t_ = BpTree::from_children(bt.kids, 0, &pre);
  st.n_ = g.n();
  st.m_ = g.m();
  size_t s = st.t_.nodes();
  std::vector<uint8_t> cyc(s + 1, 0);
  std::vector<int64_t> vx(s + 1, -1);
  for (size_t i = 0; i < bt.kids.size(); ++i) {
    cyc[pre[i]] = bt.cycle[i];
    vx[pre[i]] = bt.vertex[i];
  }
  CoverConfig cfg = forced ? *forced : CoverConfig::for_size(s, 2.092, ell_cap);
  TwoLevelCover tc = two_level(st.t_, cfg);
  st.ix_ = CoverIndex::build(
      st.t_, tc, [&](node_t x) { return static_cast<uint8_t>(cyc[x] ? bc_detail::kCycle : 0); },
      [](const Subtree&) { return uint8_t{0}; });
  st.make_memo();

  // labels: by mini, then micro within the mini, then local order
  size_t nm = tc.micros.size(), nk = tc.minis.size();
  std::vector<uint64_t> ubase(nk, 0), starts, dm, dms, du, dus;
  uint64_t next = 1;
  for (uint32_t mi = 0; mi < nk; ++mi) {
    ubase[mi] = starts.size();
    bool any = false;
    for (size_t i = 0; i < tc.mini_micros[mi].size(); ++i) {
      uint32_t mu = st.ix_.mini_micro(mi, i);
      starts.push_back(next + starts.size());
      size_t c = st.memo(mu).vlist.size();
      if (c == 0) continue;
      if (!any) {
        dm.push_back(next);
        dms.push_back(mi);
        any = true;
      }
      du.push_back(next);
      dus.push_back(i);
      next += c;
    }
  }
  if (next != st.n_ + 1) throw std::logic_error("block tree vertex count mismatch");
  st.ubase_ = IntVector::from(ubase);
  st.lstart_ = SparseDict(next + starts.size() + 1, starts);
  st.dmini_ = SparseDict(st.n_ + 1, dm, dms);
  st.dmicro_ = SparseDict(st.n_ + 1, du, dus);
  if (label_of) {
    label_of->assign(g.n(), 0);
    for (node_t v = 1; v <= s; ++v)
      if (vx[v] >= 0) (*label_of)[vx[v]] = st.label(v);
  }

  // degree corrections for vertices whose children leave their micro
  auto par = st.t_.parent_array();
  std::vector<std::vector<node_t>> kids(s + 1);
  for (node_t v = 2; v <= s; ++v) kids[par[v]].push_back(v);
  std::array<std::vector<uint64_t>, 2> corr{std::vector<uint64_t>(nm, 0), std::vector<uint64_t>(nm, 0)};
  std::array<std::vector<uint64_t>, 2> outer{std::vector<uint64_t>(nk, 0), std::vector<uint64_t>(nk, 0)};
  std::vector<std::vector<node_t>> targets(nk);
  for (uint32_t mu = 0; mu < nm; ++mu) {
    const LocalShape& sh = st.ix_.shape(mu);
    uint32_t mi = tc.micro_mini[mu];
    for (int slot = 0; slot < 2; ++slot) {
      int local = slot == 0 ? 0 : sh.boundary;
      if (local < 0 || (slot == 0 && sh.shared) || !sh.out(static_cast<size_t>(local))) continue;
      node_t y = st.ix_.global(st.t_, mu, static_cast<size_t>(local));
      if (vx[y] < 0) continue;
      uint64_t all = 0, in = 0;
      for (node_t x : kids[y]) {
        if (tc.owner_micro[x] == mu) continue;
        all += cyc[x] ? 2 : kids[x].size();
        if (tc.owner_mini[x] != mi) continue;
        if (cyc[x]) {
          in += 2;
        } else {
          for (node_t z : kids[x]) in += tc.owner_mini[z] == mi;
        }
      }
      uint64_t code = in << 2;
      if (all != in) {
        auto& tg = targets[mi];
        size_t k = std::find(tg.begin(), tg.end(), y) - tg.begin();
        if (k == tg.size()) {
          if (k == 2) throw std::logic_error("more than two vertices of a mini need outside degree counts");
          tg.push_back(y);
          outer[k][mi] = all - in;
        }
        code |= uint64_t{1} << k;
      }
      corr[slot][mu] = code;
    }
  }
  for (int k = 0; k < 2; ++k) {
    st.corr_[k] = EscapedVector::from(corr[k]);
    st.outer_[k] = IntVector::from(outer[k]);
  }
  return st;
}

inline void BcStructure::save(Writer& w) const {
  t_.save(w);
  ix_.save(w);
  w.u64(n_);
  w.u64(m_);
  ubase_.save(w);
  lstart_.save(w);
  dmini_.save(w);
  dmicro_.save(w);
  for (int k = 0; k < 2; ++k) {
    corr_[k].save(w);
    outer_[k].save(w);
  }
}

inline BcStructure BcStructure::load(Reader& r) {
  BcStructure st;
  st.t_ = BpTree::load(r);
  st.ix_ = CoverIndex::load(r);
  st.n_ = r.u64();
  st.m_ = r.u64();
  st.ubase_ = IntVector::load(r);
  st.lstart_ = SparseDict::load(r);
  st.dmini_ = SparseDict::load(r);
  st.dmicro_ = SparseDict::load(r);
  for (int k = 0; k < 2; ++k) {
    st.corr_[k] = EscapedVector::load(r);
    st.outer_[k] = IntVector::load(r);
  }
  if (st.ubase_.size() != st.ix_.minis() || st.lstart_.size() != st.ix_.micros() || st.corr_[0].size() != st.ix_.micros() ||
      st.corr_[1].size() != st.ix_.micros() || st.dmicro_.universe() != st.n_ + 1)
    throw format_error("block-cactus payload does not match its cover");
  st.make_memo();
  return st;
}

}  // namespace scsg

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scsg/bits.hpp"
#include "scsg/ordtree.hpp"

namespace scsg {

struct CoverConfig {
  size_t L = 16;
  size_t ell = 4;
  size_t ell_cap = 8;
  double alpha = 1.0;

  // L = floor(log2 s)^2, ell = max(1, min(floor(log2 s / (2 alpha)), ell_cap)).
  static CoverConfig for_size(size_t s, double alpha, size_t ell_cap = 8) {
    CoverConfig c;
    c.alpha = alpha;
    c.ell_cap = ell_cap;
    size_t lg = s <= 1 ? 1 : static_cast<size_t>(std::bit_width(s) - 1);
    c.L = std::max<size_t>(1, lg * lg);
    size_t e = static_cast<size_t>(std::floor(static_cast<double>(lg) / (2.0 * alpha)));
    c.ell = std::max<size_t>(1, std::min(e, ell_cap));
    c.L = std::max(c.L, c.ell);
    return c;
  }
  bool valid() const { return ell >= 1 && ell <= L && ell <= ell_cap; }
};

// A connected piece of a tree cover. `nodes` is sorted and includes the root
// even when the root is shared (i.e. not a member of this piece).
struct Subtree {
  node_t root = 0;
  std::vector<node_t> nodes;
  bool root_shared = false;
  std::optional<std::pair<node_t, size_t>> boundary;  // (node, rank of first out-child)

  size_t members() const { return nodes.size() - (root_shared ? 1 : 0); }
  node_t first_member() const { return root_shared ? nodes[1] : nodes[0]; }
};

namespace detail {

// Greedy bottom-up cover of an explicit tree whose nodes 0..n-1 are numbered
// in preorder (0 = root). `marked[v]` forces v to count as having children
// outside its piece. Returned pieces use the same 0-based ids.
inline std::vector<Subtree> greedy_cover(const std::vector<std::vector<uint32_t>>& ch, size_t L,
                                         const std::vector<uint8_t>& marked) {
  size_t n = ch.size();
  std::vector<uint32_t> psize(n, 0);
  std::vector<uint8_t> pflag(n, 0);
  std::vector<int64_t> comp(n, -1);
  std::vector<Subtree> out;
  std::vector<uint32_t> stack;

  auto close = [&](uint32_t v, size_t lo, size_t hi, bool member) {
    Subtree s;
    s.root = v;
    s.root_shared = !member;
    int64_t id = static_cast<int64_t>(out.size());
    s.nodes.push_back(v);
    if (member) comp[v] = id;
    for (size_t i = lo; i < hi; ++i) {
      uint32_t c = ch[v][i];
      comp[c] = id;
      stack.push_back(c);
      while (!stack.empty()) {
        uint32_t w = stack.back();
        stack.pop_back();
        s.nodes.push_back(w);
        bool seen_out = false;
        for (size_t j = 0; j < ch[w].size(); ++j) {
          uint32_t x = ch[w][j];
          if (comp[x] == -1) {
            comp[x] = id;
            stack.push_back(x);
          } else if (!seen_out) {
            seen_out = true;
            s.boundary = std::make_pair(node_t(w), j + 1);
          }
        }
        if (!seen_out && marked[w] && w != v) s.boundary = std::make_pair(node_t(w), ch[w].size() + 1);
      }
    }
    std::sort(s.nodes.begin(), s.nodes.end());
    out.push_back(std::move(s));
  };

  for (size_t vi = n; vi-- > 0;) {
    uint32_t v = static_cast<uint32_t>(vi);
    bool has_out = marked[v];
    size_t k = ch[v].size();
    size_t gsize = 0, hi = k, lo = k;
    bool gflag = false;
    for (size_t i = k; i-- > 0;) {
      uint32_t c = ch[v][i];
      if (psize[c] == 0) {
        if (gsize > 0) close(v, lo, hi, false);
        gsize = 0;
        gflag = false;
        hi = lo = i;
        has_out = true;
        continue;
      }
      if (pflag[c] && gflag) {
        close(v, lo, hi, false);
        gsize = 0;
        gflag = false;
        hi = i + 1;
        has_out = true;
      }
      gsize += psize[c];
      gflag = gflag || pflag[c];
      lo = i;
      if (gsize >= L) {
        close(v, lo, hi, false);
        gsize = 0;
        gflag = false;
        hi = lo = i;
        has_out = true;
      }
    }
    if (gflag && has_out) {
      close(v, lo, hi, true);
      continue;
    }
    psize[v] = static_cast<uint32_t>(1 + gsize);
    pflag[v] = has_out || gflag;
    if (psize[v] >= L || v == 0) {
      close(v, lo, hi, true);
      psize[v] = 0;
    }
  }
  return out;
}

inline std::vector<std::vector<uint32_t>> children_of(const BpTree& t) {
  auto par = t.parent_array();
  std::vector<std::vector<uint32_t>> ch(t.nodes());
  for (size_t v = 2; v < par.size(); ++v) ch[par[v] - 1].push_back(static_cast<uint32_t>(v - 1));
  return ch;
}

}  // namespace detail

// One-level cover. Pieces have at most 2L nodes, at most one non-root
// boundary node each, and every node is a member of exactly one piece.
inline std::vector<Subtree> decompose(const BpTree& t, size_t L) {
  if (L == 0) throw std::invalid_argument("decompose: L must be positive");
  auto ch = detail::children_of(t);
  std::vector<uint8_t> marked(ch.size(), 0);
  auto pieces = detail::greedy_cover(ch, L, marked);
  for (auto& p : pieces) {
    p.root += 1;
    for (auto& x : p.nodes) x += 1;
    if (p.boundary) p.boundary->first += 1;
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Subtree& a, const Subtree& b) { return a.first_member() < b.first_member(); });
  return pieces;
}


// Mini pieces over the whole tree, micro pieces inside each mini piece, and the
// two over-trees (parent arrays, -1 = root; ids past the piece count are dummy
// nodes standing for a root shared by two or more pieces).
struct TwoLevelCover {
  CoverConfig cfg;
  size_t n = 0;
  std::vector<Subtree> minis;                       // ordered by first member
  std::vector<Subtree> micros;                      // ordered by first member
  std::vector<uint32_t> micro_mini;                 // mini of each micro
  std::vector<std::vector<uint32_t>> mini_micros;   // micro ids per mini, ascending
  std::vector<int64_t> tree_over_minis;
  std::vector<std::vector<int64_t>> mini_over_micros;

  // Member owner of every node, 1-based preorder indexed (entry 0 unused).
  std::vector<uint32_t> owner_mini, owner_micro;
};

namespace detail {

// Over-tree of a set of pieces: parent(piece) is the piece owning the parent
// of its member root, or the owner of its shared root; two or more pieces
// sharing one root hang below a dummy node. Pieces attached to a node outside
// the set (the shared root of a mini piece) are grouped the same way.
template <class Owner>
std::vector<int64_t> over_tree(const std::vector<const Subtree*>& pieces, const std::vector<node_t>& parent,
                               Owner owner_local) {
  size_t k = pieces.size();
  std::vector<int64_t> par(k, -1);
  std::unordered_map<node_t, std::vector<size_t>> shared;
  for (size_t i = 0; i < k; ++i) {
    const Subtree& p = *pieces[i];
    if (p.root_shared) {
      shared[p.root].push_back(i);
    } else if (parent[p.root] != 0) {
      par[i] = owner_local(parent[p.root]);
      if (par[i] < 0) shared[parent[p.root]].push_back(i);
    }
  }
  std::vector<node_t> roots;
  for (auto& [r, v] : shared) roots.push_back(r);
  std::sort(roots.begin(), roots.end());
  for (node_t r : roots) {
    auto& v = shared[r];
    int64_t up = owner_local(r);
    if (v.size() == 1) {
      par[v[0]] = up;
    } else {
      int64_t d = static_cast<int64_t>(par.size());
      par.push_back(up);
      for (size_t i : v) par[i] = d;
    }
  }
  return par;
}

}  // namespace detail

inline TwoLevelCover two_level(const BpTree& t, const CoverConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("two_level: invalid cover configuration");
  TwoLevelCover tc;
  tc.cfg = cfg;
  tc.n = t.nodes();
  auto parent = t.parent_array();
  auto ch = detail::children_of(t);  // 0-based
  tc.minis = decompose(t, cfg.L);
  size_t n = tc.n;
  tc.owner_mini.assign(n + 1, 0);
  for (size_t i = 0; i < tc.minis.size(); ++i)
    for (node_t x : tc.minis[i].nodes)
      if (x != tc.minis[i].root || !tc.minis[i].root_shared) tc.owner_mini[x] = static_cast<uint32_t>(i);

  std::vector<std::pair<Subtree, uint32_t>> all;
  for (size_t mi = 0; mi < tc.minis.size(); ++mi) {
    const Subtree& M = tc.minis[mi];
    size_t k = M.nodes.size();
    std::unordered_map<node_t, uint32_t> local;
    local.reserve(k * 2);
    for (size_t i = 0; i < k; ++i) local[M.nodes[i]] = static_cast<uint32_t>(i);
    std::vector<std::vector<uint32_t>> lch(k);
    std::vector<uint8_t> marked(k, 0);
    for (size_t i = 0; i < k; ++i) {
      node_t g = M.nodes[i];
      for (uint32_t c0 : ch[g - 1]) {
        node_t c = c0 + 1;
        if (tc.owner_mini[c] == mi) lch[i].push_back(local.at(c));
      }
    }
    if (M.boundary) marked[local.at(M.boundary->first)] = 1;
    auto pieces = detail::greedy_cover(lch, cfg.ell, marked);
    for (auto& p : pieces) {
      if (M.root_shared && p.root == 0 && !p.root_shared) {
        if (p.nodes.size() == 1) continue;
        p.root_shared = true;
      }
      p.root = M.nodes[p.root];
      for (auto& x : p.nodes) x = M.nodes[x];
      if (p.boundary) p.boundary->first = M.nodes[p.boundary->first];
      all.emplace_back(std::move(p), static_cast<uint32_t>(mi));
    }
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first.first_member() < b.first.first_member(); });
  tc.mini_micros.assign(tc.minis.size(), {});
  tc.owner_micro.assign(n + 1, 0);
  for (size_t i = 0; i < all.size(); ++i) {
    tc.micros.push_back(std::move(all[i].first));
    tc.micro_mini.push_back(all[i].second);
    tc.mini_micros[all[i].second].push_back(static_cast<uint32_t>(i));
    const Subtree& u = tc.micros.back();
    for (node_t x : u.nodes)
      if (x != u.root || !u.root_shared) tc.owner_micro[x] = static_cast<uint32_t>(i);
  }

  std::vector<const Subtree*> mp;
  for (auto& m : tc.minis) mp.push_back(&m);
  tc.tree_over_minis =
      detail::over_tree(mp, parent, [&](node_t x) { return static_cast<int64_t>(tc.owner_mini[x]); });
  for (size_t mi = 0; mi < tc.minis.size(); ++mi) {
    std::vector<const Subtree*> up;
    std::unordered_map<node_t, int64_t> pos;
    for (size_t j = 0; j < tc.mini_micros[mi].size(); ++j) {
      const Subtree& u = tc.micros[tc.mini_micros[mi][j]];
      up.push_back(&u);
      for (node_t x : u.nodes)
        if (x != u.root || !u.root_shared) pos[x] = static_cast<int64_t>(j);
    }
    // Parents outside the mini map to -1 (the mini root's own parent edge).
    tc.mini_over_micros.push_back(detail::over_tree(up, parent, [&](node_t x) {
      auto it = pos.find(x);
      return it == pos.end() ? int64_t(-1) : it->second;
    }));
  }
  return tc;
}


struct CoverCheck {
  size_t pieces = 0;
  size_t max_size = 0;
  size_t max_nonroot_boundary = 0;
  bool partition = true;   // every node a member of exactly one piece
  bool connected = true;
  bool ordered = true;     // in-piece children of members form a prefix, of shared roots a range
  bool records = true;     // boundary records name the real boundary node and first out-child
};

// Recomputes the cover invariants from scratch against the tree.
inline CoverCheck check_pieces(const BpTree& t, const std::vector<Subtree>& pieces) {
  CoverCheck c;
  c.pieces = pieces.size();
  size_t n = t.nodes();
  auto par = t.parent_array();
  auto ch = detail::children_of(t);
  std::vector<uint32_t> seen(n + 1, 0);
  std::vector<int64_t> piece_of(n + 1, -1);
  for (size_t i = 0; i < pieces.size(); ++i) {
    const Subtree& p = pieces[i];
    c.max_size = std::max(c.max_size, p.nodes.size());
    for (node_t x : p.nodes) {
      if (x == p.root && p.root_shared) continue;
      ++seen[x];
      piece_of[x] = static_cast<int64_t>(i);
    }
  }
  for (size_t x = 1; x <= n; ++x)
    if (seen[x] != 1) c.partition = false;
  for (size_t i = 0; i < pieces.size() && c.partition; ++i) {
    const Subtree& p = pieces[i];
    auto in = [&](node_t x) {
      return x == p.root || piece_of[x] == static_cast<int64_t>(i);
    };
    size_t nb = 0;
    std::optional<std::pair<node_t, size_t>> rec;
    for (node_t x : p.nodes) {
      if (x != p.root && !in(par[x])) c.connected = false;
      if (x != p.root && par[x] == 0) c.connected = false;
      const auto& cs = ch[x - 1];
      size_t first_in = cs.size(), last_in = 0, cnt = 0, first_out = 0;
      for (size_t j = 0; j < cs.size(); ++j) {
        if (in(cs[j] + 1)) {
          first_in = std::min(first_in, j);
          last_in = j;
          ++cnt;
        } else if (first_out == 0) {
          first_out = j + 1;
        }
      }
      if (cnt > 0 && last_in + 1 - first_in != cnt) c.ordered = false;
      if (x != p.root || !p.root_shared) {
        if (cnt > 0 && first_in != 0) c.ordered = false;
      }
      if (x != p.root && cnt < cs.size()) {
        ++nb;
        rec = std::make_pair(x, first_out);
      }
    }
    c.max_nonroot_boundary = std::max(c.max_nonroot_boundary, nb);
    if (rec && (!p.boundary || p.boundary->first != rec->first || p.boundary->second != rec->second))
      c.records = false;
  }
  return c;
}


// Node and root attribute bits shared by every class.
namespace shape_bits {
constexpr uint8_t kOut = 1;          // node has children outside the micro piece
constexpr uint8_t kFirst = 1;        // member root: first child of its parent; shared root: holds child 1
constexpr uint8_t kLast = 2;         // member root: last child of its parent; shared root: holds the last child
constexpr uint8_t kOddDepth = 4;     // root depth is odd
constexpr uint8_t kClassShift = 3;   // class-specific root bits start here
}  // namespace shape_bits

// Decoded micro shape: an ordered local tree in preorder (0 = root), the
// shared-root flag, per-node attribute bytes and derived navigation arrays.
struct LocalShape {
  bool shared = false;
  uint8_t root_flags = 0;
  std::vector<uint8_t> parent;   // parent[0] unused
  std::vector<uint8_t> attr;
  std::vector<std::vector<uint8_t>> children;
  std::vector<uint8_t> size;     // local subtree sizes
  std::vector<uint8_t> depth;
  int boundary = -1;             // non-root node with out-children
  size_t run1 = 0;               // members before the gap left by the boundary's out-children

  size_t nodes() const { return parent.size(); }
  size_t members() const { return nodes() - (shared ? 1 : 0); }
  bool out(size_t x) const { return attr[x] & shape_bits::kOut; }
  bool is_leaf(size_t x) const { return children[x].empty() && !out(x); }

  std::string key() const {
    std::string k;
    k.push_back(static_cast<char>(nodes()));
    k.push_back(static_cast<char>((shared ? 1 : 0) | (root_flags << 1)));
    for (size_t i = 1; i < nodes(); ++i) k.push_back(static_cast<char>(parent[i]));
    for (uint8_t a : attr) k.push_back(static_cast<char>(a));
    return k;
  }

  static LocalShape from_key(const std::string& k) {
    if (k.size() < 2) throw format_error("shape key too short");
    LocalShape s;
    size_t n = static_cast<uint8_t>(k[0]);
    if (n == 0 || k.size() != 2 + (n - 1) + n) throw format_error("shape key length mismatch");
    uint8_t f = static_cast<uint8_t>(k[1]);
    s.shared = f & 1;
    s.root_flags = f >> 1;
    s.parent.assign(n, 0);
    for (size_t i = 1; i < n; ++i) {
      s.parent[i] = static_cast<uint8_t>(k[1 + i]);
      if (s.parent[i] >= i) throw format_error("shape key is not in preorder");
    }
    s.attr.assign(k.begin() + 1 + n, k.end());
    s.derive();
    return s;
  }

  void derive() {
    size_t n = nodes();
    children.assign(n, {});
    size.assign(n, 1);
    depth.assign(n, 0);
    for (size_t i = 1; i < n; ++i) {
      children[parent[i]].push_back(static_cast<uint8_t>(i));
      depth[i] = depth[parent[i]] + 1;
    }
    for (size_t i = n; i-- > 1;) size[parent[i]] += size[i];
    boundary = -1;
    for (size_t i = 1; i < n; ++i)
      if (out(i)) boundary = static_cast<int>(i);
    size_t end = boundary < 0 ? n : static_cast<size_t>(boundary) + size[boundary];
    run1 = end - (shared ? 1 : 0);
  }
};

class ShapeTable {
 public:
  uint32_t intern(const std::string& key) {
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(keys_.size());
    shapes_.push_back(LocalShape::from_key(key));
    keys_.push_back(key);
    ids_.emplace(key, id);
    return id;
  }
  size_t size() const { return keys_.size(); }
  const std::string& key(uint32_t id) const { return keys_.at(id); }
  const LocalShape& shape(uint32_t id) const { return shapes_[id]; }

  // Serialized as u64 count, then u8 length and raw bytes per key.
  size_t bit_size() const {
    size_t b = 64;
    for (auto& k : keys_) b += 8 * (k.size() + 1);
    return b;
  }
  void save(Writer& w) const {
    w.u64(keys_.size());
    for (auto& k : keys_) {
      w.u8(static_cast<uint8_t>(k.size()));
      w.raw(reinterpret_cast<const uint8_t*>(k.data()), k.size());
    }
  }
  static ShapeTable load(Reader& r) {
    ShapeTable t;
    uint64_t n = r.u64();
    if (n > r.remaining()) throw format_error("shape table count exceeds payload");
    for (uint64_t i = 0; i < n; ++i) {
      size_t len = r.u8();
      std::string k;
      for (size_t j = 0; j < len; ++j) k.push_back(static_cast<char>(r.u8()));
      if (t.intern(k) != i) throw format_error("duplicate shape key");
    }
    return t;
  }

 private:
  std::vector<std::string> keys_;
  std::vector<LocalShape> shapes_;
  std::unordered_map<std::string, uint32_t> ids_;
};


// Succinct side of a two-level cover: run-start dictionaries that map a
// preorder rank to its micro and mini piece, the micro ranges of each mini,
// and the interned shape of every micro.
//
// Micros (and minis) are numbered by their first member in preorder. Every
// piece is at most two preorder runs; `first` holds run-1 starts and `second`
// run-2 starts. A run-2 start follows the subtree of an earlier sibling that
// lies in run 1 of the same piece, which is how run 2 is attributed.
class CoverIndex {
 public:
  struct Loc {
    uint32_t micro;
    uint32_t local;  // index in the micro's LocalShape
  };

  CoverIndex() = default;

  // node_bits(x) and root_bits(piece) supply class-specific attribute bits;
  // node bits must leave bit 0 clear, root bits start at kClassShift.
  template <class NodeBits, class RootBits>
  static CoverIndex build(const BpTree& t, const TwoLevelCover& tc, NodeBits node_bits, RootBits root_bits) {
    CoverIndex ix;
    ix.cfg_ = tc.cfg;
    size_t n = t.nodes();
    std::vector<uint64_t> f1, f2, mf1, mf2;
    std::vector<uint64_t> shape_ids;
    std::vector<size_t> run1_len(tc.micros.size(), 0);
    for (size_t i = 0; i < tc.micros.size(); ++i) {
      const Subtree& u = tc.micros[i];
      LocalShape sh;
      sh.shared = u.root_shared;
      size_t k = u.nodes.size();
      sh.parent.assign(k, 0);
      sh.attr.assign(k, 0);
      std::unordered_map<node_t, uint8_t> local;
      for (size_t j = 0; j < k; ++j) local[u.nodes[j]] = static_cast<uint8_t>(j);
      std::vector<size_t> local_deg(k, 0);
      for (size_t j = 1; j < k; ++j) {
        node_t p = *t.parent(u.nodes[j]);
        sh.parent[j] = local.at(p);
        ++local_deg[sh.parent[j]];
      }
      for (size_t j = 0; j < k; ++j) {
        node_t x = u.nodes[j];
        uint8_t a = node_bits(x);
        if (a & shape_bits::kOut) throw std::logic_error("class node bits must leave bit 0 clear");
        if (local_deg[j] < t.degree(x)) a |= shape_bits::kOut;
        sh.attr[j] = a;
      }
      node_t r = u.root;
      uint8_t rf = 0;
      if (u.root_shared) {
        if (t.child_rank(u.nodes[1]) == 1) rf |= shape_bits::kFirst;
        node_t last_local = u.nodes[1];
        for (size_t j = 1; j < k; ++j)
          if (sh.parent[j] == 0) last_local = u.nodes[j];
        if (!t.next_sibling(last_local)) rf |= shape_bits::kLast;
      } else if (r != 1) {
        if (t.child_rank(r) == 1) rf |= shape_bits::kFirst;
        if (!t.next_sibling(r)) rf |= shape_bits::kLast;
      }
      if (t.depth(r) % 2 == 1) rf |= shape_bits::kOddDepth;
      rf |= root_bits(u);
      sh.root_flags = rf;
      sh.derive();
      shape_ids.push_back(ix.table_.intern(sh.key()));

      auto runs = member_runs(u);
      if (runs.size() > 2) throw std::logic_error("micro piece spans more than two preorder runs");
      size_t first_len = runs[0].second - runs[0].first;
      if (runs.size() == 2 ? first_len != sh.run1 : sh.run1 < first_len)
        throw std::logic_error("micro run layout disagrees with its shape");
      f1.push_back(runs[0].first);
      if (runs.size() == 2) f2.push_back(runs[1].first);
      run1_len[i] = first_len;
    }
    std::vector<std::pair<node_t, node_t>> mini_run1(tc.minis.size());
    for (size_t i = 0; i < tc.minis.size(); ++i) {
      auto runs = member_runs(tc.minis[i]);
      if (runs.size() > 2) throw std::logic_error("mini piece spans more than two preorder runs");
      mf1.push_back(runs[0].first);
      if (runs.size() == 2) mf2.push_back(runs[1].first);
      mini_run1[i] = runs[0];
    }
    std::sort(f2.begin(), f2.end());
    std::sort(mf2.begin(), mf2.end());
    ix.first_ = SparseDict(n + 1, f1);
    ix.second_ = SparseDict(n + 1, f2);
    ix.mini_first_ = SparseDict(n + 1, mf1);
    ix.mini_second_ = SparseDict(n + 1, mf2);
    ix.shape_ = IntVector::from(shape_ids);

    size_t k = tc.minis.size(), nm = tc.micros.size();
    std::vector<uint64_t> b1(k, 0), c1(k, 0), b2(k, 0);
    for (size_t mi = 0; mi < k; ++mi) {
      const auto& ids = tc.mini_micros[mi];
      size_t j = 0;
      while (j < ids.size() && f1[ids[j]] < mini_run1[mi].second) ++j;
      b1[mi] = ids.empty() ? 0 : ids[0];
      c1[mi] = j;
      b2[mi] = j < ids.size() ? ids[j] : nm;
      for (size_t q = 1; q < j; ++q)
        if (ids[q] != ids[0] + q) throw std::logic_error("mini run-1 micros are not contiguous");
      for (size_t q = j + 1; q < ids.size(); ++q)
        if (ids[q] != ids[j] + (q - j)) throw std::logic_error("mini run-2 micros are not contiguous");
    }
    ix.mini_base1_ = IntVector::from(b1);
    ix.mini_count1_ = IntVector::from(c1);
    ix.mini_base2_ = IntVector::from(b2);
    return ix;
  }

  const CoverConfig& config() const { return cfg_; }
  const ShapeTable& table() const { return table_; }
  size_t micros() const { return shape_.size(); }
  size_t minis() const { return mini_base1_.size(); }
  uint32_t shape_id(uint32_t micro) const { return static_cast<uint32_t>(shape_[micro]); }
  const LocalShape& shape(uint32_t micro) const { return table_.shape(shape_id(micro)); }

  Loc locate(const BpTree& t, node_t v) const {
    if (v == 0 || v > t.nodes()) throw std::out_of_range("locate: invalid node");
    size_t j1 = first_.predecessor(v);
    uint64_t p1 = first_.select(j1);
    size_t j2 = second_.predecessor(v);
    if (j2 > 0) {
      uint64_t p2 = second_.select(j2);
      if (p2 > p1) {
        node_t y = *t.prev_sibling(p2);
        uint32_t mu = static_cast<uint32_t>(first_.predecessor(y) - 1);
        const LocalShape& sh = shape(mu);
        return {mu, static_cast<uint32_t>(sh.run1 + (v - p2) + (sh.shared ? 1 : 0))};
      }
    }
    uint32_t mu = static_cast<uint32_t>(j1 - 1);
    return {mu, static_cast<uint32_t>((v - p1) + (shape(mu).shared ? 1 : 0))};
  }

  uint32_t mini_of(const BpTree& t, node_t v) const {
    size_t j1 = mini_first_.predecessor(v);
    uint64_t p1 = mini_first_.select(j1);
    size_t j2 = mini_second_.predecessor(v);
    if (j2 > 0) {
      uint64_t p2 = mini_second_.select(j2);
      if (p2 > p1) return static_cast<uint32_t>(mini_first_.predecessor(*t.prev_sibling(p2)) - 1);
    }
    return static_cast<uint32_t>(j1 - 1);
  }
  uint32_t mini_of_micro(const BpTree& t, uint32_t micro) const { return mini_of(t, first_member(micro)); }

  node_t first_member(uint32_t micro) const { return first_.select(micro + 1); }
  node_t root(const BpTree& t, uint32_t micro) const {
    node_t s = first_member(micro);
    return shape(micro).shared ? *t.parent(s) : s;
  }
  node_t global(const BpTree& t, uint32_t micro, size_t local) const {
    const LocalShape& sh = shape(micro);
    if (sh.shared && local == 0) return *t.parent(first_member(micro));
    size_t off = local - (sh.shared ? 1 : 0);
    node_t s1 = first_member(micro);
    if (off < sh.run1) return s1 + off;
    node_t b = s1 + (static_cast<size_t>(sh.boundary) - (sh.shared ? 1 : 0));
    return b + t.subtree_size(b) + (off - sh.run1);
  }

  // Micro ids of a mini: its i-th micro, i < micro_count(mini).
  uint32_t mini_micro(uint32_t mini, size_t i) const {
    size_t c1 = mini_count1_[mini];
    return static_cast<uint32_t>(i < c1 ? mini_base1_[mini] + i : mini_base2_[mini] + (i - c1));
  }
  size_t mini_local_index(uint32_t mini, uint32_t micro) const {
    size_t b1 = mini_base1_[mini], c1 = mini_count1_[mini];
    if (micro >= b1 && micro < b1 + c1) return micro - b1;
    return c1 + (micro - mini_base2_[mini]);
  }

  size_t bit_size() const {
    return first_.bit_size() + second_.bit_size() + mini_first_.bit_size() + mini_second_.bit_size() +
           mini_base1_.bit_size() + mini_count1_.bit_size() + mini_base2_.bit_size() + shape_.bit_size();
  }
  size_t table_bits() const { return table_.bit_size(); }

  void save(Writer& w) const {
    w.u64(cfg_.L);
    w.u64(cfg_.ell);
    w.u64(cfg_.ell_cap);
    table_.save(w);
    first_.save(w);
    second_.save(w);
    mini_first_.save(w);
    mini_second_.save(w);
    mini_base1_.save(w);
    mini_count1_.save(w);
    mini_base2_.save(w);
    shape_.save(w);
  }
  static CoverIndex load(Reader& r) {
    CoverIndex ix;
    ix.cfg_.L = r.u64();
    ix.cfg_.ell = r.u64();
    ix.cfg_.ell_cap = r.u64();
    ix.table_ = ShapeTable::load(r);
    ix.first_ = SparseDict::load(r);
    ix.second_ = SparseDict::load(r);
    ix.mini_first_ = SparseDict::load(r);
    ix.mini_second_ = SparseDict::load(r);
    ix.mini_base1_ = IntVector::load(r);
    ix.mini_count1_ = IntVector::load(r);
    ix.mini_base2_ = IntVector::load(r);
    ix.shape_ = IntVector::load(r);
    for (size_t i = 0; i < ix.shape_.size(); ++i)
      if (ix.shape_[i] >= ix.table_.size()) throw format_error("micro shape id out of range");
    if (ix.first_.size() != ix.shape_.size()) throw format_error("micro count mismatch");
    return ix;
  }

 private:
  static std::vector<std::pair<node_t, node_t>> member_runs(const Subtree& u) {
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
  }

  CoverConfig cfg_;
  ShapeTable table_;
  SparseDict first_, second_, mini_first_, mini_second_;
  IntVector mini_base1_, mini_count1_, mini_base2_, shape_;
};

}  // namespace scsg

#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scsg/bits.hpp"

namespace scsg {

// Node identity is the 1-based preorder rank.
using node_t = uint64_t;

namespace detail {

struct ByteExcess {
  std::array<int8_t, 256> total{};
  std::array<int8_t, 256> min_prefix{};   // min over prefixes of length 1..8
  std::array<uint8_t, 256> min_count{};
  std::array<int8_t, 256> max_suffix{};   // max over suffixes starting at 0..7

  ByteExcess() {
    for (int b = 0; b < 256; ++b) {
      int e = 0, mn = INT_MAX, cnt = 0;
      for (int i = 0; i < 8; ++i) {
        e += ((b >> i) & 1) ? 1 : -1;
        if (e < mn) {
          mn = e;
          cnt = 1;
        } else if (e == mn) {
          ++cnt;
        }
      }
      total[b] = static_cast<int8_t>(e);
      min_prefix[b] = static_cast<int8_t>(mn);
      min_count[b] = static_cast<uint8_t>(cnt);
      int s = 0, mx = INT_MIN;
      for (int i = 7; i >= 0; --i) {
        s += ((b >> i) & 1) ? 1 : -1;
        mx = std::max(mx, s);
      }
      max_suffix[b] = static_cast<int8_t>(mx);
    }
  }
};

inline const ByteExcess& byte_excess() {
  static const ByteExcess t;
  return t;
}

}  // namespace detail

// Ordinal tree over a balanced-parentheses bitvector (open = 1).
//
// Navigation runs on a two-level min-excess directory: a signed minimum per
// 64-bit word and a segment tree of (min, count) pairs over 1024-bit blocks.
// Every operation is a bounded number of O(log n) searches.
//
// Excess E(k) is the excess of the first k parentheses; "index" below
// always means such a prefix index k in [0, 2n].
class BpTree {
 public:
  static constexpr size_t kBlockBits = 1024;
  static constexpr size_t kWordsPerBlock = kBlockBits / 64;

  BpTree() = default;
  explicit BpTree(BitVector bp) : bp_(std::move(bp)) {
    validate();
    build();
  }

  // Builds the BP sequence of an explicit ordered tree. children[x] lists the
  // children of x in order. If preorder_of is given it receives the 1-based
  // preorder rank of every input node.
  static BpTree from_children(const std::vector<std::vector<uint32_t>>& children, uint32_t root,
                              std::vector<node_t>* preorder_of = nullptr) {
    if (children.empty() || root >= children.size()) throw std::invalid_argument("bp_from_tree: empty tree");
    std::vector<uint8_t> bits;
    bits.reserve(2 * children.size());
    if (preorder_of) preorder_of->assign(children.size(), 0);
    std::vector<std::pair<uint32_t, uint32_t>> stack{{root, 0}};
    node_t pre = 0;
    size_t visited = 0;
    bits.push_back(1);
    if (preorder_of) (*preorder_of)[root] = ++pre;
    ++visited;
    while (!stack.empty()) {
      auto& [x, i] = stack.back();
      if (i < children[x].size()) {
        uint32_t c = children[x][i++];
        if (c >= children.size() || visited >= children.size()) throw std::invalid_argument("bp_from_tree: malformed tree");
        bits.push_back(1);
        if (preorder_of) (*preorder_of)[c] = ++pre;
        ++visited;
        stack.push_back({c, 0});
      } else {
        bits.push_back(0);
        stack.pop_back();
      }
    }
    if (visited != children.size()) throw std::invalid_argument("bp_from_tree: nodes unreachable from root");
    return BpTree(BitVector(std::span<const uint8_t>(bits)));
  }

  // Parent array (0 = none) indexed by preorder; used by tests and decoders.
  std::vector<node_t> parent_array() const {
    std::vector<node_t> par(nodes() + 1, 0);
    std::vector<node_t> st;
    node_t pre = 0;
    for (size_t i = 0; i < bp_.size(); ++i) {
      if (bp_[i]) {
        ++pre;
        par[pre] = st.empty() ? 0 : st.back();
        st.push_back(pre);
      } else {
        st.pop_back();
      }
    }
    return par;
  }

  size_t nodes() const { return bp_.ones(); }
  size_t length() const { return bp_.size(); }
  const BitVector& bits() const { return bp_; }
  size_t leaves() const { return leaves_; }

  size_t open(node_t v) const {
    check(v);
    return bp_.select1(v);
  }
  node_t node_at(size_t pos) const { return bp_.rank1(pos) + 1; }
  size_t close(node_t v) const {
    size_t o = open(v);
    return static_cast<size_t>(fwd_find(o + 1, excess(o))) - 1;
  }

  size_t depth(node_t v) const { return static_cast<size_t>(excess(open(v))); }
  size_t subtree_size(node_t v) const {
    size_t o = open(v);
    return (static_cast<size_t>(fwd_find(o + 1, excess(o))) - o) / 2;
  }
  bool is_leaf(node_t v) const {
    size_t o = open(v);
    return !bp_[o + 1];
  }
  bool is_ancestor(node_t a, node_t v) const {  // reflexive
    return a <= v && v < a + subtree_size(a);
  }

  std::optional<node_t> parent(node_t v) const {
    size_t o = open(v);
    if (o == 0) return std::nullopt;
    return node_at(static_cast<size_t>(bwd_find(o, excess(o) - 1)));
  }
  node_t level_ancestor(node_t v, size_t d) const {
    size_t o = open(v);
    if (static_cast<int64_t>(d) > excess(o)) throw std::out_of_range("level_ancestor: depth");
    return node_at(static_cast<size_t>(bwd_find(o, static_cast<int64_t>(d))));
  }

  size_t degree(node_t v) const {
    size_t o = open(v);
    if (!bp_[o + 1]) return 0;
    size_t c = static_cast<size_t>(fwd_find(o + 1, excess(o))) - 1;
    return range_min_count(o + 2, c).second;
  }
  node_t child(node_t v, size_t i) const {
    size_t o = open(v);
    if (i == 0 || !bp_[o + 1]) throw std::out_of_range("child: index");
    if (i == 1) return v + 1;
    size_t c = static_cast<size_t>(fwd_find(o + 1, excess(o))) - 1;
    auto [m, cnt] = range_min_count(o + 2, c);
    if (i > cnt) throw std::out_of_range("child: index");
    return node_at(select_min(o + 2, c, m, i - 2));
  }
  size_t child_rank(node_t v) const {
    size_t o = open(v);
    if (o == 0) throw std::out_of_range("child_rank: root");
    if (bp_[o - 1]) return 1;
    size_t po = static_cast<size_t>(bwd_find(o, excess(o) - 1));
    return range_min_count(po + 2, o).second + 1;
  }
  std::optional<node_t> next_sibling(node_t v) const {
    size_t o = open(v);
    if (o == 0) return std::nullopt;
    size_t c = static_cast<size_t>(fwd_find(o + 1, excess(o))) - 1;
    if (c + 1 < bp_.size() && bp_[c + 1]) return node_at(c + 1);
    return std::nullopt;
  }
  std::optional<node_t> prev_sibling(node_t v) const {
    size_t o = open(v);
    if (o == 0 || bp_[o - 1]) return std::nullopt;
    return node_at(static_cast<size_t>(bwd_find(o - 1, excess(o))));
  }
  std::optional<node_t> last_child(node_t v) const {
    size_t o = open(v);
    if (!bp_[o + 1]) return std::nullopt;
    size_t c = static_cast<size_t>(fwd_find(o + 1, excess(o))) - 1;
    return node_at(static_cast<size_t>(bwd_find(c - 1, excess(c))));
  }

  node_t lca(node_t u, node_t v) const {
    if (u == v) return u;
    if (u > v) std::swap(u, v);
    size_t ou = open(u), ov = open(v);
    size_t cu = static_cast<size_t>(fwd_find(ou + 1, excess(ou))) - 1;
    if (cu > ov) return u;
    int64_t m = range_min_count(ou + 1, ov).first;
    return node_at(static_cast<size_t>(bwd_find(ou, m - 1)));
  }

  // Number of leaves with preorder < v.
  size_t leaf_rank(node_t v) const { return pattern_rank(open(v)); }
  // Past-the-end: total leaves.
  size_t leaf_rank_end() const { return leaves_; }
  node_t leaf_select(size_t j) const {
    if (j == 0 || j > leaves_) throw std::out_of_range("leaf_select");
    size_t lo = 0, hi = leaf_dir_.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi + 1) / 2;
      if (leaf_dir_[mid] < j) lo = mid;
      else hi = mid - 1;
    }
    size_t rem = j - leaf_dir_[lo];
    for (size_t w = lo * kWordsPerBlock;; ++w) {
      uint64_t p = pattern_word(w);
      size_t c = std::popcount(p);
      if (rem <= c) return node_at(w * 64 + select_in_word(p, static_cast<unsigned>(rem - 1)));
      rem -= c;
    }
  }

  // ---- excess primitives (public for the cover layer and tests) ----
  int64_t excess(size_t k) const { return 2 * static_cast<int64_t>(bp_.rank1(k)) - static_cast<int64_t>(k); }

  // Smallest k >= start with E(k) <= target; requires a solution to exist.
  int64_t fwd_find(size_t start, int64_t target) const {
    const size_t N = bp_.size();
    int64_t cur = excess(start);
    size_t k = start;
    if (cur <= target) return static_cast<int64_t>(k);
    while (k < N) {
      if (k % 64 != 0 || k + 64 > N) {
        cur += bp_[k] ? 1 : -1;
        ++k;
        if (cur <= target) return static_cast<int64_t>(k);
      } else if (k % kBlockBits != 0 || k + kBlockBits > N) {
        size_t g = k / 64;
        if (cur + wmin_[g] <= target) {
          for (;;) {
            cur += bp_[k] ? 1 : -1;
            ++k;
            if (cur <= target) return static_cast<int64_t>(k);
          }
        }
        cur += 2 * std::popcount(bp_.word(g)) - 64;
        k += 64;
      } else {
        size_t b = seg_first(k / kBlockBits, target);
        if (b == SIZE_MAX) break;
        if (b != k / kBlockBits) {
          k = b * kBlockBits;
          cur = excess(k);
          if (cur <= target) return static_cast<int64_t>(k);
        }
        // scan words of block b
        for (size_t g = k / 64;; ++g) {
          if (cur + wmin_[g] <= target) {
            for (;;) {
              cur += bp_[k] ? 1 : -1;
              ++k;
              if (cur <= target) return static_cast<int64_t>(k);
            }
          }
          cur += 2 * std::popcount(bp_.word(g)) - 64;
          k += 64;
        }
      }
    }
    throw std::logic_error("fwd_find: no solution");
  }

  // Largest k <= start with E(k) <= target, or -1.
  int64_t bwd_find(size_t start, int64_t target) const {
    int64_t cur = excess(start);
    size_t k = start;
    if (cur <= target) return static_cast<int64_t>(k);
    for (;;) {
      if (k == 0) return -1;
      if (k % 64 != 0) {
        --k;
        cur -= bp_[k] ? 1 : -1;
        if (cur <= target) return static_cast<int64_t>(k);
      } else if (k % kBlockBits != 0) {
        size_t g = k / 64 - 1;
        int64_t base = cur - (2 * std::popcount(bp_.word(g)) - 64);
        if (base + wmin_[g] <= target) {
          for (;;) {
            --k;
            cur -= bp_[k] ? 1 : -1;
            if (cur <= target) return static_cast<int64_t>(k);
          }
        }
        cur = base;
        k -= 64;
        if (cur <= target) return static_cast<int64_t>(k);
      } else {
        size_t blk = k / kBlockBits;
        size_t b = blk == 0 ? SIZE_MAX : seg_last(blk - 1, target);
        if (b == SIZE_MAX) return 0 <= target ? 0 : -1;
        if (b + 1 != blk) {
          k = (b + 1) * kBlockBits;
          cur = excess(k);
          if (cur <= target) return static_cast<int64_t>(k);
        }
        // now k is the end of block b; continue with word steps
        size_t g = k / 64 - 1;
        int64_t base = cur - (2 * std::popcount(bp_.word(g)) - 64);
        while (base + wmin_[g] > target) {
          cur = base;
          k -= 64;
          if (cur <= target) return static_cast<int64_t>(k);
          --g;
          base = cur - (2 * std::popcount(bp_.word(g)) - 64);
        }
        for (;;) {
          --k;
          cur -= bp_[k] ? 1 : -1;
          if (cur <= target) return static_cast<int64_t>(k);
        }
      }
    }
  }

  // (min, count) of E(k) over k in [a, b]; requires a <= b <= length().
  std::pair<int64_t, size_t> range_min_count(size_t a, size_t b) const {
    MinCount acc{INT64_MAX, 0};
    int64_t cur = excess(a);
    acc.add(cur, 1);
    size_t k = a;
    while (k < b) {
      if (k % 64 != 0 || k + 64 > b) {
        cur += bp_[k] ? 1 : -1;
        ++k;
        acc.add(cur, 1);
      } else if (k % kBlockBits != 0 || k + kBlockBits > b) {
        size_t g = k / 64;
        auto [m, c] = word_min_count(g, cur);
        acc.add(m, c);
        cur += 2 * std::popcount(bp_.word(g)) - 64;
        k += 64;
      } else {
        size_t b0 = k / kBlockBits, b1 = b / kBlockBits;  // full blocks [b0, b1)
        MinCount mc = seg_range(b0, b1 - 1);
        acc.add(mc.min, mc.count);
        k = b1 * kBlockBits;
        cur = excess(k);
      }
    }
    return {acc.min, acc.count};
  }

  // Position k in [a, b] of the (r+1)-th occurrence of value m, where m is the
  // minimum over [a, b].
  size_t select_min(size_t a, size_t b, int64_t m, size_t r) const {
    int64_t cur = excess(a);
    size_t k = a;
    if (cur == m) {
      if (r == 0) return k;
      --r;
    }
    while (k < b) {
      if (k % 64 != 0 || k + 64 > b) {
        cur += bp_[k] ? 1 : -1;
        ++k;
        if (cur == m) {
          if (r == 0) return k;
          --r;
        }
      } else if (k % kBlockBits != 0 || k + kBlockBits > b) {
        size_t g = k / 64;
        auto [wm, wc] = word_min_count(g, cur);
        if (wm == m && r < wc) {
          for (;;) {
            cur += bp_[k] ? 1 : -1;
            ++k;
            if (cur == m) {
              if (r == 0) return k;
              --r;
            }
          }
        }
        if (wm == m) r -= wc;
        cur += 2 * std::popcount(bp_.word(g)) - 64;
        k += 64;
      } else {
        size_t b0 = k / kBlockBits, b1 = b / kBlockBits;
        size_t blk = seg_select(b0, b1 - 1, m, r);
        if (blk == SIZE_MAX) {
          k = b1 * kBlockBits;
          cur = excess(k);
        } else {
          k = blk * kBlockBits;
          cur = excess(k);
          // r already reduced by seg_select; scan the block word by word
          for (size_t g = k / 64;; ++g) {
            auto [wm, wc] = word_min_count(g, cur);
            if (wm == m && r < wc) {
              for (;;) {
                cur += bp_[k] ? 1 : -1;
                ++k;
                if (cur == m) {
                  if (r == 0) return k;
                  --r;
                }
              }
            }
            if (wm == m) r -= wc;
            cur += 2 * std::popcount(bp_.word(g)) - 64;
            k += 64;
          }
        }
      }
    }
    throw std::logic_error("select_min: no occurrence");
  }

  size_t directory_bits() const {
    return bp_.directory_bits() + 8 * wmin_.size() + 64 * (seg_min_.size()) + 64 * leaf_dir_.size();
  }
  size_t bit_size() const { return bp_.size() + directory_bits(); }

  void save(Writer& w) const {
    bp_.save(w);
    w.u64(nodes());
  }
  static BpTree load(Reader& r) {
    BitVector bv = BitVector::load(r);
    uint64_t n = r.u64();
    if (bv.ones() != n) throw format_error("BP node count mismatch");
    return BpTree(std::move(bv));
  }

  friend bool operator==(const BpTree& a, const BpTree& b) { return a.bp_ == b.bp_; }

 private:
  struct MinCount {
    int64_t min;
    size_t count;
    void add(int64_t m, size_t c) {
      if (m < min) {
        min = m;
        count = c;
      } else if (m == min) {
        count += c;
      }
    }
  };

  void check(node_t v) const {
    if (v == 0 || v > nodes()) throw std::out_of_range("BpTree: invalid node");
  }

  void validate() const {
    int64_t e = 0;
    for (size_t i = 0; i < bp_.size(); ++i) {
      e += bp_[i] ? 1 : -1;
      if (e < 0 || (e == 0 && i + 1 != bp_.size())) throw std::invalid_argument("BpTree: unbalanced or not a single tree");
    }
    if (e != 0 || bp_.size() == 0) throw std::invalid_argument("BpTree: unbalanced");
  }

  // min/count of E over word g's indices, given E at the word start.
  std::pair<int64_t, size_t> word_min_count(size_t g, int64_t start) const {
    const auto& t = detail::byte_excess();
    uint64_t w = bp_.word(g);
    int64_t cur = start, mn = INT64_MAX;
    size_t cnt = 0;
    for (int byte = 0; byte < 8; ++byte) {
      unsigned b = (w >> (8 * byte)) & 0xff;
      int64_t m = cur + t.min_prefix[b];
      if (m < mn) {
        mn = m;
        cnt = t.min_count[b];
      } else if (m == mn) {
        cnt += t.min_count[b];
      }
      cur += t.total[b];
    }
    return {mn, cnt};
  }

  uint64_t pattern_word(size_t w) const {
    uint64_t x = bp_.word(w);
    uint64_t next = (bp_.word(w + 1) & 1) << 63;
    uint64_t shifted = (x >> 1) | next;
    uint64_t p = x & ~shifted;
    // a trailing open at the very end cannot start a leaf pattern
    if ((w + 1) * 64 >= bp_.size()) {
      size_t valid = bp_.size() - w * 64;
      if (valid < 64) p &= (uint64_t(1) << valid) - 1;
      if (valid >= 1 && valid <= 64) p &= ~(uint64_t(1) << (valid - 1));
    }
    return p;
  }
  size_t pattern_rank(size_t pos) const {
    size_t blk = pos / kBlockBits;
    size_t r = leaf_dir_[blk];
    size_t wi = pos / 64;
    for (size_t w = blk * kWordsPerBlock; w < wi; ++w) r += std::popcount(pattern_word(w));
    if (pos % 64) r += std::popcount(pattern_word(wi) & ((uint64_t(1) << (pos % 64)) - 1));
    return r;
  }

  void build() {
    const size_t N = bp_.size();
    const size_t nwords = (N + 63) / 64;
    wmin_.assign(nwords, 0);
    nblocks_ = (N + kBlockBits - 1) / kBlockBits;
    std::vector<MinCount> blocks(nblocks_, MinCount{INT64_MAX, 0});
    int64_t e = 0;
    for (size_t g = 0; g < nwords; ++g) {
      int64_t start = e, mn = INT64_MAX;
      for (size_t i = g * 64; i < std::min(N, g * 64 + 64); ++i) {
        e += bp_[i] ? 1 : -1;
        mn = std::min(mn, e);
        blocks[i / kBlockBits].add(e, 1);
      }
      wmin_[g] = static_cast<int8_t>(mn - start);
    }
    seg_size_ = 1;
    while (seg_size_ < nblocks_) seg_size_ *= 2;
    seg_min_.assign(2 * seg_size_, INT32_MAX);
    seg_cnt_.assign(2 * seg_size_, 0);
    for (size_t b = 0; b < nblocks_; ++b) {
      seg_min_[seg_size_ + b] = static_cast<int32_t>(blocks[b].min);
      seg_cnt_[seg_size_ + b] = static_cast<uint32_t>(blocks[b].count);
    }
    for (size_t i = seg_size_ - 1; i >= 1; --i) pull(i);
    // leaf-pattern directory
    leaf_dir_.assign(nblocks_ + 1, 0);
    size_t cnt = 0;
    for (size_t blk = 0; blk <= nblocks_; ++blk) {
      leaf_dir_[blk] = cnt;
      for (size_t w = blk * kWordsPerBlock; w < std::min((blk + 1) * kWordsPerBlock, nwords); ++w)
        cnt += std::popcount(pattern_word(w));
    }
    leaves_ = cnt;
  }
  void pull(size_t i) {
    int32_t a = seg_min_[2 * i], b = seg_min_[2 * i + 1];
    if (a < b) {
      seg_min_[i] = a;
      seg_cnt_[i] = seg_cnt_[2 * i];
    } else if (b < a) {
      seg_min_[i] = b;
      seg_cnt_[i] = seg_cnt_[2 * i + 1];
    } else {
      seg_min_[i] = a;
      seg_cnt_[i] = seg_cnt_[2 * i] + seg_cnt_[2 * i + 1];
    }
  }

  // First block >= lo with min <= target.
  size_t seg_first(size_t lo, int64_t target) const {
    if (lo >= nblocks_) return SIZE_MAX;
    size_t i = seg_size_ + lo;
    if (seg_min_[i] <= target) return lo;
    // climb: move to next right subtree not yet covered
    for (;;) {
      while (i & 1) {
        i >>= 1;
        if (i == 0) return SIZE_MAX;
      }
      ++i;  // right sibling
      if (seg_min_[i] <= target) break;
    }
    while (i < seg_size_) i = seg_min_[2 * i] <= target ? 2 * i : 2 * i + 1;
    size_t b = i - seg_size_;
    return b < nblocks_ ? b : SIZE_MAX;
  }
  // Last block <= hi with min <= target.
  size_t seg_last(size_t hi, int64_t target) const {
    size_t i = seg_size_ + hi;
    if (seg_min_[i] <= target) return hi;
    for (;;) {
      while (!(i & 1)) {
        i >>= 1;
        if (i <= 1) return SIZE_MAX;
      }
      if (i == 1) return SIZE_MAX;
      --i;  // left sibling
      if (seg_min_[i] <= target) break;
    }
    while (i < seg_size_) i = seg_min_[2 * i + 1] <= target ? 2 * i + 1 : 2 * i;
    return i - seg_size_;
  }
  MinCount seg_range(size_t lo, size_t hi) const {
    MinCount acc{INT64_MAX, 0};
    size_t l = lo + seg_size_, r = hi + seg_size_ + 1;
    while (l < r) {
      if (l & 1) {
        acc.add(seg_min_[l], seg_cnt_[l]);
        ++l;
      }
      if (r & 1) {
        --r;
        acc.add(seg_min_[r], seg_cnt_[r]);
      }
      l >>= 1;
      r >>= 1;
    }
    return acc;
  }
  // Block in [lo, hi] holding the (r+1)-th occurrence of m; r is reduced by
  // the occurrences in earlier blocks. SIZE_MAX (r reduced by all) if absent.
  size_t seg_select(size_t lo, size_t hi, int64_t m, size_t& r) const {
    // collect canonical nodes left to right
    std::vector<size_t> left, right;
    size_t l = lo + seg_size_, rr = hi + seg_size_ + 1;
    while (l < rr) {
      if (l & 1) left.push_back(l++);
      if (rr & 1) right.push_back(--rr);
      l >>= 1;
      rr >>= 1;
    }
    left.insert(left.end(), right.rbegin(), right.rend());
    for (size_t i : left) {
      if (seg_min_[i] != m) continue;
      if (r >= seg_cnt_[i]) {
        r -= seg_cnt_[i];
        continue;
      }
      while (i < seg_size_) {
        size_t c = 2 * i;
        if (seg_min_[c] == m) {
          if (r < seg_cnt_[c]) {
            i = c;
            continue;
          }
          r -= seg_cnt_[c];
        }
        i = c + 1;
      }
      return i - seg_size_;
    }
    return SIZE_MAX;
  }

  BitVector bp_;
  std::vector<int8_t> wmin_;
  size_t nblocks_ = 0;
  size_t seg_size_ = 1;
  std::vector<int32_t> seg_min_;
  std::vector<uint32_t> seg_cnt_;
  std::vector<uint64_t> leaf_dir_;
  size_t leaves_ = 0;
};

}  // namespace scsg

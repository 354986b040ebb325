#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "scsg/bits.hpp"
#include "scsg/blockcactus.hpp"
#include "scsg/graph.hpp"
#include "scsg/io.hpp"
#include "scsg/leafpower.hpp"
#include "scsg/space.hpp"
#include "scsg/spgraph.hpp"

namespace scsg {

enum class GraphClass : uint8_t { SP = 0, Block = 1, Cactus = 2, BlockCactus = 3, Leaf3 = 4 };

inline const char* class_name(GraphClass c) {
  switch (c) {
    case GraphClass::SP: return "sp";
    case GraphClass::Block: return "block";
    case GraphClass::Cactus: return "cactus";
    case GraphClass::BlockCactus: return "blockcactus";
    case GraphClass::Leaf3: return "leaf3";
  }
  return "?";
}

inline GraphClass parse_class(const std::string& s) {
  for (uint8_t i = 0; i <= 4; ++i)
    if (s == class_name(static_cast<GraphClass>(i))) return static_cast<GraphClass>(i);
  throw std::invalid_argument("unknown graph class '" + s + "'");
}

inline BcClass bc_class(GraphClass c) {
  return c == GraphClass::Block ? BcClass::Block : c == GraphClass::Cactus ? BcClass::Cactus : BcClass::BlockCactus;
}

// A graph of one class encoded per connected component. Queries take and
// return input vertex ids (0-based); the vertex map is kept beside the
// succinct structures.
class Encoded {
 public:
  static constexpr uint16_t kVersion = 1;

  Encoded() = default;

  static Encoded build(const MultiGraph& g, GraphClass cls, size_t ell_cap = 8) {
    Encoded e;
    e.cls_ = cls;
    e.n_ = g.n();
    e.m_ = g.m();
    std::vector<uint64_t> pos(g.n(), 0);
    uint64_t offset = 0;
    for (const auto& comp : components(g)) {
      MultiGraph h = induced(g, comp);
      std::vector<uint64_t> lab;
      e.offset_.push_back(offset);
      if (h.m() == 0 && cls == GraphClass::SP) {
        e.parts_.emplace_back(std::monostate{});
        lab = {1};
      } else if (cls == GraphClass::SP) {
        e.parts_.emplace_back(SpStructure::build(h, ell_cap, &lab));
      } else if (cls == GraphClass::Leaf3) {
        e.parts_.emplace_back(LpStructure::build(h, ell_cap, &lab));
      } else {
        e.parts_.emplace_back(BcStructure::build(h, bc_class(cls), ell_cap, &lab));
      }
      for (size_t i = 0; i < comp.size(); ++i) pos[comp[i]] = offset + lab[i] - 1;
      offset += comp.size();
    }
    e.pos_ = IntVector::from(pos);
    e.make_inverse();
    return e;
  }

  GraphClass graph_class() const { return cls_; }
  size_t n() const { return n_; }
  size_t m() const { return m_; }
  size_t component_count() const { return parts_.size(); }

  size_t degree(vertex_t x) const {
    auto [c, u] = where(x);
    return visit(c, [&](const auto& s) -> size_t { return s.degree(u); }, 0);
  }
  bool adjacent(vertex_t x, vertex_t y) const { return multiplicity(x, y) > 0; }
  size_t multiplicity(vertex_t x, vertex_t y) const {
    auto [c, u] = where(x);
    auto [d, v] = where(y);
    if (c != d || u == v) return 0;
    return visit(c, [&](const auto& s) -> size_t { return s.multiplicity(u, v); }, 0);
  }
  std::vector<vertex_t> neighborhood(vertex_t x) const {
    auto [c, u] = where(x);
    std::vector<vertex_t> out;
    visit(
        c,
        [&](const auto& s) -> size_t {
          for (uint64_t w : s.neighborhood(u)) out.push_back(inv_[offset_[c] + w - 1]);
          return 0;
        },
        0);
    return out;
  }

  MultiGraph decode() const {
    MultiGraph g(n_);
    for (size_t c = 0; c < parts_.size(); ++c)
      visit(
          c,
          [&](const auto& s) -> size_t {
            MultiGraph h = s.decode();
            for (auto [a, b] : h.edges())
              g.add_edge(inv_[offset_[c] + a], inv_[offset_[c] + b]);
            return 0;
          },
          0);
    return g;
  }

  SpaceReport space() const {
    SpaceReport r;
    r.cls = class_name(cls_);
    r.n = n_;
    r.m = m_;
    for (size_t c = 0; c < parts_.size(); ++c)
      visit(
          c,
          [&](const auto& s) -> size_t {
            for (auto& [k, b] : s.space()) {
              auto it = std::find_if(r.parts.begin(), r.parts.end(), [&](auto& p) { return p.first == k; });
              if (it == r.parts.end()) {
                r.parts.emplace_back(k, b);
              } else {
                it->second += b;
              }
            }
            return 0;
          },
          0);
    r.overhead = {{"vertex_map", pos_.bit_size()}, {"components", 128 * parts_.size()}};
    switch (cls_) {
      case GraphClass::SP:
        r.unit = "m";
        r.baseline = 1.84;
        r.other_baselines = {{"2.53m", 2.53}, {"3.18n", 3.18}};
        break;
      case GraphClass::Leaf3:
        r.unit = "n";
        r.baseline = 1.35;
        break;
      default:
        r.unit = "n";
        r.baseline = 2.092;
    }
    return r;
  }

  // "SCSG", u16 version, u8 class tag, u64 n, u64 m, u64 component count,
  // then per component u64 vertex offset and a length-prefixed payload, the
  // length-prefixed vertex map, and a u64 FNV-1a of everything before it.
  std::vector<uint8_t> save() const {
    Writer w;
    w.raw(reinterpret_cast<const uint8_t*>("SCSG"), 4);
    w.u16(kVersion);
    w.u8(static_cast<uint8_t>(cls_));
    w.u64(n_);
    w.u64(m_);
    w.u64(parts_.size());
    for (size_t c = 0; c < parts_.size(); ++c) {
      Writer p;
      visit(
          c,
          [&](const auto& s) -> size_t {
            s.save(p);
            return 0;
          },
          0);
      w.u64(offset_[c]);
      w.u64(p.data().size());
      w.raw(p.data().data(), p.data().size());
    }
    Writer vm;
    pos_.save(vm);
    w.u64(vm.data().size());
    w.raw(vm.data().data(), vm.data().size());
    w.u64(fnv1a(w.data().data(), w.data().size()));
    return w.take();
  }

  static Encoded load(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 4 + 2 + 1 + 24 + 8 || std::string(bytes.begin(), bytes.begin() + 4) != "SCSG")
      throw format_error("not an SCSG container");
    size_t body = bytes.size() - 8;
    Reader tail(bytes.data() + body, 8);
    if (tail.u64() != fnv1a(bytes.data(), body)) throw format_error("checksum mismatch");
    Reader r(bytes.data() + 4, body - 4);
    Encoded e;
    if (r.u16() != kVersion) throw format_error("unsupported container version");
    uint8_t tag = r.u8();
    if (tag > 4) throw format_error("unknown class tag");
    e.cls_ = static_cast<GraphClass>(tag);
    e.n_ = r.u64();
    e.m_ = r.u64();
    uint64_t k = r.u64();
    if (k > e.n_ || k > r.remaining()) throw format_error("component count out of range");
    uint64_t expect = 0;
    for (uint64_t c = 0; c < k; ++c) {
      uint64_t off = r.u64(), len = r.u64();
      if (off != expect || len > r.remaining()) throw format_error("bad component header");
      std::vector<uint8_t> payload(len);
      for (auto& b : payload) b = r.u8();
      Reader p(payload);
      e.offset_.push_back(off);
      if (len == 0) {
        if (e.cls_ != GraphClass::SP) throw format_error("empty component payload");
        e.parts_.emplace_back(std::monostate{});
        expect += 1;
      } else if (e.cls_ == GraphClass::SP) {
        auto s = SpStructure::load(p);
        expect += s.vertices();
        e.parts_.emplace_back(std::move(s));
      } else if (e.cls_ == GraphClass::Leaf3) {
        auto s = LpStructure::load(p);
        expect += s.vertices();
        e.parts_.emplace_back(std::move(s));
      } else {
        auto s = BcStructure::load(p);
        expect += s.vertices();
        e.parts_.emplace_back(std::move(s));
      }
      if (p.remaining() != 0) throw format_error("trailing bytes in component payload");
    }
    if (expect != e.n_) throw format_error("component sizes do not add up to n");
    uint64_t len = r.u64();
    if (len != r.remaining()) throw format_error("bad vertex map length");
    e.pos_ = IntVector::load(r);
    if (e.pos_.size() != e.n_) throw format_error("vertex map size mismatch");
    e.make_inverse();
    return e;
  }

 private:
  using Part = std::variant<std::monostate, SpStructure, BcStructure, LpStructure>;

  std::pair<size_t, uint64_t> where(vertex_t x) const {
    if (x >= n_) throw std::out_of_range("vertex " + std::to_string(x + 1) + " out of range");
    uint64_t p = pos_[x];
    size_t c = static_cast<size_t>(std::upper_bound(offset_.begin(), offset_.end(), p) - offset_.begin() - 1);
    return {c, p - offset_[c] + 1};
  }
  template <class F>
  size_t visit(size_t c, F&& f, size_t empty) const {
    return std::visit(
        [&](const auto& s) -> size_t {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) {
            return empty;
          } else {
            return f(s);
          }
        },
        parts_[c]);
  }
  void make_inverse() {
    inv_.assign(n_, 0);
    std::vector<uint8_t> hit(n_, 0);
    for (vertex_t x = 0; x < n_; ++x) {
      uint64_t p = pos_[x];
      if (p >= n_ || hit[p]) throw format_error("vertex map is not a permutation");
      hit[p] = 1;
      inv_[p] = x;
    }
  }

  GraphClass cls_ = GraphClass::SP;
  size_t n_ = 0, m_ = 0;
  std::vector<Part> parts_;
  std::vector<uint64_t> offset_;
  IntVector pos_;
  std::vector<vertex_t> inv_;
};

}  // namespace scsg

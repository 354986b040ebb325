#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "scsg/io.hpp"

namespace scsg {

inline unsigned bit_width_for(uint64_t max_value) {
  return max_value == 0 ? 0 : static_cast<unsigned>(std::bit_width(max_value));
}

// Position of the k-th (0-based) set bit inside a word. Requires popcount(w) > k.
inline unsigned select_in_word(uint64_t w, unsigned k) {
  for (unsigned byte = 0; byte < 8; ++byte) {
    unsigned c = static_cast<unsigned>(std::popcount((w >> (8 * byte)) & 0xff));
    if (k < c) {
      uint64_t b = (w >> (8 * byte)) & 0xff;
      for (unsigned i = 0;; ++i) {
        if ((b >> i) & 1) {
          if (k == 0) return 8 * byte + i;
          --k;
        }
      }
    }
    k -= c;
  }
  assert(false);
  return 64;
}

// Plain bitvector with rank/select directories.
//
// rank uses the strictly-before convention: rank1(i) counts ones in [0, i).
// select is 1-indexed and returns a 0-based position.
// Directory: one absolute count per 512-bit superblock plus a select sample
// every 4096 ones (and zeros). Directories are rebuilt on load.
class BitVector {
 public:
  static constexpr size_t kSuper = 512;
  static constexpr size_t kWordsPerSuper = kSuper / 64;
  static constexpr size_t kSample = 4096;

  BitVector() { build(); }
  explicit BitVector(std::span<const uint8_t> bits) : n_(bits.size()) {
    words_.assign((n_ + 63) / 64, 0);
    for (size_t i = 0; i < n_; ++i)
      if (bits[i]) words_[i / 64] |= uint64_t(1) << (i % 64);
    build();
  }
  explicit BitVector(const std::vector<bool>& bits) : n_(bits.size()) {
    words_.assign((n_ + 63) / 64, 0);
    for (size_t i = 0; i < n_; ++i)
      if (bits[i]) words_[i / 64] |= uint64_t(1) << (i % 64);
    build();
  }
  BitVector(std::vector<uint64_t> words, size_t n) : words_(std::move(words)), n_(n) {
    words_.resize((n_ + 63) / 64);
    if (n_ % 64 && !words_.empty()) words_.back() &= (uint64_t(1) << (n_ % 64)) - 1;
    build();
  }

  size_t size() const { return n_; }
  size_t ones() const { return ones_; }
  size_t zeros() const { return n_ - ones_; }

  bool operator[](size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  bool get(size_t i) const {
    if (i >= n_) throw std::out_of_range("BitVector::get");
    return (*this)[i];
  }
  uint64_t word(size_t w) const { return w < words_.size() ? words_[w] : 0; }
  const std::vector<uint64_t>& words() const { return words_; }

  size_t rank1(size_t i) const {
    if (i > n_) throw std::out_of_range("BitVector::rank");
    size_t sb = i / kSuper;
    size_t r = super_[sb];
    size_t w = sb * kWordsPerSuper;
    size_t wi = i / 64;
    for (; w < wi; ++w) r += std::popcount(words_[w]);
    if (i % 64) r += std::popcount(words_[wi] & ((uint64_t(1) << (i % 64)) - 1));
    return r;
  }
  size_t rank0(size_t i) const { return i - rank1(i); }
  size_t rank(bool bit, size_t i) const { return bit ? rank1(i) : rank0(i); }

  size_t select1(size_t j) const {
    if (j == 0 || j > ones_) throw std::out_of_range("BitVector::select1");
    return select_impl<true>(j);
  }
  size_t select0(size_t j) const {
    if (j == 0 || j > zeros()) throw std::out_of_range("BitVector::select0");
    return select_impl<false>(j);
  }
  size_t select(bool bit, size_t j) const { return bit ? select1(j) : select0(j); }

  // Raw bits plus directory bits.
  size_t bit_size() const { return n_ + directory_bits(); }
  size_t directory_bits() const {
    return 64 * (super_.size() + sample1_.size() + sample0_.size());
  }

  void save(Writer& w) const {
    w.u64(n_);
    w.words(words_);
  }
  static BitVector load(Reader& r) {
    uint64_t n = r.u64();
    auto words = r.words((n + 63) / 64);
    return BitVector(std::move(words), n);
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  void build() {
    size_t nsuper = n_ / kSuper + 1;
    super_.assign(nsuper + 1, 0);
    sample1_.clear();
    sample0_.clear();
    size_t count = 0;
    for (size_t sb = 0; sb <= nsuper; ++sb) {
      super_[sb] = count;
      for (size_t w = sb * kWordsPerSuper; w < std::min((sb + 1) * kWordsPerSuper, words_.size()); ++w)
        count += std::popcount(words_[w]);
    }
    ones_ = count;
    // sample_k[t] = superblock holding the (t*kSample+1)-th one / zero
    for (size_t t = 0; t * kSample < ones_; ++t) sample1_.push_back(find_super<true>(t * kSample + 1, 0));
    for (size_t t = 0; t * kSample < zeros(); ++t) sample0_.push_back(find_super<false>(t * kSample + 1, 0));
  }

  template <bool One>
  size_t count_before_super(size_t sb) const {
    return One ? super_[sb] : std::min(sb * kSuper, n_) - super_[sb];
  }

  // Last superblock whose count-before is < j, searching from lo.
  template <bool One>
  size_t find_super(size_t j, size_t lo) const {
    size_t hi = super_.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi + 1) / 2;
      if (count_before_super<One>(mid) < j) lo = mid;
      else hi = mid - 1;
    }
    return lo;
  }

  template <bool One>
  size_t select_impl(size_t j) const {
    const auto& samples = One ? sample1_ : sample0_;
    size_t t = (j - 1) / kSample;
    size_t lo = samples[t];
    size_t sb = lo;
    if (t + 1 < samples.size()) {
      size_t hi = samples[t + 1];
      while (lo < hi) {
        size_t mid = (lo + hi + 1) / 2;
        if (count_before_super<One>(mid) < j) lo = mid;
        else hi = mid - 1;
      }
      sb = lo;
    } else {
      sb = find_super<One>(j, lo);
    }
    size_t rem = j - count_before_super<One>(sb);
    for (size_t w = sb * kWordsPerSuper;; ++w) {
      uint64_t x = One ? words_[w] : ~words_[w];
      size_t c = std::popcount(x);
      if (rem <= c) return w * 64 + select_in_word(x, static_cast<unsigned>(rem - 1));
      rem -= c;
    }
  }

  std::vector<uint64_t> words_;
  size_t n_ = 0;
  size_t ones_ = 0;
  std::vector<uint64_t> super_;
  std::vector<uint32_t> sample1_, sample0_;
};

// Fixed-width packed integer array.
class IntVector {
 public:
  IntVector() = default;
  IntVector(size_t n, unsigned width) : n_(n), width_(width), words_((n * width + 63) / 64 + 1, 0) {}

  static IntVector from(std::span<const uint64_t> values) {
    uint64_t mx = 0;
    for (auto v : values) mx = std::max(mx, v);
    IntVector iv(values.size(), bit_width_for(mx));
    for (size_t i = 0; i < values.size(); ++i) iv.set(i, values[i]);
    return iv;
  }
  static IntVector from(const std::vector<uint64_t>& values) {
    return from(std::span<const uint64_t>(values));
  }

  size_t size() const { return n_; }
  unsigned width() const { return width_; }

  uint64_t operator[](size_t i) const {
    if (width_ == 0) return 0;
    size_t bit = i * width_;
    size_t w = bit / 64, off = bit % 64;
    uint64_t v = words_[w] >> off;
    if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
    return width_ == 64 ? v : v & ((uint64_t(1) << width_) - 1);
  }
  uint64_t at(size_t i) const {
    if (i >= n_) throw std::out_of_range("IntVector::at");
    return (*this)[i];
  }
  void set(size_t i, uint64_t v) {
    if (width_ == 0) return;
    uint64_t mask = width_ == 64 ? ~uint64_t(0) : (uint64_t(1) << width_) - 1;
    v &= mask;
    size_t bit = i * width_;
    size_t w = bit / 64, off = bit % 64;
    words_[w] = (words_[w] & ~(mask << off)) | (v << off);
    if (off + width_ > 64) {
      size_t spill = off + width_ - 64;
      uint64_t m2 = (uint64_t(1) << spill) - 1;
      words_[w + 1] = (words_[w + 1] & ~m2) | (v >> (64 - off));
    }
  }

  size_t bit_size() const { return n_ * width_; }

  void save(Writer& w) const {
    w.u64(n_);
    w.u8(static_cast<uint8_t>(width_));
    w.words(words_);
  }
  static IntVector load(Reader& r) {
    IntVector iv;
    iv.n_ = r.u64();
    iv.width_ = r.u8();
    if (iv.width_ > 64) throw format_error("bad integer width");
    iv.words_ = r.words((iv.n_ * iv.width_ + 63) / 64 + 1);
    return iv;
  }
  friend bool operator==(const IntVector& a, const IntVector& b) {
    if (a.n_ != b.n_ || a.width_ != b.width_) return false;
    for (size_t i = 0; i < a.n_; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

 private:
  size_t n_ = 0;
  unsigned width_ = 0;
  std::vector<uint64_t> words_{0};
};

// Sparse set over [0, universe) with a fixed-width payload per member.
// Members are Elias-Fano coded: low bits packed, high parts in unary.
class SparseDict {
 public:
  SparseDict() = default;
  SparseDict(uint64_t universe, std::span<const uint64_t> members,
             std::span<const uint64_t> satellite = {})
      : universe_(universe), n_(members.size()) {
    if (!satellite.empty() && satellite.size() != members.size())
      throw std::invalid_argument("SparseDict: satellite count mismatch");
    for (size_t i = 0; i < members.size(); ++i) {
      if (members[i] >= universe) throw std::invalid_argument("SparseDict: member outside universe");
      if (i && members[i] <= members[i - 1]) throw std::invalid_argument("SparseDict: members not strictly increasing");
    }
    low_width_ = (n_ > 0 && universe_ > n_) ? static_cast<unsigned>(std::bit_width(universe_ / n_) - 1) : 0;
    low_ = IntVector(n_, low_width_);
    std::vector<bool> high(n_ + (universe_ >> low_width_) + 1, false);
    for (size_t i = 0; i < n_; ++i) {
      low_.set(i, members[i]);
      high[(members[i] >> low_width_) + i] = true;
    }
    high_ = BitVector(high);
    if (!satellite.empty()) sat_ = IntVector::from(satellite);
  }
  SparseDict(uint64_t universe, const std::vector<uint64_t>& members,
             const std::vector<uint64_t>& satellite = {})
      : SparseDict(universe, std::span<const uint64_t>(members), std::span<const uint64_t>(satellite)) {}

  uint64_t universe() const { return universe_; }
  size_t size() const { return n_; }
  bool has_satellite() const { return sat_.size() == n_ && n_ > 0; }

  // Members strictly less than x.
  size_t rank(uint64_t x) const {
    if (x >= universe_) return n_;
    uint64_t h = x >> low_width_;
    size_t k = 0, p = 0;
    if (h > 0) {
      p = high_.select0(h) + 1;
      k = p - h;
    }
    uint64_t lo = low_width_ ? x & ((uint64_t(1) << low_width_) - 1) : 0;
    while (p < high_.size() && high_[p] && low_[k] < lo) {
      ++k;
      ++p;
    }
    return k;
  }
  // 1-indexed.
  uint64_t select(size_t j) const {
    if (j == 0 || j > n_) throw std::out_of_range("SparseDict::select");
    uint64_t h = high_.select1(j) - (j - 1);
    return (h << low_width_) | low_[j - 1];
  }
  bool member(uint64_t x) const { return x < universe_ && rank(x + 1) - rank(x) == 1; }
  uint64_t satellite(size_t j) const {
    if (j == 0 || j > n_ || sat_.size() != n_) throw std::out_of_range("SparseDict::satellite");
    return sat_[j - 1];
  }
  // Index (1-based) of the last member <= x, or 0.
  size_t predecessor(uint64_t x) const { return rank(x >= universe_ ? universe_ : x + 1); }

  size_t bit_size() const { return high_.bit_size() + low_.bit_size() + sat_.bit_size(); }

  void save(Writer& w) const {
    w.u64(universe_);
    w.u64(n_);
    w.u8(static_cast<uint8_t>(low_width_));
    low_.save(w);
    high_.save(w);
    sat_.save(w);
  }
  static SparseDict load(Reader& r) {
    SparseDict d;
    d.universe_ = r.u64();
    d.n_ = r.u64();
    d.low_width_ = r.u8();
    d.low_ = IntVector::load(r);
    d.high_ = BitVector::load(r);
    d.sat_ = IntVector::load(r);
    if (d.high_.ones() != d.n_ || d.low_.size() != d.n_) throw format_error("inconsistent dictionary");
    return d;
  }

 private:
  uint64_t universe_ = 0;
  size_t n_ = 0;
  unsigned low_width_ = 0;
  IntVector low_;
  BitVector high_;
  IntVector sat_;
};

// Integer array for skewed values: each entry keeps a b-bit head and the
// all-ones head marks an overflow, whose value lives in a sparse dictionary
// keyed by position. b is chosen to minimize the estimated size.
class EscapedVector {
 public:
  EscapedVector() = default;

  static EscapedVector from(std::span<const uint64_t> values) {
    size_t n = values.size();
    uint64_t mx = 0;
    for (uint64_t v : values) mx = std::max(mx, v);
    unsigned w = bit_width_for(mx);
    unsigned best = w;
    double best_cost = std::numeric_limits<double>::infinity();
    for (unsigned b = (mx == 0 ? 0 : 1); b <= std::min(w + 1, 63u); ++b) {
      size_t k = 0;
      if (b > 0)
        for (uint64_t v : values) k += v >= (uint64_t(1) << b) - 1;
      double per = k ? 2.0 + std::log2(std::max(1.0, double(n) / double(k))) + w : 0.0;
      double cost = double(n) * b + double(k) * per + (k ? 256.0 : 0.0);
      if (cost < best_cost) best_cost = cost, best = b;
    }
    EscapedVector e;
    e.head_ = IntVector(n, best);
    std::vector<uint64_t> pos, val;
    uint64_t mark = e.marker();
    for (size_t i = 0; i < n; ++i) {
      if (values[i] >= mark) {
        e.head_.set(i, mark);
        pos.push_back(i);
        val.push_back(values[i]);
      } else {
        e.head_.set(i, values[i]);
      }
    }
    e.over_ = SparseDict(pos.empty() ? 1 : n, pos, val);
    return e;
  }
  static EscapedVector from(const std::vector<uint64_t>& values) {
    return from(std::span<const uint64_t>(values));
  }

  size_t size() const { return head_.size(); }
  unsigned head_width() const { return head_.width(); }
  size_t overflows() const { return over_.size(); }

  uint64_t operator[](size_t i) const {
    uint64_t v = head_[i];
    if (v != marker()) return v;
    return over_.satellite(over_.rank(i) + 1);
  }

  size_t bit_size() const { return head_.bit_size() + over_.bit_size(); }

  void save(Writer& w) const {
    head_.save(w);
    over_.save(w);
  }
  static EscapedVector load(Reader& r) {
    EscapedVector e;
    e.head_ = IntVector::load(r);
    e.over_ = SparseDict::load(r);
    if (e.over_.size() > e.head_.size()) throw format_error("inconsistent escaped vector");
    return e;
  }

 private:
  uint64_t marker() const {
    return head_.width() == 0 ? std::numeric_limits<uint64_t>::max() : (uint64_t(1) << head_.width()) - 1;
  }

  IntVector head_;
  SparseDict over_;
};

}  // namespace scsg

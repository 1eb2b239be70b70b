// Dynamic fixed-size bitset with the handful of operations the evaluator and
// the subset construction need. Unused high bits of the last word are kept
// zero so equality and hashing can work on whole words.
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ldlfmon {

class Bits {
 public:
  Bits() = default;
  explicit Bits(size_t n, bool value = false)
      : n_(n), w_((n + 63) / 64, value ? ~uint64_t{0} : 0) {
    mask_tail();
  }

  size_t size() const { return n_; }

  bool get(size_t i) const { return w_[i >> 6] >> (i & 63) & 1; }

  void set(size_t i, bool v = true) {
    if (v)
      w_[i >> 6] |= uint64_t{1} << (i & 63);
    else
      w_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }

  bool any() const {
    for (uint64_t w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  size_t count() const {
    size_t c = 0;
    for (uint64_t w : w_) c += static_cast<size_t>(std::popcount(w));
    return c;
  }

  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  bool intersects(const Bits& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  Bits& operator|=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  Bits& operator&=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  void flip() {
    for (uint64_t& w : w_) w = ~w;
    mask_tail();
  }

  friend bool operator==(const Bits& a, const Bits& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

  template <typename F>
  void for_each_set(F f) const {
    for (size_t wi = 0; wi < w_.size(); ++wi) {
      uint64_t w = w_[wi];
      while (w) {
        f(wi * 64 + static_cast<size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  size_t hash() const {
    size_t h = n_;
    for (uint64_t w : w_)
      h ^= static_cast<size_t>(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

 private:
  void mask_tail() {
    if (n_ & 63) w_.back() &= (uint64_t{1} << (n_ & 63)) - 1;
    if (n_ == 0 && !w_.empty()) w_.back() = 0;
  }

  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

struct BitsHash {
  size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace ldlfmon

#ifndef PEQ_BITSET_HPP
#define PEQ_BITSET_HPP

#include <cstdint>
#include <cassert>
#include <functional>
#include <string>
#include <vector>

namespace peq {

// Fixed-width bitset over a finite point universe.  All binary operations
// require operands of the same universe size.
class Bitset {
public:
  Bitset() : n_(0) {}
  explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

  static Bitset full(int n) {
    Bitset b(n);
    for (int i = 0; i < n; ++i) b.set(i);
    return b;
  }

  static Bitset single(int n, int i) {
    Bitset b(n);
    b.set(i);
    return b;
  }

  int universe() const { return n_; }

  void set(int i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

  Bitset complement() const {
    Bitset r(n_);
    for (int i = 0; i < n_; ++i)
      if (!test(i)) r.set(i);
    return r;
  }

  Bitset minus(const Bitset& o) const {
    Bitset r(n_);
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] & ~o.w_[k];
    return r;
  }

  bool subset_of(const Bitset& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }

  bool intersects(const Bitset& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += __builtin_popcountll(w);
    return c;
  }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Bitset& o) const { return !(*this == o); }
  bool operator<(const Bitset& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    for (std::size_t k = w_.size(); k-- > 0;)
      if (w_[k] != o.w_[k]) return w_[k] < o.w_[k];
    return false;
  }

  std::vector<int> to_vector() const {
    std::vector<int> v;
    for (int i = 0; i < n_; ++i)
      if (test(i)) v.push_back(i);
    return v;
  }

  template <typename F>
  void for_each(F f) const {
    for (int i = 0; i < n_; ++i)
      if (test(i)) f(i);
  }

  std::size_t hash() const {
    std::size_t h = std::hash<int>()(n_);
    for (auto w : w_) h = h * 1000003u + std::hash<std::uint64_t>()(w);
    return h;
  }

private:
  int n_;
  std::vector<std::uint64_t> w_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace peq

#endif

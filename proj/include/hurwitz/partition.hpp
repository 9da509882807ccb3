#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace hurwitz {

class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int p : parts_)
      if (p < 1) throw std::invalid_argument("partition parts must be positive");
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
  }
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const { return parts_; }
  int operator[](std::size_t i) const { return parts_[i]; }
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  int largest() const { return parts_.empty() ? 0 : parts_.front(); }

  int size() const {
    int s = 0;
    for (int p : parts_) s += p;
    return s;
  }

  int multiplicity(int part) const {
    return static_cast<int>(std::count(parts_.begin(), parts_.end(), part));
  }

  ZInt aut_order() const {
    ZInt r = 1;
    std::size_t i = 0;
    while (i < parts_.size()) {
      std::size_t j = i;
      while (j < parts_.size() && parts_[j] == parts_[i]) ++j;
      r *= factorial(static_cast<unsigned>(j - i));
      i = j;
    }
    return r;
  }

  // parts equal to d removed
  Partition without(int part) const {
    std::vector<int> v;
    for (int p : parts_)
      if (p != part) v.push_back(p);
    return Partition(std::move(v));
  }

  Partition without_one(int part) const {
    std::vector<int> v = parts_;
    auto it = std::find(v.begin(), v.end(), part);
    if (it == v.end()) throw std::invalid_argument("part not present");
    v.erase(it);
    return Partition(std::move(v));
  }

  Partition joined(const Partition& o) const {
    std::vector<int> v = parts_;
    v.insert(v.end(), o.parts_.begin(), o.parts_.end());
    return Partition(std::move(v));
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

namespace detail {
template <class F>
void partitions_rec(int remaining, int max_part, std::vector<int>& cur, const std::vector<int>* cap,
                    std::vector<int>& used, F& f) {
  if (remaining == 0) {
    f(Partition(cur));
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    if (cap) {
      if (p > static_cast<int>(cap->size())) continue;
      if (used[p - 1] >= (*cap)[p - 1]) continue;
      ++used[p - 1];
    }
    cur.push_back(p);
    partitions_rec(remaining - p, p, cur, cap, used, f);
    cur.pop_back();
    if (cap) --used[p - 1];
  }
}
}  // namespace detail

// Visits partitions of n with parts <= max_part in reverse-lexicographic order.
// cap[j-1], when given, bounds the multiplicity of the part j.
template <class F>
void for_each_partition(int n, int max_part, F&& f, const std::vector<int>* cap = nullptr) {
  if (n < 0 || max_part < 1) return;
  std::vector<int> cur;
  std::vector<int> used(cap ? cap->size() : 0, 0);
  detail::partitions_rec(n, max_part, cur, cap, used, f);
}

inline std::vector<Partition> partitions_bounded(int n, int max_part) {
  if (n < 0) throw std::invalid_argument("negative partition size");
  if (max_part < 1) throw std::invalid_argument("max_part must be positive");
  std::vector<Partition> out;
  for_each_partition(n, max_part, [&](const Partition& p) { out.push_back(p); });
  return out;
}

inline Partition complement(const Partition& lambda, int d) {
  std::vector<int> v;
  for (int p : lambda.parts()) {
    if (p >= d) throw std::invalid_argument("complement needs parts below d");
    v.push_back(d - p);
  }
  return Partition(std::move(v));
}

inline QRat pochhammer_rising(const QRat& x, int l) {
  if (l < 0) throw std::invalid_argument("negative Pochhammer length");
  QRat r(1);
  for (int i = 0; i < l; ++i) r *= x + i;
  return r;
}

}  // namespace hurwitz

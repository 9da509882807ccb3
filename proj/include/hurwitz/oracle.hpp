#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "partition.hpp"
#include "qpoly.hpp"

namespace hurwitz {

struct OracleLimits {
  int max_n = 8;
  int max_m = 8;
};

class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<int> image) : p_(std::move(image)) {
    std::vector<bool> seen(p_.size(), false);
    for (int x : p_) {
      if (x < 0 || x >= static_cast<int>(p_.size()) || seen[static_cast<std::size_t>(x)])
        throw std::invalid_argument("not a permutation");
      seen[static_cast<std::size_t>(x)] = true;
    }
  }
  static Perm identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return Perm(std::move(v));
  }
  // consecutive cycles of the given lengths
  static Perm of_type(const Partition& mu) {
    std::vector<int> v(static_cast<std::size_t>(mu.size()));
    int start = 0;
    for (int len : mu.parts()) {
      for (int k = 0; k < len; ++k) v[static_cast<std::size_t>(start + k)] = start + (k + 1) % len;
      start += len;
    }
    return Perm(std::move(v));
  }

  int size() const { return static_cast<int>(p_.size()); }
  int operator()(int i) const { return p_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& image() const { return p_; }

  // (a*b)(i) = a(b(i)): b acts first
  friend Perm operator*(const Perm& a, const Perm& b) {
    std::vector<int> v(a.p_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.p_[static_cast<std::size_t>(b.p_[i])];
    Perm r;
    r.p_ = std::move(v);
    return r;
  }

  Partition cycle_type() const {
    std::vector<bool> seen(p_.size(), false);
    std::vector<int> lens;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (seen[i]) continue;
      int len = 0;
      for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p_[j])) {
        seen[j] = true;
        ++len;
      }
      lens.push_back(len);
    }
    return Partition(std::move(lens));
  }

  bool operator==(const Perm&) const = default;

 private:
  std::vector<int> p_;
};

namespace detail {

// state = permutation (3 bits per point) + orbit labels in first-occurrence order (3 bits per point)
inline std::uint64_t pack_state(const std::array<int, 8>& perm, const std::array<int, 8>& block, int n) {
  std::array<int, 8> relabel;
  relabel.fill(-1);
  int next = 0;
  std::uint64_t key = 0;
  for (int i = 0; i < n; ++i) {
    key |= static_cast<std::uint64_t>(perm[static_cast<std::size_t>(i)]) << (3 * i);
    int& r = relabel[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])];
    if (r < 0) r = next++;
    key |= static_cast<std::uint64_t>(r) << (24 + 3 * i);
  }
  return key;
}

inline void unpack_state(std::uint64_t key, int n, std::array<int, 8>& perm, std::array<int, 8>& block) {
  for (int i = 0; i < n; ++i) {
    perm[static_cast<std::size_t>(i)] = static_cast<int>(key >> (3 * i) & 7u);
    block[static_cast<std::size_t>(i)] = static_cast<int>(key >> (24 + 3 * i) & 7u);
  }
}

// Walks sigma_inf * tau_m * ... * tau_1 = sigma_0 over all transposition words and
// tallies the end states, step by step.
class FactorizationWalk {
 public:
  FactorizationWalk(const Perm& sigma_inf, const OracleLimits& lim) : n_(sigma_inf.size()) {
    if (n_ < 1) throw std::invalid_argument("empty permutation");
    if (n_ > lim.max_n || n_ > 8) throw std::invalid_argument("N exceeds the oracle limit");
    std::array<int, 8> perm{}, block{};
    for (int i = 0; i < n_; ++i) perm[static_cast<std::size_t>(i)] = sigma_inf(i);
    // orbits of <sigma_inf>
    for (int i = 0; i < n_; ++i) block[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n_; ++i) {
      int j = sigma_inf(i);
      int a = block[static_cast<std::size_t>(i)], b = block[static_cast<std::size_t>(j)];
      if (a != b)
        for (int k = 0; k < n_; ++k)
          if (block[static_cast<std::size_t>(k)] == b) block[static_cast<std::size_t>(k)] = a;
    }
    states_[pack_state(perm, block, n_)] = 1;
  }

  void step() {
    std::unordered_map<std::uint64_t, unsigned __int128> next;
    next.reserve(states_.size() * 4);
    std::array<int, 8> perm{}, block{};
    for (const auto& [key, cnt] : states_) {
      unpack_state(key, n_, perm, block);
      for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b) {
          // P * (a b): images of a and b swap
          std::array<int, 8> p2 = perm;
          std::swap(p2[static_cast<std::size_t>(a)], p2[static_cast<std::size_t>(b)]);
          std::array<int, 8> b2 = block;
          int ba = block[static_cast<std::size_t>(a)], bb = block[static_cast<std::size_t>(b)];
          if (ba != bb)
            for (int k = 0; k < n_; ++k)
              if (b2[static_cast<std::size_t>(k)] == bb) b2[static_cast<std::size_t>(k)] = ba;
          next[pack_state(p2, b2, n_)] += cnt;
        }
    }
    states_.swap(next);
  }

  // counts by (cycle type of the end permutation, transitive?)
  std::map<std::pair<Partition, bool>, ZInt> tally() const {
    std::map<std::pair<Partition, bool>, ZInt> out;
    std::array<int, 8> perm{}, block{};
    for (const auto& [key, cnt] : states_) {
      unpack_state(key, n_, perm, block);
      std::vector<int> img(perm.begin(), perm.begin() + n_);
      Perm p(std::move(img));
      bool transitive = true;
      for (int i = 0; i < n_; ++i)
        if (block[static_cast<std::size_t>(i)] != 0) transitive = false;
      out[{p.cycle_type(), transitive}] += to_zint(cnt);
    }
    return out;
  }

 private:
  static ZInt to_zint(unsigned __int128 v) {
    ZInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
    ZInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(v));
    return (hi << 64) + lo;
  }

  int n_;
  std::unordered_map<std::uint64_t, unsigned __int128> states_;
};

}  // namespace detail

inline ZInt count_factorizations(const Perm& sigma_inf, const Partition& lambda, int m, bool transitive,
                                 const OracleLimits& lim = {}) {
  if (lambda.size() != sigma_inf.size()) throw std::invalid_argument("|lambda| must equal N");
  if (m < 0) throw std::invalid_argument("negative m");
  if (m > lim.max_m) throw std::invalid_argument("m exceeds the oracle limit");
  detail::FactorizationWalk walk(sigma_inf, lim);
  for (int t = 0; t < m; ++t) walk.step();
  ZInt total = 0;
  for (const auto& [key, c] : walk.tally())
    if (key.first == lambda && (key.second || !transitive)) total += c;
  return total;
}

inline ZInt count_factorizations(const Partition& mu, const Partition& lambda, int m, bool transitive,
                                 const OracleLimits& lim = {}) {
  if (mu.size() != lambda.size()) throw std::invalid_argument("|mu| must equal |lambda|");
  return count_factorizations(Perm::of_type(mu), lambda, m, transitive, lim);
}

// genus-g layer in the same convention as WedgeEngine::dh: coefficient of q^a at s^{2g-2+n+|a|}
inline QPolynomial dh_oracle(int g, const std::vector<int>& mu_list, int d, const OracleLimits& lim = {}) {
  Partition mu(mu_list);
  int n = mu.length();
  int N = mu.size();
  if (N > lim.max_n) throw std::invalid_argument("N exceeds the oracle limit");
  std::map<int, std::vector<Partition>> by_m;
  for (const auto& lam : partitions_bounded(N, d)) {
    int m = 2 * g - 2 + n + lam.length();
    if (m < 0) continue;
    if (m > lim.max_m) throw std::invalid_argument("m exceeds the oracle limit");
    by_m[m].push_back(lam);
  }
  QPolynomial out;
  if (by_m.empty()) return out;
  ZInt prod_mu = 1;
  for (int x : mu_list) prod_mu *= x;
  detail::FactorizationWalk walk(Perm::of_type(mu), lim);
  int done = 0;
  for (const auto& [m, lams] : by_m) {
    while (done < m) {
      walk.step();
      ++done;
    }
    auto tally = walk.tally();
    for (const auto& lam : lams) {
      auto it = tally.find({lam, true});
      if (it == tally.end()) continue;
      QRat c(it->second, prod_mu * factorial(static_cast<unsigned>(m)));
      c.canonicalize();
      out.add_term(Mono::of_partition(lam), c);
    }
  }
  return out;
}

}  // namespace hurwitz

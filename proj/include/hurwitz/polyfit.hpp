#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "partition.hpp"
#include "qpoly.hpp"
#include "series.hpp"

namespace hurwitz {

// All values here are taken at s = 1. Every quantity is homogeneous, so the
// s-power of a q-monomial is recovered from its degree: deg for phi and psi,
// 2g-2+n+deg for DH and for C.

struct PhiIndex {
  int j = 1;
  int m = 0;
  auto operator<=>(const PhiIndex&) const = default;
  bool operator==(const PhiIndex&) const = default;
};

struct PolynomialityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class PhiCache {
 public:
  explicit PhiCache(int d) : d_(d) {
    if (d < 1 || d > kMaxVars) throw std::invalid_argument("d must lie in 1..8");
  }
  int d() const { return d_; }

  // [z^N] exp(mu Q(z)) as a partition sum
  const QPolynomial& exp_coeff(int mu, int N) {
    auto key = std::make_pair(mu, N);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    QPolynomial r;
    if (N >= 0)
      for_each_partition(N, d_, [&](const Partition& lam) {
        r.add_term(Mono::of_partition(lam), power(QRat(mu), lam.length()) / QRat(lam.aut_order()));
      });
    return memo_[key] = r;
  }

  QPolynomial phi(int j, int m, int mu) {
    check(j, m, mu);
    return exp_coeff(mu, mu - j) * (QRat(j) * power(QRat(mu), m));
  }

  // psi_k(mu) = (mu/k)^c (k/mu) [z^{mu-k}] exp(mu Q), c = ceil(k/d)
  QPolynomial psi(int k, int mu) {
    if (k < 1 || mu < 1) throw std::invalid_argument("psi needs k, mu >= 1");
    int c = (k + d_ - 1) / d_;
    return exp_coeff(mu, mu - k) * (power(qrat(mu, k), c) * qrat(k, mu));
  }

 private:
  void check(int j, int m, int mu) const {
    if (j < 1 || j > d_) throw std::invalid_argument("phi needs 1 <= j <= d");
    if (m < 0 || mu < 1) throw std::invalid_argument("phi needs m >= 0 and mu >= 1");
  }
  int d_;
  std::map<std::pair<int, int>, QPolynomial> memo_;
};

inline QPolynomial phi(int j, int m, int mu, int d) { return PhiCache(d).phi(j, m, mu); }
inline QPolynomial psi(int k, int mu, int d) { return PhiCache(d).psi(k, mu); }

// second path: j mu^m [z^{mu-j}] exp(mu Q(z)) with the exponential taken as a series
inline QPolynomial phi_by_series(int j, int m, int mu, int d) {
  if (j < 1 || j > d || m < 0 || mu < 1) throw std::invalid_argument("bad phi index");
  int N = mu - j;
  if (N < 0) return {};
  Series<QPolynomial> Q(0, N);
  for (int i = 1; i <= d && i <= N; ++i) Q.at(i) = QPolynomial::var(i - 1) * QRat(mu);
  return exp_series(Q).coeff(N) * (QRat(j) * power(QRat(mu), m));
}

// Expresses d_x-images of z^k in the basis phi-hat^j_m. Coefficients are
// Laurent polynomials in q_d: the only division is by the leading coefficient
// -d q_d of D(z) = 1 - z Q'(z).
class PhiHatAlgebra {
 public:
  struct Element {
    std::map<int, QPolynomial> poly;           // z^i, i >= 1
    std::map<PhiIndex, QPolynomial> basis;     // phi-hat^j_m
  };

  explicit PhiHatAlgebra(int d) : d_(d) {
    if (d < 1 || d > kMaxVars) throw std::invalid_argument("d must lie in 1..8");
    inv_lead_ = QPolynomial::monomial(Mono::var(d - 1, -1), qrat(-1, d));
  }

  Element dx(const Element& f) {
    Element r;
    for (const auto& [idx, c] : f.basis) add(r.basis[{idx.j, idx.m + 1}], c);
    for (const auto& [i, c] : f.poly) {
      if (i <= d_) {
        add(r.basis[{i, 0}], c);
        continue;
      }
      const auto& [A, B] = divide(i);
      for (const auto& [t, a] : A) add(r.poly[t], c * a * QRat(i));
      for (const auto& [l, b] : B) add(r.basis[{l, 0}], c * b * qrat(i, l));
    }
    clean(r);
    return r;
  }

  // psi-hat_k in the phi-hat basis
  const std::map<PhiIndex, QPolynomial>& psi_hat(int k) {
    auto it = psi_memo_.find(k);
    if (it != psi_memo_.end()) return it->second;
    int c = (k + d_ - 1) / d_;
    Element e;
    e.poly[k] = QPolynomial(power(QRat(k), -c));
    for (int t = 0; t < c; ++t) e = dx(e);
    if (!e.poly.empty()) throw std::logic_error("polynomial part survived the d_x steps");
    return psi_memo_[k] = e.basis;
  }

 private:
  static void add(QPolynomial& into, const QPolynomial& x) { into += x; }
  static void clean(Element& e) {
    std::erase_if(e.poly, [](const auto& kv) { return kv.second.is_zero(); });
    std::erase_if(e.basis, [](const auto& kv) { return kv.second.is_zero(); });
  }

  // z^i = A(z) D(z) + B(z), A in degrees 1..i-d, B in degrees 1..d
  const std::pair<std::map<int, QPolynomial>, std::map<int, QPolynomial>>& divide(int i) {
    auto it = div_memo_.find(i);
    if (it != div_memo_.end()) return it->second;
    std::map<int, QPolynomial> R{{i, QPolynomial(1)}}, A;
    // D(z) = 1 - sum_j j q_j z^j
    for (int t = i; t > d_; --t) {
      auto rt = R.find(t);
      if (rt == R.end() || rt->second.is_zero()) continue;
      QPolynomial a = rt->second * inv_lead_;
      A[t - d_] = a;
      R[t - d_] -= a;
      for (int j = 1; j <= d_; ++j) R[t - d_ + j] += a * QPolynomial::var(j - 1) * QRat(j);
    }
    std::map<int, QPolynomial> B;
    for (auto& [t, c] : R) {
      if (c.is_zero()) continue;
      if (t < 1 || t > d_) throw std::logic_error("division left a remainder outside degrees 1..d");
      B[t] = c;
    }
    return div_memo_[i] = {A, B};
  }

  int d_;
  QPolynomial inv_lead_;
  std::map<int, std::pair<std::map<int, QPolynomial>, std::map<int, QPolynomial>>> div_memo_;
  std::map<int, std::map<PhiIndex, QPolynomial>> psi_memo_;
};

struct CTable {
  int g = 0;
  int n = 0;
  int d = 1;
  int f = 0;  // filtration level reached
  std::map<std::vector<PhiIndex>, QPolynomial> entries;

  bool empty() const { return entries.empty(); }
};

struct DegreeReport {
  bool empty = true;
  int max_total_m = -1;
  int max_single_m = -1;
  bool within_bound = true;

  std::string str() const {
    if (empty) return "empty";
    return "max sum m = " + std::to_string(max_total_m) + ", max m = " + std::to_string(max_single_m);
  }
};

inline DegreeReport degree_report(const CTable& t) {
  DegreeReport r;
  int bound = 3 * t.g - 3 + t.n;
  for (const auto& [idx, c] : t.entries) {
    if (c.is_zero()) continue;
    r.empty = false;
    int tot = 0;
    for (const auto& p : idx) {
      tot += p.m;
      r.max_single_m = std::max(r.max_single_m, p.m);
      if (p.m > bound) r.within_bound = false;
    }
    r.max_total_m = std::max(r.max_total_m, tot);
  }
  return r;
}

inline QPolynomial reconstruct(const CTable& t, const std::vector<int>& mu, PhiCache& cache) {
  if (static_cast<int>(mu.size()) != t.n) throw std::invalid_argument("mu has the wrong length");
  QPolynomial out;
  for (const auto& [idx, c] : t.entries) {
    QPolynomial term = c;
    for (int i = 0; i < t.n && !term.is_zero(); ++i) term = term * cache.phi(idx[static_cast<std::size_t>(i)].j, idx[static_cast<std::size_t>(i)].m, mu[static_cast<std::size_t>(i)]);
    out += term;
  }
  return out;
}

using DHProvider = std::function<QPolynomial(const std::vector<int>&)>;

struct FitOptions {
  int extra_levels = 3;  // retries beyond the starting level
  int held_out = 5;
  unsigned seed = 20240601u;
};

namespace detail {

inline void for_each_index(int n, int K, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> v(static_cast<std::size_t>(n), 1);
  if (n == 0) return;
  while (true) {
    f(v);
    int a = n - 1;
    while (a >= 0 && v[static_cast<std::size_t>(a)] == K) v[static_cast<std::size_t>(a--)] = 1;
    if (a < 0) return;
    ++v[static_cast<std::size_t>(a)];
  }
}

inline std::size_t flat(const std::vector<int>& v, int K) {
  std::size_t r = 0;
  for (int x : v) r = r * static_cast<std::size_t>(K) + static_cast<std::size_t>(x - 1);
  return r;
}

}  // namespace detail

// Fits DH_{g,n} in the psi basis on the grid {1..fd}^n, converts to the phi
// basis and checks held-out points, raising f until the check passes.
inline CTable fit_C(int g, int n, int d, const DHProvider& dh, const FitOptions& opt = {}) {
  if (2 * g - 2 + n <= 0) throw std::invalid_argument("fit needs 2g-2+n > 0");
  PhiCache cache(d);
  PhiHatAlgebra alg(d);
  std::mt19937 rng(opt.seed);
  std::map<std::vector<int>, QPolynomial> values;
  auto value = [&](const std::vector<int>& mu) -> const QPolynomial& {
    auto it = values.find(mu);
    if (it != values.end()) return it->second;
    return values[mu] = dh(mu);
  };
  int f0 = 3 * g - 2 + n;
  for (int f = f0; f <= f0 + opt.extra_levels; ++f) {
    int K = f * d;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(K);
    std::vector<QPolynomial> T(total);
    detail::for_each_index(n, K, [&](const std::vector<int>& mu) { T[detail::flat(mu, K)] = value(mu); });
    // unit lower-triangular solve along each axis: b_mu = F(mu) - sum_{k<mu} b_k psi_k(mu)
    std::size_t stride = 1;
    for (int axis = n - 1; axis >= 0; --axis) {
      for (std::size_t base = 0; base < total; ++base) {
        if ((base / stride) % static_cast<std::size_t>(K) != 0) continue;
        for (int mu = 2; mu <= K; ++mu) {
          QPolynomial& b = T[base + static_cast<std::size_t>(mu - 1) * stride];
          for (int k = 1; k < mu; ++k) {
            const QPolynomial& bk = T[base + static_cast<std::size_t>(k - 1) * stride];
            if (bk.is_zero()) continue;
            b -= bk * cache.psi(k, mu);
          }
        }
      }
      stride *= static_cast<std::size_t>(K);
    }
    // psi basis -> phi basis, one axis at a time
    std::map<std::vector<PhiIndex>, QPolynomial> cur;
    detail::for_each_index(n, K, [&](const std::vector<int>& k) {
      const QPolynomial& b = T[detail::flat(k, K)];
      if (b.is_zero()) return;
      std::vector<std::map<PhiIndex, QPolynomial>> rows;
      for (int kk : k) rows.push_back(alg.psi_hat(kk));
      std::vector<PhiIndex> idx(static_cast<std::size_t>(n));
      std::function<void(int, const QPolynomial&)> rec = [&](int i, const QPolynomial& acc) {
        if (i == n) {
          cur[idx] += acc;
          return;
        }
        for (const auto& [p, c] : rows[static_cast<std::size_t>(i)]) {
          idx[static_cast<std::size_t>(i)] = p;
          rec(i + 1, acc * c);
        }
      };
      rec(0, b);
    });
    CTable t{g, n, d, f, {}};
    for (auto& [idx, c] : cur)
      if (!c.is_zero()) t.entries.emplace(idx, std::move(c));
    bool ok = true;
    std::uniform_int_distribution<int> pick(1, 2 * K);
    for (int h = 0; h < opt.held_out && ok; ++h) {
      std::vector<int> mu(static_cast<std::size_t>(n));
      for (auto& x : mu) x = pick(rng);
      if (!(reconstruct(t, mu, cache) == value(mu))) ok = false;
    }
    if (ok) return t;
  }
  throw PolynomialityError("reconstruction failed at every filtration level tried");
}

}  // namespace hurwitz

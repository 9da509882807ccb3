#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "partition.hpp"
#include "qpoly.hpp"
#include "series.hpp"
#include "special.hpp"

namespace hurwitz {

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// E_energy(c s)
struct EFactor {
  int energy = 0;
  QRat c;

  friend bool operator<(const EFactor& a, const EFactor& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.c < b.c;
  }
  friend bool operator==(const EFactor& a, const EFactor& b) { return a.energy == b.energy && a.c == b.c; }
};

struct EProduct {
  std::vector<EFactor> factors;
  Series<QRat> scalar = Series<QRat>::constant(QRat(1), kExact);
};

// Series in the grading variable e: a term q^a e^t stands for q^a s^{t + |a|}.
// The genus-g part of an n-point table sits at e^{2g-2+n}.
template <class R>
struct DHTable {
  int d = 1;
  std::vector<int> mu;
  Series<R> graded;

  int n() const { return static_cast<int>(mu.size()); }
  int max_genus() const {
    int e = graded.prec() - n() + 2;
    return e < 0 ? -1 : e / 2;
  }
  R genus_layer(int g) const {
    int e = 2 * g - 2 + n();
    if (e > graded.prec()) throw PrecisionError("genus " + std::to_string(g) + " exceeds the stored truncation order");
    return graded.coeff(e);
  }
};

// (q-exponents, s-power) -> coefficient, for a symbolic table
inline std::map<std::pair<Mono, int>, QRat> table_terms(const DHTable<QPolynomial>& t) {
  std::map<std::pair<Mono, int>, QRat> out;
  for (int e = t.graded.valuation(); e <= t.graded.prec(); ++e)
  {
    QPolynomial layer = t.graded.coeff(e);
    for (const auto& [m, c] : layer.terms()) out[{m, e + m.degree()}] = c;
  }
  return out;
}

// graded series -> series in s (the q-degree moves into the s-power)
inline Series<QPolynomial> ungrade(const Series<QPolynomial>& g) {
  int lo = std::min(g.lo(), g.prec() + 1);
  Series<QPolynomial> r(lo, g.prec());
  for (int e = g.lo(); e <= g.prec(); ++e) {
    QPolynomial layer = g.coeff(e);
    for (const auto& [m, c] : layer.terms()) {
      int k = e + m.degree();
      if (k <= r.prec()) r.at(k).add_term(m, c);
    }
  }
  return r;
}

template <class R>
class WedgeEngine {
 public:
  using QLambda = std::function<R(const Partition&)>;

  WedgeEngine(int d, QLambda q_lambda, std::optional<Mono> cap = std::nullopt)
      : d_(d), q_lambda_(std::move(q_lambda)), cap_(cap) {
    if (d < 1 || d > kMaxVars) throw std::invalid_argument("d must lie in 1..8");
    if (cap_) {
      cap_mult_.assign(static_cast<std::size_t>(d_), 0);
      for (int j = 0; j < d_; ++j) cap_mult_[static_cast<std::size_t>(j)] = (*cap_)[j];
    }
  }

  int d() const { return d_; }

  // (1/mu) sum_{lambda |- mu-i} q_lambda mu^l/|Aut| prod S(mu lambda_k s), graded.
  Series<R> c_coefficient(int mu, int i, int prec) {
    if (prec < 0) throw std::invalid_argument("negative order");
    auto key = std::make_pair(mu, i);
    auto it = c_memo_.find(key);
    if (it != c_memo_.end() && it->second.prec() >= prec) return it->second.truncated(prec);
    Series<R> out(0, prec);
    int size = mu - i;
    if (size >= 0) {
      const std::vector<int>* cap = cap_ ? &cap_mult_ : nullptr;
      for_each_partition(
          size, d_,
          [&](const Partition& lam) {
            Series<QRat> w = Series<QRat>::constant(power(QRat(mu), lam.length()) / QRat(lam.aut_order()), kExact);
            for (int j = 1; j <= d_; ++j) {
              int m = lam.multiplicity(j);
              if (m) w = w * S_power(mu * j, m, prec);
            }
            R ql = q_lambda_(lam);
            for (int k = 0; k <= prec; ++k) {
              const QRat& wk = w.coeff(k);
              if (wk == 0) continue;
              R t = ql;
              ring<R>::scale(t, wk / mu);
              out.at(k) += t;
            }
          },
          cap);
    }
    c_memo_[key] = out;
    return out;
  }

  Series<QRat> vev(const std::vector<EFactor>& f, int prec) {
    long total = 0;
    for (const auto& x : f) total += x.energy;
    if (total != 0) throw EngineError("vacuum expectation needs total energy zero");
    return vev_rec(f, prec);
  }
  Series<QRat> vev(const EProduct& p, int prec) {
    Series<QRat> v = vev(p.factors, prec + std::max(0, -p.scalar.valuation()));
    return (p.scalar * v).truncated(prec);
  }

  Series<R> disconnected(const std::vector<int>& mu, int prec) {
    int n = static_cast<int>(mu.size());
    for (int m : mu)
      if (m < 1) throw std::invalid_argument("mu entries must be positive");
    Series<R> total = Series<R>(0, prec);
    if (n == 0) {
      total.at(0) = ring<R>::one();
      return total;
    }
    total = Series<R>(-n, prec);
    std::vector<int> suffix(static_cast<std::size_t>(n) + 1, 0);
    for (int j = n - 1; j >= 0; --j) suffix[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j) + 1] + mu[static_cast<std::size_t>(j)];
    int sum_mu = suffix[0];
    std::vector<int> iv(static_cast<std::size_t>(n), 0);
    // prefix sums of i stay <= 0 and the remaining parts must be able to cancel them
    std::function<void(int, int)> rec = [&](int j, int partial) {
      if (j == n) {
        if (partial != 0) return;
        std::vector<EFactor> ops;
        Series<R> prod = Series<R>::constant(ring<R>::one(), kExact);
        for (int t = 0; t < n; ++t) {
          auto cc = c_coefficient(mu[static_cast<std::size_t>(t)], iv[static_cast<std::size_t>(t)], prec + n);
          if (cc.is_zero()) return;
          prod = mul(prod, cc);
          ops.push_back({-iv[static_cast<std::size_t>(t)], QRat(mu[static_cast<std::size_t>(t)])});
        }
        Series<QRat> v = vev_rec(ops, prec);
        if (v.is_zero()) return;
        Series<R> term = mul(prod, lift<R>(v));
        total = total + term.truncated(prec);
        return;
      }
      int mj = mu[static_cast<std::size_t>(j)];
      int lo = -(sum_mu - mj);
      for (int i = mj; i >= lo; --i) {
        int np = partial + i;
        if (np > 0) continue;
        if (-np > suffix[static_cast<std::size_t>(j) + 1]) continue;
        if (j == n - 1 && np != 0) continue;
        iv[static_cast<std::size_t>(j)] = i;
        rec(j + 1, np);
      }
    };
    rec(0, 0);
    return total;
  }

  Series<R> connected(const std::vector<int>& mu, int prec) {
    int n = static_cast<int>(mu.size());
    if (n == 0) throw std::invalid_argument("empty mu");
    std::map<unsigned, Series<R>> block;
    auto block_series = [&](unsigned mask) -> const Series<R>& {
      auto it = block.find(mask);
      if (it != block.end()) return it->second;
      std::vector<int> sub;
      for (int t = 0; t < n; ++t)
        if (mask >> t & 1u) sub.push_back(mu[static_cast<std::size_t>(t)]);
      return block.emplace(mask, disconnected(sub, prec + n)).first->second;
    };
    Series<R> total(std::min(-n, prec + 1), prec);
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int t, int nblocks) {
      if (t == n) {
        std::vector<unsigned> masks(static_cast<std::size_t>(nblocks), 0u);
        for (int u = 0; u < n; ++u) masks[static_cast<std::size_t>(label[static_cast<std::size_t>(u)])] |= 1u << u;
        Series<R> prod = Series<R>::constant(ring<R>::one(), kExact);
        for (unsigned m : masks) prod = mul(prod, block_series(m));
        QRat w = QRat(factorial(static_cast<unsigned>(nblocks - 1)));
        if ((nblocks - 1) % 2) w = -w;
        total = total + prod.scaled(w).truncated(prec);
        return;
      }
      for (int b = 0; b <= nblocks; ++b) {
        label[static_cast<std::size_t>(t)] = b;
        rec(t + 1, std::max(nblocks, b + 1));
      }
    };
    rec(0, 0);
    for (int e = total.lo(); e <= prec; ++e) {
      bool bad_pole = e < n - 2;
      bool bad_parity = ((e - n) % 2 + 2) % 2 == 1;
      if ((bad_pole || bad_parity) && !ring<R>::is_zero(total.coeff(e)))
        throw EngineError(bad_pole ? "principal part in s failed to cancel" : "homogeneity parity violated");
    }
    return total;
  }

  DHTable<R> dh_disconnected(const std::vector<int>& mu, int prec) { return {d_, mu, disconnected(mu, prec)}; }
  DHTable<R> dh_connected(const std::vector<int>& mu, int prec) { return {d_, mu, connected(mu, prec)}; }

  static int default_order(int g_max, const std::vector<int>& mu) { return 2 * g_max - 2 + static_cast<int>(mu.size()) + 2; }

  // genus-g layer: the coefficient of q^a is the coefficient of q^a s^{2g-2+n+|a|}
  R dh(int g, const std::vector<int>& mu) {
    if (g < 0) throw std::invalid_argument("negative genus");
    auto t = dh_connected(mu, default_order(g, mu));
    return t.genus_layer(g);
  }

  void clear_cache() {
    c_memo_.clear();
    vev_memo_.clear();
    s_memo_.clear();
  }

 private:
  Series<R> mul(const Series<R>& a, const Series<R>& b) const {
    Series<R> r = a * b;
    if constexpr (std::is_same_v<R, QPolynomial>) {
      if (cap_)
        for (int k = r.lo(); k <= std::min(r.prec(), r.top()); ++k) r.at(k).prune(*cap_);
    }
    return r;
  }

  const Series<QRat>& S_power(int c, int m, int prec) {
    auto key = std::make_pair(c, m);
    auto it = s_memo_.find(key);
    if (it != s_memo_.end() && it->second.prec() >= prec) return it->second;
    Series<QRat> base = S_series(QRat(c), prec);
    return s_memo_[key] = base.pow(m).truncated(prec);
  }

  Series<QRat> vev_rec(const std::vector<EFactor>& f, int prec) {
    if (f.empty()) return Series<QRat>::constant(QRat(1), prec);
    if (f.front().energy < 0) return Series<QRat>::zero(prec);
    // the rightmost factor acts on the vacuum
    if (f.back().energy > 0) return Series<QRat>::zero(prec);
    auto it = vev_memo_.find(f);
    if (it != vev_memo_.end() && it->second.prec() >= prec) return it->second.truncated(prec);
    Series<QRat> result;
    if (f.front().energy == 0) {
      const QRat& c1 = f.front().c;
      if (c1 == 0) throw EngineError("vacuum expectation of E_0(0) is undefined");
      std::vector<EFactor> tail(f.begin() + 1, f.end());
      Series<QRat> t = vev_rec(tail, prec + 1);
      if (t.is_zero()) {
        result = Series<QRat>::zero(prec);
      } else {
        Series<QRat> inv = inv_sigma_series(c1, prec - t.valuation());
        result = (inv * t).truncated(prec);
      }
    } else {
      result = Series<QRat>::zero(prec);
      const EFactor& a = f.front();
      for (std::size_t j = 1; j < f.size(); ++j) {
        const EFactor& b = f[j];
        QRat x = a.energy * b.c - b.energy * a.c;
        if (x == 0) continue;
        std::vector<EFactor> g;
        g.reserve(f.size() - 1);
        for (std::size_t t = 1; t < f.size(); ++t) {
          if (t == j) g.push_back({a.energy + b.energy, a.c + b.c});
          else g.push_back(f[t]);
        }
        Series<QRat> sub = vev_rec(g, prec - 1);
        if (sub.is_zero()) continue;
        Series<QRat> sig = sigma_series(x, std::max(1, prec - sub.valuation()));
        result = result + (sig * sub).truncated(prec);
      }
    }
    vev_memo_[f] = result;
    return result;
  }

  int d_;
  QLambda q_lambda_;
  std::optional<Mono> cap_;
  std::vector<int> cap_mult_;
  std::map<std::pair<int, int>, Series<R>> c_memo_;
  std::map<std::vector<EFactor>, Series<QRat>> vev_memo_;
  std::map<std::pair<int, int>, Series<QRat>> s_memo_;
};

inline WedgeEngine<QPolynomial> symbolic_engine(int d, std::optional<Mono> cap = std::nullopt) {
  return WedgeEngine<QPolynomial>(d, [](const Partition& l) { return QPolynomial::q_lambda(l); }, cap);
}

// q specialised to rational values; the genus layer is then sum_a coeff_a q^a at s = 1
inline WedgeEngine<QRat> numeric_engine(int d, std::vector<QRat> q) {
  if (static_cast<int>(q.size()) != d) throw std::invalid_argument("need exactly d values of q");
  return WedgeEngine<QRat>(d, [q = std::move(q)](const Partition& l) {
    QRat r(1);
    for (int p : l.parts()) r *= q[static_cast<std::size_t>(p - 1)];
    return r;
  });
}

// DH_{0,2} from the reversion of X = z exp(-s Q(z)); the s-power of each term is its q-degree
inline QPolynomial dh02_closed_form(int mu1, int mu2, int d) {
  if (mu1 < 1 || mu2 < 1) throw std::invalid_argument("mu entries must be positive");
  int order = mu1 + mu2 + 1;
  Series<QPolynomial> Q(0, order);
  for (int j = 1; j <= d && j <= order; ++j) Q.at(j) = QPolynomial::var(j - 1);
  Series<QPolynomial> z = Series<QPolynomial>::monomial(QPolynomial(1), 1, order);
  Series<QPolynomial> X = z * exp_series(-Q);
  Series<QPolynomial> zX = X.truncated(order).reversion();
  QPolynomial out;
  for (int a = 1; a <= mu2; ++a) {
    QPolynomial pos = zX.pow(a).coeff(mu2);
    if (pos.is_zero()) continue;
    QPolynomial neg = zX.pow(-a).coeff(mu1);
    out -= (pos * neg) * qrat(1, a);
  }
  return out;
}

}  // namespace hurwitz

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "special.hpp"
#include "wedge.hpp"

namespace hurwitz::props {

struct PropertyReport {
  explicit PropertyReport(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool pass() const { return cases > 0 && failures == 0; }
  void record(bool ok, const std::string& what) {
    ++cases;
    if (!ok && failures++ == 0) first_failure = what;
  }
};

// sum over lambda |- size (parts <= d) of q_lambda (mu s)^l / |Aut| prod S(mu lambda_k s), as a series in s
inline Series<QPolynomial> peeling_sum(int mu, int size, int d, int order) {
  Series<QPolynomial> out(0, order);
  if (size < 0) return out;
  for (const auto& lam : partitions_bounded(size, d)) {
    Series<QRat> w = Series<QRat>::constant(power(QRat(mu), lam.length()) / QRat(lam.aut_order()), order);
    for (int p : lam.parts()) w = w * S_series(QRat(mu * p), order);
    QPolynomial ql = QPolynomial::q_lambda(lam);
    for (int k = 0; k + lam.length() <= order; ++k)
      if (w.coeff(k) != 0) out.at(k + lam.length()) += ql * w.coeff(k);
  }
  return out;
}

// lhs(mu + a) = mu/(mu + a) sum_r r q_r s S(mu r s) lhs(mu + a - r)
inline PropertyReport peeling(int count = 200, unsigned seed = 20240601u, int order = 8) {
  PropertyReport r{"peeling identity"};
  std::mt19937 rng(seed);
  for (int t = 0; t < count; ++t) {
    int d = std::uniform_int_distribution<int>(1, 4)(rng);
    int mu = std::uniform_int_distribution<int>(1, 9)(rng);
    int a = std::uniform_int_distribution<int>(0, 10 - mu)(rng);
    auto lhs = peeling_sum(mu, mu + a, d, order);
    Series<QPolynomial> rhs(0, order);
    for (int k = 1; k <= d; ++k) {
      auto inner = peeling_sum(mu, mu + a - k, d, order);
      if (inner.is_zero()) continue;
      auto Sk = S_series(QRat(mu * k), order);
      Series<QPolynomial> fac(0, order);
      for (int e = 0; e + 1 <= order; ++e) fac.at(e + 1) = QPolynomial::var(k - 1) * (QRat(k) * Sk.coeff(e));
      rhs += fac * inner;
    }
    r.record(lhs.equals(rhs.scaled(qrat(mu, mu + a))),
             "d=" + std::to_string(d) + " mu=" + std::to_string(mu) + " a=" + std::to_string(a));
  }
  return r;
}

inline std::vector<std::vector<int>> partitions_up_to(int total, int max_len) {
  std::vector<std::vector<int>> out;
  for (int t = 1; t <= total; ++t)
    for_each_partition(t, t, [&](const Partition& p) {
      if (p.length() <= max_len) out.push_back(p.parts());
    });
  return out;
}

// every term of a connected table sits at s-power - q-degree = 2g-2+n with g >= 0
inline PropertyReport homogeneity(int d_max = 3, int size_max = 5, int g_max = 2) {
  PropertyReport r{"homogeneity"};
  for (int d = 1; d <= d_max; ++d) {
    auto e = symbolic_engine(d);
    for (const auto& mu : partitions_up_to(size_max, 3)) {
      int n = static_cast<int>(mu.size());
      auto t = e.dh_connected(mu, WedgeEngine<QPolynomial>::default_order(g_max, mu));
      bool ok = true;
      for (const auto& [key, c] : table_terms(t)) {
        int excess = key.second - key.first.degree();
        if (((excess - n) % 2 + 2) % 2 != 0 || excess < n - 2) ok = false;
        for (int j = d; j < kMaxVars; ++j)
          if (key.first.e[static_cast<std::size_t>(j)] != 0) ok = false;
      }
      r.record(ok, "d=" + std::to_string(d) + " mu=" + Partition(mu).str());
    }
  }
  return r;
}

// connected tables agree under every reordering of mu
inline PropertyReport symmetry(int d_max = 3, int size_max = 7, int g_max = 1) {
  PropertyReport r{"mu-permutation symmetry"};
  for (int d = 1; d <= d_max; ++d) {
    auto e = symbolic_engine(d);
    for (auto mu : partitions_up_to(size_max, 3)) {
      if (mu.size() < 2) continue;
      std::sort(mu.begin(), mu.end());
      int order = WedgeEngine<QPolynomial>::default_order(g_max, mu);
      auto base = e.connected(mu, order);
      while (std::next_permutation(mu.begin(), mu.end()))
        r.record(e.connected(mu, order).equals(base), "d=" + std::to_string(d) + " mu=" + Partition(mu).str());
    }
  }
  return r;
}

// sigma odd, S even
inline PropertyReport parity(int count = 50, unsigned seed = 20240601u, int order = 20) {
  PropertyReport r{"sigma/S parity"};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 7);
  for (int t = 0; t < count; ++t) {
    QRat c = qrat(num(rng), den(rng));
    auto s = sigma_series(c, order + 1);
    auto S = S_series(c, order);
    bool ok = true;
    for (int k = 0; k <= order + 1; k += 2) ok = ok && s.coeff(k) == 0;
    for (int k = 1; k <= order; k += 2) ok = ok && S.coeff(k) == 0;
    r.record(ok, "c=" + to_string(c));
  }
  return r;
}

// f o rev(f) = rev(f) o f = id to the truncation order
inline PropertyReport reversion_round_trip(int count = 200, unsigned seed = 20240601u, int order = 9) {
  PropertyReport r{"reversion round trip"};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6);
  for (int t = 0; t < count; ++t) {
    Series<QRat> f(1, order);
    for (int k = 1; k <= order; ++k) f.at(k) = qrat(num(rng), den(rng));
    if (f.coeff(1) == 0) f.at(1) = 1;
    auto g = f.reversion();
    bool ok = true;
    for (const auto& id : {f.compose(g), g.compose(f)}) {
      ok = ok && id.prec() >= order && id.coeff(0) == 0 && id.coeff(1) == 1;
      for (int k = 2; k <= order; ++k) ok = ok && id.coeff(k) == 0;
    }
    r.record(ok, "case " + std::to_string(t));
  }
  return r;
}

}  // namespace hurwitz::props

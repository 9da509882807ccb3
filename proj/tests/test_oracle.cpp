#include "support.hpp"

#include <algorithm>
#include <numeric>

#include "hurwitz/oracle.hpp"
#include "hurwitz/wedge.hpp"

using namespace hurwitz;

namespace {

QPolynomial q(int j) { return QPolynomial::var(j - 1); }

int sign_of(const Partition& p) { return (p.size() - p.length()) % 2 ? -1 : 1; }

std::vector<Perm> all_perms(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  std::vector<Perm> out;
  do out.emplace_back(v);
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// plain depth-first count over all transposition words, kept tiny
long brute_count(const Perm& sigma_inf, const Partition& lambda, int m) {
  int n = sigma_inf.size();
  std::vector<std::pair<int, int>> tr;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) tr.push_back({a, b});
  long count = 0;
  std::vector<int> word(static_cast<std::size_t>(m), 0);
  std::function<void(int, const Perm&)> rec = [&](int k, const Perm& prod) {
    if (k == m) {
      // sigma_0 = sigma_inf * (tau_1 ... tau_m)^{-1}
      if ((sigma_inf * prod).cycle_type() == lambda) ++count;
      return;
    }
    for (auto [a, b] : tr) {
      std::vector<int> img(static_cast<std::size_t>(n));
      std::iota(img.begin(), img.end(), 0);
      std::swap(img[static_cast<std::size_t>(a)], img[static_cast<std::size_t>(b)]);
      rec(k + 1, Perm(img) * prod);
    }
  };
  rec(0, Perm::identity(n));
  return count;
}

}  // namespace

TEST_CASE("count examples") {
  CHECK(count_factorizations(Partition{2}, Partition{2}, 0, false) == 1);
  CHECK(count_factorizations(Partition{2}, Partition{1, 1}, 1, false) == 1);
  CHECK(count_factorizations(Partition{3}, Partition{1, 1, 1}, 2, false) == 3);
  CHECK(count_factorizations(Partition{3}, Partition{1, 1, 1}, 2, true) == 3);
  CHECK_THROWS(count_factorizations(Partition{9}, Partition{9}, 0, false));
  CHECK_THROWS(count_factorizations(Partition{2}, Partition{2}, 9, false));
}

TEST_CASE("dp walk against a plain enumeration") {
  for (int N = 1; N <= 4; ++N)
    for (const auto& mu : partitions_bounded(N, N))
      for (const auto& lam : partitions_bounded(N, N))
        for (int m = 0; m <= 3; ++m)
          CHECK(count_factorizations(mu, lam, m, false) == brute_count(Perm::of_type(mu), lam, m));
}

TEST_CASE("parity") {
  for (int N = 1; N <= 5; ++N)
    for (const auto& mu : partitions_bounded(N, N))
      for (const auto& lam : partitions_bounded(N, N))
        for (int m = 0; m <= 4; ++m)
          if (sign_of(lam) * (m % 2 ? -1 : 1) != sign_of(mu))
            CHECK(count_factorizations(mu, lam, m, false) == 0);
}

TEST_CASE("conjugation independence") {
  for (int N = 1; N <= 5; ++N)
    for (const auto& mu : partitions_bounded(N, N)) {
      Perm rep = Perm::of_type(mu);
      std::vector<ZInt> base;
      auto lams = partitions_bounded(N, N);
      int mmax = N <= 4 ? 4 : 3;
      for (const auto& lam : lams)
        for (int m = 0; m <= mmax; ++m) base.push_back(count_factorizations(rep, lam, m, true));
      for (const auto& p : all_perms(N)) {
        if (!(p.cycle_type() == mu)) continue;
        std::size_t k = 0;
        for (const auto& lam : lams)
          for (int m = 0; m <= mmax; ++m) CHECK(count_factorizations(p, lam, m, true) == base[k++]);
      }
    }
}

TEST_CASE("transitive counts are bounded by all counts") {
  for (int N = 1; N <= 5; ++N)
    for (const auto& mu : partitions_bounded(N, N))
      for (const auto& lam : partitions_bounded(N, N))
        for (int m = 0; m <= 4; ++m) {
          auto t = count_factorizations(mu, lam, m, true);
          auto a = count_factorizations(mu, lam, m, false);
          CHECK(t <= a);
          if (N == 1) CHECK(t == a);
        }
}

TEST_CASE("dh_oracle examples") {
  CHECK(dh_oracle(0, {1}, 1) == q(1));
  CHECK(dh_oracle(1, {2}, 3) == q(1) * q(1) * qrat(1, 12) + q(2) * qrat(1, 4));
  CHECK(dh_oracle(0, {3}, 3) == q(3) * qrat(1, 3) + q(1) * q(2) + q(1) * q(1) * q(1) * qrat(1, 2));
}

TEST_CASE("increasing d only adds monomials with new variables") {
  for (auto mu : std::vector<std::vector<int>>{{3}, {2, 2}, {4}, {1, 2}}) {
    for (int g = 0; g <= 1; ++g)
      for (int d = 1; d <= 3; ++d) {
        auto lo = dh_oracle(g, mu, d), hi = dh_oracle(g, mu, d + 1);
        for (const auto& [m, c] : hi.terms()) {
          bool uses_new = m[d] > 0;
          if (!uses_new) CHECK(lo.coeff(m) == c);
        }
        for (const auto& [m, c] : lo.terms()) CHECK(hi.coeff(m) == c);
      }
  }
}

TEST_CASE("oracle agrees with the wedge engine on small cases") {
  for (int d = 1; d <= 3; ++d) {
    auto eng = symbolic_engine(d);
    for (auto mu : std::vector<std::vector<int>>{{1}, {2}, {3}, {1, 1}, {2, 1}, {1, 1, 1}, {4}, {2, 2}})
      for (int g = 0; g <= 1; ++g) CHECK(dh_oracle(g, mu, d) == eng.dh(g, mu));
  }
}

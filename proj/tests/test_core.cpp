#include "support.hpp"

#include <random>
#include <set>

#include "hurwitz/partition.hpp"
#include "hurwitz/qpoly.hpp"
#include "hurwitz/series.hpp"
#include "hurwitz/special.hpp"

using namespace hurwitz;

namespace {

// p(N, k) = p(N - k, k) + p(N, k - 1)
long bounded_count(int n, int k) {
  if (n == 0) return 1;
  if (n < 0 || k == 0) return 0;
  return bounded_count(n - k, k) + bounded_count(n, k - 1);
}

// all compositions of n with parts <= k, sorted and deduplicated
std::set<std::vector<int>> brute_partitions(int n, int k) {
  std::set<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int rest) {
    if (rest == 0) {
      auto v = cur;
      std::sort(v.begin(), v.end(), std::greater<>());
      out.insert(v);
      return;
    }
    for (int p = 1; p <= std::min(rest, k); ++p) {
      cur.push_back(p);
      rec(rest - p);
      cur.pop_back();
    }
  };
  rec(n);
  return out;
}

Series<QRat> random_series(std::mt19937& rng, int lo, int prec) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  Series<QRat> s(lo, prec);
  for (int k = lo; k <= prec; ++k) s.at(k) = qrat(num(rng), den(rng));
  return s;
}

}  // namespace

TEST_CASE("partitions_bounded examples") {
  auto p0 = partitions_bounded(0, 3);
  REQUIRE(p0.size() == 1);
  CHECK(p0[0].empty());
  auto p42 = partitions_bounded(4, 2);
  REQUIRE(p42.size() == 3);
  CHECK(p42[0] == Partition{2, 2});
  CHECK(p42[1] == Partition{2, 1, 1});
  CHECK(p42[2] == Partition{1, 1, 1, 1});
  CHECK(partitions_bounded(7, 3).size() == 8);
  CHECK(brute_partitions(7, 3).size() == 8);
  CHECK(bounded_count(7, 3) == 8);
}

TEST_CASE("partition counts agree with the recurrence") {
  for (int n = 0; n <= 12; ++n)
    for (int k = 1; k <= 6; ++k) {
      auto ps = partitions_bounded(n, k);
      CHECK(static_cast<long>(ps.size()) == bounded_count(n, k));
      std::set<Partition> uniq(ps.begin(), ps.end());
      CHECK(uniq.size() == ps.size());
      for (std::size_t i = 1; i < ps.size(); ++i) CHECK(ps[i] < ps[i - 1]);
    }
}

TEST_CASE("partition basics") {
  Partition p{1, 3, 1};
  CHECK(p.parts() == std::vector<int>{3, 1, 1});
  CHECK(p.size() == 5);
  CHECK(p.length() == 3);
  CHECK(p.aut_order() == 2);
  CHECK(Partition{}.aut_order() == 1);
  CHECK(Partition{2, 2, 2, 1, 1}.aut_order() == 12);
  CHECK_THROWS(Partition{0, 1});
}

TEST_CASE("complement") {
  CHECK(complement(Partition{}, 5).empty());
  CHECK(complement(Partition{1, 2, 2}, 7) == Partition{6, 5, 5});
  CHECK(complement(Partition{3, 1, 1}, 4) == Partition{3, 3, 1});
  CHECK(complement(complement(Partition{3, 1, 1}, 4), 4) == Partition{3, 1, 1});
  CHECK_THROWS(complement(Partition{4}, 4));
  for (int d = 2; d <= 6; ++d)
    for (int n = 0; n <= 8; ++n)
      for (const auto& lam : partitions_bounded(n, d - 1)) {
        auto c = complement(lam, d);
        CHECK(c.size() + lam.size() == d * lam.length());
        CHECK(c.aut_order() == lam.aut_order());
      }
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer_rising(qrat(1, 2), 3) == qrat(15, 8));
  CHECK(pochhammer_rising(qrat(-7, 3), 0) == 1);
  CHECK(pochhammer_rising(qrat(2, 3), 2) == qrat(10, 9));
}

TEST_CASE("rational serialization") {
  CHECK(to_string(qrat(-6, 4)) == "-3/2");
  CHECK(to_string(qrat(5)) == "5/1");
  CHECK(parse_qrat("10/4") == qrat(5, 2));
  CHECK(parse_qrat("-0.125") == qrat(-1, 8));
  CHECK(parse_qrat("7") == 7);
  CHECK_THROWS(parse_qrat("x/2"));
  CHECK_THROWS(parse_qrat("1/0"));
}

TEST_CASE("sigma and S series") {
  auto s1 = sigma_series(1, 5);
  std::vector<QRat> want{0, 1, 0, qrat(1, 24), 0, qrat(1, 1920)};
  for (int k = 0; k <= 5; ++k) CHECK(s1.coeff(k) == want[static_cast<std::size_t>(k)]);
  CHECK(sigma_series(0, 7).is_zero());

  auto S1 = S_series(1, 4);
  std::vector<QRat> wantS{1, 0, qrat(1, 24), 0, qrat(1, 1920)};
  for (int k = 0; k <= 4; ++k) CHECK(S1.coeff(k) == wantS[static_cast<std::size_t>(k)]);
  auto S0 = S_series(0, 6);
  CHECK(S0.coeff(0) == 1);
  for (int k = 1; k <= 6; ++k) CHECK(S0.coeff(k) == 0);

  auto inv = inv_sigma_series(1, 3);
  CHECK(inv.coeff(-1) == 1);
  CHECK(inv.coeff(0) == 0);
  CHECK(inv.coeff(1) == qrat(-1, 24));
  CHECK(inv.coeff(2) == 0);
  CHECK(inv.coeff(3) == qrat(7, 5760));
  CHECK_THROWS_AS(inv.coeff(4), PrecisionError);

  auto S2 = S_series(2, 9);
  auto one = S2 * S2.inverse();
  CHECK(one.prec() == 9);
  CHECK(one.coeff(0) == 1);
  for (int k = 1; k <= 9; ++k) CHECK(one.coeff(k) == 0);
}

TEST_CASE("sigma is odd and S is even") {
  for (int c = -3; c <= 5; ++c) {
    auto s = sigma_series(c, 15);
    auto S = S_series(c, 14);
    for (int k = 0; k <= 15; k += 2) CHECK(s.coeff(k) == 0);
    for (int k = 1; k <= 14; k += 2) CHECK(S.coeff(k) == 0);
  }
}

TEST_CASE("truncation order propagates as a minimum") {
  Series<QRat> a = Series<QRat>::constant(1, 5);
  Series<QRat> b = Series<QRat>::constant(2, 3);
  CHECK((a + b).prec() == 3);
  CHECK((a * b).prec() == 3);
  auto x = Series<QRat>::monomial(1, 1, kExact);
  CHECK((x * a).prec() == 6);
  CHECK((Series<QRat>::monomial(1, 1, 4) * a).prec() == 4);
  CHECK_THROWS_AS((a * b).coeff(4), PrecisionError);
}

TEST_CASE("series ring axioms on random triples") {
  std::mt19937 rng(7);
  for (int t = 0; t < 30; ++t) {
    auto a = random_series(rng, -1, 6), b = random_series(rng, 0, 7), c = random_series(rng, 1, 8);
    CHECK(((a * b) * c).equals(a * (b * c)));
    CHECK((a * (b + c)).equals(a * b + a * c));
    CHECK((a * b).equals(b * a));
  }
}

TEST_CASE("reversion examples") {
  auto x = Series<QRat>::monomial(1, 1, 10);
  CHECK(x.reversion().equals(x));

  // z exp(-q1 z): the s-power of each term equals its q-degree
  Series<QPolynomial> Q(0, 8);
  Q.at(1) = QPolynomial::var(0);
  auto z = Series<QPolynomial>::monomial(QPolynomial(1), 1, 8);
  auto g = (z * exp_series(-Q)).reversion();
  CHECK(g.coeff(2) == QPolynomial::var(0));

  // [X^3] g for d = 2 against (j/mu) sum over partitions of mu - j
  Series<QPolynomial> Q2(0, 8);
  Q2.at(1) = QPolynomial::var(0);
  Q2.at(2) = QPolynomial::var(1);
  auto g2 = (z * exp_series(-Q2)).reversion();
  QPolynomial expect = QRat(1, 3) * (QPolynomial::var(1) * QRat(3) + QPolynomial::var(0) * QPolynomial::var(0) * qrat(9, 2));
  CHECK(g2.coeff(3) == expect);
  CHECK_THROWS(Series<QRat>::monomial(1, 2, 5).reversion());
}

TEST_CASE("reversion round trip on random series") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6);
  for (int t = 0; t < 50; ++t) {
    Series<QRat> f(1, 9);
    for (int k = 1; k <= 9; ++k) f.at(k) = qrat(num(rng), den(rng));
    if (f.coeff(1) == 0) f.at(1) = 1;
    auto g = f.reversion();
    auto id = f.compose(g);
    CHECK(id.prec() >= 9);
    CHECK(id.coeff(1) == 1);
    for (int k = 2; k <= 9; ++k) CHECK(id.coeff(k) == 0);
    auto id2 = g.compose(f);
    for (int k = 2; k <= 9; ++k) CHECK(id2.coeff(k) == 0);
  }
}

TEST_CASE("laurent composition and powers") {
  auto x = Series<QRat>::monomial(1, 1, 12);
  auto g = x + x * x;  // x + x^2
  auto f = Series<QRat>::monomial(1, -1, 6);
  auto fg = f.compose(g);  // 1/(x + x^2) = x^{-1} - 1 + x - ...
  CHECK(fg.coeff(-1) == 1);
  CHECK(fg.coeff(0) == -1);
  CHECK(fg.coeff(1) == 1);
  auto p = g.pow(-2);
  auto back = p * g.pow(2);
  CHECK(back.coeff(0) == 1);
  for (int k = 1; k <= back.prec(); ++k) CHECK(back.coeff(k) == 0);
}

TEST_CASE("qpolynomial basics") {
  auto q1 = QPolynomial::var(0), q2 = QPolynomial::var(1);
  auto p = (q1 + q2) * (q1 - q2);
  CHECK(p == q1 * q1 - q2 * q2);
  CHECK((p - p).is_zero());
  CHECK(QPolynomial::q_lambda(Partition{2, 1, 1}) == q1 * q1 * q2);
  CHECK(p.evaluate(std::vector<QRat>{3, 2}) == 5);
  Mono cap = Mono::of_partition(Partition{1, 2});
  auto pr = p;
  pr.prune(cap);
  CHECK(pr.is_zero());
}

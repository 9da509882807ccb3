#include "support.hpp"

#include "hurwitz/polyfit.hpp"
#include "hurwitz/reference.hpp"
#include "hurwitz/wedge.hpp"

using namespace hurwitz;

namespace {

QPolynomial q(int j) { return QPolynomial::var(j - 1); }

QPolynomial coeff_of(const CTable& t, std::vector<PhiIndex> idx) {
  auto it = t.entries.find(idx);
  return it == t.entries.end() ? QPolynomial() : it->second;
}

// Lagrange interpolation through (x_i, y_i), evaluated at x
QRat lagrange(const std::vector<QRat>& xs, const std::vector<QRat>& ys, const QRat& x) {
  QRat r(0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    QRat t = ys[i];
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (j != i) t *= (x - xs[j]) / (xs[i] - xs[j]);
    r += t;
  }
  return r;
}

}  // namespace

TEST_CASE("phi examples") {
  for (int j = 1; j <= 3; ++j)
    for (int m = 0; m <= 3; ++m) CHECK(phi(j, m, j, 3) == QPolynomial(QRat(j) * power(QRat(j), m)));
  CHECK(phi(1, 0, 2, 3) == q(1) * QRat(2));
  CHECK(phi(3, 1, 2, 3).is_zero());
  // q_d = 1, others 0: a (kd+a)^{k+m}/k!
  for (int d = 1; d <= 4; ++d)
    for (int a = 1; a <= d; ++a)
      for (int k = 0; k <= 4; ++k)
        for (int m = 0; m <= 2; ++m) {
          std::vector<QRat> qv(static_cast<std::size_t>(d), QRat(0));
          qv.back() = 1;
          int mu = k * d + a;
          QRat want = QRat(a) * power(QRat(mu), k + m) / QRat(factorial(static_cast<unsigned>(k)));
          CHECK(phi(a, m, mu, d).evaluate(qv) == want);
        }
}

TEST_CASE("phi two paths agree") {
  for (int d = 1; d <= 4; ++d) {
    PhiCache c(d);
    for (int j = 1; j <= d; ++j)
      for (int m = 0; m <= 4; ++m)
        for (int mu = 1; mu <= 12; ++mu) CHECK(c.phi(j, m, mu) == phi_by_series(j, m, mu, d));
  }
}

TEST_CASE("psi is unit triangular") {
  for (int d = 1; d <= 4; ++d) {
    PhiCache c(d);
    for (int k = 1; k <= 3 * d; ++k)
      for (int mu = 1; mu <= k; ++mu) CHECK(c.psi(k, mu) == QPolynomial(mu == k ? 1 : 0));
    for (int k = 1; k <= d; ++k)
      for (int mu = 1; mu <= 10; ++mu) CHECK(c.psi(k, mu) == c.phi(k, 0, mu) * qrat(1, k));
  }
}

TEST_CASE("psi-hat expansion reproduces psi values") {
  for (int d = 1; d <= 3; ++d) {
    PhiCache c(d);
    PhiHatAlgebra alg(d);
    for (int k = 1; k <= 3 * d; ++k) {
      const auto& row = alg.psi_hat(k);
      for (int mu = 1; mu <= 3 * d + 3; ++mu) {
        QPolynomial s;
        for (const auto& [idx, coef] : row) s += coef * c.phi(idx.j, idx.m, mu);
        CHECK(s == c.psi(k, mu));
      }
    }
  }
}

TEST_CASE("fit (1,1) at d = 3 gives the closed-form table") {
  auto eng = symbolic_engine(3);
  auto t = fit_C(1, 1, 3, [&](const std::vector<int>& mu) { return eng.dh(1, mu); });
  auto m0 = reference::omega11_m0(), m1 = reference::omega11_m1();
  for (int j = 1; j <= 3; ++j) {
    CHECK(coeff_of(t, {{j, 0}}) == q(j) * m0[static_cast<std::size_t>(j - 1)]);
    CHECK(coeff_of(t, {{j, 1}}) == q(j) * m1[static_cast<std::size_t>(j - 1)]);
  }
  CHECK(t.entries.size() == 6);
  auto rep = degree_report(t);
  CHECK(rep.max_total_m == 1);
  CHECK(rep.within_bound);
}

TEST_CASE("zero data gives an empty table") {
  auto t = fit_C(1, 1, 2, [](const std::vector<int>&) { return QPolynomial(); });
  CHECK(t.empty());
  CHECK(degree_report(t).str() == "empty");
}

TEST_CASE("fit (0,3) and (1,2) reconstruct held-out points") {
  for (int d = 1; d <= 2; ++d) {
    auto eng = symbolic_engine(d);
    auto t = fit_C(0, 3, d, [&](const std::vector<int>& mu) { return eng.dh(0, mu); });
    PhiCache c(d);
    for (auto mu : std::vector<std::vector<int>>{{5, 1, 2}, {3, 3, 4}, {6, 2, 1}})
      CHECK(reconstruct(t, mu, c) == eng.dh(0, mu));
    CHECK(degree_report(t).within_bound);
  }
  auto e2 = symbolic_engine(2);
  auto t12 = fit_C(1, 2, 2, [&](const std::vector<int>& mu) { return e2.dh(1, mu); });
  CHECK(degree_report(t12).max_total_m <= 2);
  CHECK(degree_report(t12).within_bound);
}

TEST_CASE("d = 1 normalised numbers are polynomial in mu") {
  auto eng = numeric_engine(1, {QRat(1)});
  auto norm = [](int mu) -> QRat { return power(QRat(mu), mu) / QRat(factorial(static_cast<unsigned>(mu))); };
  for (int g = 1; g <= 2; ++g) {
    int deg = 3 * g - 2;
    std::vector<QRat> xs, ys;
    for (int mu = 1; mu <= deg + 1; ++mu) {
      xs.push_back(mu);
      ys.push_back(eng.dh(g, {mu}) / norm(mu));
    }
    for (int mu = deg + 2; mu <= deg + 5; ++mu) CHECK(lagrange(xs, ys, QRat(mu)) == eng.dh(g, {mu}) / norm(mu));
  }
  // unstable n = 2: proportional to 1/(a + b)
  auto h = [&](int a, int b) -> QRat { return eng.dh(0, {a, b}) / (norm(a) * norm(b)); };
  QRat c0 = h(1, 1) * 2;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b) CHECK(h(a, b) == c0 / (a + b));
  // n = 3, g = 0: constant; n = 4: linear in each variable
  auto h3 = [&](int a, int b, int c) -> QRat {
    return eng.dh(0, {a, b, c}) / (norm(a) * norm(b) * norm(c));
  };
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int c = 1; c <= 3; ++c) CHECK(h3(a, b, c) == h3(1, 1, 1));
  auto h4 = [&](int a, int b) -> QRat {
    return eng.dh(0, {a, b, 1, 1}) / (norm(a) * norm(b));
  };
  std::vector<QRat> xs{1, 2};
  for (int a = 1; a <= 3; ++a) {
    std::vector<QRat> ys{h4(a, 1), h4(a, 2)};
    for (int b = 3; b <= 5; ++b) CHECK(lagrange(xs, ys, QRat(b)) == h4(a, b));
  }
}

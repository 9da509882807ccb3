#include "support.hpp"

#include "hurwitz/properties.hpp"

using namespace hurwitz;
using namespace hurwitz::props;

namespace {

void require_clean(const PropertyReport& r) {
  INFO(r.name << ": " << r.failures << " of " << r.cases << " failed, first " << r.first_failure);
  CHECK(r.cases > 0);
  CHECK(r.failures == 0);
}

}  // namespace

TEST_CASE("peeling identity, 200 random cases") {
  auto r = peeling(200);
  CHECK(r.cases == 200);
  require_clean(r);
}

TEST_CASE("peeling identity fails when the factor is dropped") {
  // the mu/(mu + a) factor matters whenever a > 0
  auto lhs = peeling_sum(2, 3, 2, 6);
  Series<QPolynomial> rhs(0, 6);
  for (int k = 1; k <= 2; ++k) {
    auto Sk = S_series(QRat(2 * k), 6);
    Series<QPolynomial> fac(0, 6);
    for (int e = 0; e + 1 <= 6; ++e) fac.at(e + 1) = QPolynomial::var(k - 1) * (QRat(k) * Sk.coeff(e));
    rhs += fac * peeling_sum(2, 3 - k, 2, 6);
  }
  CHECK_FALSE(lhs.equals(rhs));
  CHECK(lhs.equals(rhs.scaled(qrat(2, 3))));
}

TEST_CASE("homogeneity invariant") { require_clean(homogeneity()); }

TEST_CASE("mu-permutation symmetry, n <= 3 and |mu| <= 7") { require_clean(symmetry()); }

TEST_CASE("sigma and S parity") { require_clean(parity()); }

TEST_CASE("reversion round trips") {
  auto r = reversion_round_trip(200);
  CHECK(r.cases == 200);
  require_clean(r);
}

TEST_CASE("reports count failures") {
  PropertyReport r{"x"};
  CHECK_FALSE(r.pass());
  r.record(true, "a");
  r.record(false, "b");
  r.record(false, "c");
  CHECK(r.cases == 3);
  CHECK(r.failures == 2);
  CHECK(r.first_failure == "b");
  CHECK_FALSE(r.pass());
}

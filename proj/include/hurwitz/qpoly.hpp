#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "rational.hpp"

namespace hurwitz {

inline constexpr int kMaxVars = 8;

// Exponent vector of q_1..q_8. Negative entries appear only for Laurent
// monomials in the fitted tables.
struct Mono {
  std::array<int8_t, kMaxVars> e{};

  int operator[](int j) const { return e[j]; }
  int degree() const {
    int s = 0;
    for (auto x : e) s += x;
    return s;
  }
  bool is_one() const {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  Mono operator*(const Mono& o) const {
    Mono r;
    for (int j = 0; j < kMaxVars; ++j) {
      int v = e[j] + o.e[j];
      if (v > 127 || v < -127) throw std::overflow_error("monomial exponent overflow");
      r.e[j] = static_cast<int8_t>(v);
    }
    return r;
  }
  bool divides(const Mono& cap) const {
    for (int j = 0; j < kMaxVars; ++j)
      if (e[j] > cap.e[j]) return false;
    return true;
  }
  static Mono var(int j, int power = 1) {
    Mono m;
    m.e[j] = static_cast<int8_t>(power);
    return m;
  }
  static Mono of_partition(const Partition& lambda) {
    Mono m;
    for (int p : lambda.parts()) {
      if (p > kMaxVars) throw std::invalid_argument("part exceeds supported weight");
      if (m.e[p - 1] == 127) throw std::overflow_error("monomial exponent overflow");
      ++m.e[p - 1];
    }
    return m;
  }
  std::vector<int> to_vector(int d) const { return std::vector<int>(e.begin(), e.begin() + d); }

  auto operator<=>(const Mono&) const = default;
  bool operator==(const Mono&) const = default;
};

class QPolynomial {
 public:
  using Terms = std::map<Mono, QRat>;

  QPolynomial() = default;
  QPolynomial(const QRat& c) {  // NOLINT: constants convert implicitly
    if (c != 0) terms_.emplace(Mono{}, c);
  }
  QPolynomial(long c) : QPolynomial(QRat(c)) {}  // NOLINT

  static QPolynomial monomial(const Mono& m, const QRat& c = 1) {
    QPolynomial p;
    if (c != 0) p.terms_.emplace(m, c);
    return p;
  }
  static QPolynomial var(int j) { return monomial(Mono::var(j)); }
  static QPolynomial q_lambda(const Partition& lambda) { return monomial(Mono::of_partition(lambda)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  QRat constant_term() const {
    auto it = terms_.find(Mono{});
    return it == terms_.end() ? QRat(0) : it->second;
  }
  QRat coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? QRat(0) : it->second;
  }

  void add_term(const Mono& m, const QRat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  QPolynomial& operator+=(const QPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  QPolynomial& operator-=(const QPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  QPolynomial& operator*=(const QRat& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
  }
  QPolynomial operator-() const {
    QPolynomial r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
  }

  friend QPolynomial operator+(QPolynomial a, const QPolynomial& b) { return a += b; }
  friend QPolynomial operator-(QPolynomial a, const QPolynomial& b) { return a -= b; }
  friend QPolynomial operator*(QPolynomial a, const QRat& c) { return a *= c; }
  friend QPolynomial operator*(const QRat& c, QPolynomial a) { return a *= c; }

  friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b) {
    QPolynomial r;
    if (a.is_zero() || b.is_zero()) return r;
    QRat t;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        t = ca * cb;
        r.add_term(ma * mb, t);
      }
    return r;
  }
  QPolynomial& operator*=(const QPolynomial& o) { return *this = *this * o; }

  // drops every monomial that does not divide cap
  QPolynomial& prune(const Mono& cap) {
    for (auto it = terms_.begin(); it != terms_.end();)
      if (!it->first.divides(cap)) it = terms_.erase(it);
      else ++it;
    return *this;
  }

  // terms with total degree equal to deg
  QPolynomial homogeneous_part(int deg) const {
    QPolynomial r;
    for (const auto& [m, c] : terms_)
      if (m.degree() == deg) r.terms_.emplace(m, c);
    return r;
  }

  QRat evaluate(const std::vector<QRat>& q) const {
    QRat r(0);
    for (const auto& [m, c] : terms_) {
      QRat t = c;
      for (int j = 0; j < kMaxVars; ++j)
        if (m.e[j]) t *= power(j < static_cast<int>(q.size()) ? q[j] : QRat(0), m.e[j]);
      r += t;
    }
    return r;
  }

  std::complex<double> evaluate(const std::vector<std::complex<double>>& q) const {
    std::complex<double> r = 0;
    for (const auto& [m, c] : terms_) {
      std::complex<double> t = c.get_d();
      for (int j = 0; j < kMaxVars; ++j)
        if (m.e[j]) t *= std::pow(j < static_cast<int>(q.size()) ? q[j] : 0.0, static_cast<int>(m.e[j]));
      r += t;
    }
    return r;
  }

  bool operator==(const QPolynomial& o) const { return terms_ == o.terms_; }

  std::string str(int d = kMaxVars) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) s += " + ";
      first = false;
      s += to_string(c);
      for (int j = 0; j < d; ++j)
        if (m.e[j]) s += "*q" + std::to_string(j + 1) + (m.e[j] != 1 ? "^" + std::to_string(m.e[j]) : "");
    }
    return s;
  }

 private:
  Terms terms_;
};

}  // namespace hurwitz

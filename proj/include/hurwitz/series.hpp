#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpoly.hpp"
#include "rational.hpp"

namespace hurwitz {

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class R>
struct ring;

template <>
struct ring<QRat> {
  static QRat zero() { return QRat(0); }
  static QRat one() { return QRat(1); }
  static bool is_zero(const QRat& x) { return x == 0; }
  static QRat inv(const QRat& x) {
    if (x == 0) throw std::domain_error("inverse of zero");
    return QRat(1) / x;
  }
  static QRat from_rat(const QRat& x) { return x; }
  static void scale(QRat& x, const QRat& c) { x *= c; }
};

template <>
struct ring<QPolynomial> {
  static QPolynomial zero() { return {}; }
  static QPolynomial one() { return QPolynomial(1); }
  static bool is_zero(const QPolynomial& x) { return x.is_zero(); }
  static QPolynomial inv(const QPolynomial& x) {
    if (!x.is_constant() || x.is_zero()) throw std::domain_error("leading coefficient is not a unit");
    return QPolynomial(QRat(1) / x.constant_term());
  }
  static QPolynomial from_rat(const QRat& x) { return QPolynomial(x); }
  static void scale(QPolynomial& x, const QRat& c) { x *= c; }
};

template <>
struct ring<std::complex<double>> {
  using C = std::complex<double>;
  static C zero() { return 0.0; }
  static C one() { return 1.0; }
  static bool is_zero(const C& x) { return x == 0.0; }
  static C inv(const C& x) {
    if (x == 0.0) throw std::domain_error("inverse of zero");
    return 1.0 / x;
  }
  static C from_rat(const QRat& x) { return x.get_d(); }
  static void scale(C& x, const QRat& c) { x *= c.get_d(); }
};

inline constexpr int kExact = 1 << 28;

// Truncated Laurent series sum_{k=lo}^{prec} c_k x^k + O(x^{prec+1}).
// Only c_lo..c_top are stored; known coefficients above top are zero.
template <class R>
class Series {
 public:
  using T = ring<R>;

  Series() = default;
  Series(int lo, int prec) : lo_(lo), prec_(prec) {}

  static Series zero(int prec) { return Series(prec + 1, prec); }
  static Series constant(const R& c, int prec) { return monomial(c, 0, prec); }
  static Series monomial(const R& c, int k, int prec) {
    if (k > prec) return zero(prec);
    Series s(k, prec);
    s.c_.push_back(c);
    return s;
  }
  static Series from_coeffs(int lo, const std::vector<R>& coeffs, int prec) {
    Series s(lo, prec);
    for (std::size_t i = 0; i < coeffs.size() && lo + static_cast<int>(i) <= prec; ++i) s.c_.push_back(coeffs[i]);
    return s;
  }

  int lo() const { return lo_; }
  int prec() const { return prec_; }
  bool exact() const { return prec_ >= kExact / 2; }
  int top() const { return lo_ + static_cast<int>(c_.size()) - 1; }

  R coeff(int k) const {
    if (k > prec_) throw PrecisionError("coefficient x^" + std::to_string(k) + " beyond truncation order " + std::to_string(prec_));
    if (k < lo_ || k > top()) return T::zero();
    return c_[static_cast<std::size_t>(k - lo_)];
  }
  R& at(int k) {
    if (k < lo_ || k > prec_) throw std::out_of_range("series index outside stored range");
    if (k > top()) c_.resize(static_cast<std::size_t>(k - lo_ + 1), T::zero());
    return c_[static_cast<std::size_t>(k - lo_)];
  }

  int valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!T::is_zero(c_[i])) return lo_ + static_cast<int>(i);
    return prec_ + 1;
  }
  bool is_zero() const { return valuation() > prec_; }
  int degree() const {
    for (int k = top(); k >= lo_; --k)
      if (!T::is_zero(c_[static_cast<std::size_t>(k - lo_)])) return k;
    return lo_ - 1;
  }

  Series truncated(int p) const {
    if (p > prec_) throw PrecisionError("cannot raise truncation order");
    Series r(std::min(lo_, p + 1), p);
    for (int k = lo_; k <= std::min(p, top()); ++k) r.at(k) = c_[static_cast<std::size_t>(k - lo_)];
    return r;
  }

  // drop stored leading zeros
  Series normalized() const {
    int v = valuation();
    Series r(v, prec_);
    for (int k = v; k <= std::min(prec_, top()); ++k) r.at(k) = coeff(k);
    return r;
  }

  Series operator-() const {
    Series r = *this;
    for (auto& x : r.c_) x = T::zero() - x;
    return r;
  }

  friend Series operator+(const Series& a, const Series& b) { return combine(a, b, false); }
  friend Series operator-(const Series& a, const Series& b) { return combine(a, b, true); }
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }

  friend Series operator*(const Series& a, const Series& b) {
    int va = a.valuation(), vb = b.valuation();
    long long p = std::min<long long>(static_cast<long long>(a.prec_) + vb, static_cast<long long>(b.prec_) + va);
    int prec = static_cast<int>(std::min<long long>(p, kExact));
    Series r(std::min(va + vb, prec + 1), prec);
    if (va > a.prec_ || vb > b.prec_) return r;
    int ta = a.degree(), tb = b.degree();
    int hi = std::min(prec, ta + tb);
    if (hi >= va + vb) r.c_.assign(static_cast<std::size_t>(hi - (va + vb) + 1), T::zero());
    for (int k = va + vb; k <= hi; ++k) {
      R acc = T::zero();
      for (int i = std::max(va, k - tb); i <= std::min(ta, k - vb); ++i) {
        const R& x = a.c_[static_cast<std::size_t>(i - a.lo_)];
        if (T::is_zero(x)) continue;
        const R& y = b.c_[static_cast<std::size_t>(k - i - b.lo_)];
        if (T::is_zero(y)) continue;
        acc += x * y;
      }
      r.c_[static_cast<std::size_t>(k - r.lo_)] = std::move(acc);
    }
    return r;
  }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  Series scaled(const QRat& c) const {
    Series r = *this;
    for (auto& x : r.c_) T::scale(x, c);
    return r;
  }
  Series times(const R& c) const {
    Series r = *this;
    for (auto& x : r.c_) x = x * c;
    return r;
  }

  Series shifted(int s) const {
    Series r = *this;
    r.lo_ += s;
    if (!exact()) r.prec_ += s;
    return r;
  }

  Series derivative() const {
    Series r(lo_ - 1, exact() ? prec_ : prec_ - 1);
    for (int k = lo_; k <= top(); ++k)
      if (k != 0) {
        R x = c_[static_cast<std::size_t>(k - lo_)];
        T::scale(x, QRat(k));
        r.at(k - 1) = x;
      }
    return r;
  }

  // f(-x)
  Series reflected() const {
    Series r = *this;
    for (int k = lo_; k <= top(); ++k)
      if ((k % 2 + 2) % 2 == 1) r.at(k) = T::zero() - r.at(k);
    return r;
  }

  Series even_part() const {
    Series r = *this;
    for (int k = lo_; k <= top(); ++k)
      if ((k % 2 + 2) % 2 == 1) r.at(k) = T::zero();
    return r;
  }
  Series odd_part() const { return *this - even_part(); }

  Series inverse() const {
    int v = valuation();
    if (v > prec_) throw std::domain_error("inverse of a series with no known nonzero coefficient");
    R inv0 = T::inv(coeff(v));
    if (exact()) {
      if (degree() == v) return monomial(inv0, -v, kExact);
      throw PrecisionError("inverse of an exact non-monomial series needs a truncation order");
    }
    int rel = prec_ - v;
    int tv = degree();
    Series b(-v, -v + rel);
    b.c_.assign(static_cast<std::size_t>(rel + 1), T::zero());
    b.c_[0] = inv0;
    for (int k = 1; k <= rel; ++k) {
      R acc = T::zero();
      for (int i = 1; i <= std::min(k, tv - v); ++i) {
        const R& x = c_[static_cast<std::size_t>(v + i - lo_)];
        if (T::is_zero(x)) continue;
        acc += x * b.c_[static_cast<std::size_t>(k - i)];
      }
      b.c_[static_cast<std::size_t>(k)] = T::zero() - inv0 * acc;
    }
    return b;
  }

  friend Series operator/(const Series& a, const Series& b) { return a * b.inverse(); }

  Series pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    Series r = constant(T::one(), kExact);
    Series b = *this;
    while (n > 0) {
      if (n & 1) r = r * b;
      n >>= 1;
      if (n) b = b * b;
    }
    return r;
  }

  // f(g) by Horner evaluation; g must have positive valuation.
  Series compose(const Series& g) const {
    int vg = g.valuation();
    if (vg < 1) throw std::domain_error("composition needs an inner series of positive valuation");
    if (vg > g.prec_) throw std::domain_error("composition with an unknown inner series");
    int v = std::min(lo_, 0);
    int hi = exact() ? std::max(degree(), 0) : prec_;
    long long cap = exact() ? kExact : (static_cast<long long>(prec_ - v) + 1) * vg - 1;
    int target = static_cast<int>(std::min<long long>(cap, kExact));
    Series h = zero(target);
    for (int k = hi; k >= v; --k) {
      h = h * g;
      R ck = coeff(k);
      if (!T::is_zero(ck)) h = h + constant(ck, kExact);
    }
    h = h.truncated(std::min(h.prec_, target));
    if (v < 0) h = g.pow(v) * h;
    return h;
  }

  // g with f(g(x)) = x, by Newton iteration on the compositional equation.
  Series reversion() const {
    if (valuation() != 1) throw std::domain_error("reversion needs valuation exactly 1");
    if (exact()) throw PrecisionError("reversion needs a truncation order");
    int p = prec_;
    Series x = monomial(T::one(), 1, p);
    Series g = monomial(T::inv(coeff(1)), 1, p);
    Series fp = derivative();
    int iters = 2;
    while ((1 << (iters - 2)) < p + 1) ++iters;
    for (int it = 0; it < iters; ++it) {
      Series r = compose(g) - x;
      if (r.is_zero()) break;
      g = (g - r * fp.compose(g).inverse()).truncated(p);
    }
    return g.truncated(std::min(g.prec_, p));
  }

  bool equals(const Series& o) const {
    int p = std::min({prec_, o.prec_, std::max(top(), o.top())});
    int l = std::min(lo_, o.lo_);
    for (int k = l; k <= p; ++k)
      if (!(coeff(k) == o.coeff(k))) return false;
    return true;
  }

 private:
  static Series combine(const Series& a, const Series& b, bool minus) {
    int prec = std::min(a.prec_, b.prec_);
    int lo = std::min(std::min(a.lo_, b.lo_), prec + 1);
    int hi = std::min(prec, std::max(a.top(), b.top()));
    Series r(lo, prec);
    if (hi >= lo) r.c_.assign(static_cast<std::size_t>(hi - lo + 1), T::zero());
    for (int k = lo; k <= hi; ++k) {
      R x = a.coeff(k);
      if (minus) x -= b.coeff(k);
      else x += b.coeff(k);
      r.c_[static_cast<std::size_t>(k - lo)] = std::move(x);
    }
    return r;
  }

  int lo_ = 0;
  int prec_ = -1;
  std::vector<R> c_;
};

// exp(f) for f with zero constant term, via n e_n = sum k f_k e_{n-k}
template <class R>
Series<R> exp_series(const Series<R>& f) {
  using T = ring<R>;
  if (f.valuation() < 1) throw std::domain_error("exp needs zero constant term");
  if (f.exact()) throw PrecisionError("exp of an exact series needs a truncation order");
  int p = f.prec();
  if (p < 0) return Series<R>::zero(p);
  Series<R> e(0, p);
  e.at(0) = T::one();
  for (int n = 1; n <= p; ++n) {
    R acc = T::zero();
    for (int k = 1; k <= n; ++k) {
      R fk = f.coeff(k);
      if (T::is_zero(fk)) continue;
      T::scale(fk, QRat(k));
      acc += fk * e.coeff(n - k);
    }
    T::scale(acc, qrat(1, n));
    e.at(n) = acc;
  }
  return e;
}

// f^alpha for f = f_0 + ..., with f_0^alpha supplied as g0 (branch choice left to the caller)
template <class R>
Series<R> power_series_pow(const Series<R>& f, const QRat& alpha, const R& g0) {
  using T = ring<R>;
  if (f.lo() < 0 || T::is_zero(f.coeff(0))) throw std::domain_error("power needs a unit constant term");
  if (f.exact()) throw PrecisionError("power of an exact series needs a truncation order");
  int p = f.prec();
  Series<R> g(0, p);
  g.at(0) = g0;
  R inv_f0 = T::inv(f.coeff(0));
  for (int n = 1; n <= p; ++n) {
    R acc = T::zero();
    for (int k = 1; k <= n; ++k) {
      R fk = f.coeff(k);
      if (T::is_zero(fk)) continue;
      T::scale(fk, alpha * k - (n - k));
      acc += fk * g.coeff(n - k);
    }
    T::scale(acc, qrat(1, n));
    g.at(n) = acc * inv_f0;
  }
  return g;
}

template <class R>
Series<R> lift(const Series<QRat>& s) {
  Series<R> r(s.lo(), s.prec());
  for (int k = s.lo(); k <= std::min(s.prec(), s.top()); ++k) r.at(k) = ring<R>::from_rat(s.coeff(k));
  return r;
}

}  // namespace hurwitz

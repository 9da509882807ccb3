#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hurwitz {

using QRat = mpq_class;
using ZInt = mpz_class;

inline QRat qrat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  QRat r(num, den);
  r.canonicalize();
  return r;
}

// "num/den" with den > 0; integers keep the "/1" so the format is uniform.
inline std::string to_string(const QRat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// Accepts "a/b", "a", or a finite decimal such as "-0.125".
inline QRat parse_qrat(const std::string& text) {
  std::string s = text;
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto bad = [&] { return std::invalid_argument("not a rational: " + text); };
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    ZInt n, d;
    if (n.set_str(s.substr(0, slash), 10) != 0 || d.set_str(s.substr(slash + 1), 10) != 0) throw bad();
    if (d == 0) throw std::domain_error("zero denominator");
    QRat r(n, d);
    r.canonicalize();
    return r;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    ZInt n;
    if (n.set_str(s, 10) != 0) throw bad();
    return QRat(n);
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  if (digits == "-" || digits == "+" || digits.empty()) throw bad();
  if (digits.front() == '+') digits.erase(digits.begin());
  ZInt n;
  if (n.set_str(digits, 10) != 0) throw bad();
  ZInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
  QRat r(n, den);
  r.canonicalize();
  return r;
}

inline ZInt factorial(unsigned n) {
  ZInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline QRat power(const QRat& x, int e) {
  if (e < 0) {
    if (x == 0) throw std::domain_error("zero to a negative power");
    return power(QRat(1) / x, -e);
  }
  QRat r(1), b(x);
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline QRat power(long base, int e) { return power(QRat(base), e); }

}  // namespace hurwitz

#pragma once

#include "series.hpp"

namespace hurwitz {

// varsigma(c s) = 2 sinh(c s / 2), truncated at s^order
inline Series<QRat> sigma_series(const QRat& c, int order) {
  if (order < 0) throw std::invalid_argument("negative order");
  Series<QRat> r(0, order);
  for (int k = 1; k <= order; k += 2) {
    QRat t = power(c, k) / (QRat(factorial(k)) * power(QRat(2), k - 1));
    r.at(k) = t;
  }
  return r;
}

// S(c s) = varsigma(c s)/(c s)
inline Series<QRat> S_series(const QRat& c, int order) {
  if (order < 0) throw std::invalid_argument("negative order");
  Series<QRat> r(0, order);
  for (int k = 0; k <= order; k += 2) {
    QRat t = power(c, k) / (QRat(factorial(k + 1)) * power(QRat(2), k));
    r.at(k) = t;
  }
  return r;
}

// 1/varsigma(c s) = s^{-1} (c S(c s))^{-1}, known through s^order
inline Series<QRat> inv_sigma_series(const QRat& c, int order) {
  if (c == 0) throw std::domain_error("1/varsigma(0) does not exist");
  return S_series(c, order + 1).inverse().scaled(QRat(1) / c).shifted(-1);
}

}  // namespace hurwitz

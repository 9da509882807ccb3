#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "hurwitz/qpoly.hpp"

template <>
struct Catch::StringMaker<hurwitz::QPolynomial> {
  static std::string convert(const hurwitz::QPolynomial& p) { return p.str(); }
};

template <>
struct Catch::StringMaker<hurwitz::QRat> {
  static std::string convert(const hurwitz::QRat& x) { return hurwitz::to_string(x); }
};

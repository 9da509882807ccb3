#pragma once

#include <string>
#include <vector>

#include "rational.hpp"

namespace hurwitz::reference {

// [q_lambda] DH_{1,1}(mu) at d = 3
struct DH11Row {
  int mu;
  std::vector<int> lambda;
  const char* value;
  const char* chiodo;  // the intersection-theoretic expression, as printed
  bool starred;        // not computed by the intersection package
};

inline const std::vector<DH11Row>& dh11_d3() {
  static const std::vector<DH11Row> rows{
      {2, {1, 1}, "1/12", "27/2 Int_{1,3} Omega_{1;1,1,1}/(1-2psi_1/3)", false},
      {2, {2}, "1/4", "9 Int_{1,2} Omega_{1;1,2}/(1-2psi_1/3)", false},
      {3, {1, 1, 1}, "3/8", "27/2 Int_{1,4} Omega_{1;0,1,1,1}/(1-psi_1)", false},
      {3, {2, 1}, "3/2", "27 Int_{1,3} Omega_{1;0,1,2}/(1-psi_1)", false},
      {3, {3}, "1", "3 Int_{1,1} Omega_{1;0}/(1-psi_1)", false},
      {4, {1, 1, 1, 1}, "4/3", "27/2 Int_{1,5} Omega_{1;2,1,1,1,1}/(1-4psi_1/3)", false},
      {4, {2, 1, 1}, "20/3", "54 Int_{1,4} Omega_{1;2,1,1,2}/(1-4psi_1/3)", false},
      {4, {2, 2}, "7/3", "18 Int_{1,3} Omega_{1;2,2,2}/(1-4psi_1/3) - 6 Int_{1,2} Omega_{1;2,1}/(1-4psi_1/3)", false},
      {4, {3, 1}, "6", "36 Int_{1,2} Omega_{1;2,1}/(1-4psi_1/3)", false},
      {5, {1, 1, 1, 1, 1}, "625/144", "81/8 Int_{1,6} Omega_{1;1,1,1,1,1,1}/(1-5psi_1/3)", false},
      {5, {2, 1, 1, 1}, "625/24", "135/2 Int_{1,5} Omega_{1;1,1,1,1,2}/(1-5psi_1/3)", false},
      {5, {2, 2, 1}, "125/6", "135/2 Int_{1,4} Omega_{1;1,1,2,2}/(1-5psi_1/3) - 45/2 Int_{1,3} Omega_{1;1,1,1}/(1-5psi_1/3)", false},
      {5, {3, 1, 1}, "625/24", "135/2 Int_{1,3} Omega_{1;1,1,1}/(1-5psi_1/3)", false},
      {5, {3, 2}, "25/2", "45 Int_{1,2} Omega_{1;1,2}/(1-5psi_1/3)", false},
      {6, {1, 1, 1, 1, 1, 1}, "27/2", "243/40 Int_{1,7} Omega_{1;0,1,1,1,1,1,1}/(1-2psi_1)", true},
      {6, {2, 1, 1, 1, 1}, "189/2", "243/4 Int_{1,6} Omega_{1;0,1,1,1,1,2}/(1-2psi_1)", false},
      {6, {2, 2, 1, 1}, "243/2", "243/2 Int_{1,5} Omega_{1;0,1,1,2,2}/(1-2psi_1) - 81/2 Int_{1,4} Omega_{1;0,1,1,1}/(1-2psi_1)", false},
      {6, {2, 2, 2}, "33/2", "27 Int_{1,4} Omega_{1;0,2,2,2}/(1-2psi_1) - 27 Int_{1,3} Omega_{1;0,1,2}/(1-2psi_1)", false},
      {6, {3, 1, 1, 1}, "99", "81 Int_{1,4} Omega_{1;0,1,1,1}/(1-2psi_1)", false},
      {6, {3, 2, 1}, "117", "162 Int_{1,3} Omega_{1;0,1,2}/(1-2psi_1)", false},
      {6, {3, 3}, "51/4", "54 Int_{1,1} Omega_{1;0}/(1-2psi_1)", false},
      {7, {1, 1, 1, 1, 1, 1, 1}, "117649/2880", "567/160 Int_{1,8} Omega_{1;2,1,1,1,1,1,1,1}/(1-7psi_1/3)", true},
      {7, {2, 1, 1, 1, 1, 1}, "117649/360", "3969/80 Int_{1,7} Omega_{1;2,1,1,1,1,1,2}/(1-7psi_1/3)", true},
      {7, {2, 2, 1, 1, 1}, "84035/144", "1323/8 Int_{1,6} Omega_{1;2,1,1,1,2,2}/(1-7psi_1/3) - 441/8 Int_{1,5} Omega_{1;2,1,1,1,1}/(1-7psi_1/3)", false},
      {7, {2, 2, 2, 1}, "2401/12", "441/4 Int_{1,5} Omega_{1;2,1,2,2,2}/(1-7psi_1/3) - 441/4 Int_{1,4} Omega_{1;2,1,1,2,2}/(1-7psi_1/3)", false},
      {7, {3, 1, 1, 1, 1}, "16807/48", "1323/16 Int_{1,5} Omega_{1;2,1,1,1,1}/(1-7psi_1/3)", false},
      {7, {3, 2, 1, 1}, "16807/24", "1323/4 Int_{1,4} Omega_{1;2,1,1,2}/(1-7psi_1/3)", false},
      {7, {3, 2, 2}, "343/3", "441/4 Int_{1,3} Omega_{1;2,2,2}/(1-7psi_1/3) - 147/4 Int_{1,2} Omega_{1;2,1}/(1-7psi_1/3)", false},
      {7, {3, 3, 1}, "1029/8", "441/2 Int_{1,2} Omega_{1;2,1}/(1-7psi_1/3)", false},
  };
  return rows;
}

// coefficients of d phi-hat^j_m in omega_{1,1} at d = 3, s = 1: index j-1, as multiples of q_j
inline std::vector<QRat> omega11_m0() { return {qrat(-1, 24), qrat(-1, 24), qrat(-1, 24)}; }
inline std::vector<QRat> omega11_m1() { return {qrat(1, 24), qrat(1, 12), qrat(1, 8)}; }

// integrals over Mbar_{g,n+k} of Omega^{[d]}_{g;a}/(1 - mu psi_1/d), single-point mu
struct ChiodoValue {
  int d;
  int g;
  int mu;
  std::vector<int> a;
  const char* value;
};

inline const std::vector<ChiodoValue>& appendix_c_values() {
  static const std::vector<ChiodoValue> v{
      {6, 1, 3, {3, 3}, "1/36"},       {6, 1, 3, {3, 4, 5}, "1/72"},    {4, 1, 2, {2, 1, 2, 3}, "1/1536"},
      {4, 1, 2, {2, 1, 1}, "1/384"},   {7, 1, 2, {5, 5, 5, 6}, "1/2401"}, {7, 1, 2, {5, 2}, "1/196"},
      {7, 1, 2, {5, 6, 3}, "1/686"},   {7, 1, 2, {5, 5, 4}, "1/686"},
  };
  return v;
}

// the three relations: (d, g, mu, eta)
struct VanishingCase {
  int d;
  int g;
  std::vector<int> mu;
  std::vector<int> eta;
};

inline const std::vector<VanishingCase>& appendix_c_relations() {
  static const std::vector<VanishingCase> v{{6, 1, {3}, {2, 1}}, {4, 1, {2}, {3, 2, 1}}, {7, 1, {2}, {2, 2, 1}}};
  return v;
}

}  // namespace hurwitz::reference

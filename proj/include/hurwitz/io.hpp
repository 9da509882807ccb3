#pragma once

#include <charconv>
#include <string>
#include <vector>

#include <json.hpp>

#include "chiodo.hpp"
#include "polyfit.hpp"
#include "qpoly.hpp"
#include "rational.hpp"

namespace hurwitz::io {

using json = nlohmann::json;

inline std::string rat(const QRat& x) {
  return to_string(x);
}

// shortest decimal that reads back to the same double
inline std::string real(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline std::vector<int> exponents(const Mono& m, int d) { return m.to_vector(d); }

struct DHRow {
  int g;
  std::vector<int> mu;
  std::vector<int> q;
  int s_power;
  QRat coeff;
};

// rows of the genus-g layer, in monomial order
inline std::vector<DHRow> dh_rows(int g, const std::vector<int>& mu, int d, const QPolynomial& layer) {
  std::vector<DHRow> rows;
  int base = 2 * g - 2 + static_cast<int>(mu.size());
  for (const auto& [m, c] : layer.terms()) rows.push_back({g, mu, exponents(m, d), base + m.degree(), c});
  return rows;
}

inline json to_json(const DHRow& r) {
  return {{"g", r.g}, {"mu", r.mu}, {"q_monomial", r.q}, {"s_power", r.s_power}, {"coeff", rat(r.coeff)}};
}

inline std::string join(const std::vector<int>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

inline std::string csv_header() { return "g,mu,q_monomial,s_power,coeff"; }

inline std::string to_csv(const DHRow& r) {
  return std::to_string(r.g) + "," + join(r.mu) + "," + join(r.q) + "," + std::to_string(r.s_power) + "," + rat(r.coeff);
}

// entries [{"j":[...], "m":[...], "coeff":{exponents -> "num/den"}}]
inline json to_json(const CTable& t) {
  json entries = json::array();
  for (const auto& [idx, c] : t.entries) {
    std::vector<int> j, m;
    for (const auto& p : idx) {
      j.push_back(p.j);
      m.push_back(p.m);
    }
    json coeff = json::object();
    for (const auto& [mono, x] : c.terms()) coeff[join(mono.to_vector(t.d), ',')] = rat(x);
    entries.push_back({{"j", j}, {"m", m}, {"coeff", coeff}});
  }
  return {{"g", t.g}, {"n", t.n}, {"d", t.d}, {"f", t.f}, {"entries", entries}};
}

inline json to_json(int d, const chiodo::Values& v) {
  json out = json::array();
  for (const auto& [i, x] : v) out.push_back({{"g", i.g}, {"d", d}, {"a", i.a}, {"m", i.m}, {"value", rat(x)}});
  return out;
}

}  // namespace hurwitz::io

#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "qpoly.hpp"
#include "rational.hpp"
#include "wedge.hpp"

namespace hurwitz::chiodo {

struct ChiodoIndex {
  int g = 0;
  std::vector<int> a;  // n marked entries, then the auxiliary ones
  std::vector<int> m;  // psi powers on the marked points

  int n() const { return static_cast<int>(m.size()); }
  int k() const { return static_cast<int>(a.size()) - n(); }
  int dim() const { return 3 * g - 3 + n() + k(); }

  // marked points are interchangeable together with their psi powers, auxiliary points freely
  ChiodoIndex canonical() const {
    std::vector<std::pair<int, int>> marked;
    for (int i = 0; i < n(); ++i) marked.push_back({a[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(i)]});
    std::sort(marked.begin(), marked.end());
    std::vector<int> aux(a.begin() + n(), a.end());
    std::sort(aux.begin(), aux.end());
    ChiodoIndex c{g, {}, {}};
    for (auto [x, y] : marked) {
      c.a.push_back(x);
      c.m.push_back(y);
    }
    c.a.insert(c.a.end(), aux.begin(), aux.end());
    return c;
  }

  std::string str() const {
    std::string s = "g=" + std::to_string(g) + " a=(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    s += ") m=(";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
    return s + ")";
  }

  auto operator<=>(const ChiodoIndex&) const = default;
  bool operator==(const ChiodoIndex&) const = default;
};

using Values = std::map<ChiodoIndex, QRat>;

struct MissingUnknown : std::runtime_error {
  ChiodoIndex index;
  explicit MissingUnknown(ChiodoIndex i) : std::runtime_error("no value for " + i.str()), index(std::move(i)) {}
};

struct RankDeficient : std::runtime_error {
  std::vector<ChiodoIndex> undetermined;
  RankDeficient(const std::string& what, std::vector<ChiodoIndex> u)
      : std::runtime_error(what), undetermined(std::move(u)) {}
};

struct Inconsistent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearForm {
  std::map<ChiodoIndex, QRat> terms;
  QRat constant = 0;

  bool empty() const { return terms.empty() && constant == 0; }

  void add(const ChiodoIndex& i, const QRat& c) {
    if (c == 0) return;
    auto key = i.canonical();
    auto& x = terms[key];
    x += c;
    if (x == 0) terms.erase(key);
  }

  LinearForm& operator+=(const LinearForm& o) {
    for (const auto& [i, c] : o.terms) add(i, c);
    constant += o.constant;
    return *this;
  }
  LinearForm& operator-=(const LinearForm& o) { return *this += o.scaled(QRat(-1)); }

  LinearForm scaled(const QRat& c) const {
    LinearForm r;
    if (c == 0) return r;
    for (const auto& [i, x] : terms) r.terms[i] = x * c;
    r.constant = constant * c;
    return r;
  }

  QRat evaluate(const Values& v) const {
    QRat r = constant;
    for (const auto& [i, c] : terms) {
      auto it = v.find(i);
      if (it == v.end()) throw MissingUnknown(i);
      r += c * it->second;
    }
    return r;
  }

  std::string str() const {
    std::string s;
    for (const auto& [i, c] : terms) s += (s.empty() ? "" : " + ") + to_string(c) + "*[" + i.str() + "]";
    if (constant != 0 || s.empty()) s += (s.empty() ? "" : " + ") + to_string(constant);
    return s;
  }
};

using RhoTuple = std::vector<Partition>;

// ordered k-tuples of partitions with sizes <= d-1 whose concatenation is target
inline std::vector<RhoTuple> rho_tuples(const Partition& target, int k, int d) {
  std::vector<RhoTuple> out;
  if (k < 0) return out;
  int top = std::max(target.largest(), 1);
  std::vector<int> left(static_cast<std::size_t>(top + 1), 0);
  for (int p : target.parts()) ++left[static_cast<std::size_t>(p)];
  RhoTuple cur;
  std::function<void(int)> rec = [&](int remaining) {
    int total = 0;
    for (int v = 1; v <= top; ++v) total += left[static_cast<std::size_t>(v)];
    if (remaining == 0) {
      if (total == 0) out.push_back(cur);
      return;
    }
    if (total < remaining) return;
    // choose the next block as a sub-multiset, value by value
    std::vector<int> take(static_cast<std::size_t>(top + 1), 0);
    std::function<void(int, int)> pick = [&](int v, int size) {
      if (v > top) {
        if (size == 0) return;
        std::vector<int> parts;
        for (int u = top; u >= 1; --u)
          for (int t = 0; t < take[static_cast<std::size_t>(u)]; ++t) parts.push_back(u);
        for (int u = 1; u <= top; ++u) left[static_cast<std::size_t>(u)] -= take[static_cast<std::size_t>(u)];
        cur.push_back(Partition(parts));
        rec(remaining - 1);
        cur.pop_back();
        for (int u = 1; u <= top; ++u) left[static_cast<std::size_t>(u)] += take[static_cast<std::size_t>(u)];
        return;
      }
      for (int t = 0; t <= left[static_cast<std::size_t>(v)] && size + t * v <= d - 1; ++t) {
        take[static_cast<std::size_t>(v)] = t;
        pick(v + 1, size + t * v);
      }
      take[static_cast<std::size_t>(v)] = 0;
    };
    pick(1, 0);
  };
  rec(k);
  return out;
}

inline int neg_residue(int mu, int d) { return ((-mu) % d + d) % d; }

// int over Mbar_{g, n+k} of Omega_{g; marked, aux} / prod (1 - w_i psi_i), expanded in psi
inline LinearForm integral_form(int d, int g, const std::vector<int>& marked, const std::vector<QRat>& weights,
                                const std::vector<int>& aux) {
  LinearForm f;
  int n = static_cast<int>(marked.size());
  int dim = 3 * g - 3 + n + static_cast<int>(aux.size());
  if (dim < 0) return f;
  long sum = 0;
  for (int x : marked) sum += x;
  for (int x : aux) sum += x;
  if (sum % d != 0) return f;
  ChiodoIndex idx{g, marked, std::vector<int>(static_cast<std::size_t>(n), 0)};
  idx.a.insert(idx.a.end(), aux.begin(), aux.end());
  std::function<void(int, int, QRat)> rec = [&](int i, int left, QRat w) {
    if (i == n) {
      f.add(idx, w);
      return;
    }
    QRat p = w;
    for (int e = 0; e <= left; ++e) {
      idx.m[static_cast<std::size_t>(i)] = e;
      rec(i + 1, left - e, p);
      p *= weights[static_cast<std::size_t>(i)];
    }
    idx.m[static_cast<std::size_t>(i)] = 0;
  };
  rec(0, dim, QRat(1));
  return f;
}

// sum_k (-1)^{l-k}/k! sum_rho prod [(d-|rho|)/d]_{l(rho)-1}/|Aut rho| int Omega_{g; marked, d-|rho|}
inline LinearForm bracket(int d, int g, const std::vector<int>& marked, const std::vector<QRat>& weights,
                          const Partition& eta) {
  if (eta.empty()) return integral_form(d, g, marked, weights, {});
  LinearForm out;
  int l = eta.length();
  for (int k = 1; k <= l; ++k) {
    QRat sign = QRat((l - k) % 2 ? -1 : 1) / QRat(factorial(static_cast<unsigned>(k)));
    for (const auto& rho : rho_tuples(eta, k, d)) {
      QRat c = sign;
      std::vector<int> aux;
      for (const auto& r : rho) {
        int b = d - r.size();
        c *= pochhammer_rising(qrat(b, d), r.length() - 1) / QRat(r.aut_order());
        aux.push_back(b);
      }
      out += integral_form(d, g, marked, weights, aux).scaled(c);
    }
  }
  return out;
}

inline QRat elsv_prefactor(int d, int g, const std::vector<int>& mu, int ell) {
  QRat r = power(QRat(d), 2 * g - 2 + static_cast<int>(mu.size()) + ell);
  for (int x : mu) {
    int f = x / d;
    r *= power(qrat(x, d), f) / QRat(factorial(static_cast<unsigned>(f)));
  }
  return r;
}

inline std::vector<int> marked_residues(const std::vector<int>& mu, int d) {
  std::vector<int> a;
  for (int x : mu) a.push_back(neg_residue(x, d));
  return a;
}

inline std::vector<QRat> psi_weights(const std::vector<int>& mu, int d) {
  std::vector<QRat> w;
  for (int x : mu) w.push_back(qrat(x, d));
  return w;
}

// [q_lambda s^{2g-2+n+l(lambda)}] DH_{g,n}(mu) as a form in the Chiodo unknowns
inline LinearForm elsv_rhs(int d, int g, const std::vector<int>& mu, const Partition& lambda) {
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  if (lambda.largest() > d) throw std::invalid_argument("lambda has a part above d");
  long total = 0;
  for (int x : mu) {
    if (x < 1) throw std::invalid_argument("mu entries must be positive");
    total += x;
  }
  if (total != lambda.size()) throw std::invalid_argument("|lambda| must equal |mu|");
  Partition eta = complement(lambda.without(d), d);
  return bracket(d, g, marked_residues(mu, d), psi_weights(mu, d), eta)
      .scaled(elsv_prefactor(d, g, mu, lambda.length()));
}

struct Equation {
  std::vector<int> mu;
  Partition lambda;
  QRat value;
};

// exact [q_lambda] DH_{g,n}(mu) at s = 1 from a wedge engine capped at q_lambda
inline QRat dh_coefficient(int d, int g, const std::vector<int>& mu, const Partition& lambda) {
  Mono cap = Mono::of_partition(lambda);
  auto eng = symbolic_engine(d, cap);
  return eng.dh(g, mu).coeff(cap);
}

namespace detail {

// reduced row echelon form kept incrementally; the last entry of a row is the right-hand side
class Elimination {
 public:
  explicit Elimination(std::size_t cols) : cols_(cols) {}

  std::size_t rank() const { return rows_.size(); }

  // true if the row raised the rank; throws on a contradiction
  bool add(std::vector<QRat> row) {
    for (const auto& [c, r] : rows_) {
      if (row[c] == 0) continue;
      QRat f = row[c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (r[j] != 0) row[j] -= f * r[j];
    }
    std::size_t p = 0;
    while (p < cols_ && row[p] == 0) ++p;
    if (p == cols_) {
      if (row[cols_] != 0) throw Inconsistent("equations disagree: residual " + to_string(row[cols_]));
      return false;
    }
    QRat inv = QRat(1) / row[p];
    for (std::size_t j = p; j <= cols_; ++j) row[j] *= inv;
    for (auto& [c, r] : rows_) {
      if (r[p] == 0) continue;
      QRat f = r[p];
      for (std::size_t j = p; j <= cols_; ++j)
        if (row[j] != 0) r[j] -= f * row[j];
    }
    rows_[p] = std::move(row);
    return true;
  }

  bool pivot(std::size_t c) const { return rows_.count(c) > 0; }
  const QRat& value(std::size_t c) const { return rows_.at(c)[cols_]; }

 private:
  std::size_t cols_;
  std::map<std::size_t, std::vector<QRat>> rows_;
};

}  // namespace detail

// exact solve of the stacked equations; known values are substituted first
inline Values solve_chiodo(int d, int g, int n, const std::vector<Equation>& equations, const Values& known = {}) {
  std::vector<LinearForm> forms;
  std::set<ChiodoIndex> unknown;
  for (const auto& e : equations) {
    if (static_cast<int>(e.mu.size()) != n) throw std::invalid_argument("equation has the wrong number of points");
    LinearForm f = elsv_rhs(d, g, e.mu, e.lambda);
    LinearForm r;
    r.constant = f.constant - e.value;
    for (const auto& [i, c] : f.terms) {
      auto it = known.find(i);
      if (it != known.end()) r.constant += c * it->second;
      else {
        r.terms[i] = c;
        unknown.insert(i);
      }
    }
    forms.push_back(std::move(r));
  }
  std::vector<ChiodoIndex> cols(unknown.begin(), unknown.end());
  std::map<ChiodoIndex, std::size_t> at;
  for (std::size_t j = 0; j < cols.size(); ++j) at[cols[j]] = j;
  detail::Elimination el(cols.size());
  for (const auto& f : forms) {
    std::vector<QRat> row(cols.size() + 1, QRat(0));
    for (const auto& [i, c] : f.terms) row[at[i]] = c;
    row[cols.size()] = -f.constant;
    el.add(std::move(row));
  }
  std::vector<ChiodoIndex> missing;
  Values out;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (el.pivot(j)) out[cols[j]] = el.value(j);
    else missing.push_back(cols[j]);
  }
  if (!missing.empty())
    throw RankDeficient(std::to_string(missing.size()) + " unknowns are not determined by the equations", missing);
  return out;
}

// one unknown family: fixed g, marked residues and auxiliary entries; psi powers free
struct Family {
  int g = 0;
  std::vector<int> marked;  // sorted
  std::vector<int> aux;     // sorted

  static Family of(const ChiodoIndex& i) {
    Family f{i.g, std::vector<int>(i.a.begin(), i.a.begin() + i.n()), std::vector<int>(i.a.begin() + i.n(), i.a.end())};
    std::sort(f.marked.begin(), f.marked.end());
    std::sort(f.aux.begin(), f.aux.end());
    return f;
  }
  int dim() const { return 3 * g - 3 + static_cast<int>(marked.size() + aux.size()); }
  std::string str() const {
    return ChiodoIndex{g, [&] {
                         auto v = marked;
                         v.insert(v.end(), aux.begin(), aux.end());
                         return v;
                       }(),
                       std::vector<int>(marked.size(), 0)}
        .str();
  }
  auto operator<=>(const Family&) const = default;
};

struct SolverOptions {
  int max_size = 24;  // cap on |mu| when harvesting equations
  int extra = 2;      // equations beyond full rank, checked for consistency
};

struct FamilyReport {
  Family family;
  int unknowns = 0;
  int equations = 0;
  int largest_mu = 0;
};

// Harvests equations from Hurwitz data family by family and keeps the solved values.
class ChiodoSolver {
 public:
  using Source = std::function<QRat(int g, const std::vector<int>& mu, const Partition& lambda)>;

  explicit ChiodoSolver(int d, SolverOptions opt = {}, Source source = {})
      : d_(d), opt_(opt), source_(std::move(source)) {
    if (d < 2) throw std::invalid_argument("d must be at least 2");
    if (!source_)
      source_ = [d](int g, const std::vector<int>& mu, const Partition& l) { return dh_coefficient(d, g, mu, l); };
  }

  int d() const { return d_; }
  const Values& values() const { return values_; }
  const std::vector<FamilyReport>& reports() const { return reports_; }

  void require(const LinearForm& f) {
    for (const auto& [i, c] : f.terms) ensure(Family::of(i));
  }

  QRat evaluate(const LinearForm& f) {
    require(f);
    return f.evaluate(values_);
  }

  void ensure(const Family& fam) {
    if (done_.count(fam)) return;
    auto cols = unknowns(fam);
    std::map<ChiodoIndex, std::size_t> at;
    for (std::size_t j = 0; j < cols.size(); ++j) at[cols[j]] = j;
    detail::Elimination el(cols.size());
    FamilyReport rep{fam, static_cast<int>(cols.size()), 0, 0};
    int n0 = static_cast<int>(fam.marked.size());
    if (2 * fam.g - 2 + n0 <= 0 && !cols.empty()) {
      // no Hurwitz equations here; auxiliary points become marked ones without psi
      int need = 3 - 2 * fam.g - n0;
      for (const auto& u : cols) {
        ChiodoIndex p = u;
        p.m.insert(p.m.end(), static_cast<std::size_t>(need), 0);
        ensure(Family::of(p));
        values_[u] = values_.at(p.canonical());
      }
      done_.insert(fam);
      reports_.push_back(rep);
      return;
    }
    int bsum = 0;
    for (int b : fam.aux) bsum += b;
    std::vector<int> res;
    for (int a : fam.marked) res.push_back((d_ - a) % d_);
    int extra = 0;
    bool full = cols.empty();
    for (int T = 1; T <= opt_.max_size && !(full && extra >= opt_.extra); ++T) {
      if (T < bsum || (T - bsum) % d_ != 0) continue;
      for (const auto& mu : residue_vectors(res, T)) {
        if (full && extra >= opt_.extra) break;
        std::vector<int> parts = fam.aux;
        for (int t = 0; t < (T - bsum) / d_; ++t) parts.push_back(d_);
        Partition lambda(parts);
        LinearForm f = elsv_rhs(d_, fam.g, mu, lambda);
        std::vector<QRat> row(cols.size() + 1, QRat(0));
        QRat rhs = source_(fam.g, mu, lambda) - f.constant;
        for (const auto& [i, c] : f.terms) {
          Family other = Family::of(i);
          if (other == fam) {
            row[at.at(i)] = c;
            continue;
          }
          ensure(other);
          rhs -= c * values_.at(i);
        }
        row[cols.size()] = rhs;
        ++rep.equations;
        rep.largest_mu = T;
        try {
          if (!el.add(std::move(row)) && full) ++extra;
        } catch (const Inconsistent& e) {
          throw Inconsistent(std::string(e.what()) + " for " + fam.str() + " at |mu| = " + std::to_string(T));
        }
        full = el.rank() == cols.size();
      }
    }
    if (!full) {
      std::vector<ChiodoIndex> missing;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (!el.pivot(j)) missing.push_back(cols[j]);
      throw RankDeficient("family " + fam.str() + " needs |mu| above " + std::to_string(opt_.max_size), missing);
    }
    for (std::size_t j = 0; j < cols.size(); ++j) values_[cols[j]] = el.value(j);
    done_.insert(fam);
    reports_.push_back(rep);
  }

  std::vector<ChiodoIndex> unknowns(const Family& fam) const {
    std::set<ChiodoIndex> s;
    int n = static_cast<int>(fam.marked.size());
    std::vector<QRat> w(static_cast<std::size_t>(n), QRat(1));
    for (const auto& [i, c] : integral_form(d_, fam.g, fam.marked, w, fam.aux).terms) s.insert(i);
    return {s.begin(), s.end()};
  }

 private:
  // mu vectors of total T with mu_i = res_i mod d and mu_i >= 1
  std::vector<std::vector<int>> residue_vectors(const std::vector<int>& res, int T) const {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i == res.size()) {
        if (left == 0) out.push_back(cur);
        return;
      }
      for (int x = res[i] == 0 ? d_ : res[i]; x <= left; x += d_) {
        cur.push_back(x);
        rec(i + 1, left - x);
        cur.pop_back();
      }
    };
    rec(0, T);
    return out;
  }

  int d_;
  SolverOptions opt_;
  Source source_;
  Values values_;
  std::set<Family> done_;
  std::vector<FamilyReport> reports_;
};

// the bracket of the vanishing theorem at fixed mu
inline LinearForm vanishing_form(int d, int g, const std::vector<int>& mu, const Partition& eta) {
  if (eta.empty() || eta.largest() > d - 1) throw std::invalid_argument("eta needs parts in 1..d-1");
  long total = eta.size();
  for (int x : mu) total += x;
  if (total >= static_cast<long>(d) * eta.length()) throw std::invalid_argument("(mu, eta) is not unstable");
  return bracket(d, g, marked_residues(mu, d), psi_weights(mu, d), eta);
}

inline QRat verify_vanishing(int d, int g, const std::vector<int>& mu, const Partition& eta, const Values& v) {
  return vanishing_form(d, g, mu, eta).evaluate(v);
}

// the d-stable quantity; needs d > lambda_1
inline LinearForm stability_form(int d, int g, const std::vector<int>& mu, const Partition& lambda) {
  if (lambda.largest() >= d) throw std::invalid_argument("d must exceed the parts of lambda");
  return elsv_rhs(d, g, mu, lambda);
}

struct StabilityResult {
  bool equal = true;
  std::map<int, QRat> values;
};

inline StabilityResult verify_d_stability(int g, const std::vector<int>& mu, const Partition& lambda,
                                          const std::vector<int>& ds, const std::map<int, Values>& solved) {
  StabilityResult r;
  for (int d : ds) {
    auto it = solved.find(d);
    if (it == solved.end()) throw std::invalid_argument("no solved values at d = " + std::to_string(d));
    r.values[d] = stability_form(d, g, mu, lambda).evaluate(it->second);
    if (r.values[d] != r.values.begin()->second) r.equal = false;
  }
  return r;
}

// both sides of the duality identity; d > max(mu_1, lambda_1)
inline std::pair<LinearForm, LinearForm> duality_forms(int d, int g, const std::vector<int>& mu,
                                                       const Partition& lambda) {
  int top = std::max(lambda.largest(), *std::max_element(mu.begin(), mu.end()));
  if (top >= d) throw std::invalid_argument("d must exceed every part of mu and lambda");
  Partition pmu(mu);
  if (pmu.size() != lambda.size()) throw std::invalid_argument("|lambda| must equal |mu|");
  QRat pre = power(QRat(d), 2 * g - 2 + pmu.length() + lambda.length());
  auto side = [&](const Partition& marked, const Partition& other) {
    std::vector<int> a, parts = marked.parts();
    for (int x : parts) a.push_back(d - x);
    return bracket(d, g, a, psi_weights(parts, d), complement(other, d)).scaled(pre);
  };
  return {side(pmu, lambda), side(lambda, pmu)};
}

// DH labels the points over infinity only, so swapping the two sides rescales by |Aut lambda|/|Aut mu|
struct DualityResult {
  QRat lhs, rhs;
  ZInt aut_mu = 1, aut_lambda = 1;
  bool equal() const { return lhs / QRat(aut_mu) == rhs / QRat(aut_lambda); }
  bool equal_as_printed() const { return lhs == rhs; }
};

inline DualityResult verify_duality(int d, int g, const std::vector<int>& mu, const Partition& lambda,
                                    const Values& v) {
  auto [l, r] = duality_forms(d, g, mu, lambda);
  return {l.evaluate(v), r.evaluate(v), Partition(mu).aut_order(), lambda.aut_order()};
}

// orbifold numbers: lambda = (d, ..., d)
inline LinearForm orbifold_form(int d, int g, const std::vector<int>& mu) {
  int total = 0;
  for (int x : mu) total += x;
  if (total % d != 0) return {};
  return elsv_rhs(d, g, mu, Partition(std::vector<int>(static_cast<std::size_t>(total / d), d)));
}

inline QRat orbifold_number(int d, int g, const std::vector<int>& mu) {
  std::vector<QRat> q(static_cast<std::size_t>(d), QRat(0));
  q.back() = 1;
  return numeric_engine(d, q).dh(g, mu);
}

struct OrbifoldResult {
  QRat wedge, elsv;
  bool equal() const { return wedge == elsv; }
};

inline OrbifoldResult orbifold_check(int d, int g, const std::vector<int>& mu, const Values& v) {
  return {orbifold_number(d, g, mu), orbifold_form(d, g, mu).evaluate(v)};
}

// Iterates the vanishing theorem: the integral with auxiliary entries d - eta as a combination
// of integrals with auxiliary entries d - eta~ for stable eta~ (keys are eta~). Depends on |mu| only.
inline std::map<Partition, QRat> reduce_unstable(int d, int mu_total, const Partition& eta) {
  std::map<Partition, QRat> out;
  if ((mu_total + eta.size()) % d != 0) throw std::invalid_argument("|mu| + |eta| must be a multiple of d");
  int K = (mu_total + eta.size()) / d;
  if (K >= eta.length()) {
    out[eta] = 1;
    return out;
  }
  int l = eta.length();
  // I(eta)/|Aut eta| = - sum_{k<l} (...) I(merged)
  QRat scale = -QRat(eta.aut_order());
  for (int k = 1; k < l; ++k) {
    QRat sign = QRat((l - k) % 2 ? -1 : 1) / QRat(factorial(static_cast<unsigned>(k)));
    for (const auto& rho : rho_tuples(eta, k, d)) {
      QRat c = sign * scale;
      std::vector<int> merged;
      for (const auto& r : rho) {
        c *= pochhammer_rising(qrat(d - r.size(), d), r.length() - 1) / QRat(r.aut_order());
        merged.push_back(r.size());
      }
      for (const auto& [p, x] : reduce_unstable(d, mu_total, Partition(merged))) {
        auto& y = out[p];
        y += c * x;
      }
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// the l = 3, K = 1 coefficient exactly as printed, sum over indices j with the delta term
inline QRat three_part_coefficient_printed(int d, const Partition& eta) {
  if (eta.length() != 3) throw std::invalid_argument("needs three parts");
  int e = eta.size();
  QRat s = qrat(e - 2 * d, d);
  for (int j = 0; j < 3; ++j) {
    int x = eta[static_cast<std::size_t>(j)];
    QRat f = QRat(eta.aut_order()) * (x == e - x ? 2 : 1) / QRat(eta.without_one(x).aut_order());
    s += f * qrat(d - e + x, d);
  }
  return qrat(d - e, d) * s;
}

struct UnstableCase {
  int d;
  std::vector<int> mu;
  Partition eta;
};

// unstable pairs with n = l(mu), l(eta) in {2, 3}, parts of mu below d, |mu| + |eta| divisible by d;
// ordered by (d, mu, eta)
inline std::vector<UnstableCase> unstable_cases(int d_lo, int d_hi, int n = 1) {
  std::vector<UnstableCase> out;
  for (int d = std::max(d_lo, 2); d <= d_hi; ++d)
    for (int m = n; m <= n * (d - 1); ++m)
      for_each_partition(m, d - 1, [&](const Partition& mu) {
        if (mu.length() != n) return;
        for (int l = 2; l <= 3; ++l)
          for (int total = l; total <= l * (d - 1); ++total) {
            if ((m + total) % d != 0 || m + total >= d * l) continue;
            for_each_partition(total, d - 1, [&](const Partition& p) {
              if (p.length() == l) out.push_back({d, mu.parts(), p});
            });
          }
      });
  return out;
}

}  // namespace hurwitz::chiodo

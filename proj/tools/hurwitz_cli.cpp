#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hurwitz/chiodo.hpp"
#include "hurwitz/io.hpp"
#include "hurwitz/oracle.hpp"
#include "hurwitz/reference.hpp"
#include "hurwitz/tr.hpp"
#include "hurwitz/wedge.hpp"

using namespace hurwitz;
using io::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<int> d;
  std::string q;
  std::string s = "1";
  std::vector<std::string> mu;
  std::optional<int> mu_max;
  std::optional<int> n;
  std::optional<int> g;
  std::optional<int> g_max;
  std::string engines;
  std::optional<int> order;
  double tol = 1e-6;
  std::string format = "json";
  std::string out;
  int jobs = 1;
  std::string eta;
  std::string lambda;
  std::string ds;
  int cap = 64;
  int extra = 2;
  bool vanishing = false;
  bool duality = false;
  bool stability = false;
  bool orbifold = false;
  std::string table;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> int_list(const std::string& s, const char* what) {
  std::vector<int> v;
  for (const auto& t : split(s, ',')) {
    try {
      std::size_t pos = 0;
      int x = std::stoi(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      v.push_back(x);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad integer in ") + what + ": " + t);
    }
  }
  return v;
}

std::vector<int> positive_list(const std::string& s, const char* what) {
  auto v = int_list(s, what);
  if (v.empty()) throw ConfigError(std::string(what) + " is empty");
  for (int x : v)
    if (x <= 0) throw ConfigError(std::string(what) + " entries must be positive");
  return v;
}

QRat rational(const std::string& s, const char* what) {
  try {
    return parse_qrat(s);
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad rational in ") + what + ": " + s);
  }
}

// json scalar or array -> the comma form the flags use
std::string flat_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  if (v.is_number()) return io::real(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + flat_text(x);
    return s;
  }
  throw ConfigError("unsupported config value " + v.dump());
}

void load_config(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  auto integer = [](const json& v, const std::string& k) {
    if (!v.is_number_integer()) throw ConfigError("config key " + k + " must be an integer");
    return v.get<int>();
  };
  auto flag = [](const json& v, const std::string& k) {
    if (!v.is_boolean()) throw ConfigError("config key " + k + " must be a boolean");
    return v.get<bool>();
  };
  for (const auto& [key, v] : j.items()) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '_', '-');
    if (k == "d") c.d = integer(v, k);
    else if (k == "q") c.q = flat_text(v);
    else if (k == "s") c.s = flat_text(v);
    else if (k == "mu") {
      c.mu.clear();
      if (v.is_array() && !v.empty() && v[0].is_array())
        for (const auto& x : v) c.mu.push_back(flat_text(x));
      else
        c.mu.push_back(flat_text(v));
    } else if (k == "mu-max") c.mu_max = integer(v, k);
    else if (k == "n") c.n = integer(v, k);
    else if (k == "g") c.g = integer(v, k);
    else if (k == "g-max") c.g_max = integer(v, k);
    else if (k == "engines") c.engines = flat_text(v);
    else if (k == "order") c.order = integer(v, k);
    else if (k == "tol") {
      if (!v.is_number()) throw ConfigError("config key tol must be a number");
      c.tol = v.get<double>();
    } else if (k == "format") c.format = flat_text(v);
    else if (k == "out") c.out = flat_text(v);
    else if (k == "jobs") c.jobs = integer(v, k);
    else if (k == "eta") c.eta = flat_text(v);
    else if (k == "lambda") c.lambda = flat_text(v);
    else if (k == "ds") c.ds = flat_text(v);
    else if (k == "cap") c.cap = integer(v, k);
    else if (k == "extra") c.extra = integer(v, k);
    else if (k == "vanishing") c.vanishing = flag(v, k);
    else if (k == "duality") c.duality = flag(v, k);
    else if (k == "stability") c.stability = flag(v, k);
    else if (k == "orbifold") c.orbifold = flag(v, k);
    else throw ConfigError("unknown config key " + key);
  }
}

// runs f(0..count-1) on up to jobs threads; the first exception (by index) is rethrown
template <class F>
void parallel_for(std::size_t count, int jobs, F f) {
  std::vector<std::exception_ptr> err(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        f(i);
      } catch (...) {
        err[i] = std::current_exception();
      }
    }
  };
  std::size_t nt = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
}

struct Output {
  json doc;
  std::vector<std::string> csv;  // header first
  int code = 0;
};

void check_common(const RunConfig& c) {
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (c.d && (*c.d < 1 || *c.d > kMaxVars)) throw ConfigError("d must be between 1 and " + std::to_string(kMaxVars));
  if (c.g && *c.g < 0) throw ConfigError("g must be non-negative");
  if (c.g_max && *c.g_max < 0) throw ConfigError("g-max must be non-negative");
  if (c.g && c.g_max) throw ConfigError("give either g or g-max");
  if (c.order && *c.order < 0) throw ConfigError("order must be non-negative");
  if (!(c.tol > 0)) throw ConfigError("tol must be positive");
}

int need_d(const RunConfig& c) {
  if (!c.d) throw ConfigError("--d is required");
  return *c.d;
}

std::vector<std::string> engine_list(const RunConfig& c, const std::string& fallback) {
  auto e = split(c.engines.empty() ? fallback : c.engines, ',');
  static const std::set<std::string> known{"wedge", "oracle", "tr", "dh02"};
  for (const auto& x : e)
    if (!known.count(x)) throw ConfigError("unknown engine " + x);
  return e;
}

std::vector<QRat> q_values(const RunConfig& c, int d) {
  std::vector<QRat> q;
  for (const auto& t : split(c.q, ',')) q.push_back(rational(t, "q"));
  if (static_cast<int>(q.size()) != d) throw ConfigError("--q needs exactly d values");
  return q;
}

std::vector<QRat> default_q(int d) {
  std::vector<QRat> q;
  for (int j = 1; j < d; ++j) q.push_back(qrat(1, j + 1));
  q.push_back(QRat(1));
  return q;
}

std::vector<std::vector<int>> mu_lists(const RunConfig& c) {
  std::vector<std::vector<int>> out;
  for (const auto& m : c.mu)
    for (const auto& part : split(m, ';')) out.push_back(positive_list(part, "mu"));
  if (c.mu_max) {
    if (*c.mu_max < 1) throw ConfigError("mu-max must be positive");
    for (int t = 1; t <= *c.mu_max; ++t)
      for_each_partition(t, t, [&](const Partition& p) {
        if (!c.n || p.length() == *c.n) out.push_back(p.parts());
      });
  }
  return out;
}

std::pair<int, int> genus_range(const RunConfig& c) {
  if (c.g) return {*c.g, *c.g};
  if (c.g_max) return {0, *c.g_max};
  return {0, 0};
}

// exact value of the genus-g layer at (q, s)
QRat at_point(const QPolynomial& layer, int g, int n, const std::vector<QRat>& q, const QRat& s) {
  std::vector<QRat> sq = q;
  for (auto& x : sq) x *= s;
  return layer.evaluate(sq) * power(s, 2 * g - 2 + n);
}

tr::CurveConfig curve(int d, const std::vector<QRat>& q, const QRat& s) {
  tr::CurveConfig cfg;
  cfg.d = d;
  cfg.q.clear();
  for (const auto& x : q) cfg.q.emplace_back(x.get_d());
  cfg.s = s.get_d();
  return cfg;
}

bool tr_domain(int g, int n) { return (g == 0 && n == 2) || (2 * g - 2 + n > 0 && 2 * g - 2 + n <= 3); }

json complex_json(tr::cd z) { return json::array({z.real(), z.imag()}); }

Output cmd_compute(const RunConfig& c) {
  check_common(c);
  int d = need_d(c);
  auto mus = mu_lists(c);
  if (mus.empty()) throw ConfigError("--mu is required");
  auto eng = engine_list(c, "wedge");
  if (eng.size() != 1 || eng[0] == "dh02") throw ConfigError("compute takes one engine: wedge, oracle or tr");
  auto [g_lo, g_hi] = genus_range(c);
  bool point = !c.q.empty();
  std::vector<QRat> q;
  if (point) q = q_values(c, d);
  QRat s = rational(c.s, "s");
  if (eng[0] == "tr") {
    if (!point) throw ConfigError("the tr engine needs --q");
    if (q.back() == 0) throw ConfigError("the tr engine needs q_d != 0");
    for (const auto& m : mus)
      for (int g = g_lo; g <= g_hi; ++g)
        if (!tr_domain(g, static_cast<int>(m.size())) || g > 2)
          throw ConfigError("tr covers 0 < 2g-2+n <= 3 with g <= 2, and (0,2)");
  }

  struct Task {
    std::vector<int> mu;
    std::vector<io::DHRow> rows;
    std::vector<json> points;
  };
  std::vector<Task> tasks;
  for (const auto& m : mus) tasks.push_back({m, {}, {}});

  parallel_for(tasks.size(), c.jobs, [&](std::size_t i) {
    auto& t = tasks[i];
    int n = static_cast<int>(t.mu.size());
    if (eng[0] == "tr") {
      int level = 1;
      for (int g = g_lo; g <= g_hi; ++g) level = std::max(level, 2 * g - 2 + n);
      tr::TopologicalRecursion rec(tr::SpectralCurve(curve(d, q, s)), level);
      for (int g = g_lo; g <= g_hi; ++g)
        t.points.push_back({{"g", g}, {"mu", t.mu}, {"engine", "tr"}, {"value", complex_json(rec.extract_dh(g, t.mu))}});
      return;
    }
    std::vector<QPolynomial> layers;
    if (eng[0] == "wedge") {
      auto e = symbolic_engine(d);
      int order = c.order ? *c.order : WedgeEngine<QPolynomial>::default_order(g_hi, t.mu);
      auto table = e.dh_connected(t.mu, order);
      for (int g = g_lo; g <= g_hi; ++g) layers.push_back(table.genus_layer(g));
    } else {
      for (int g = g_lo; g <= g_hi; ++g) layers.push_back(dh_oracle(g, t.mu, d));
    }
    for (int g = g_lo; g <= g_hi; ++g) {
      const auto& layer = layers[static_cast<std::size_t>(g - g_lo)];
      if (point)
        t.points.push_back({{"g", g}, {"mu", t.mu}, {"engine", eng[0]}, {"value", io::rat(at_point(layer, g, n, q, s))}});
      else
        for (auto& r : io::dh_rows(g, t.mu, d, layer)) t.rows.push_back(std::move(r));
    }
  });

  Output o;
  o.doc = json::array();
  if (point) {
    o.csv.push_back("g,mu,engine,value");
    for (const auto& t : tasks)
      for (const auto& p : t.points) {
        o.doc.push_back(p);
        std::string v = p["value"].is_array() ? io::real(p["value"][0].get<double>()) + " " + io::real(p["value"][1].get<double>())
                                             : p["value"].get<std::string>();
        o.csv.push_back(std::to_string(p["g"].get<int>()) + "," + io::join(t.mu) + "," + p["engine"].get<std::string>() + "," + v);
      }
    return o;
  }
  o.csv.push_back(io::csv_header());
  for (const auto& t : tasks)
    for (const auto& r : t.rows) {
      o.doc.push_back(io::to_json(r));
      o.csv.push_back(io::to_csv(r));
    }
  return o;
}

// -------- crosscheck

struct Case {
  int g;
  std::vector<int> mu;
};

bool in_domain(const std::string& e, const Case& k, int mu_max) {
  int n = static_cast<int>(k.mu.size());
  int size = 0;
  for (int x : k.mu) size += x;
  if (e == "wedge") return true;
  if (e == "oracle") return size <= 8 && 2 * k.g - 2 + n + size <= 8;
  if (e == "dh02") return k.g == 0 && n == 2;
  if (e == "tr") {
    if (!tr_domain(k.g, n) || k.g > 2) return false;
    if (k.g == 0 && n == 2) return true;
    return size <= mu_max;
  }
  return false;
}

Output cmd_crosscheck(const RunConfig& c) {
  check_common(c);
  std::vector<int> ds;
  if (c.d) ds = {*c.d};
  else ds = {1, 2, 3};
  int mu_max = c.mu_max ? *c.mu_max : 5;
  if (mu_max < 1) throw ConfigError("mu-max must be positive");
  int g_max = c.g ? *c.g : (c.g_max ? *c.g_max : 2);
  auto eng = engine_list(c, "wedge,oracle,dh02,tr");
  static const std::vector<std::string> canon{"wedge", "oracle", "dh02", "tr"};
  std::vector<std::string> sel;
  for (const auto& e : canon)
    if (std::find(eng.begin(), eng.end(), e) != eng.end()) sel.push_back(e);
  if (sel.size() < 2) throw ConfigError("crosscheck needs at least two engines");
  QRat s = rational(c.s, "s");

  std::vector<Case> universe;
  for (int g = 0; g <= g_max; ++g)
    for (int t = 1; t <= mu_max; ++t)
      for_each_partition(t, t, [&](const Partition& p) {
        if (!(g == 0 && p.length() == 2)) universe.push_back({g, p.parts()});
      });
  for (int a = 1; a <= mu_max + 1; ++a)
    for (int b = 1; b <= mu_max + 1; ++b) universe.push_back({0, {a, b}});

  struct Task {
    std::string a, b;
    int d;
    int cases = 0, failures = 0;
    double max_rel = 0;
    bool numeric = false;
    json first_failure;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < sel.size(); ++i)
    for (std::size_t j = i + 1; j < sel.size(); ++j)
      for (int d : ds) tasks.push_back({sel[i], sel[j], d, 0, 0, 0.0, false, json()});

  parallel_for(tasks.size(), c.jobs, [&](std::size_t ti) {
    auto& t = tasks[ti];
    int d = t.d;
    std::vector<QRat> q = c.q.empty() ? default_q(d) : q_values(c, d);
    auto wedge = symbolic_engine(d);
    std::optional<tr::TopologicalRecursion> rec;
    auto exact = [&](const std::string& e, const Case& k) -> QPolynomial {
      if (e == "wedge") return wedge.dh(k.g, k.mu);
      if (e == "oracle") return dh_oracle(k.g, k.mu, d);
      return dh02_closed_form(k.mu[0], k.mu[1], d);
    };
    t.numeric = t.b == "tr";
    if (t.numeric) {
      if (q.back() == 0) throw ConfigError("the tr engine needs q_d != 0");
      rec.emplace(tr::SpectralCurve(curve(d, q, s)), 3);
    }
    for (const auto& k : universe) {
      if (!in_domain(t.a, k, mu_max) || !in_domain(t.b, k, mu_max)) continue;
      ++t.cases;
      bool ok;
      if (t.numeric) {
        double want = at_point(exact(t.a, k), k.g, static_cast<int>(k.mu.size()), q, s).get_d();
        tr::cd got = rec->extract_dh(k.g, k.mu);
        double err = want != 0 ? std::abs(got - want) / std::abs(want) : std::abs(got);
        t.max_rel = std::max(t.max_rel, err);
        ok = err <= c.tol;
      } else {
        ok = exact(t.a, k) == exact(t.b, k);
      }
      if (!ok && t.failures++ == 0) t.first_failure = {{"g", k.g}, {"mu", k.mu}};
    }
  });

  Output o;
  bool pass = true;
  json pairs = json::array();
  o.csv.push_back("pair,d,cases,failures,max_rel_error,pass");
  for (const auto& t : tasks) {
    bool ok = t.failures == 0;
    pass = pass && ok;
    json r{{"pair", t.a + "-" + t.b}, {"d", t.d}, {"cases", t.cases}, {"failures", t.failures}, {"pass", ok}};
    if (t.numeric) {
      r["max_rel_error"] = t.max_rel;
      r["tol"] = c.tol;
    } else {
      r["exact"] = true;
    }
    if (!ok) r["first_failure"] = t.first_failure;
    pairs.push_back(r);
    o.csv.push_back(t.a + "-" + t.b + "," + std::to_string(t.d) + "," + std::to_string(t.cases) + "," +
                    std::to_string(t.failures) + "," + (t.numeric ? io::real(t.max_rel) : "") + "," + (ok ? "true" : "false"));
  }
  o.doc = {{"command", "crosscheck"}, {"mu_max", mu_max}, {"g_max", g_max}, {"pairs", pairs}, {"pass", pass}};
  o.code = pass ? 0 : 1;
  return o;
}

// -------- tables

chiodo::SolverOptions solver_options(const RunConfig& c) {
  if (c.cap < 1) throw ConfigError("cap must be positive");
  if (c.extra < 0) throw ConfigError("extra must be non-negative");
  chiodo::SolverOptions o;
  o.max_size = c.cap;
  o.extra = c.extra;
  return o;
}

Output table_b(const RunConfig& c) {
  const auto& rows = reference::dh11_d3();
  std::vector<int> mus;
  for (const auto& r : rows)
    if (mus.empty() || mus.back() != r.mu) mus.push_back(r.mu);
  std::vector<QPolynomial> layers(mus.size());
  std::optional<chiodo::ChiodoSolver> solver;
  std::vector<std::optional<QRat>> elsv(rows.size());
  // the last task does the intersection side
  parallel_for(mus.size() + 1, c.jobs, [&](std::size_t i) {
    if (i < mus.size()) {
      layers[i] = symbolic_engine(3).dh(1, {mus[i]});
      return;
    }
    solver.emplace(3, solver_options(c));
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (!rows[r].starred) elsv[r] = solver->evaluate(chiodo::elsv_rhs(3, 1, {rows[r].mu}, Partition(rows[r].lambda)));
  });
  Output o;
  o.doc = json::array();
  o.csv.push_back("mu,lambda,computed,paper,match,starred,engine,elsv,elsv_match,prefactor");
  bool pass = true;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::size_t at = static_cast<std::size_t>(std::find(mus.begin(), mus.end(), row.mu) - mus.begin());
    QRat got = layers[at].coeff(Mono::of_partition(Partition(row.lambda)));
    QRat want = parse_qrat(row.value);
    bool match = got == want;
    QRat pre = chiodo::elsv_prefactor(3, 1, {row.mu}, Partition(row.lambda).length());
    json j{{"mu", row.mu},           {"lambda", row.lambda},        {"computed", io::rat(got)},
           {"paper", io::rat(want)}, {"match", match},              {"starred", row.starred},
           {"engine", row.starred ? "wedge only" : "wedge"},        {"paper_expression", row.chiodo},
           {"prefactor", io::rat(pre)}};
    bool em = true;
    if (elsv[r]) {
      em = *elsv[r] == want;
      j["elsv"] = io::rat(*elsv[r]);
      j["elsv_match"] = em;
    }
    pass = pass && match && em;
    o.doc.push_back(j);
    o.csv.push_back(std::to_string(row.mu) + "," + io::join(row.lambda) + "," + io::rat(got) + "," + io::rat(want) + "," +
                    (match ? "true" : "false") + "," + (row.starred ? "true" : "false") + "," + j["engine"].get<std::string>() +
                    "," + (elsv[r] ? io::rat(*elsv[r]) : "") + "," + (elsv[r] ? (em ? "true" : "false") : "") + "," +
                    io::rat(pre));
  }
  o.code = pass ? 0 : 1;
  return o;
}

Output table_c(const RunConfig& c) {
  const auto& vals = reference::appendix_c_values();
  const auto& rels = reference::appendix_c_relations();
  std::vector<int> ds;
  for (const auto& v : vals)
    if (std::find(ds.begin(), ds.end(), v.d) == ds.end()) ds.push_back(v.d);
  std::vector<QRat> got(vals.size()), rel(rels.size());
  parallel_for(ds.size(), c.jobs, [&](std::size_t i) {
    int d = ds[i];
    chiodo::ChiodoSolver s(d, solver_options(c));
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const auto& v = vals[k];
      if (v.d != d) continue;
      std::vector<int> aux(v.a.begin() + 1, v.a.end());
      got[k] = s.evaluate(chiodo::integral_form(d, v.g, {v.a[0]}, {qrat(v.mu, d)}, aux));
    }
    for (std::size_t k = 0; k < rels.size(); ++k)
      if (rels[k].d == d) rel[k] = s.evaluate(chiodo::vanishing_form(d, rels[k].g, rels[k].mu, Partition(rels[k].eta)));
  });
  Output o;
  bool pass = true;
  json values = json::array(), relations = json::array();
  o.csv.push_back("kind,d,g,mu,a_or_eta,computed,paper,match");
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const auto& v = vals[k];
    QRat want = parse_qrat(v.value);
    bool m = got[k] == want;
    pass = pass && m;
    values.push_back({{"d", v.d}, {"g", v.g}, {"mu", v.mu}, {"a", v.a}, {"computed", io::rat(got[k])}, {"paper", io::rat(want)}, {"match", m}});
    o.csv.push_back("value," + std::to_string(v.d) + "," + std::to_string(v.g) + "," + std::to_string(v.mu) + "," + io::join(v.a) + "," +
                    io::rat(got[k]) + "," + io::rat(want) + "," + (m ? "true" : "false"));
  }
  for (std::size_t k = 0; k < rels.size(); ++k) {
    const auto& r = rels[k];
    bool m = rel[k] == 0;
    pass = pass && m;
    relations.push_back({{"kind", "vanishing"}, {"d", r.d}, {"g", r.g}, {"mu", r.mu}, {"eta", r.eta}, {"value", io::rat(rel[k])}, {"pass", m}});
    o.csv.push_back("vanishing," + std::to_string(r.d) + "," + std::to_string(r.g) + "," + io::join(r.mu) + "," + io::join(r.eta) + "," +
                    io::rat(rel[k]) + ",0/1," + (m ? "true" : "false"));
  }
  o.doc = {{"table", "appendix-c"}, {"values", values}, {"relations", relations}, {"pass", pass}};
  o.code = pass ? 0 : 1;
  return o;
}

Output cmd_table(const RunConfig& c) {
  check_common(c);
  if (c.table == "appendix-b") return table_b(c);
  if (c.table == "appendix-c") return table_c(c);
  throw ConfigError("unknown table " + c.table + " (appendix-b or appendix-c)");
}

// -------- chiodo

Output cmd_chiodo_solve(const RunConfig& c) {
  check_common(c);
  int d = need_d(c);
  if (d < 2) throw ConfigError("chiodo needs d >= 2");
  int g = c.g ? *c.g : 0;
  if (c.g_max) throw ConfigError("chiodo solve takes --g");
  int n = c.n ? *c.n : 1;
  if (n < 1 || n > 4) throw ConfigError("n must be between 1 and 4");
  if (2 * g - 2 + n <= 0) throw ConfigError("chiodo solve needs 2g-2+n > 0");
  int mu_max = c.mu_max ? *c.mu_max : d + 1;
  if (mu_max < n) throw ConfigError("mu-max must be at least n");
  chiodo::ChiodoSolver s(d, solver_options(c));
  for (int t = n; t <= mu_max; ++t)
    for_each_partition(t, t, [&](const Partition& mu) {
      if (mu.length() != n) return;
      for (const auto& lam : partitions_bounded(t, d)) s.require(chiodo::elsv_rhs(d, g, mu.parts(), lam));
    });
  std::set<chiodo::Family> fams;
  for (const auto& r : s.reports()) fams.insert(r.family);
  Output o;
  json integrals = json::array();
  o.csv.push_back("kind,g,d,a,m_or_mu,value");
  for (const auto& f : fams) {
    std::vector<int> mu;
    std::vector<QRat> w;
    for (int a : f.marked) {
      mu.push_back(a == 0 ? d : d - a);
      w.push_back(qrat(mu.back(), d));
    }
    QRat v = chiodo::integral_form(d, f.g, f.marked, w, f.aux).evaluate(s.values());
    std::vector<int> a = f.marked;
    a.insert(a.end(), f.aux.begin(), f.aux.end());
    integrals.push_back({{"g", f.g}, {"d", d}, {"a", a}, {"mu", mu}, {"value", io::rat(v)}});
    o.csv.push_back("integral," + std::to_string(f.g) + "," + std::to_string(d) + "," + io::join(a) + "," + io::join(mu) + "," + io::rat(v));
  }
  for (const auto& [i, x] : s.values()) {
    std::vector<int> a = i.a;
    o.csv.push_back("value," + std::to_string(i.g) + "," + std::to_string(d) + "," + io::join(a) + "," + io::join(i.m) + "," + io::rat(x));
  }
  o.doc = {{"d", d}, {"g", g}, {"n", n}, {"mu_max", mu_max}, {"values", io::to_json(d, s.values())}, {"integrals", integrals}};
  return o;
}

Output cmd_chiodo_verify(const RunConfig& c) {
  check_common(c);
  if (!(c.vanishing || c.duality || c.stability || c.orbifold))
    throw ConfigError("choose --vanishing, --duality, --stability or --orbifold");
  int g = c.g ? *c.g : 1;
  if (c.g_max) throw ConfigError("chiodo verify takes --g");
  if (c.mu.size() != 1) throw ConfigError("give one --mu");
  auto mu = positive_list(c.mu[0], "mu");
  auto opt = solver_options(c);
  json rel = json::array();
  Output o;
  o.csv.push_back("kind,d,g,mu,other,lhs,rhs,pass");
  bool pass = true;
  auto csv = [&](const std::string& kind, int d, const std::vector<int>& other, const QRat& l, const QRat& r, bool ok) {
    o.csv.push_back(kind + "," + std::to_string(d) + "," + std::to_string(g) + "," + io::join(mu) + "," + io::join(other) + "," +
                    io::rat(l) + "," + io::rat(r) + "," + (ok ? "true" : "false"));
  };
  if (c.vanishing) {
    int d = need_d(c);
    auto eta = positive_list(c.eta, "eta");
    Partition pe(eta);
    chiodo::ChiodoSolver s(d, opt);
    QRat v = s.evaluate(chiodo::vanishing_form(d, g, mu, pe));
    bool ok = v == 0;
    pass = pass && ok;
    rel.push_back({{"kind", "vanishing"}, {"d", d}, {"g", g}, {"mu", mu}, {"eta", pe.parts()}, {"value", io::rat(v)}, {"pass", ok}});
    csv("vanishing", d, pe.parts(), v, QRat(0), ok);
  }
  if (c.duality) {
    int d = need_d(c);
    Partition lam(positive_list(c.lambda, "lambda"));
    chiodo::ChiodoSolver s(d, opt);
    auto [lf, rf] = chiodo::duality_forms(d, g, mu, lam);
    s.require(lf);
    s.require(rf);
    auto r = chiodo::verify_duality(d, g, mu, lam, s.values());
    bool ok = r.equal();
    pass = pass && ok;
    rel.push_back({{"kind", "duality"},
                   {"d", d},
                   {"g", g},
                   {"mu", mu},
                   {"lambda", lam.parts()},
                   {"lhs", io::rat(r.lhs)},
                   {"rhs", io::rat(r.rhs)},
                   {"aut_mu", r.aut_mu.get_str()},
                   {"aut_lambda", r.aut_lambda.get_str()},
                   {"normalised", "lhs/|Aut mu| = rhs/|Aut lambda|"},
                   {"equal_unnormalised", r.equal_as_printed()},
                   {"pass", ok}});
    csv("duality", d, lam.parts(), r.lhs, r.rhs, ok);
  }
  if (c.stability) {
    Partition lam(positive_list(c.lambda, "lambda"));
    std::vector<int> ds;
    if (!c.ds.empty()) ds = positive_list(c.ds, "ds");
    else if (c.d) ds = {*c.d, *c.d + 1};
    else ds = {lam.largest() + 1, lam.largest() + 2};
    std::vector<std::optional<chiodo::ChiodoSolver>> solvers(ds.size());
    parallel_for(ds.size(), c.jobs, [&](std::size_t i) {
      solvers[i].emplace(ds[i], opt);
      solvers[i]->require(chiodo::stability_form(ds[i], g, mu, lam));
    });
    std::map<int, chiodo::Values> solved;
    for (std::size_t i = 0; i < ds.size(); ++i) solved[ds[i]] = solvers[i]->values();
    auto r = chiodo::verify_d_stability(g, mu, lam, ds, solved);
    pass = pass && r.equal;
    json by_d = json::object();
    for (const auto& [d, v] : r.values) by_d[std::to_string(d)] = io::rat(v);
    rel.push_back({{"kind", "stability"}, {"g", g}, {"mu", mu}, {"lambda", lam.parts()}, {"values", by_d}, {"pass", r.equal}});
    for (const auto& [d, v] : r.values) csv("stability", d, lam.parts(), v, r.values.begin()->second, r.equal);
  }
  if (c.orbifold) {
    int d = need_d(c);
    chiodo::ChiodoSolver s(d, opt);
    s.require(chiodo::orbifold_form(d, g, mu));
    auto r = chiodo::orbifold_check(d, g, mu, s.values());
    bool ok = r.equal();
    pass = pass && ok;
    rel.push_back({{"kind", "orbifold"}, {"d", d}, {"g", g}, {"mu", mu}, {"wedge", io::rat(r.wedge)}, {"elsv", io::rat(r.elsv)}, {"pass", ok}});
    csv("orbifold", d, {}, r.wedge, r.elsv, ok);
  }
  o.doc = {{"relations", rel}, {"pass", pass}};
  o.code = pass ? 0 : 1;
  return o;
}

void emit(const Output& o, const RunConfig& c) {
  std::string text;
  if (c.format == "csv") {
    for (const auto& l : o.csv) text += l + "\n";
  } else {
    text = o.doc.dump(2) + "\n";
  }
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + c.out);
  f << text;
}

void add_flags(CLI::App* a, RunConfig& c) {
  static std::string config_path;
  a->add_option("--config", config_path, "JSON file mirroring the flags; flags win");
  a->add_option("--d", c.d, "number of q variables");
  a->add_option("--q", c.q, "comma list of q values");
  a->add_option("--s", c.s, "value of s");
  a->add_option("--mu", c.mu, "comma list; repeat or separate by ';' for several");
  a->add_option("--mu-max", c.mu_max, "all mu with |mu| up to this");
  a->add_option("--n", c.n, "number of points");
  a->add_option("--g", c.g, "genus");
  a->add_option("--g-max", c.g_max, "all genera up to this");
  a->add_option("--engines", c.engines, "comma list of wedge, oracle, tr, dh02");
  a->add_option("--order", c.order, "truncation order of the wedge engine");
  a->add_option("--tol", c.tol, "relative tolerance for numeric comparisons");
  a->add_option("--format", c.format, "json or csv");
  a->add_option("--out", c.out, "output path");
  a->add_option("--jobs", c.jobs, "worker threads");
  a->add_option("--cap", c.cap, "largest |mu| used when harvesting Chiodo equations");
  a->add_option("--extra", c.extra, "consistency equations per family");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") load_config(argv[i + 1], cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Hurwitz number engines"};
  app.require_subcommand(1);
  auto* compute = app.add_subcommand("compute", "DH_{g,n}(mu) coefficients");
  auto* cross = app.add_subcommand("crosscheck", "compare engines on their common domain");
  auto* table = app.add_subcommand("table", "reproduce a reference table");
  auto* ch = app.add_subcommand("chiodo", "Chiodo integrals from Hurwitz data");
  ch->require_subcommand(1);
  auto* solve = ch->add_subcommand("solve", "solve the integrals touched by (d, g, n)");
  auto* verify = ch->add_subcommand("verify", "check relations");
  for (auto* a : {compute, cross, table, solve, verify}) add_flags(a, cfg);
  table->add_option("name", cfg.table, "appendix-b or appendix-c")->required();
  verify->add_flag("--vanishing", cfg.vanishing);
  verify->add_flag("--duality", cfg.duality);
  verify->add_flag("--stability", cfg.stability);
  verify->add_flag("--orbifold", cfg.orbifold);
  verify->add_option("--eta", cfg.eta, "comma list");
  verify->add_option("--lambda", cfg.lambda, "comma list");
  verify->add_option("--ds", cfg.ds, "comma list of d for stability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto* a : {compute, cross, table, solve, verify}) {
    if (!a->parsed()) continue;
    if (a->count("--g-max") && !a->count("--g")) cfg.g.reset();
    if (a->count("--g") && !a->count("--g-max")) cfg.g_max.reset();
  }

  try {
    Output o;
    if (*compute) o = cmd_compute(cfg);
    else if (*cross) o = cmd_crosscheck(cfg);
    else if (*table) o = cmd_table(cfg);
    else if (*solve) o = cmd_chiodo_solve(cfg);
    else o = cmd_chiodo_verify(cfg);
    emit(o, cfg);
    return o.code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return 3;
  }
}

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "polyfit.hpp"

namespace hurwitz::tr {

using cd = std::complex<double>;
using CVec = std::vector<cd>;

struct NonSimpleBranchPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dense truncated power series helpers, index = power
namespace ser {

inline CVec mul(const CVec& a, const CVec& b, std::size_t n) {
  CVec r(n, cd(0));
  for (std::size_t i = 0; i < std::min(n, a.size()); ++i) {
    if (a[i] == cd(0)) continue;
    for (std::size_t j = 0; i + j < n && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

inline CVec inv(const CVec& a, std::size_t n) {
  CVec r(n, cd(0));
  r[0] = cd(1) / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    cd s(0);
    for (std::size_t i = 1; i <= k && i < a.size(); ++i) s += a[i] * r[k - i];
    r[k] = -s * r[0];
  }
  return r;
}

// principal sqrt of a[0], then the usual recurrence
inline CVec sqrt(const CVec& a, std::size_t n) {
  CVec r(n, cd(0));
  r[0] = std::sqrt(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    cd s = k < a.size() ? a[k] : cd(0);
    for (std::size_t i = 1; i < k; ++i) s -= r[i] * r[k - i];
    r[k] = s / (2.0 * r[0]);
  }
  return r;
}

// f(t) for t with t[0] = 0
inline CVec compose(const CVec& f, const CVec& t, std::size_t n) {
  CVec r(n, cd(0));
  for (std::size_t i = f.size(); i-- > 0;) {
    r = mul(r, t, n);
    r[0] += f[i];
  }
  return r;
}

inline CVec deriv(const CVec& a) {
  CVec r(a.size() > 1 ? a.size() - 1 : 1, cd(0));
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<double>(i);
  return r;
}

// coefficients of (alpha + t)^j
inline CVec shifted_power(cd alpha, const CVec& t, int j, std::size_t n) {
  CVec base = t;
  base.resize(n, cd(0));
  base[0] = alpha;
  CVec r(n, cd(0));
  r[0] = 1;
  for (int i = 0; i < j; ++i) r = mul(r, base, n);
  return r;
}

}  // namespace ser

// Laurent series c[i] at power lo + i, known up to power top()
struct Laurent {
  int lo = 0;
  CVec c;
  int top() const { return lo + static_cast<int>(c.size()) - 1; }
  cd at(int p) const {
    int i = p - lo;
    return i < 0 || i >= static_cast<int>(c.size()) ? cd(0) : c[static_cast<std::size_t>(i)];
  }
  Laurent reflected() const {
    Laurent r = *this;
    for (std::size_t i = 0; i < r.c.size(); ++i)
      if ((lo + static_cast<int>(i)) % 2) r.c[i] = -r.c[i];
    return r;
  }
  Laurent scaled(cd s) const {
    Laurent r = *this;
    for (auto& x : r.c) x *= s;
    return r;
  }
};

// product kept up to power `top`
inline Laurent lmul(const Laurent& a, const Laurent& b, int top) {
  Laurent r;
  r.lo = a.lo + b.lo;
  if (top < r.lo) return r;
  r.c.assign(static_cast<std::size_t>(top - r.lo + 1), cd(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      int p = a.lo + b.lo + static_cast<int>(i + j);
      if (p > top) break;
      r.c[static_cast<std::size_t>(p - r.lo)] += a.c[i] * b.c[j];
    }
  return r;
}

// (1/(2w)) d/dw
inline Laurent dx_local(const Laurent& a) {
  Laurent r;
  r.lo = a.lo - 2;
  r.c.resize(a.c.size());
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] * (0.5 * (a.lo + static_cast<int>(i)));
  return r;
}

inline std::vector<cd> branch_points(int d, const std::vector<cd>& q, cd s, double tol = 1e-8) {
  if (d < 1 || static_cast<int>(q.size()) != d) throw std::invalid_argument("need exactly d values of q");
  if (std::abs(s * q.back()) == 0.0) throw std::invalid_argument("s q_d must be nonzero");
  // 1 - s sum j q_j z^j, as monic companion
  std::vector<cd> c(static_cast<std::size_t>(d + 1));
  c[0] = 1;
  for (int j = 1; j <= d; ++j) c[static_cast<std::size_t>(j)] = -s * static_cast<double>(j) * q[static_cast<std::size_t>(j - 1)];
  std::vector<cd> roots;
  if (d == 1) {
    roots.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(d)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
  }
  auto eval = [&](cd z) {
    cd p(0), dp(0);
    for (int j = d; j >= 0; --j) {
      dp = dp * z + p;
      p = p * z + c[static_cast<std::size_t>(j)];
    }
    return std::pair{p, dp};
  };
  double scale = 0;
  for (auto& z : roots) {
    auto [p, dp] = eval(z);
    if (std::abs(dp) > 0) z -= p / dp;
    if (std::abs(z.imag()) < 1e-14 * std::abs(z)) z = cd(z.real(), 0.0);
    scale = std::max(scale, std::abs(z));
  }
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < tol * scale) throw NonSimpleBranchPoint("branch points collide");
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
    double aa = std::arg(a), ab = std::arg(b);
    if (std::abs(aa - ab) > 1e-12) return aa < ab;
    return std::abs(a) < std::abs(b);
  });
  return roots;
}

struct CurveConfig {
  int d = 1;
  std::vector<cd> q{1.0};
  cd s = 1.0;
  int K = 0;  // 0: default per (g, n)
  double tol = 1e-8;
};

// z = alpha + t(w) with x(z) = x(alpha) + w^2
struct LocalFrame {
  cd alpha;
  CVec t;
  double residual = 0;
};

inline LocalFrame local_frame(cd alpha, const CurveConfig& cfg, std::size_t n) {
  // a_k = [t^k] (x(alpha + t) - x(alpha)), k >= 2
  CVec a(n + 2, cd(0));
  cd ap(1);
  for (std::size_t k = 1; k < a.size(); ++k) {
    ap *= alpha;
    a[k] = (k % 2 ? 1.0 : -1.0) / (static_cast<double>(k) * ap);
  }
  for (int j = 1; j <= cfg.d; ++j) {
    cd qj = cfg.q[static_cast<std::size_t>(j - 1)];
    double binom = 1;
    for (int k = 1; k <= j && static_cast<std::size_t>(k) < a.size(); ++k) {
      binom = binom * (j - k + 1) / k;
      a[static_cast<std::size_t>(k)] -= cfg.s * qj * binom * std::pow(alpha, j - k);
    }
  }
  // w = t h(t), h = sqrt(a_2 + a_3 t + ...)
  CVec a2(a.begin() + 2, a.end());
  CVec h = ser::sqrt(a2, n);
  CVec hinv = ser::inv(h, n);
  // t = w / h(t), fixed point
  CVec t(n, cd(0));
  t[1] = hinv[0];
  for (std::size_t it = 0; it < n; ++it) {
    CVec c = ser::compose(hinv, t, n);
    CVec nt(n, cd(0));
    for (std::size_t i = 1; i < n; ++i) nt[i] = c[i - 1];
    t = nt;
  }
  LocalFrame f{alpha, t, 0};
  // check x(alpha + t(w)) - x(alpha) = w^2
  CVec xw = ser::compose(a, t, n);
  double scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    cd want = i == 2 ? cd(1) : cd(0);
    f.residual = std::max(f.residual, std::abs(xw[i] - want) / scale);
    scale *= std::max(1.0, std::abs(t[1]));
  }
  return f;
}

class SpectralCurve {
 public:
  explicit SpectralCurve(CurveConfig cfg) : cfg_(std::move(cfg)) {
    alphas_ = tr::branch_points(cfg_.d, cfg_.q, cfg_.s, cfg_.tol);
  }
  int d() const { return cfg_.d; }
  cd s() const { return cfg_.s; }
  const std::vector<cd>& q() const { return cfg_.q; }
  const CurveConfig& config() const { return cfg_; }
  const std::vector<cd>& branch_points() const { return alphas_; }

  cd Q(cd z) const {
    cd r(0);
    for (int j = cfg_.d; j >= 1; --j) r = (r + cfg_.q[static_cast<std::size_t>(j - 1)]) * z;
    return r;
  }

 private:
  CurveConfig cfg_;
  std::vector<cd> alphas_;
};

// Coefficients of omega_{g,n} on the differentials E_{b,i}(z) = [u^i] z_b'(u) dz / (z_b(u) - z)^2,
// one slot per variable; slot index b * L + i
struct CorrelatorRep {
  int g = 0, n = 0, d = 1, L = 1;
  CVec data;
  int slot_dim() const { return d * L; }
  std::size_t size() const {
    std::size_t r = 1;
    for (int i = 0; i < n; ++i) r *= static_cast<std::size_t>(slot_dim());
    return r;
  }
  cd& at(const std::vector<int>& idx) { return data[flat(idx)]; }
  cd at(const std::vector<int>& idx) const { return data[flat(idx)]; }
  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t r = 0;
    for (int x : idx) r = r * static_cast<std::size_t>(slot_dim()) + static_cast<std::size_t>(x);
    return r;
  }
  std::vector<int> unflat(std::size_t f) const {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(f % static_cast<std::size_t>(slot_dim()));
      f /= static_cast<std::size_t>(slot_dim());
    }
    return idx;
  }
  double max_abs() const {
    double m = 0;
    for (auto x : data) m = std::max(m, std::abs(x));
    return m;
  }
};

struct NumericCTable {
  int g = 0, n = 0, d = 1;
  std::map<std::vector<PhiIndex>, cd> entries;
  double condition = 1;
  cd coeff(const std::vector<PhiIndex>& idx) const {
    auto it = entries.find(idx);
    return it == entries.end() ? cd(0) : it->second;
  }
  bool empty() const { return entries.empty(); }
};

inline int slot_length(int g, int n) { return 6 * g - 5 + 2 * n; }

class TopologicalRecursion {
 public:
  // level: largest 2g-2+n to be computed
  TopologicalRecursion(SpectralCurve curve, int level) : curve_(std::move(curve)), level_(level) {
    Lmax_ = 1;
    for (int g = 0; 2 * g - 1 <= level; ++g)
      for (int n = 1; 2 * g - 2 + n <= level; ++n)
        if (2 * g - 2 + n > 0) Lmax_ = std::max(Lmax_, slot_length(g, n));
    int K = curve_.config().K > 0 ? curve_.config().K : 4 * level + 6;
    top_ = std::max(K, 2 * Lmax_ + 4);
    build_frames();
  }

  const SpectralCurve& curve() const { return curve_; }
  int order() const { return top_; }
  int level() const { return level_; }
  const std::vector<LocalFrame>& frames() const { return frames_; }

  const CorrelatorRep& omega(int g, int n) {
    if (2 * g - 2 + n <= 0) throw std::invalid_argument("omega needs 2g-2+n > 0");
    if (2 * g - 2 + n > level_) throw std::invalid_argument("recursion level too small for this (g, n)");
    auto key = std::pair{g, n};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    CorrelatorRep r = step(g, n);
    return cache_.emplace(key, std::move(r)).first->second;
  }

  // largest odd-index entry relative to the largest entry
  // E_{b,i}(z) / dz = (i+1) [u^{i+1}] 1 / (z - z_b(u)), for i < L
  CVec basis_at(cd z, int L) const {
    int d = curve_.d();
    CVec e(static_cast<std::size_t>(d * L), cd(0));
    for (int b = 0; b < d; ++b) {
      const auto& f = frames_[static_cast<std::size_t>(b)];
      CVec den(static_cast<std::size_t>(L + 1), cd(0));
      den[0] = z - f.alpha;
      for (int k = 1; k <= L; ++k) den[static_cast<std::size_t>(k)] = -f.t[static_cast<std::size_t>(k)];
      auto inv = ser::inv(den, static_cast<std::size_t>(L + 1));
      for (int i = 0; i < L; ++i) e[static_cast<std::size_t>(b * L + i)] = static_cast<double>(i + 1) * inv[static_cast<std::size_t>(i + 1)];
    }
    return e;
  }

  // omega(z, p_2, ..., p_n) + omega(sigma z, p_2, ...) sampled on |w| = r around each branch point;
  // returns the L2 size of its principal part relative to that of omega alone
  double loop_residual(int g, int n) { return loop_residual(omega(g, n)); }

  double loop_residual(const CorrelatorRep& w) const {
    int n = w.n;
    if (w.max_abs() == 0) return 0;
    int d = curve_.d(), L = w.L, D = w.slot_dim();
    std::size_t rest = w.size() / static_cast<std::size_t>(D);
    CVec R(static_cast<std::size_t>(D), cd(0));
    std::vector<CVec> others;
    for (int k = 1; k < n; ++k) others.push_back(basis_at(cd(-0.23 + 0.11 * k, 0.17 + 0.07 * k), L));
    for (std::size_t f = 0; f < w.data.size(); ++f) {
      cd c = w.data[f];
      std::size_t r = f % rest;
      for (int k = n - 1; k >= 1; --k) {
        c *= others[static_cast<std::size_t>(k - 1)][r % static_cast<std::size_t>(D)];
        r /= static_cast<std::size_t>(D);
      }
      R[f / rest] += c;
    }
    const int N = 128;
    double worst = 0;
    for (int a = 0; a < d; ++a) {
      const auto& fa = frames_[static_cast<std::size_t>(a)];
      double dist = std::abs(fa.alpha);
      for (int b = 0; b < d; ++b)
        if (b != a) dist = std::min(dist, std::abs(fa.alpha - frames_[static_cast<std::size_t>(b)].alpha));
      double r = 0.05 * dist / std::abs(fa.t[1]);
      auto pull = [&](cd x) {  // omega(z(x)) z'(x)
        cd z = fa.alpha, zp(0), p(1);
        for (std::size_t k = 1; k < fa.t.size(); ++k) {
          zp += static_cast<double>(k) * fa.t[k] * p;
          p *= x;
          z += fa.t[k] * p;
        }
        auto e = basis_at(z, L);
        cd v(0);
        for (int i = 0; i < D; ++i) v += R[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
        return v * zp;
      };
      std::vector<cd> F(N), G(N);
      for (int j = 0; j < N; ++j) {
        cd x = std::polar(r, 2 * M_PI * j / N);
        G[static_cast<std::size_t>(j)] = pull(x);
        F[static_cast<std::size_t>(j)] = G[static_cast<std::size_t>(j)] - pull(-x);
      }
      double pf = 0, pg = 0;
      for (int k = 1; k < N / 2; ++k) {
        cd cf(0), cg(0);
        for (int j = 0; j < N; ++j) {
          cd ph = std::polar(1.0, 2 * M_PI * k * j / N);
          cf += F[static_cast<std::size_t>(j)] * ph;
          cg += G[static_cast<std::size_t>(j)] * ph;
        }
        pf += std::norm(cf);
        pg += std::norm(cg);
      }
      if (pg > 0) worst = std::max(worst, std::sqrt(pf / pg));
    }
    return worst;
  }

  double symmetry_residual(int g, int n) {
    const auto& w = omega(g, n);
    double m = w.max_abs(), worst = 0;
    for (std::size_t f = 0; f < w.data.size(); ++f) {
      auto idx = w.unflat(f);
      for (int i = 0; i + 1 < n; ++i) {
        auto sw = idx;
        std::swap(sw[static_cast<std::size_t>(i)], sw[static_cast<std::size_t>(i + 1)]);
        worst = std::max(worst, std::abs(w.data[f] - w.at(sw)));
      }
    }
    return m == 0 ? 0 : worst / m;
  }

  NumericCTable decompose_basis(int g, int n, double max_condition = 1e12) {
    return decompose_basis(omega(g, n), max_condition);
  }

  NumericCTable decompose_basis(const CorrelatorRep& w, double max_condition = 1e12) const {
    int g = w.g, n = w.n;
    int d = curve_.d(), Kc = (w.L + 1) / 2, D = d * Kc;
    // -P: rows (alpha, k), columns (j, m); d phihat^j_m = -sum p E_{alpha, 2k}
    Eigen::MatrixXcd P(D, D);
    for (int a = 0; a < d; ++a) {
      auto ph = phihat_principal(a, Kc);
      for (int k = 0; k < Kc; ++k)
        for (int j = 1; j <= d; ++j)
          for (int m = 0; m < Kc; ++m) P(a * Kc + k, (j - 1) * Kc + m) = -ph[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(m)].at(-(2 * k + 1));
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cond = sv(D - 1) == 0.0 ? INFINITY : sv(0) / sv(D - 1);
    if (!(cond <= max_condition)) throw IllConditioned("basis matrix condition number " + std::to_string(cond));
    Eigen::MatrixXcd Pinv = svd.solve(Eigen::MatrixXcd::Identity(D, D));

    // even entries only
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(D);
    CVec c(total, cd(0));
    for (std::size_t f = 0; f < total; ++f) {
      std::size_t rem = f;
      std::vector<int> idx(static_cast<std::size_t>(n));
      for (int i = n - 1; i >= 0; --i) {
        int e = static_cast<int>(rem % static_cast<std::size_t>(D));
        rem /= static_cast<std::size_t>(D);
        idx[static_cast<std::size_t>(i)] = (e / Kc) * w.L + 2 * (e % Kc);
      }
      c[f] = w.at(idx);
    }
    // apply Pinv along each slot
    for (int s = 0; s < n; ++s) {
      std::size_t stride = 1;
      for (int i = s + 1; i < n; ++i) stride *= static_cast<std::size_t>(D);
      CVec out(total, cd(0));
      for (std::size_t f = 0; f < total; ++f) {
        std::size_t e = (f / stride) % static_cast<std::size_t>(D);
        std::size_t base = f - e * stride;
        cd acc(0);
        for (int r = 0; r < D; ++r) acc += Pinv(static_cast<Eigen::Index>(e), r) * c[base + static_cast<std::size_t>(r) * stride];
        out[f] = acc;
      }
      c = std::move(out);
    }
    NumericCTable t{g, n, d, {}, cond};
    double m = 0;
    for (auto x : c) m = std::max(m, std::abs(x));
    for (std::size_t f = 0; f < total; ++f) {
      if (m == 0 || std::abs(c[f]) <= 1e-13 * m) continue;
      std::size_t rem = f;
      std::vector<PhiIndex> key(static_cast<std::size_t>(n));
      for (int i = n - 1; i >= 0; --i) {
        int e = static_cast<int>(rem % static_cast<std::size_t>(D));
        rem /= static_cast<std::size_t>(D);
        key[static_cast<std::size_t>(i)] = {e / Kc + 1, e % Kc};
      }
      t.entries[key] = c[f];
    }
    return t;
  }

  cd extract_dh(int g, const std::vector<int>& mu) {
    int n = static_cast<int>(mu.size());
    if (g == 0 && n == 2) return dh02(mu[0], mu[1]);
    auto key = std::pair{g, n};
    auto it = tables_.find(key);
    if (it == tables_.end()) it = tables_.emplace(key, decompose_basis(g, n)).first;
    return evaluate(it->second, mu);
  }

  // sum C prod phi(j_i, m_i, mu_i) at the curve's (q, s)
  cd evaluate(const NumericCTable& t, const std::vector<int>& mu) {
    if (static_cast<int>(mu.size()) != t.n) throw std::invalid_argument("mu has the wrong length");
    cd r(0);
    for (const auto& [idx, c] : t.entries) {
      cd p = c;
      for (int i = 0; i < t.n; ++i) p *= phi_value(idx[static_cast<std::size_t>(i)].j, idx[static_cast<std::size_t>(i)].m, mu[static_cast<std::size_t>(i)]);
      r += p;
    }
    return r;
  }

  cd phi_value(int j, int m, int mu) {
    auto key = std::tuple{j, m, mu};
    auto it = phi_values_.find(key);
    if (it != phi_values_.end()) return it->second;
    cd v = phi_cache_.phi(j, m, mu).evaluate(sq());
    phi_values_.emplace(key, v);
    return v;
  }

  // [X1^a X2^b] log((z1 - z2)/(X1 - X2)), z = sum_mu phi(1,0,mu)/mu X^mu
  cd dh02(int a, int b) {
    int N = a + b + 1;
    std::vector<cd> zc(static_cast<std::size_t>(N + 1), cd(0));
    for (int m = 1; m <= N; ++m) zc[static_cast<std::size_t>(m)] = phi_value(1, 0, m) / static_cast<double>(m);
    // F = sum_m zc_m h_{m-1}(X1, X2), box [0..a] x [0..b]
    auto box = [&](int i, int k) { return static_cast<std::size_t>(i * (b + 1) + k); };
    CVec F(static_cast<std::size_t>((a + 1) * (b + 1)), cd(0));
    for (int i = 0; i <= a; ++i)
      for (int k = 0; k <= b; ++k) F[box(i, k)] = zc[static_cast<std::size_t>(i + k + 1)];
    // log F via d/dX1: L1 = F_1 / F, then integrate in X1
    CVec F1(F.size(), cd(0)), Finv(F.size(), cd(0));
    for (int i = 0; i + 1 <= a; ++i)
      for (int k = 0; k <= b; ++k) F1[box(i, k)] = F[box(i + 1, k)] * static_cast<double>(i + 1);
    for (int i = 0; i <= a; ++i)
      for (int k = 0; k <= b; ++k) {
        cd s = i == 0 && k == 0 ? cd(1) : cd(0);
        for (int i2 = 0; i2 <= i; ++i2)
          for (int k2 = 0; k2 <= k; ++k2)
            if (i2 || k2) s -= F[box(i2, k2)] * Finv[box(i - i2, k - k2)];
        Finv[box(i, k)] = s / F[0];
      }
    cd acc(0);
    for (int i2 = 0; i2 <= a - 1; ++i2)
      for (int k2 = 0; k2 <= b; ++k2) acc += F1[box(i2, k2)] * Finv[box(a - 1 - i2, b - k2)];
    return acc / static_cast<double>(a);
  }

 private:
  std::vector<cd> sq() const {
    std::vector<cd> v = curve_.q();
    for (auto& x : v) x *= curve_.s();
    return v;
  }

  struct AtAlpha {
    std::vector<Laurent> fn;  // universal table: E_{b,i} at b*Lmax+i, then w^i at d*Lmax+i
    Laurent self;             // -z'(w) z'(-w) / (z(w) - z(-w))^2
    Laurent iota;             // 1 / (y(z) - y(sigma z))
    std::vector<std::vector<CVec>> M;  // M[k][f][f'] flattened per k
  };

  int fn_E(int b, int i) const { return b * Lmax_ + i; }
  int fn_w(int i) const { return curve_.d() * Lmax_ + i; }
  int fn_count() const { return (curve_.d() + 1) * Lmax_; }

  void build_frames() {
    int d = curve_.d();
    std::size_t n = static_cast<std::size_t>(top_ + Lmax_ + 8);
    for (auto a : curve_.branch_points()) frames_.push_back(local_frame(a, curve_.config(), n));
    for (int a = 0; a < d; ++a) {
      AtAlpha A;
      const auto& fa = frames_[static_cast<std::size_t>(a)];
      CVec za = fa.t;
      A.fn.resize(static_cast<std::size_t>(fn_count()));
      for (int b = 0; b < d; ++b) {
        auto G = mixed_log(b, a);
        for (int i = 0; i < Lmax_; ++i) {
          Laurent e;
          if (a == b) {
            e.lo = -i - 2;
            e.c.assign(static_cast<std::size_t>(top_ - e.lo + 1), cd(0));
            e.c[0] = static_cast<double>(i + 1);
          } else {
            e.lo = 0;
            e.c.assign(static_cast<std::size_t>(top_ + 1), cd(0));
          }
          for (int m = 0; m <= top_; ++m) e.c[static_cast<std::size_t>(m - e.lo)] += G[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
          A.fn[static_cast<std::size_t>(fn_E(b, i))] = std::move(e);
        }
      }
      for (int i = 0; i < Lmax_; ++i) {
        Laurent e;
        e.lo = i;
        e.c = {cd(1)};
        A.fn[static_cast<std::size_t>(fn_w(i))] = e;
      }
      // y(z) - y(sigma z), odd with valuation 1
      CVec Qc(static_cast<std::size_t>(d + 1), cd(0));
      for (int j = 1; j <= d; ++j) Qc[static_cast<std::size_t>(j)] = curve_.q()[static_cast<std::size_t>(j - 1)];
      CVec yw(n, cd(0));
      for (int j = 1; j <= d; ++j) {
        auto p = ser::shifted_power(fa.alpha, za, j, n);
        for (std::size_t i = 0; i < n; ++i) yw[i] += Qc[static_cast<std::size_t>(j)] * p[i];
      }
      n = static_cast<std::size_t>(top_ + 4);
      CVec dy(n - 1, cd(0));
      for (std::size_t i = 1; i < n; i += 2) dy[i - 1] = 2.0 * yw[i];
      auto dyinv = ser::inv(dy, n - 1);
      A.iota.lo = -1;
      A.iota.c.assign(dyinv.begin(), dyinv.begin() + (top_ + 2));
      // self term
      CVec zp = ser::deriv(za);
      CVec zpm = zp;
      for (std::size_t i = 1; i < zpm.size(); i += 2) zpm[i] = -zpm[i];
      CVec diff(n - 1, cd(0));  // (z(w) - z(-w)) / w
      for (std::size_t i = 1; i < n; i += 2) diff[i - 1] = 2.0 * za[i];
      auto d2 = ser::inv(ser::mul(diff, diff, n - 1), n - 1);
      auto num = ser::mul(zp, zpm, n - 1);
      auto s = ser::mul(num, d2, n - 1);
      A.self.lo = -2;
      A.self.c.resize(static_cast<std::size_t>(top_ + 3));
      for (std::size_t i = 0; i < A.self.c.size(); ++i) A.self.c[i] = -s[i];
      // bilinear table M_k[f][f'] = [w^{-2k-1}] f(w) (-f'(-w)) iota(w)
      int F = fn_count();
      std::vector<Laurent> fi(static_cast<std::size_t>(F)), gr(static_cast<std::size_t>(F));
      for (int f = 0; f < F; ++f) {
        fi[static_cast<std::size_t>(f)] = lmul(A.fn[static_cast<std::size_t>(f)], A.iota, top_);
        gr[static_cast<std::size_t>(f)] = A.fn[static_cast<std::size_t>(f)].reflected().scaled(-1.0);
      }
      int kmax = (Lmax_ - 1) / 2;
      A.M.assign(static_cast<std::size_t>(kmax + 1), std::vector<CVec>(static_cast<std::size_t>(F), CVec(static_cast<std::size_t>(F), cd(0))));
      for (int k = 0; k <= kmax; ++k) {
        int p = -2 * k - 1;
        for (int f = 0; f < F; ++f) {
          const auto& a1 = fi[static_cast<std::size_t>(f)];
          for (int f2 = 0; f2 < F; ++f2) {
            const auto& b1 = gr[static_cast<std::size_t>(f2)];
            cd acc(0);
            for (std::size_t i = 0; i < a1.c.size(); ++i) {
              int rest = p - (a1.lo + static_cast<int>(i));
              if (rest < b1.lo) break;
              acc += a1.c[i] * b1.at(rest);
            }
            A.M[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)][static_cast<std::size_t>(f2)] = acc;
          }
        }
      }
      at_.push_back(std::move(A));
    }
  }

  // G[i][m] = [u^i w^m] d_u d_w log(z_b(u) - z_a(w)), less log(u - w) when a = b
  std::vector<CVec> mixed_log(int b, int a) const {
    const auto& tb = frames_[static_cast<std::size_t>(b)].t;
    const auto& ta = frames_[static_cast<std::size_t>(a)].t;
    int U = Lmax_ + 1, W = top_ + 2;
    auto idx = [&](int i, int m) { return static_cast<std::size_t>(i * (W + 1) + m); };
    CVec F(static_cast<std::size_t>((U + 1) * (W + 1)), cd(0));
    if (a != b) {
      F[idx(0, 0)] = frames_[static_cast<std::size_t>(b)].alpha - frames_[static_cast<std::size_t>(a)].alpha;
      for (int i = 1; i <= U; ++i) F[idx(i, 0)] += tb[static_cast<std::size_t>(i)];
      for (int m = 1; m <= W; ++m) F[idx(0, m)] -= ta[static_cast<std::size_t>(m)];
    } else {
      // (t(u) - t(w)) / (u - w) = sum_k t_k h_{k-1}(u, w)
      for (int i = 0; i <= U; ++i)
        for (int m = 0; m <= W; ++m) {
          std::size_t k = static_cast<std::size_t>(i + m + 1);
          if (k < ta.size()) F[idx(i, m)] = ta[k];
        }
    }
    CVec Fu(F.size(), cd(0)), Finv(F.size(), cd(0));
    for (int i = 0; i < U; ++i)
      for (int m = 0; m <= W; ++m) Fu[idx(i, m)] = F[idx(i + 1, m)] * static_cast<double>(i + 1);
    for (int i = 0; i <= U; ++i)
      for (int m = 0; m <= W; ++m) {
        cd s = i == 0 && m == 0 ? cd(1) : cd(0);
        for (int i2 = 0; i2 <= i; ++i2)
          for (int m2 = 0; m2 <= m; ++m2)
            if (i2 || m2) s -= F[idx(i2, m2)] * Finv[idx(i - i2, m - m2)];
        Finv[idx(i, m)] = s / F[0];
      }
    std::vector<CVec> G(static_cast<std::size_t>(Lmax_), CVec(static_cast<std::size_t>(top_ + 1), cd(0)));
    for (int i = 0; i < Lmax_; ++i)
      for (int m = 0; m <= top_; ++m) {
        // [u^i w^{m+1}] Fu * Finv, times (m+1)
        cd acc(0);
        for (int i2 = 0; i2 <= i; ++i2)
          for (int m2 = 0; m2 <= m + 1; ++m2) acc += Fu[idx(i2, m2)] * Finv[idx(i - i2, m + 1 - m2)];
        G[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] = acc * static_cast<double>(m + 1);
      }
    return G;
  }

  // principal parts of phihat^j_m at branch point a, j = 1..d, m < Kc
  std::vector<std::vector<Laurent>> phihat_principal(int a, int Kc) const {
    int d = curve_.d();
    std::size_t n = static_cast<std::size_t>(2 * Kc + 4);
    const auto& fa = frames_[static_cast<std::size_t>(a)];
    CVec den(n + 1, cd(0));
    for (int j = 1; j <= d; ++j) {
      auto p = ser::shifted_power(fa.alpha, fa.t, j, n + 1);
      for (std::size_t i = 0; i <= n; ++i) den[i] -= curve_.s() * static_cast<double>(j) * curve_.q()[static_cast<std::size_t>(j - 1)] * p[i];
    }
    den[0] += 1.0;
    CVec den1(den.begin() + 1, den.end());
    auto dinv = ser::inv(den1, n);
    std::vector<std::vector<Laurent>> out(static_cast<std::size_t>(d));
    for (int j = 1; j <= d; ++j) {
      auto num = ser::shifted_power(fa.alpha, fa.t, j, n);
      Laurent l;
      l.lo = -1;
      l.c = ser::mul(num, dinv, n);
      for (auto& x : l.c) x *= static_cast<double>(j);
      for (int m = 0; m < Kc; ++m) {
        out[static_cast<std::size_t>(j - 1)].push_back(l);
        l = dx_local(l);
      }
    }
    return out;
  }

  // one factor of a product term: functions f (universal index) times a tensor over the remaining slots
  struct Factor {
    std::vector<int> fns;
    std::vector<std::vector<int>> slot_map;  // per remaining slot: own index -> output slot index
    std::vector<int> dims;
    CVec data;  // fns.size() x prod(dims)
    std::size_t rest() const {
      std::size_t r = 1;
      for (int x : dims) r *= static_cast<std::size_t>(x);
      return r;
    }
  };

  Factor stable_factor(const CorrelatorRep& w, int Lout) const {
    Factor F;
    int Ds = w.slot_dim();
    for (int b = 0; b < w.d; ++b)
      for (int i = 0; i < w.L; ++i) F.fns.push_back(fn_E(b, i));
    std::vector<int> map(static_cast<std::size_t>(Ds));
    for (int b = 0; b < w.d; ++b)
      for (int i = 0; i < w.L; ++i) map[static_cast<std::size_t>(b * w.L + i)] = b * Lout + i;
    for (int s = 1; s < w.n; ++s) {
      F.slot_map.push_back(map);
      F.dims.push_back(Ds);
    }
    F.data = w.data;
    return F;
  }

  Factor w02_factor(int a, int Lout) const {
    Factor F;
    std::vector<int> map(static_cast<std::size_t>(Lout));
    for (int i = 0; i < Lout; ++i) {
      F.fns.push_back(fn_w(i));
      map[static_cast<std::size_t>(i)] = a * Lout + i;
    }
    F.slot_map.push_back(map);
    F.dims.push_back(Lout);
    F.data.assign(static_cast<std::size_t>(Lout * Lout), cd(0));
    for (int i = 0; i < Lout; ++i) F.data[static_cast<std::size_t>(i * Lout + i)] = 1;
    return F;
  }

  Factor factor(int h, int m, int a, int Lout) {
    if (h == 0 && m == 2) return w02_factor(a, Lout);
    return stable_factor(omega(h, m), Lout);
  }

  CorrelatorRep step(int g, int n) {
    int d = curve_.d();
    CorrelatorRep out{g, n, d, slot_length(g, n), {}};
    int L = out.L;
    out.data.assign(out.size(), cd(0));
    int Ds = out.slot_dim();
    int kmax = (L - 1) / 2;
    std::vector<int> I;
    for (int i = 1; i < n; ++i) I.push_back(i);
    for (int a = 0; a < d; ++a) {
      const auto& A = at_[static_cast<std::size_t>(a)];
      // omega_{g-1,n+1}(z, sigma z, I)
      if (g >= 1) {
        if (g - 1 == 0 && n + 1 == 2) {
          for (int k = 0; k <= kmax; ++k) {
            cd v(0);
            for (std::size_t i = 0; i < A.self.c.size(); ++i) {
              int rest = -2 * k - 1 - (A.self.lo + static_cast<int>(i));
              v += A.self.c[i] * A.iota.at(rest);
            }
            out.data[static_cast<std::size_t>(a * L + 2 * k)] += v / (2.0 * (2 * k + 1));
          }
        } else {
          const auto& W = omega(g - 1, n + 1);
          int Dw = W.slot_dim();
          std::size_t rest = 1;
          for (int i = 0; i < n - 1; ++i) rest *= static_cast<std::size_t>(Dw);
          for (int k = 0; k <= kmax; ++k) {
            const auto& M = A.M[static_cast<std::size_t>(k)];
            for (std::size_t r = 0; r < rest; ++r) {
              cd v(0);
              for (int t0 = 0; t0 < Dw; ++t0) {
                int f0 = fn_E(t0 / W.L, t0 % W.L);
                for (int t1 = 0; t1 < Dw; ++t1) {
                  cd c = W.data[(static_cast<std::size_t>(t0) * static_cast<std::size_t>(Dw) + static_cast<std::size_t>(t1)) * rest + r];
                  if (c == cd(0)) continue;
                  v += c * M[static_cast<std::size_t>(f0)][static_cast<std::size_t>(fn_E(t1 / W.L, t1 % W.L))];
                }
              }
              if (v == cd(0)) continue;
              // scatter
              std::size_t rr = r;
              std::vector<int> idx(static_cast<std::size_t>(n));
              for (int s = n - 1; s >= 1; --s) {
                int e = static_cast<int>(rr % static_cast<std::size_t>(Dw));
                rr /= static_cast<std::size_t>(Dw);
                idx[static_cast<std::size_t>(s)] = (e / W.L) * L + e % W.L;
              }
              idx[0] = a * L + 2 * k;
              out.at(idx) += v / (2.0 * (2 * k + 1));
            }
          }
        }
      }
      // sum over h + h' = g, J + J' = I
      int nI = n - 1;
      for (unsigned mask = 0; mask < (1u << nI); ++mask) {
        std::vector<int> J, Jp;
        for (int i = 0; i < nI; ++i) (mask >> i & 1 ? J : Jp).push_back(I[static_cast<std::size_t>(i)]);
        for (int h = 0; h <= g; ++h) {
          int m1 = static_cast<int>(J.size()) + 1, m2 = static_cast<int>(Jp.size()) + 1, h2 = g - h;
          if ((h == 0 && m1 == 1) || (h2 == 0 && m2 == 1)) continue;
          Factor F1 = factor(h, m1, a, L), F2 = factor(h2, m2, a, L);
          std::size_t r1 = F1.rest(), r2 = F2.rest();
          for (int k = 0; k <= kmax; ++k) {
            const auto& M = A.M[static_cast<std::size_t>(k)];
            // T[f'][r1] = sum_f F1[f][r1] M[f][f']
            CVec T(F2.fns.size() * r1, cd(0));
            for (std::size_t f = 0; f < F1.fns.size(); ++f)
              for (std::size_t x = 0; x < r1; ++x) {
                cd c = F1.data[f * r1 + x];
                if (c == cd(0)) continue;
                const auto& row = M[static_cast<std::size_t>(F1.fns[f])];
                for (std::size_t f2 = 0; f2 < F2.fns.size(); ++f2) T[f2 * r1 + x] += c * row[static_cast<std::size_t>(F2.fns[f2])];
              }
            std::vector<int> idx(static_cast<std::size_t>(n));
            idx[0] = a * L + 2 * k;
            for (std::size_t x = 0; x < r1; ++x) {
              // slots of J
              std::size_t xx = x;
              for (int s = static_cast<int>(J.size()) - 1; s >= 0; --s) {
                int e = static_cast<int>(xx % static_cast<std::size_t>(F1.dims[static_cast<std::size_t>(s)]));
                xx /= static_cast<std::size_t>(F1.dims[static_cast<std::size_t>(s)]);
                idx[static_cast<std::size_t>(J[static_cast<std::size_t>(s)])] = F1.slot_map[static_cast<std::size_t>(s)][static_cast<std::size_t>(e)];
              }
              for (std::size_t y = 0; y < r2; ++y) {
                cd v(0);
                for (std::size_t f2 = 0; f2 < F2.fns.size(); ++f2) {
                  cd c = F2.data[f2 * r2 + y];
                  if (c != cd(0)) v += T[f2 * r1 + x] * c;
                }
                if (v == cd(0)) continue;
                std::size_t yy = y;
                for (int s = static_cast<int>(Jp.size()) - 1; s >= 0; --s) {
                  int e = static_cast<int>(yy % static_cast<std::size_t>(F2.dims[static_cast<std::size_t>(s)]));
                  yy /= static_cast<std::size_t>(F2.dims[static_cast<std::size_t>(s)]);
                  idx[static_cast<std::size_t>(Jp[static_cast<std::size_t>(s)])] = F2.slot_map[static_cast<std::size_t>(s)][static_cast<std::size_t>(e)];
                }
                out.at(idx) += v / (2.0 * (2 * k + 1));
              }
            }
          }
        }
      }
    }
    (void)Ds;
    return out;
  }

  SpectralCurve curve_;
  int level_;
  int Lmax_ = 1;
  int top_ = 0;
  std::vector<LocalFrame> frames_;
  std::vector<AtAlpha> at_;
  std::map<std::pair<int, int>, CorrelatorRep> cache_;
  std::map<std::pair<int, int>, NumericCTable> tables_;
  PhiCache phi_cache_{curve_.d()};
  std::map<std::tuple<int, int, int>, cd> phi_values_;
};

}  // namespace hurwitz::tr

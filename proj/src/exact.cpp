#include "clades/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "clades/errors.hpp"
#include "clades/kernels.hpp"

namespace clades {

double alpha_closed() { return (1.0 - std::exp(-2.0)) / 4.0; }

ExactTables build_mu_nu(int64_t nmax) {
  if (nmax < 1) throw std::invalid_argument("build_mu_nu: nmax must be >= 1");
  ExactTables t;
  t.nmax = nmax;
  t.mu.assign(static_cast<std::size_t>(nmax + 1), 0.0);
  t.nu.assign(static_cast<std::size_t>(nmax + 1), 0.0);
  t.toll_prefix.assign(static_cast<std::size_t>(nmax + 1), 0.0);
  t.mu[1] = t.nu[1] = 1.0;
  t.toll_prefix[1] = 2.0 * t.mu[1] / (2.0 * 3.0);
  for (int64_t n = 2; n <= nmax; ++n) {
    const auto i = static_cast<std::size_t>(n);
    t.mu[i] = (2.0 / static_cast<double>(n)) * (1.0 - t.nu[i - 1]);
    t.nu[i] = static_cast<double>(n + 1) * t.toll_prefix[i - 1] + t.mu[i];
    t.toll_prefix[i] =
        t.toll_prefix[i - 1] + 2.0 * t.mu[i] / (static_cast<double>(n + 1) * static_cast<double>(n + 2));
  }
  return t;
}

double alpha_series(int64_t nmax) {
  const ExactTables t = build_mu_nu(nmax);
  return t.toll_prefix[static_cast<std::size_t>(nmax)];
}

void build_psi(int64_t kmax, ExactTables& t) {
  if (kmax > t.nmax) throw TableTooShortError(t.nmax, kmax);
  t.psi_max = kmax;
  t.psi.assign(static_cast<std::size_t>(kmax + 1), 0.0);
  t.psi_prefix.assign(static_cast<std::size_t>(kmax + 1), 0.0);
  const double* nu = t.nu.data();
  for (int64_t k = 1; k <= kmax; ++k) {
    const auto i = static_cast<std::size_t>(k);
    double p = 0.0;
    if (k >= 2) {
      double cross = 0.0;
      if (k >= 3)
        cross = kern::mirrored_sq_sum(nu, 1, static_cast<std::size_t>(k - 2),
                                      static_cast<std::size_t>(k - 1), nu[i]);
      const double edge = nu[i] - 1.0;  // g(k,0,k-1) + nu_{k-1} - nu_k = 1 - nu_k ... squared below
      p = cross / static_cast<double>(k) + (2.0 / static_cast<double>(k)) * edge * edge;
    }
    // k = 1: phi(T_1) = g(T_1) + 2 nu_0 - nu_1 = 0 exactly
    t.psi[i] = p;
    t.psi_prefix[i] = t.psi_prefix[i - 1] +
                      2.0 * p / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
  }
}

double var_G_exact(int64_t n, const ExactTables& t) {
  if (n < 1) throw std::invalid_argument("var_G_exact: n must be >= 1");
  if (n > t.psi_max) throw TableTooShortError(t.psi_max, n);
  const auto i = static_cast<std::size_t>(n);
  return static_cast<double>(n + 1) * t.psi_prefix[i - 1] + t.psi[i];
}

CutoffTables build_cutoff_tables(int64_t nmax, int64_t cutoff, const ExactTables& t) {
  if (nmax > t.nmax) throw TableTooShortError(t.nmax, nmax);
  if (cutoff < 0) throw std::invalid_argument("build_cutoff_tables: cutoff must be >= 0");
  CutoffTables ct;
  ct.cutoff = cutoff;
  ct.nmax = nmax;
  ct.nu_cut.assign(static_cast<std::size_t>(nmax + 1), 0.0);
  ct.psi_cut.assign(static_cast<std::size_t>(nmax + 1), 0.0);
  ct.psi_cut_prefix.assign(static_cast<std::size_t>(nmax + 1), 0.0);
  for (int64_t m = 1; m <= nmax; ++m) {
    const auto i = static_cast<std::size_t>(m);
    const int64_t limit = std::min(m - 1, cutoff);
    double v = static_cast<double>(m + 1) * (limit >= 1 ? t.toll_prefix[static_cast<std::size_t>(limit)] : 0.0);
    if (m <= cutoff) v += t.mu[i];
    ct.nu_cut[i] = v;
  }
  const double* nup = ct.nu_cut.data();
  for (int64_t k = 2; k <= nmax; ++k) {
    const auto i = static_cast<std::size_t>(k);
    double cross = 0.0;
    if (k >= 3)
      cross = kern::mirrored_sq_sum(nup, 1, static_cast<std::size_t>(k - 2),
                                    static_cast<std::size_t>(k - 1), nup[i]);
    const double g_cut = k <= cutoff ? 1.0 - t.nu[i - 1] : 0.0;
    const double edge = g_cut + nup[i - 1] - nup[i];
    ct.psi_cut[i] = cross / static_cast<double>(k) +
                    (2.0 / static_cast<double>(k)) * edge * edge;
  }
  for (int64_t k = 1; k <= nmax; ++k) {
    const auto i = static_cast<std::size_t>(k);
    ct.psi_cut_prefix[i] =
        ct.psi_cut_prefix[i - 1] +
        2.0 * ct.psi_cut[i] / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
  }
  return ct;
}

double var_Gprime_exact(int64_t n, const CutoffTables& ct) {
  if (n < 1) throw std::invalid_argument("var_Gprime_exact: n must be >= 1");
  if (n > ct.nmax) throw TableTooShortError(ct.nmax, n);
  const auto i = static_cast<std::size_t>(n);
  return static_cast<double>(n + 1) * ct.psi_cut_prefix[i - 1] + ct.psi_cut[i];
}

double var_Gprime_exact(int64_t n, int64_t cutoff, const ExactTables& t) {
  return var_Gprime_exact(n, build_cutoff_tables(n, cutoff, t));
}

FDist build_f_dist(int64_t cap, int64_t cap_limit) {
  if (cap < 1) throw std::invalid_argument("build_f_dist: cap must be >= 1");
  if (cap > cap_limit) throw CapTooLargeError(cap, cap_limit);
  FDist d;
  d.cap = cap;
  d.rows.resize(static_cast<std::size_t>(cap + 1));
  d.rows[0] = {1.0};
  if (cap >= 1) d.rows[1] = {0.0, 1.0};
  std::vector<double> acc, comp, diag, diag_comp;
  std::vector<int64_t> hi(static_cast<std::size_t>(cap + 1), 0);  // top of support
  hi[1] = 1;
  for (int64_t n = 2; n <= cap; ++n) {
    acc.assign(static_cast<std::size_t>(n + 1), 0.0);
    comp.assign(static_cast<std::size_t>(n + 1), 0.0);
    // split j | n-1-j for j = 1..n-2; the two orientations of each
    // unordered pair contribute identical convolutions, so sum each pair
    // once and double, with the self-paired middle (odd n-1) kept separate
    for (int64_t j = 1; 2 * j < n - 1; ++j) {
      const int64_t l = n - 1 - j;
      const auto& a = d.rows[static_cast<std::size_t>(j)];
      const auto& b = d.rows[static_cast<std::size_t>(l)];
      kern::conv_accum(acc.data() + 2, comp.data() + 2, a.data() + 1,
                       static_cast<std::size_t>(hi[static_cast<std::size_t>(j)]), b.data() + 1,
                       static_cast<std::size_t>(hi[static_cast<std::size_t>(l)]));
    }
    const bool has_diag = (n - 1) % 2 == 0 && n >= 3;
    if (has_diag) {
      const int64_t j = (n - 1) / 2;
      diag.assign(static_cast<std::size_t>(n + 1), 0.0);
      diag_comp.assign(static_cast<std::size_t>(n + 1), 0.0);
      const auto& a = d.rows[static_cast<std::size_t>(j)];
      kern::conv_accum(diag.data() + 2, diag_comp.data() + 2, a.data() + 1,
                       static_cast<std::size_t>(hi[static_cast<std::size_t>(j)]), a.data() + 1,
                       static_cast<std::size_t>(hi[static_cast<std::size_t>(j)]));
    }
    auto& row = d.rows[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n + 1), 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    int64_t top = 1;
    for (int64_t m = 2; m <= n; ++m) {
      const auto im = static_cast<std::size_t>(m);
      // fold in the per-slot compensation on the way out
      const double p =
          (2.0 * (acc[im] + comp[im]) + (has_diag ? diag[im] + diag_comp[im] : 0.0)) * inv_n;
      row[im] = p;
      if (p > 0.0) top = m;
    }
    row[1] = 2.0 * inv_n;
    hi[static_cast<std::size_t>(n)] = top;
  }
  return d;
}

double fdist_mean(int64_t n, const FDist& d) {
  if (n < 0 || n > d.cap) throw TableTooShortError(d.cap, n);
  const auto& row = d.row(n);
  double s = 0.0, c = 0.0;
  for (std::size_t m = 0; m < row.size(); ++m) {
    const double y = static_cast<double>(m) * row[m] - c;
    const double t2 = s + y;
    c = (t2 - s) - y;
    s = t2;
  }
  return s;
}

namespace {

template <class F>
double fdist_expect(int64_t n, const FDist& d, F&& fn) {
  const auto& row = d.row(n);
  double s = 0.0, c = 0.0;
  for (std::size_t m = 0; m < row.size(); ++m) {
    if (row[m] == 0.0) continue;
    const double y = fn(static_cast<double>(m)) * row[m] - c;
    const double t2 = s + y;
    c = (t2 - s) - y;
    s = t2;
  }
  return s;
}

}  // namespace

double central_moment(int64_t n, int k, const FDist& d) {
  if (n < 0 || n > d.cap) throw TableTooShortError(d.cap, n);
  if (k < 1) throw std::invalid_argument("central_moment: k must be >= 1");
  const double mean = fdist_mean(n, d);
  return fdist_expect(n, d, [&](double m) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= m - mean;
    return p;
  });
}

double abs_central_moment(int64_t n, double p, const FDist& d) {
  if (n < 0 || n > d.cap) throw TableTooShortError(d.cap, n);
  const double mean = fdist_mean(n, d);
  return fdist_expect(n, d, [&](double m) { return std::pow(std::abs(m - mean), p); });
}

double f_abs_moment(int64_t n, double p, const FDist& d) {
  if (n < 1) throw std::invalid_argument("f_abs_moment: n must be >= 1");
  if (n == 1) return 1.0;
  if (n - 1 > d.cap) throw TableTooShortError(d.cap, n - 1);
  const double e = fdist_expect(n - 1, d, [&](double m) { return std::pow(std::abs(1.0 - m), p); });
  return 2.0 / static_cast<double>(n) * e;
}

double sum_f_abs_exact(int64_t n, double p, const FDist& d) {
  if (n < 1) throw std::invalid_argument("sum_f_abs_exact: n must be >= 1");
  if (n - 1 > d.cap) throw TableTooShortError(d.cap, n - 1);
  double s = 0.0, c = 0.0;
  for (int64_t k = 1; k <= n - 1; ++k) {
    const double term =
        2.0 / (static_cast<double>(k + 1) * static_cast<double>(k + 2)) * f_abs_moment(k, p, d);
    const double y = term - c;
    const double t2 = s + y;
    c = (t2 - s) - y;
    s = t2;
  }
  return static_cast<double>(n + 1) * s + f_abs_moment(n, p, d);
}

double expected_subtree_count(int64_t n, int64_t k) {
  if (n < 1 || k < 1) throw std::invalid_argument("expected_subtree_count: need n, k >= 1");
  if (k > n) return 0.0;
  if (k == n) return 1.0;
  return 2.0 * static_cast<double>(n + 1) / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
}

double expected_Zk(int64_t n, int64_t k) {
  if (n < 1 || k < 1) throw std::invalid_argument("expected_Zk: need n, k >= 1");
  if (k > n) return 0.0;
  if (k == n) return n == 1 ? 1.0 : 2.0 / static_cast<double>(n);
  const double green_prob = k == 1 ? 1.0 : 2.0 / static_cast<double>(k);
  return expected_subtree_count(n, k) * green_prob;
}

double expected_Zk_display(int64_t n, int64_t k) {
  if (n < 1 || k < 1) throw std::invalid_argument("expected_Zk_display: need n, k >= 1");
  if (k > n) return 0.0;
  if (k == n) return 2.0 / static_cast<double>(n);
  return 4.0 * static_cast<double>(n) /
         (static_cast<double>(k) * static_cast<double>(k + 1) * static_cast<double>(k + 2));
}

double expected_Zk_tail(int64_t n, int64_t cutoff) {
  double s = 0.0;
  for (int64_t k = cutoff + 1; k <= n; ++k) s += expected_Zk(n, k);
  return s;
}

double e_fk_ct(int k) {
  if (k < 1) throw std::invalid_argument("e_fk_ct: k must be >= 1");
  // 2^(k-1)/k! as an iterative product
  double t = 1.0;
  for (int i = 2; i <= k; ++i) t *= 2.0 / static_cast<double>(i);
  return static_cast<double>(k) * static_cast<double>(k + 3) /
         (static_cast<double>(k + 1) * static_cast<double>(k + 2)) * t;
}

double chain_green_prob(const std::vector<int64_t>& gaps) {
  const auto k = static_cast<int64_t>(gaps.size()) + 1;
  double p = static_cast<double>(k + 3) / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] < 0) throw std::invalid_argument("chain_green_prob: gaps must be >= 0");
    p *= std::pow(1.0 / static_cast<double>(i + 3), static_cast<double>(gaps[i] + 1));
  }
  return p;
}

double kummer_1f1_unit(double b, double z) {
  if (!(b > 0.0)) throw std::domain_error("kummer_1f1_unit: b must be > 0");
  double term = 1.0, sum = 1.0;
  for (int j = 0; j < 10000; ++j) {
    term *= z / (b + static_cast<double>(j));
    sum += term;
    if (std::abs(term) < 1e-15) return sum;
  }
  throw NonConvergenceError("kummer_1f1_unit: no convergence within 10^4 terms");
}

namespace {

// rising factorial (x)^(k) = x(x+1)...(x+k-1)
double rising(double x, int k) {
  if (k <= 20) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= x + static_cast<double>(i);
    return p;
  }
  return std::exp(std::lgamma(x + static_cast<double>(k)) - std::lgamma(x));
}

}  // namespace

// The race that certifies a chain end gives the stopping clock a win
// probability of lambda/(k+1+lambda), so every chain expectation carries a
// leading factor lambda; it collapses into k! only when lambda = 1.
double e_fk_ct_lambda(int k, double lambda) {
  if (k < 1) throw std::invalid_argument("e_fk_ct_lambda: k must be >= 1");
  if (!(lambda > 0.0)) throw std::domain_error("e_fk_ct_lambda: lambda must be > 0");
  if (k <= 40)
    return lambda *
           (std::pow(2.0, k - 1) / rising(lambda, k) - std::pow(2.0, k) / rising(lambda, k + 2));
  const double l2 = std::lgamma(lambda);
  const double a = (k - 1) * std::numbers::ln2 - (std::lgamma(lambda + k) - l2);
  const double b = k * std::numbers::ln2 - (std::lgamma(lambda + k + 2) - l2);
  return lambda * (std::exp(a) - std::exp(b));
}

double e_f_ct_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("e_f_ct_lambda: lambda must be > 0");
  return lambda * (0.25 + (lambda - 1.0) / (2.0 * lambda * (lambda + 1.0)) -
                   0.25 * kummer_1f1_unit(lambda, -2.0));
}

double e_F_ct_lambda(double lambda) {
  if (!(lambda > 1.0)) throw std::domain_error("e_F_ct_lambda: requires lambda > 1");
  return (lambda + 1.0) / (lambda - 1.0) * e_f_ct_lambda(lambda);
}

double ct_lambda_size_pmf(double lambda, int64_t n) {
  if (!(lambda > 0.0)) throw std::domain_error("ct_lambda_size_pmf: lambda must be > 0");
  if (n < 1) throw std::invalid_argument("ct_lambda_size_pmf: n must be >= 1");
  if (n <= 20) {
    // lambda * n! / (2+lambda)^(n)
    double p = lambda;
    for (int64_t i = 1; i <= n; ++i) p *= static_cast<double>(i) / (lambda + 1.0 + static_cast<double>(i));
    return p;
  }
  const double logp = std::log(lambda) + std::lgamma(static_cast<double>(n + 1)) +
                      std::lgamma(lambda + 2.0) - std::lgamma(lambda + 2.0 + static_cast<double>(n));
  return std::exp(logp);
}

double genfunc_residual(double lambda, int64_t trunc, const ExactTables& t) {
  if (trunc > t.nmax) throw TableTooShortError(t.nmax, trunc);
  const double target = e_F_ct_lambda(lambda);
  double s = 0.0, c = 0.0;
  for (int64_t n = 1; n <= trunc; ++n) {
    const double y = ct_lambda_size_pmf(lambda, n) * t.nu[static_cast<std::size_t>(n)] - c;
    const double t2 = s + y;
    c = (t2 - s) - y;
    s = t2;
  }
  return std::abs(s - target);
}

}  // namespace clades

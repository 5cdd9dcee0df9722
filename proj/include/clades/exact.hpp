#pragma once

#include <cstdint>
#include <vector>

namespace clades {

using std::int64_t;

// alpha = E f(T) = (1 - e^-2)/4, the linear-growth constant of E F.
double alpha_closed();

// Truncated series sum_{n<=nmax} 2 mu_n / ((n+1)(n+2)); converges to
// alpha with a Theta(1/nmax) tail.
double alpha_series(int64_t nmax);

// Exact tables of mu_n = E f(T_n), nu_n = E F(T_n), and the split-variance
// weights psi_k, all in double precision. The prefix arrays make the
// variance identities O(1) per query once the tables are built.
struct ExactTables {
  int64_t nmax = 0;
  std::vector<double> mu;           // 0..nmax
  std::vector<double> nu;           // 0..nmax
  std::vector<double> toll_prefix;  // S_n = sum_{k<=n} 2 mu_k/((k+1)(k+2))
  int64_t psi_max = 0;
  std::vector<double> psi;         // 0..psi_max
  std::vector<double> psi_prefix;  // sum_{k<=n} 2 psi_k/((k+1)(k+2))
};

// Interleaved O(nmax) recursion: mu_n = (2/n)(1 - nu_{n-1}),
// nu_n = (n+1) S_{n-1} + mu_n.
ExactTables build_mu_nu(int64_t nmax);

// psi_k = (1/k) sum_{j=1}^{k-2} (nu_j + nu_{k-1-j} - nu_k)^2 + (2/k)(nu_k - 1)^2,
// by direct summation (O(kmax^2) total; a convolution-based build would cut
// this to O(kmax log kmax) if tables beyond ~10^5 are ever needed).
void build_psi(int64_t kmax, ExactTables& t);

// Var G(T_n) = (n+1) sum_{k<n} 2 psi_k/((k+1)(k+2)) + psi_n, exactly.
double var_G_exact(int64_t n, const ExactTables& t);

// Cutoff analogue: nu'_m = E G'(T_m) and psi'_k = E phi(T_k)^2 with
// phi(T) = g'(T) + nu'_{|TL|} + nu'_{|TR|} - nu'_{|T|}.
struct CutoffTables {
  int64_t cutoff = 0;
  int64_t nmax = 0;
  std::vector<double> nu_cut;
  std::vector<double> psi_cut;
  std::vector<double> psi_cut_prefix;
};

CutoffTables build_cutoff_tables(int64_t nmax, int64_t cutoff, const ExactTables& t);

double var_Gprime_exact(int64_t n, const CutoffTables& ct);
double var_Gprime_exact(int64_t n, int64_t cutoff, const ExactTables& t);

// Exact distribution of F(T_n) for every n up to cap, by convolution DP
// over the uniform root split.
struct FDist {
  int64_t cap = 0;
  std::vector<std::vector<double>> rows;  // rows[n][m] = P(F(T_n) = m), m = 0..n
  const std::vector<double>& row(int64_t n) const { return rows[static_cast<std::size_t>(n)]; }
};

inline constexpr int64_t kFDistCapLimit = 512;

FDist build_f_dist(int64_t cap, int64_t cap_limit = kFDistCapLimit);

double fdist_mean(int64_t n, const FDist& d);
// E (F_n - E F_n)^k for integer k >= 1.
double central_moment(int64_t n, int k, const FDist& d);
// E |F_n - E F_n|^p for real p > 0.
double abs_central_moment(int64_t n, double p, const FDist& d);
// E |f(T_n)|^p = (2/n) E |1 - F(T_{n-1})|^p for n >= 2; 1 at n = 1.
double f_abs_moment(int64_t n, double p, const FDist& d);
// E sum_v |f(T_{n,v})|^p, via the fringe-tree sum identity.
double sum_f_abs_exact(int64_t n, double p, const FDist& d);

// E #{v : |T_v| = k} in T_n.
double expected_subtree_count(int64_t n, int64_t k);
// E Z_{n,k}: expected number of green nodes of subtree size k (clades of
// size k+1), as the fringe count times the green probability 2/k (1 at k=1).
double expected_Zk(int64_t n, int64_t k);
// The k < n display from the literature, 4n/(k(k+1)(k+2)), which counts
// with the leaf-count parametrization; kept for comparison.
double expected_Zk_display(int64_t n, int64_t k);
// sum_{k > cutoff} E Z_{n,k}
double expected_Zk_tail(int64_t n, int64_t cutoff);

// E f_k(T) = k(k+3)/((k+1)(k+2)) * 2^(k-1)/k!
double e_fk_ct(int k);
// Probability that a fixed chain with the given gaps is green in T.
double chain_green_prob(const std::vector<int64_t>& gaps);

// Kummer's function with unit numerator parameter: 1F1(1; b; z).
double kummer_1f1_unit(double b, double z);

// Rate-lambda stopped-tree formulas.
double e_fk_ct_lambda(int k, double lambda);
double e_f_ct_lambda(double lambda);
double e_F_ct_lambda(double lambda);  // requires lambda > 1
double ct_lambda_size_pmf(double lambda, int64_t n);
// | sum_{n<=trunc} pmf(lambda,n) nu_n - E F(T^lambda) |
double genfunc_residual(double lambda, int64_t trunc, const ExactTables& t);

}  // namespace clades

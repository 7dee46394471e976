#pragma once

#include <optional>
#include <vector>

#include "binomcap/channel.hpp"

namespace binomcap::support_bounds {

// M[i][j] = E_X[T~_i(X) T~_j(X)], 0 <= i,j <= L-1.  Gram matrix of the first
// L shifted Chebyshev polynomials under the input law, so rank <= #atoms.
struct MomentMatrix {
  int dimension = 0;
  std::vector<std::vector<double>> entries;
};

// built from moments up to order 2L-2 via M_ij = (eps_{i+j} + eps_{|i-j|})/2
MomentMatrix moment_matrix(const channel::DiscreteInput& input, int L);

// ||M - D||_F^2 with D = diag(1, 1/2, ..., 1/2)
double frobenius_defect(const channel::DiscreteInput& input, int L);

// B_n(L) = (L-K) / (2L prod_{j=1}^{2L-2} (n+j)/(n-j+1)); requires
// 1 <= K < L <= (n+2)/2.  Product taken in the log domain.
double mixture_chi2_lower_bound(int K, int L, long long n);

struct BestL {
  int L = 0;
  double bound = 0.0;
};

// exhaustive scan of L in (K, floor((n+2)/2)]; smallest maximizer on ties
BestL best_admissible_L(int K, long long n);

// ((L-K)/(2L)) exp(-(2L-2)^2/(n-2L+3)), a closed-form relaxation of B_n(L)
double explicit_lower_bound(int K, int L, long long n);

// (t-1)^2 / (t - 1 - ln t), extended by continuity to zeta(1) = 2
double zeta(double t);

// 1 / (4 e 3^{7/4} pi^{7/4}), the output-ratio constant
double c_star();

// 17 / ln(n pi/(2e)), valid for n >= 444
double kl_gap_bound(long long n);

// u_n = zeta(1/c_star) * kl_gap_bound(n), n >= 444
double chi2_output_bound(long long n);

// min of the two disjunction branches:
//   (n+2)/4   and   (4 - a + sqrt(a(4n + a + 4)))/8,  a = ln(1/(4 u_n))
// requires 0 < u_n < 1/4
double invert_chi2_to_support(double u_n, long long n);

struct SupportBoundReport {
  long long n = 0;
  double c_star_value = 0.0;
  double zeta_value = 0.0;            // zeta(1/c_star)
  std::optional<double> u_n;          // absent below 444
  std::optional<double> alpha_n;      // ln(1/(4 u_n)) when u_n is present
  double two_term = 0.0;
  double exp_capacity_term = 0.0;
  double loglog_term = 0.0;           // (1/8) sqrt(n log+(ln(n pi/2e)/37850))
  long long final_bound = 0;          // ceil(max of the three terms)
};

// capacity may be any valid lower bound on C(n); the report stays valid
SupportBoundReport support_size_lower_bound(long long n, double capacity);

// same report with n given as ln(n), for n far beyond integer range; the
// capacity term uses the asymptote (the n -> inf limit of both bounds) and
// every term is reported as a natural log
struct LogNSupportBound {
  double log_n = 0.0;
  double u_n = 0.0;
  std::optional<double> alpha_n;       // present iff u_n < 1/4
  double log_two_term = 0.0;
  double log_exp_capacity_term = 0.0;
  double log_loglog_term = 0.0;        // -inf when the log+ clips to zero
  double log_final_bound = 0.0;
};

LogNSupportBound support_size_lower_bound_log_n(double log_n);

// audit constants from the output-ratio derivation; not used by any
// production bound
double ratio_A0();  // ln(2 pi) + 2 + (1/2) ln 3
double ratio_B0();  // 2 + ln 2 + (1/2) ln(3 pi)

// sum of the reference pmf over I_n = {ceil(n/3) .. floor(2n/3)};
// >= 1/(6 pi) for every n >= 2
double central_mass(long long n);

// second-difference comparison of d(y) = log q(y) - log q_ref(y) against the
// per-y bound G_y = ln[(y-1/2)(n-y-1/2)] - ln[(y+1/2)(n-y+1/2)]: an optimal
// output must satisfy d(y+1) - 2d(y) + d(y-1) >= G_y at every interior y.
struct ConcavityReport {
  bool ok = false;           // min_margin >= -1e-6
  double min_margin = 0.0;   // min_y of second difference minus G_y
  int argmin_y = 0;
};

ConcavityReport concavity_check(long long n, const channel::OutputPmf& output);

}  // namespace binomcap::support_bounds

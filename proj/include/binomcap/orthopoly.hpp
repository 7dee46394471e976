#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "binomcap/channel.hpp"

namespace binomcap::orthopoly {

// Explicit polynomial objects stop here; production quantities (eps_k, h_k)
// are computed by recurrence / log-products and have no degree cap.
inline constexpr int kMaxExplicitDegree = 30;

// Polynomial in x over the monomial basis, exact rational coefficients.
struct PolyX {
  std::vector<mpq_class> coef;  // coef[j] multiplies x^j

  int degree() const { return int(coef.size()) - 1; }
  void trim();
  mpq_class eval(const mpq_class& x) const;
  double eval(double x) const;
};

// Polynomial in y over the falling-factorial basis y_(k) = y(y-1)...(y-k+1).
struct PolyY {
  std::vector<mpq_class> coef;  // coef[k] multiplies y_(k)

  int degree() const { return int(coef.size()) - 1; }
  void trim();
  mpq_class eval_int(long y) const;  // exact at integer arguments
  double eval(double y) const;
};

struct ChebyshevMoments {
  std::optional<int> n;      // attached trial count, when meaningful
  std::vector<double> eps;   // eps[k] = E_X[T~_k(X)]; eps[0] == 1
};

// T~_k(x) = cos(k arccos(2x - 1)) as exact coefficients (k <= 30) ...
PolyX shifted_chebyshev(int k);
// ... and by the three-term recurrence for any k.
double shifted_chebyshev_eval(int k, double x);

// y_(k) |-> n_(k) x^k, extended linearly.
PolyX forward_operator(const PolyY& g, long long n);
// x^k |-> (y+1/2)_k / (n+1)_k, extended linearly.
PolyY backward_operator(const PolyX& f, long long n);

// | E_Y[g (Bf)] - E_X[f (Ag)] | with Y ~ P_{Y_r} (exact rational sum) and
// X the supplied quadrature representation of Beta(1/2,1/2).
double adjoint_residual(const PolyX& f, const PolyY& g,
                        const channel::DiscreteInput& input, int n);

// H_k with (A H_k) = T~_k: coefficients c_j / n_(j) in the ff basis.
PolyY hk_polynomial(int k, long long n);

double log_hk_norm(int k, long long n);  // ln h_k, h_k = (1/2) prod (n+j)/(n-j+1)
double hk_norm(int k, long long n);      // may overflow to +inf for k ~ n/2 large n

ChebyshevMoments chebyshev_moments(const channel::DiscreteInput& input, int m);

// sum_{k=1..m} eps_k^2 / h_k; equals chi2(P_Y || P_{Y_r}) at m = n.
double parseval_chi2(const channel::DiscreteInput& input, long long n, long long m);

// Exact rational helpers (test oracles).
mpq_class beta_binomial_exact(int n, int y);  // C(2y,y) C(2n-2y,n-y) / 4^n
mpq_class hk_norm_exact(int k, long long n);
PolyY poly_y_from_monomials(const std::vector<mpq_class>& monomial_coef);

namespace detail {
// verification-harness hook: skews h_k so dependent suites must fail
void corrupt_hk_norm_for_tests(bool enabled);
}  // namespace detail

}  // namespace binomcap::orthopoly

#include "binomcap/orthopoly.hpp"

#include <cmath>
#include <stdexcept>

#include "binomcap/numerics.hpp"

namespace binomcap::orthopoly {

namespace {

bool g_corrupt_hk = false;

void check_explicit_degree(int k, const char* who) {
  if (k < 0) throw std::domain_error(std::string(who) + ": negative degree");
  if (k > kMaxExplicitDegree)
    throw std::domain_error(std::string(who) + ": explicit degree cap is 30");
}

// Stirling numbers of the second kind, S(m, j): y^m = sum_j S(m,j) y_(j).
const std::vector<std::vector<mpz_class>>& stirling2() {
  static const std::vector<std::vector<mpz_class>> table = [] {
    const int N = kMaxExplicitDegree + 1;
    std::vector<std::vector<mpz_class>> t(N, std::vector<mpz_class>(N, 0));
    t[0][0] = 1;
    for (int m = 1; m < N; ++m)
      for (int j = 1; j <= m; ++j)
        t[m][j] = mpz_class(j) * t[m - 1][j] + t[m - 1][j - 1];
    return t;
  }();
  return table;
}

mpq_class rising_factorial(const mpq_class& a, int k) {
  mpq_class r = 1;
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

}  // namespace

void PolyX::trim() {
  while (!coef.empty() && coef.back() == 0) coef.pop_back();
}

mpq_class PolyX::eval(const mpq_class& x) const {
  mpq_class r = 0;
  for (size_t j = coef.size(); j-- > 0;) r = r * x + coef[j];
  return r;
}

double PolyX::eval(double x) const {
  double r = 0.0;
  for (size_t j = coef.size(); j-- > 0;) r = r * x + coef[j].get_d();
  return r;
}

void PolyY::trim() {
  while (!coef.empty() && coef.back() == 0) coef.pop_back();
}

mpq_class PolyY::eval_int(long y) const {
  mpq_class r = 0;
  mpq_class ff = 1;  // y_(k) built incrementally
  for (size_t k = 0; k < coef.size(); ++k) {
    if (k > 0) ff *= mpq_class(y - long(k) + 1);
    r += coef[k] * ff;
  }
  return r;
}

double PolyY::eval(double y) const {
  double r = 0.0;
  double ff = 1.0;
  for (size_t k = 0; k < coef.size(); ++k) {
    if (k > 0) ff *= y - double(k) + 1.0;
    r += coef[k].get_d() * ff;
  }
  return r;
}

PolyX shifted_chebyshev(int k) {
  check_explicit_degree(k, "shifted_chebyshev");
  PolyX tkm1{{1}};                // T~_0
  if (k == 0) return tkm1;
  PolyX tk{{-1, 2}};              // T~_1 = 2x - 1
  for (int j = 1; j < k; ++j) {
    // T~_{j+1} = (4x - 2) T~_j - T~_{j-1}
    PolyX next;
    next.coef.assign(tk.coef.size() + 1, 0);
    for (size_t i = 0; i < tk.coef.size(); ++i) {
      next.coef[i + 1] += 4 * tk.coef[i];
      next.coef[i] -= 2 * tk.coef[i];
    }
    for (size_t i = 0; i < tkm1.coef.size(); ++i) next.coef[i] -= tkm1.coef[i];
    tkm1 = std::move(tk);
    tk = std::move(next);
  }
  return tk;
}

double shifted_chebyshev_eval(int k, double x) {
  if (k < 0) throw std::domain_error("shifted_chebyshev_eval: negative degree");
  const double u = 2.0 * x - 1.0;
  double tkm1 = 1.0;
  if (k == 0) return tkm1;
  double tk = u;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * u * tk - tkm1;
    tkm1 = tk;
    tk = next;
  }
  return tk;
}

PolyX forward_operator(const PolyY& g, long long n) {
  if (g.degree() > n) throw std::domain_error("forward_operator: degree > n");
  PolyX out;
  out.coef.assign(g.coef.size(), 0);
  mpq_class nff = 1;  // n_(k)
  for (size_t k = 0; k < g.coef.size(); ++k) {
    if (k > 0) nff *= mpq_class(long(n) - long(k) + 1);
    out.coef[k] = g.coef[k] * nff;
  }
  out.trim();
  return out;
}

PolyY backward_operator(const PolyX& f, long long n) {
  if (f.degree() > n) throw std::domain_error("backward_operator: degree > n");
  const auto& s2 = stirling2();
  check_explicit_degree(f.degree() < 0 ? 0 : f.degree(), "backward_operator");
  PolyY out;
  out.coef.assign(f.coef.size(), 0);
  for (size_t k = 0; k < f.coef.size(); ++k) {
    if (f.coef[k] == 0) continue;
    // (y + 1/2)_k as a monomial polynomial in y
    std::vector<mpq_class> mono{1};
    for (size_t i = 0; i < k; ++i) {
      const mpq_class shift(2 * long(i) + 1, 2);  // i + 1/2
      std::vector<mpq_class> next(mono.size() + 1, 0);
      for (size_t j = 0; j < mono.size(); ++j) {
        next[j + 1] += mono[j];
        next[j] += mono[j] * shift;
      }
      mono = std::move(next);
    }
    const mpq_class scale = f.coef[k] / rising_factorial(mpq_class(long(n) + 1), int(k));
    // monomial -> falling-factorial via Stirling numbers
    for (size_t m = 0; m < mono.size(); ++m) {
      if (mono[m] == 0) continue;
      for (size_t j = 0; j <= m; ++j)
        out.coef[j] += scale * mono[m] * mpq_class(s2[m][j]);
    }
  }
  out.trim();
  return out;
}

PolyY poly_y_from_monomials(const std::vector<mpq_class>& monomial_coef) {
  if (int(monomial_coef.size()) - 1 > kMaxExplicitDegree)
    throw std::domain_error("poly_y_from_monomials: explicit degree cap is 30");
  const auto& s2 = stirling2();
  PolyY out;
  out.coef.assign(monomial_coef.size(), 0);
  for (size_t m = 0; m < monomial_coef.size(); ++m)
    for (size_t j = 0; j <= m; ++j)
      out.coef[j] += monomial_coef[m] * mpq_class(s2[m][j]);
  out.trim();
  return out;
}

PolyY hk_polynomial(int k, long long n) {
  if (k > n) throw std::domain_error("hk_polynomial: k > n");
  check_explicit_degree(k, "hk_polynomial");
  const PolyX t = shifted_chebyshev(k);
  PolyY out;
  out.coef.assign(t.coef.size(), 0);
  mpq_class nff = 1;
  for (size_t j = 0; j < t.coef.size(); ++j) {
    if (j > 0) nff *= mpq_class(long(n) - long(j) + 1);
    out.coef[j] = t.coef[j] / nff;
  }
  out.trim();
  return out;
}

double log_hk_norm(int k, long long n) {
  if (k < 0) throw std::domain_error("log_hk_norm: negative k");
  if (k > n) throw std::domain_error("log_hk_norm: k > n");
  if (k == 0) return 0.0;
  double s = 0.0;
  for (int j = 1; j <= k; ++j)
    s += std::log(double(n) + j) - std::log(double(n) - j + 1.0);
  s -= std::log(2.0);
  if (g_corrupt_hk) s += 0.01;
  return s;
}

double hk_norm(int k, long long n) { return std::exp(log_hk_norm(k, n)); }

mpq_class hk_norm_exact(int k, long long n) {
  if (k < 0 || k > n) throw std::domain_error("hk_norm_exact: k outside [0, n]");
  if (k == 0) return 1;
  mpq_class r(1, 2);
  for (int j = 1; j <= k; ++j) {
    mpq_class term(long(n) + j, long(n) - j + 1);
    term.canonicalize();
    r *= term;
  }
  return r;
}

mpq_class beta_binomial_exact(int n, int y) {
  if (y < 0 || y > n) throw std::out_of_range("beta_binomial_exact: y outside [0, n]");
  mpz_class a, b, four_n = 1;
  mpz_bin_uiui(a.get_mpz_t(), 2ul * unsigned(y), unsigned(y));
  mpz_bin_uiui(b.get_mpz_t(), 2ul * unsigned(n - y), unsigned(n - y));
  mpz_pow_ui(four_n.get_mpz_t(), mpz_class(4).get_mpz_t(), unsigned(n));
  mpq_class r(a * b, four_n);
  r.canonicalize();
  return r;
}

ChebyshevMoments chebyshev_moments(const channel::DiscreteInput& input, int m) {
  if (m < 0) throw std::domain_error("chebyshev_moments: m must be >= 0");
  input.validate();
  ChebyshevMoments out;
  out.eps.assign(size_t(m) + 1, 0.0);
  std::vector<double> comp(size_t(m) + 1, 0.0);
  for (const auto& atom : input.atoms) {
    const double u = 2.0 * atom.x - 1.0;
    double tkm1 = 1.0, tk = u;
    for (int k = 0; k <= m; ++k) {
      double tval;
      if (k == 0) {
        tval = 1.0;
      } else if (k == 1) {
        tval = u;
      } else {
        tval = 2.0 * u * tk - tkm1;
        tkm1 = tk;
        tk = tval;
      }
      const double term = atom.p * tval;
      double& s = out.eps[size_t(k)];
      double& c = comp[size_t(k)];
      const double t = s + term;
      c += (std::abs(s) >= std::abs(term)) ? ((s - t) + term) : ((term - t) + s);
      s = t;
    }
  }
  for (size_t k = 0; k < out.eps.size(); ++k) out.eps[k] += comp[k];
  out.eps[0] = 1.0;  // exact by construction
  return out;
}

double parseval_chi2(const channel::DiscreteInput& input, long long n, long long m) {
  if (m < 0 || m > n) throw std::domain_error("parseval_chi2: m outside [0, n]");
  const ChebyshevMoments mom = chebyshev_moments(input, int(m));
  double s = 0.0, c = 0.0;
  for (long long k = 1; k <= m; ++k) {
    const double ek = mom.eps[size_t(k)];
    if (ek == 0.0) continue;
    const double term =
        std::exp(2.0 * std::log(std::abs(ek)) - log_hk_norm(int(k), n));
    const double t = s + term;
    c += (std::abs(s) >= std::abs(term)) ? ((s - t) + term) : ((term - t) + s);
    s = t;
  }
  return s + c;
}

double adjoint_residual(const PolyX& f, const PolyY& g,
                        const channel::DiscreteInput& input, int n) {
  if (f.degree() > n || g.degree() > n)
    throw std::domain_error("adjoint_residual: degree > n");
  input.validate();

  // output side, exact: sum_y P_{Y_r}(y) g(y) (Bf)(y)
  const PolyY bf = backward_operator(f, n);
  mpq_class lhs = 0;
  for (int y = 0; y <= n; ++y)
    lhs += beta_binomial_exact(n, y) * g.eval_int(y) * bf.eval_int(y);

  // input side at the quadrature nodes, exact given the node values
  const PolyX ag = forward_operator(g, n);
  mpq_class rhs = 0;
  for (const auto& atom : input.atoms) {
    const mpq_class x(atom.x);  // dyadic double -> exact rational
    rhs += mpq_class(atom.p) * f.eval(x) * ag.eval(x);
  }
  return std::abs(mpq_class(lhs - rhs).get_d());
}

namespace detail {
void corrupt_hk_norm_for_tests(bool enabled) { g_corrupt_hk = enabled; }
}  // namespace detail

}  // namespace binomcap::orthopoly

#include "binomcap/support_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "binomcap/capacity_bounds.hpp"
#include "binomcap/numerics.hpp"
#include "binomcap/orthopoly.hpp"

namespace binomcap::support_bounds {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr double kLogLogThreshold = 37850.0;

void check_admissible(int K, int L, long long n) {
  if (K < 1) throw std::domain_error("mixture bound: K must be >= 1");
  if (L <= K) throw std::domain_error("mixture bound: need L > K");
  if (2LL * L - 2 > n) throw std::domain_error("mixture bound: need L <= (n+2)/2");
}

}  // namespace

MomentMatrix moment_matrix(const channel::DiscreteInput& input, int L) {
  if (L < 1) throw std::domain_error("moment_matrix: L must be >= 1");
  const orthopoly::ChebyshevMoments mom =
      orthopoly::chebyshev_moments(input, 2 * L - 2);
  MomentMatrix out;
  out.dimension = L;
  out.entries.assign(size_t(L), std::vector<double>(size_t(L), 0.0));
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      out.entries[size_t(i)][size_t(j)] =
          0.5 * (mom.eps[size_t(i + j)] + mom.eps[size_t(std::abs(i - j))]);
  return out;
}

double frobenius_defect(const channel::DiscreteInput& input, int L) {
  const MomentMatrix m = moment_matrix(input, L);
  std::vector<double> sq;
  sq.reserve(size_t(L) * size_t(L));
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      const double target = (i != j) ? 0.0 : (i == 0 ? 1.0 : 0.5);
      const double d = m.entries[size_t(i)][size_t(j)] - target;
      sq.push_back(d * d);
    }
  }
  return numerics::compensated_sum(sq);
}

double mixture_chi2_lower_bound(int K, int L, long long n) {
  check_admissible(K, L, n);
  // prod_{j=1}^{2L-2} (n+j)/(n-j+1) = 2 h_{2L-2}
  const double log_prod =
      std::log(2.0) + orthopoly::log_hk_norm(2 * L - 2, n);
  return std::exp(std::log(double(L - K)) - std::log(2.0 * L) - log_prod);
}

BestL best_admissible_L(int K, long long n) {
  if (K < 1) throw std::domain_error("best_admissible_L: K must be >= 1");
  const long long l_max = (n + 2) / 2;
  if (K + 1 > l_max)
    throw std::domain_error("best_admissible_L: no admissible L for this (K, n)");
  double log_prod = 0.0;  // sum_{j=1}^{2L-2} ln((n+j)/(n-j+1))
  for (int j = 1; j <= 2 * K; ++j)
    log_prod += std::log(double(n + j)) - std::log(double(n - j + 1));
  BestL best{0, -std::numeric_limits<double>::infinity()};
  double best_log = -std::numeric_limits<double>::infinity();
  for (long long L = K + 1; L <= l_max; ++L) {
    if (L > K + 1) {
      const long long j1 = 2 * L - 3, j2 = 2 * L - 2;
      log_prod += std::log(double(n + j1)) - std::log(double(n - j1 + 1));
      log_prod += std::log(double(n + j2)) - std::log(double(n - j2 + 1));
    }
    const double log_b =
        std::log(double(L - K)) - std::log(2.0 * double(L)) - log_prod;
    if (log_b > best_log) {
      best_log = log_b;
      best.L = int(L);
    }
  }
  best.bound = mixture_chi2_lower_bound(K, best.L, n);
  return best;
}

double explicit_lower_bound(int K, int L, long long n) {
  check_admissible(K, L, n);
  const double m = 2.0 * L - 2.0;
  const double denom = double(n) - 2.0 * L + 3.0;  // >= 1 when admissible
  return (double(L - K) / (2.0 * L)) * std::exp(-m * m / denom);
}

double zeta(double t) {
  if (t < 1.0) throw std::domain_error("zeta: defined for t >= 1");
  const double d = t - 1.0;
  if (d < 1e-4) {
    // (t-1) - ln t = d^2/2 - d^3/3 + ... ; divide the series out
    return 1.0 / (0.5 - d / 3.0 + d * d / 4.0 - d * d * d / 5.0);
  }
  return d * d / (d - std::log1p(d));
}

double c_star() { return 1.0 / (4.0 * kE * std::pow(3.0 * kPi, 1.75)); }

double kl_gap_bound(long long n) {
  if (n < 444) throw std::domain_error("kl_gap_bound: requires n >= 444");
  return 17.0 / (2.0 * capacity_bounds::asymptote(n));
}

double chi2_output_bound(long long n) {
  return zeta(1.0 / c_star()) * kl_gap_bound(n);
}

double invert_chi2_to_support(double u_n, long long n) {
  if (!(u_n > 0.0) || !(u_n < 0.25))
    throw std::domain_error("invert_chi2_to_support: u_n must lie in (0, 1/4)");
  const double a = -std::log(4.0 * u_n);
  const double quad =
      (4.0 - a + std::sqrt(a * (4.0 * double(n) + a + 4.0))) / 8.0;
  return std::min((double(n) + 2.0) / 4.0, quad);
}

namespace {

long long guarded_ceil(double x) {
  // keep exp(ln k) == k from rounding a hair above an integer
  return (long long)std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)));
}

}  // namespace

SupportBoundReport support_size_lower_bound(long long n, double capacity) {
  if (n < 1) throw std::domain_error("support_size_lower_bound: n must be >= 1");
  SupportBoundReport rep;
  rep.n = n;
  rep.c_star_value = c_star();
  rep.zeta_value = zeta(1.0 / c_star());
  if (n >= 444) {
    rep.u_n = chi2_output_bound(n);
    rep.alpha_n = -std::log(4.0 * *rep.u_n);
  }
  rep.two_term = 2.0;
  rep.exp_capacity_term = std::exp(capacity);
  const double log_c = 2.0 * capacity_bounds::asymptote(n);
  const double x = log_c / kLogLogThreshold;
  const double lg = x > 1.0 ? std::log(x) : 0.0;
  rep.loglog_term = 0.125 * std::sqrt(double(n) * lg);
  rep.final_bound = guarded_ceil(
      std::max({rep.two_term, rep.exp_capacity_term, rep.loglog_term}));
  return rep;
}

LogNSupportBound support_size_lower_bound_log_n(double log_n) {
  if (!(log_n >= std::log(444.0)))
    throw std::domain_error("support_size_lower_bound_log_n: requires n >= 444");
  LogNSupportBound rep;
  rep.log_n = log_n;
  const double log_c = log_n + std::log(kPi / (2.0 * kE));
  rep.u_n = zeta(1.0 / c_star()) * 17.0 / log_c;
  if (rep.u_n < 0.25) rep.alpha_n = -std::log(4.0 * rep.u_n);
  rep.log_two_term = std::log(2.0);
  rep.log_exp_capacity_term = 0.5 * log_c;  // asymptote; r_lb, r_ub -> 0
  const double x = log_c / kLogLogThreshold;
  const double lg = x > 1.0 ? std::log(x) : 0.0;
  rep.log_loglog_term = lg > 0.0
                            ? -std::log(8.0) + 0.5 * (log_n + std::log(lg))
                            : -std::numeric_limits<double>::infinity();
  rep.log_final_bound = std::max(
      {rep.log_two_term, rep.log_exp_capacity_term, rep.log_loglog_term});
  return rep;
}

double ratio_A0() { return std::log(2.0 * kPi) + 2.0 + 0.5 * std::log(3.0); }

double ratio_B0() { return 2.0 + std::log(2.0) + 0.5 * std::log(3.0 * kPi); }

double central_mass(long long n) {
  if (n < 2) throw std::domain_error("central_mass: requires n >= 2");
  const channel::OutputPmf ref = channel::beta_binomial_reference(n);
  const long long lo = (n + 2) / 3;  // ceil(n/3)
  const long long hi = (2 * n) / 3;
  std::vector<double> terms;
  terms.reserve(size_t(hi - lo + 1));
  for (long long y = lo; y <= hi; ++y)
    terms.push_back(std::exp(ref.log_probs[size_t(y)]));
  return numerics::compensated_sum(terms);
}

ConcavityReport concavity_check(long long n, const channel::OutputPmf& output) {
  if (n < 2) throw std::domain_error("concavity_check: requires n >= 2");
  if (output.n != n)
    throw std::invalid_argument("concavity_check: output length mismatch");
  const channel::OutputPmf ref = channel::beta_binomial_reference(n);
  ConcavityReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (long long y = 0; y <= n; ++y) {
    if (!std::isfinite(output.log_probs[size_t(y)])) {
      // a vanishing output probability can never be optimal
      return {false, -std::numeric_limits<double>::infinity(), int(y)};
    }
  }
  auto d = [&](long long y) {
    return output.log_probs[size_t(y)] - ref.log_probs[size_t(y)];
  };
  for (long long y = 1; y <= n - 1; ++y) {
    const double second = d(y + 1) - 2.0 * d(y) + d(y - 1);
    const double g = std::log((double(y) - 0.5) * (double(n - y) - 0.5)) -
                     std::log((double(y) + 0.5) * (double(n - y) + 0.5));
    const double margin = second - g;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.argmin_y = int(y);
    }
  }
  rep.ok = rep.min_margin >= -1e-6;
  return rep;
}

}  // namespace binomcap::support_bounds

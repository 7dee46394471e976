#include "binomcap/capacity_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "binomcap/numerics.hpp"

namespace binomcap::capacity_bounds {

namespace {

void require_n(long long n, long long least, const char* who) {
  if (n < least)
    throw std::domain_error(std::string(who) + ": n below validity threshold");
}

}  // namespace

double asymptote(long long n) {
  require_n(n, 1, "asymptote");
  return 0.5 * std::log(double(n) * M_PI / (2.0 * M_E));
}

double capacity_lower_bound(long long n) {
  require_n(n, 1, "capacity_lower_bound");
  return numerics::digamma(double(n) + 1.0) -
         std::log1p(std::sqrt(3.0 * double(n) + 1.0)) +
         0.5 * std::log(3.0 * M_PI / (2.0 * M_E));
}

double r_lb(long long n) {
  require_n(n, 1, "r_lb");
  return 0.5 * std::log1p(1.0 / (3.0 * double(n))) -
         std::log1p(1.0 / std::sqrt(3.0 * double(n) + 1.0)) -
         1.0 / (double(n) + 1.0);
}

double r_ub(long long n) {
  require_n(n, 28, "r_ub");
  const double root = 2.0 * std::pow(2.0 * M_E / (double(n) * M_PI), 0.25);
  return -std::log1p(-root) + 10.0 / (2.0 * asymptote(n));
}

double capacity_upper_bound(long long n) {
  require_n(n, 28, "capacity_upper_bound");
  return asymptote(n) + r_ub(n);
}

double gap(long long n) {
  require_n(n, 28, "gap");
  return r_ub(n) - r_lb(n);
}

double gap_cap(long long n) {
  require_n(n, 444, "gap_cap");
  return 17.0 / (2.0 * asymptote(n));
}

double canonical_eta(long long n) {
  require_n(n, 28, "canonical_eta");
  return std::pow(2.0 * M_E / (double(n) * M_PI), 0.25);
}

double canonical_c(long long n) { return asymptote(n); }

channel::OutputPmf xie_barron_output(int n, double eta, double c) {
  require_n(n, 28, "xie_barron_output");
  if (!(eta >= canonical_eta(n) * (1.0 - 1e-12)) || !(eta < 0.5))
    throw std::domain_error("xie_barron_output: eta outside [(2e/n pi)^{1/4}, 1/2)");
  if (!(c > 0.0) || !(c <= canonical_c(n) * (1.0 + 1e-12)))
    throw std::domain_error("xie_barron_output: c outside (0, (1/2)ln(n pi/2e)]");
  const channel::ChannelRow spike = channel::binomial_row(n, c / double(n));
  const channel::OutputPmf ref = channel::beta_binomial_reference(n);
  const double l2eta = std::log(2.0 * eta);
  const double lrest = std::log1p(-2.0 * eta);
  channel::OutputPmf out{n, std::vector<double>(size_t(n) + 1)};
  for (int y = 0; y <= n; ++y) {
    const double parts[2] = {l2eta + spike.log_probs[size_t(y)],
                             lrest + ref.log_probs[size_t(y)]};
    out.log_probs[size_t(y)] = numerics::log_sum_exp(parts);
  }
  return out;
}

double dual_certificate_limit(int n, double eta, double c) {
  return 0.5 * std::log(double(n) / (2.0 * M_PI * M_E)) +
         std::log(M_PI / (1.0 - 2.0 * eta)) + 5.0 / c;
}

double dual_certificate_max(int n, double eta, double c, int grid_size) {
  if (grid_size < 1000)
    throw std::domain_error("dual_certificate_max: grid_size must be >= 1000");
  const channel::OutputPmf q = xie_barron_output(n, eta, c);

  std::vector<double> points;
  points.reserve(size_t(grid_size) + 250);
  for (int j = 0; j < grid_size; ++j)
    points.push_back(double(j) / double(grid_size - 1));
  // log-spaced refinement around the spike location and the endpoints
  const double centers[3] = {0.0, c / double(n), 1.0};
  for (double t : centers) {
    points.push_back(std::clamp(t, 0.0, 1.0));
    for (int k = 1; k <= 40; ++k) {
      const double delta = std::pow(10.0, -0.25 * k);
      points.push_back(std::clamp(t + delta, 0.0, 1.0));
      points.push_back(std::clamp(t - delta, 0.0, 1.0));
    }
  }

  double best = 0.0;
  for (double x : points)
    best = std::max(best, channel::kl_divergence(channel::binomial_row(n, x), q));
  return best;
}

CapacityReport make_report(long long n, std::optional<double> ba) {
  CapacityReport rep;
  rep.n = n;
  rep.lb = capacity_lower_bound(n);
  rep.r_lb = r_lb(n);
  rep.asymptote = asymptote(n);
  if (n >= 28) {
    rep.ub = capacity_upper_bound(n);
    rep.r_ub = r_ub(n);
    rep.gap = gap(n);
  }
  if (n >= 444) rep.gap_cap = gap_cap(n);
  rep.ba_estimate = ba;
  return rep;
}

}  // namespace binomcap::capacity_bounds

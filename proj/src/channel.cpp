#include "binomcap/channel.hpp"

#include <cmath>
#include <limits>

#include "binomcap/numerics.hpp"

namespace binomcap::channel {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
using numerics::log_binomial;
using numerics::log_gamma;
using numerics::log_sum_exp;
}  // namespace

void DiscreteInput::validate() const {
  if (atoms.empty()) throw std::invalid_argument("input: no atoms");
  std::vector<double> ps;
  ps.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!(a.x >= 0.0 && a.x <= 1.0))
      throw std::invalid_argument("input: atom outside [0,1]");
    if (!(a.p > 0.0)) throw std::invalid_argument("input: nonpositive mass");
    ps.push_back(a.p);
  }
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = i + 1; j < atoms.size(); ++j)
      if (atoms[i].x == atoms[j].x)
        throw std::invalid_argument("input: duplicate mass point");
  if (std::abs(numerics::compensated_sum(ps) - 1.0) > 1e-12)
    throw std::invalid_argument("input: masses do not sum to 1");
}

double OutputPmf::prob(int y) const { return std::exp(log_probs[y]); }

ChannelRow binomial_row(int n, double x) {
  if (n < 0) throw std::domain_error("binomial_row: n must be >= 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("binomial_row: x outside [0,1]");
  ChannelRow row{n, x, std::vector<double>(size_t(n) + 1, kNegInf)};
  if (x == 0.0) {
    row.log_probs[0] = 0.0;
    return row;
  }
  if (x == 1.0) {
    row.log_probs[size_t(n)] = 0.0;
    return row;
  }
  const double lx = std::log(x);
  const double l1x = std::log1p(-x);
  for (int y = 0; y <= n; ++y)
    row.log_probs[size_t(y)] = log_binomial(n, y) + y * lx + (n - y) * l1x;
  return row;
}

OutputPmf induced_output(const DiscreteInput& input, int n) {
  input.validate();
  std::vector<ChannelRow> rows;
  rows.reserve(input.atoms.size());
  std::vector<double> lp;
  lp.reserve(input.atoms.size());
  for (const auto& a : input.atoms) {
    rows.push_back(binomial_row(n, a.x));
    lp.push_back(std::log(a.p));
  }
  OutputPmf out{n, std::vector<double>(size_t(n) + 1, kNegInf)};
  std::vector<double> terms(input.atoms.size());
  for (int y = 0; y <= n; ++y) {
    for (size_t i = 0; i < rows.size(); ++i)
      terms[i] = lp[i] + rows[i].log_probs[size_t(y)];
    out.log_probs[size_t(y)] = log_sum_exp(terms);
  }
  return out;
}

OutputPmf beta_binomial_reference(int n) {
  if (n < 0) throw std::domain_error("beta_binomial_reference: n must be >= 0");
  OutputPmf out{n, std::vector<double>(size_t(n) + 1, 0.0)};
  const double log_pi = std::log(M_PI);
  for (int y = 0; y <= n - y; ++y) {
    const double v = log_gamma(y + 0.5) + log_gamma(n - y + 0.5) - log_pi -
                     log_gamma(y + 1.0) - log_gamma(n - y + 1.0);
    out.log_probs[size_t(y)] = v;
    out.log_probs[size_t(n - y)] = v;  // symmetric exactly as computed
  }
  return out;
}

double kl_divergence(std::span<const double> log_p, std::span<const double> log_q) {
  if (log_p.size() != log_q.size())
    throw std::invalid_argument("kl_divergence: length mismatch");
  double s = 0.0, c = 0.0;
  for (size_t y = 0; y < log_p.size(); ++y) {
    const double lp = log_p[y];
    if (lp == kNegInf) continue;
    const double lq = log_q[y];
    if (lq == kNegInf)
      throw support_violation("kl_divergence: p > 0 where q = 0");
    const double term = std::exp(lp) * (lp - lq);
    const double t = s + term;
    c += (std::abs(s) >= std::abs(term)) ? ((s - t) + term) : ((term - t) + s);
    s = t;
  }
  return s + c;
}

double kl_divergence(const OutputPmf& p, const OutputPmf& q) {
  if (p.n != q.n) throw std::invalid_argument("kl_divergence: n mismatch");
  return kl_divergence(std::span(p.log_probs), std::span(q.log_probs));
}

double kl_divergence(const ChannelRow& row, const OutputPmf& q) {
  if (row.n != q.n) throw std::invalid_argument("kl_divergence: n mismatch");
  return kl_divergence(std::span(row.log_probs), std::span(q.log_probs));
}

double chi2_divergence(const OutputPmf& p, const OutputPmf& q) {
  if (p.n != q.n) throw std::invalid_argument("chi2_divergence: n mismatch");
  double s = 0.0, c = 0.0;
  for (size_t y = 0; y < p.log_probs.size(); ++y) {
    const double lp = p.log_probs[y];
    const double lq = q.log_probs[y];
    if (lq == kNegInf) {
      if (lp == kNegInf) continue;
      throw support_violation("chi2_divergence: p > 0 where q = 0");
    }
    // (p-q)^2/q = q (p/q - 1)^2, stable when p is close to q
    const double r = std::expm1(lp - lq);
    const double term = std::exp(lq) * r * r;
    const double t = s + term;
    c += (std::abs(s) >= std::abs(term)) ? ((s - t) + term) : ((term - t) + s);
    s = t;
  }
  return s + c;
}

double mutual_information(const DiscreteInput& input, int n) {
  const OutputPmf py = induced_output(input, n);
  double s = 0.0, c = 0.0;
  for (const auto& a : input.atoms) {
    const double term = a.p * kl_divergence(binomial_row(n, a.x), py);
    const double t = s + term;
    c += (std::abs(s) >= std::abs(term)) ? ((s - t) + term) : ((term - t) + s);
    s = t;
  }
  return s + c;
}

std::vector<double> chebyshev_nodes(int m) {
  if (m < 1) throw std::domain_error("chebyshev_nodes: m must be >= 1");
  std::vector<double> xs(static_cast<size_t>(m));
  for (int j = 1; j <= m; ++j)
    xs[size_t(j - 1)] = 0.5 * (1.0 + std::cos((2.0 * j - 1.0) * M_PI / (2.0 * m)));
  return xs;
}

DiscreteInput chebyshev_quadrature_input(int m) {
  DiscreteInput in;
  const double w = 1.0 / m;
  for (double x : chebyshev_nodes(m)) in.atoms.push_back({x, w});
  return in;
}

double mutual_information_beta_input(int n, int quadrature_order) {
  if (n == 0) return 0.0;
  const OutputPmf ref = beta_binomial_reference(n);
  const std::vector<double> xs = chebyshev_nodes(quadrature_order);
  // E_X D(P_{Y|X} || P_{Y_r}) with X_r-induced output equal to the reference
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double term = kl_divergence(binomial_row(n, x), ref);
    const double t = s + term;
    c += (std::abs(s) >= std::abs(term)) ? ((s - t) + term) : ((term - t) + s);
    s = t;
  }
  return (s + c) / quadrature_order;
}

}  // namespace binomcap::channel

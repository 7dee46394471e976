#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace binomcap::channel {

// p places mass where q has none; carries exit-code semantics in the CLI.
struct support_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiscreteInput {
  struct Atom {
    double x;  // mass point in [0,1]
    double p;  // probability > 0
  };
  std::vector<Atom> atoms;

  void validate() const;  // throws std::invalid_argument on a bad input
};

struct OutputPmf {
  int n = 0;
  std::vector<double> log_probs;  // length n+1, entries finite or -inf
  double prob(int y) const;
};

struct ChannelRow {
  int n = 0;
  double x = 0.0;
  std::vector<double> log_probs;  // Binomial(n, x) in log domain
};

ChannelRow binomial_row(int n, double x);
OutputPmf induced_output(const DiscreteInput& input, int n);
OutputPmf beta_binomial_reference(int n);

double kl_divergence(std::span<const double> log_p, std::span<const double> log_q);
double kl_divergence(const OutputPmf& p, const OutputPmf& q);
double kl_divergence(const ChannelRow& row, const OutputPmf& q);

double chi2_divergence(const OutputPmf& p, const OutputPmf& q);

double mutual_information(const DiscreteInput& input, int n);

// I(X_r; Y_r) for the Beta(1/2,1/2) reference input, by Gauss-Chebyshev
// quadrature of E_X D(P_{Y|X} || P_{Y_r}).
double mutual_information_beta_input(int n, int quadrature_order);

// Gauss-Chebyshev (first kind) nodes mapped to [0,1]; weights are all 1/m.
// Exact for polynomial integrands of degree <= 2m-1 under the arcsine weight.
std::vector<double> chebyshev_nodes(int m);
DiscreteInput chebyshev_quadrature_input(int m);

}  // namespace binomcap::channel

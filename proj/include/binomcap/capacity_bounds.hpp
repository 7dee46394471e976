#pragma once

#include <optional>

#include "binomcap/channel.hpp"

namespace binomcap::capacity_bounds {

// (1/2) ln(n pi / (2e)): the shared leading term of both bounds.
double asymptote(long long n);

double capacity_lower_bound(long long n);  // n >= 1
double r_lb(long long n);                  // n >= 1

double r_ub(long long n);                  // n >= 28
double capacity_upper_bound(long long n);  // n >= 28
double gap(long long n);                   // n >= 28
double gap_cap(long long n);               // 17 / ln(n pi/(2e)), n >= 444

// extremal admissible mixture parameters: they minimize r_ub
double canonical_eta(long long n);  // (2e/(n pi))^{1/4}
double canonical_c(long long n);    // (1/2) ln(n pi/(2e))

// Q_n = 2 eta Binomial(n, c/n) + (1 - 2 eta) P_{Y_r}
channel::OutputPmf xie_barron_output(int n, double eta, double c);

// max over a scan grid (uniform + log refinement near {0, c/n, 1}) of
// D(P_{Y|x} || Q_n); a capacity upper bound by weak duality.
double dual_certificate_max(int n, double eta, double c, int grid_size);

// (1/2) ln(n/(2 pi e)) + ln(pi/(1-2 eta)) + 5/c; dual_certificate_max may
// never exceed this
double dual_certificate_limit(int n, double eta, double c);

struct CapacityReport {
  long long n = 0;
  double lb = 0.0;
  double r_lb = 0.0;
  double asymptote = 0.0;
  std::optional<double> ub;        // absent below 28
  std::optional<double> r_ub;      // absent below 28
  std::optional<double> gap;       // absent below 28
  std::optional<double> gap_cap;   // absent below 444
  std::optional<double> ba_estimate;
};

CapacityReport make_report(long long n, std::optional<double> ba = {});

}  // namespace binomcap::capacity_bounds

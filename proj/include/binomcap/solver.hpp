#pragma once

#include <vector>

#include "binomcap/channel.hpp"

namespace binomcap::solver {

struct SolverConfig {
  int grid_size = 0;             // uniform grid on [0,1], endpoints included
  double tolerance = 1e-9;       // duality-gap stopping rule
  long long max_iterations = 200000;
  double support_threshold = 1e-7;
  double cluster_radius = 0.0;
};

// grid 20n+1 capped at 20001, radius 1/(4 sqrt(n+1)), the defaults above
SolverConfig default_config(int n);

struct Cluster {
  double center = 0.0;
  double mass = 0.0;
};

struct SolverResult {
  int n = 0;
  double capacity_estimate = 0.0;
  channel::DiscreteInput input;   // positive-mass grid atoms
  channel::OutputPmf output;
  long long iterations = 0;
  double duality_gap = 0.0;
  bool converged = false;
  std::vector<Cluster> extracted_support;
  std::vector<double> mi_trace;   // accepted objective values, nondecreasing
};

// maximizes I(X;Y) over distributions on the grid; a non-convergent run is
// returned with converged = false rather than thrown
SolverResult blahut_arimoto(int n, const SolverConfig& config);

struct KktReport {
  double max_violation = 0.0;      // max over scan grid of D(P_{Y|x}||P_Y) - I
  double support_deviation = 0.0;  // max over cluster centers of |D - I|
  bool passed = false;             // both within slack_tol
};

KktReport kkt_check(const SolverResult& result, int n, int scan_grid,
                    double slack_tol);

// drop atoms below threshold, chain-merge within radius, renormalize
std::vector<Cluster> extract_support(const channel::DiscreteInput& input,
                                     double threshold, double radius);

// min over y of P_{Y_r}(y) / P_{Y*}(y); always >= c_star
double verify_output_ratio(int n, const SolverResult& result);

}  // namespace binomcap::solver

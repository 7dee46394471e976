#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "binomcap/capacity_bounds.hpp"
#include "binomcap/channel.hpp"
#include "binomcap/orthopoly.hpp"
#include "binomcap/solver.hpp"
#include "binomcap/support_bounds.hpp"
#include "binomcap/verify.hpp"

namespace py = pybind11;
using namespace binomcap;

namespace {

channel::DiscreteInput to_input(
    const std::vector<std::pair<double, double>>& atoms) {
  channel::DiscreteInput in;
  for (const auto& [x, p] : atoms) in.atoms.push_back({x, p});
  in.validate();
  return in;
}

py::dict solve_dict(const solver::SolverResult& r) {
  py::dict d;
  d["n"] = r.n;
  d["capacity_estimate"] = r.capacity_estimate;
  d["duality_gap"] = r.duality_gap;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  py::list support;
  for (const auto& c : r.extracted_support)
    support.append(py::make_tuple(c.center, c.mass));
  d["support"] = support;
  d["output_log_probs"] = r.output.log_probs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_binomcap, m) {
  m.doc() = "capacity and support-size bounds for the binomial channel";

  m.def("capacity_lower_bound", &capacity_bounds::capacity_lower_bound,
        py::arg("n"));
  m.def("capacity_upper_bound", &capacity_bounds::capacity_upper_bound,
        py::arg("n"), "valid for n >= 28");
  m.def("gap", &capacity_bounds::gap, py::arg("n"));
  m.def("gap_cap", &capacity_bounds::gap_cap, py::arg("n"),
        "17 / ln(n pi/(2e)), valid for n >= 444");
  m.def("asymptote", &capacity_bounds::asymptote, py::arg("n"));

  m.def(
      "beta_binomial_log_pmf",
      [](int n) { return channel::beta_binomial_reference(n).log_probs; },
      py::arg("n"));
  m.def(
      "mutual_information",
      [](const std::vector<std::pair<double, double>>& atoms, int n) {
        return channel::mutual_information(to_input(atoms), n);
      },
      py::arg("atoms"), py::arg("n"));
  m.def(
      "chi2_direct",
      [](const std::vector<std::pair<double, double>>& atoms, int n) {
        return channel::chi2_divergence(
            channel::induced_output(to_input(atoms), n),
            channel::beta_binomial_reference(n));
      },
      py::arg("atoms"), py::arg("n"),
      "chi-square divergence of the induced output from the reference");
  m.def(
      "parseval_chi2",
      [](const std::vector<std::pair<double, double>>& atoms, long long n,
         long long mm) { return orthopoly::parseval_chi2(to_input(atoms), n, mm); },
      py::arg("atoms"), py::arg("n"), py::arg("m"));

  m.def(
      "solve",
      [](int n, std::optional<int> grid, std::optional<double> tol,
         std::optional<long long> max_iterations) {
        solver::SolverConfig cfg = solver::default_config(n);
        if (grid) cfg.grid_size = *grid;
        if (tol) cfg.tolerance = *tol;
        if (max_iterations) cfg.max_iterations = *max_iterations;
        return solve_dict(solver::blahut_arimoto(n, cfg));
      },
      py::arg("n"), py::arg("grid") = std::nullopt,
      py::arg("tol") = std::nullopt, py::arg("max_iterations") = std::nullopt,
      "Blahut-Arimoto capacity solve; returns a result dict");

  m.def("c_star", &support_bounds::c_star);
  m.def("zeta", &support_bounds::zeta, py::arg("t"));
  m.def("central_mass", &support_bounds::central_mass, py::arg("n"));
  m.def("mixture_chi2_lower_bound", &support_bounds::mixture_chi2_lower_bound,
        py::arg("K"), py::arg("L"), py::arg("n"));
  m.def(
      "best_admissible_L",
      [](int k, long long n) {
        const auto best = support_bounds::best_admissible_L(k, n);
        return py::make_tuple(best.L, best.bound);
      },
      py::arg("K"), py::arg("n"));
  m.def(
      "support_size_lower_bound",
      [](long long n, double capacity) {
        const auto r = support_bounds::support_size_lower_bound(n, capacity);
        py::dict d;
        d["n"] = r.n;
        d["c_star"] = r.c_star_value;
        d["zeta"] = r.zeta_value;
        if (r.u_n) d["u_n"] = *r.u_n;
        if (r.alpha_n) d["alpha_n"] = *r.alpha_n;
        d["two_term"] = r.two_term;
        d["exp_capacity_term"] = r.exp_capacity_term;
        d["loglog_term"] = r.loglog_term;
        d["final_bound"] = r.final_bound;
        return d;
      },
      py::arg("n"), py::arg("capacity"));
  m.def(
      "support_size_lower_bound_log_n",
      [](double log_n) {
        const auto r = support_bounds::support_size_lower_bound_log_n(log_n);
        py::dict d;
        d["log_n"] = r.log_n;
        d["u_n"] = r.u_n;
        if (r.alpha_n) d["alpha_n"] = *r.alpha_n;
        d["log_two_term"] = r.log_two_term;
        d["log_exp_capacity_term"] = r.log_exp_capacity_term;
        d["log_loglog_term"] = r.log_loglog_term;
        d["log_final_bound"] = r.log_final_bound;
        return d;
      },
      py::arg("log_n"));

  m.def(
      "run_verify_suite",
      [](const std::string& name, std::uint64_t seed) {
        const auto r = verify::run_suite(name, seed);
        py::dict d;
        d["suite"] = r.suite;
        d["checks"] = r.checks;
        d["random_inputs"] = r.random_inputs;
        d["passed"] = r.passed();
        py::list failures;
        for (const auto& f : r.failures) {
          py::dict fd;
          fd["check"] = f.check;
          fd["value"] = f.value;
          fd["limit"] = f.limit;
          failures.append(fd);
        }
        d["failures"] = failures;
        return d;
      },
      py::arg("suite"), py::arg("seed") = 0);
}

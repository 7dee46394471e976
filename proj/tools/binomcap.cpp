#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "binomcap/capacity_bounds.hpp"
#include "binomcap/channel.hpp"
#include "binomcap/orthopoly.hpp"
#include "binomcap/solver.hpp"
#include "binomcap/support_bounds.hpp"
#include "binomcap/verify.hpp"

using nlohmann::json;
using namespace binomcap;

namespace {

// fixed 17-significant-digit cells so CSV output round-trips losslessly
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + out_path + "'");
  f << text;
}

struct GlobalOpts {
  std::string out;
  std::string format = "json";
  long long seed = 0;
};

// ---- bounds ----------------------------------------------------------

struct RangeOpts {
  std::optional<long long> n, start, stop, step, log_count;
};

std::vector<long long> make_range(const RangeOpts& r) {
  const bool single = r.n.has_value();
  const bool ranged = r.start.has_value() || r.stop.has_value();
  if (single == ranged)
    throw std::domain_error("bounds: give exactly one of --n or --n-start/--n-stop");
  if (single) {
    if (*r.n < 1) throw std::domain_error("bounds: n must be >= 1");
    return {*r.n};
  }
  if (!r.start || !r.stop)
    throw std::domain_error("bounds: --n-start and --n-stop must be given together");
  const long long a = *r.start, b = *r.stop;
  if (a < 1 || b < a) throw std::domain_error("bounds: need 1 <= start <= stop");
  std::vector<long long> ns;
  if (r.log_count) {
    if (r.step) throw std::domain_error("bounds: --n-step conflicts with --log-spaced");
    const long long count = *r.log_count;
    if (count < 2) throw std::domain_error("bounds: --log-spaced needs count >= 2");
    for (long long i = 0; i < count; ++i) {
      const double t = double(i) / double(count - 1);
      const double v =
          std::exp((1.0 - t) * std::log(double(a)) + t * std::log(double(b)));
      ns.push_back(std::min(b, std::max(a, (long long)std::llround(v))));
    }
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  } else {
    const long long step = r.step.value_or(1);
    if (step < 1) throw std::domain_error("bounds: --n-step must be >= 1");
    for (long long v = a; v <= b; v += step) ns.push_back(v);
  }
  return ns;
}

json bounds_row(const capacity_bounds::CapacityReport& r) {
  json j;
  j["n"] = r.n;
  j["lb"] = r.lb;
  j["r_lb"] = r.r_lb;
  j["asymptote"] = r.asymptote;
  if (r.ub) j["ub"] = *r.ub;
  if (r.r_ub) j["r_ub"] = *r.r_ub;
  if (r.gap) j["gap"] = *r.gap;
  if (r.gap_cap) j["gap_cap"] = *r.gap_cap;
  return j;
}

int cmd_bounds(const GlobalOpts& g, const RangeOpts& range) {
  std::vector<capacity_bounds::CapacityReport> rows;
  for (long long n : make_range(range))
    rows.push_back(capacity_bounds::make_report(n));
  std::string text;
  if (g.format == "json") {
    json j;
    j["rows"] = json::array();
    for (const auto& r : rows) j["rows"].push_back(bounds_row(r));
    text = j.dump(2) + "\n";
  } else {
    text = "n,lb,ub,r_lb,r_ub,gap,gap_cap,asymptote\n";
    for (const auto& r : rows)
      text += std::to_string(r.n) + "," + fmt17(r.lb) + "," + cell(r.ub) + "," +
              fmt17(r.r_lb) + "," + cell(r.r_ub) + "," + cell(r.gap) + "," +
              cell(r.gap_cap) + "," + fmt17(r.asymptote) + "\n";
  }
  emit(text, g.out);
  return 0;
}

// ---- solve -----------------------------------------------------------

struct SolveOpts {
  long long n = 0;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<long long> max_iters;
  std::optional<double> support_threshold;
  std::optional<double> cluster_radius;
};

json solver_file_json(const solver::SolverResult& r) {
  json j;
  j["n"] = r.n;
  j["capacity_estimate"] = r.capacity_estimate;
  j["duality_gap"] = r.duality_gap;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["support"] = json::array();
  for (const auto& c : r.extracted_support)
    j["support"].push_back({{"x", c.center}, {"p", c.mass}});
  j["output_log_probs"] = r.output.log_probs;
  return j;
}

int cmd_solve(const GlobalOpts& g, const SolveOpts& o) {
  if (o.n < 1) throw std::domain_error("solve: n must be >= 1");
  solver::SolverConfig cfg = solver::default_config(int(o.n));
  if (o.grid) cfg.grid_size = *o.grid;
  if (o.tol) cfg.tolerance = *o.tol;
  if (o.max_iters) cfg.max_iterations = *o.max_iters;
  if (o.support_threshold) cfg.support_threshold = *o.support_threshold;
  if (o.cluster_radius) cfg.cluster_radius = *o.cluster_radius;

  const solver::SolverResult res = solver::blahut_arimoto(int(o.n), cfg);
  const int scan = std::min(10 * (cfg.grid_size - 1) + 1, 20001);
  const solver::KktReport kkt = solver::kkt_check(res, int(o.n), scan, 1e-5);

  if (!g.out.empty()) emit(solver_file_json(res).dump(2) + "\n", g.out);

  std::string row;
  if (g.format == "json") {
    json j;
    j["n"] = res.n;
    j["capacity_estimate"] = res.capacity_estimate;
    j["duality_gap"] = res.duality_gap;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["kkt_max_violation"] = kkt.max_violation;
    j["kkt_support_deviation"] = kkt.support_deviation;
    j["kkt_passed"] = kkt.passed;
    j["support"] = json::array();
    for (const auto& c : res.extracted_support)
      j["support"].push_back({{"x", c.center}, {"p", c.mass}});
    row = j.dump(2) + "\n";
  } else {
    row =
        "n,capacity_estimate,duality_gap,iterations,converged,"
        "kkt_max_violation,kkt_support_deviation,kkt_passed,support_size\n";
    row += std::to_string(res.n) + "," + fmt17(res.capacity_estimate) + "," +
           fmt17(res.duality_gap) + "," + std::to_string(res.iterations) + "," +
           (res.converged ? "true" : "false") + "," +
           fmt17(kkt.max_violation) + "," + fmt17(kkt.support_deviation) +
           "," + (kkt.passed ? "true" : "false") + "," +
           std::to_string(res.extracted_support.size()) + "\n";
  }
  std::cout << row;
  return res.converged ? 0 : 3;
}

// ---- chi2 ------------------------------------------------------------

struct Chi2Opts {
  std::string input_path;
  long long n = 0;
  std::string mode = "both";
};

channel::DiscreteInput read_input_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("chi2: cannot open input file '" + path + "'");
  const json j = json::parse(f);
  channel::DiscreteInput in;
  for (const auto& a : j.at("atoms"))
    in.atoms.push_back({a.at("x").get<double>(), a.at("p").get<double>()});
  in.validate();
  return in;
}

int cmd_chi2(const GlobalOpts& g, const Chi2Opts& o) {
  if (o.n < 1) throw std::domain_error("chi2: n must be >= 1");
  const channel::DiscreteInput in = read_input_file(o.input_path);
  std::optional<double> direct, series;
  if (o.mode != "parseval")
    direct = channel::chi2_divergence(channel::induced_output(in, int(o.n)),
                                      channel::beta_binomial_reference(int(o.n)));
  if (o.mode != "direct") series = orthopoly::parseval_chi2(in, o.n, o.n);

  std::string text;
  if (g.format == "json") {
    json j;
    j["n"] = o.n;
    j["mode"] = o.mode;
    if (direct) j["direct"] = *direct;
    if (series) j["parseval"] = *series;
    if (direct && series) j["abs_diff"] = std::abs(*direct - *series);
    text = j.dump(2) + "\n";
  } else {
    text = "n,mode,direct,parseval,abs_diff\n";
    text += std::to_string(o.n) + "," + o.mode + "," + cell(direct) + "," +
            cell(series) + ",";
    text += (direct && series) ? fmt17(std::abs(*direct - *series))
                               : std::string();
    text += "\n";
  }
  emit(text, g.out);
  return 0;
}

// ---- support-bound ---------------------------------------------------

struct SupportOpts {
  std::optional<long long> n;
  std::optional<double> log_n;
  std::string source = "lb";
};

int cmd_support_bound(const GlobalOpts& g, const SupportOpts& o) {
  if (o.n.has_value() == o.log_n.has_value())
    throw std::domain_error("support-bound: give exactly one of --n or --log-n");
  std::string text;
  if (o.log_n) {
    const auto rep = support_bounds::support_size_lower_bound_log_n(*o.log_n);
    const bool clipped = !std::isfinite(rep.log_loglog_term);
    if (g.format == "json") {
      json j;
      j["log_n"] = rep.log_n;
      j["u_n"] = rep.u_n;
      if (rep.alpha_n) j["alpha_n"] = *rep.alpha_n;
      j["log_two_term"] = rep.log_two_term;
      j["log_exp_capacity_term"] = rep.log_exp_capacity_term;
      if (!clipped) j["log_loglog_term"] = rep.log_loglog_term;
      j["log_final_bound"] = rep.log_final_bound;
      text = j.dump(2) + "\n";
    } else {
      text =
          "log_n,u_n,alpha_n,log_two_term,log_exp_capacity_term,"
          "log_loglog_term,log_final_bound\n";
      text += fmt17(rep.log_n) + "," + fmt17(rep.u_n) + "," +
              cell(rep.alpha_n) + "," + fmt17(rep.log_two_term) + "," +
              fmt17(rep.log_exp_capacity_term) + ",";
      text += clipped ? std::string() : fmt17(rep.log_loglog_term);
      text += "," + fmt17(rep.log_final_bound) + "\n";
    }
  } else {
    const long long n = *o.n;
    if (n < 1) throw std::domain_error("support-bound: n must be >= 1");
    double capacity = 0.0;
    if (o.source == "lb") {
      capacity = capacity_bounds::capacity_lower_bound(n);
    } else {
      if (n > 20001)
        throw std::domain_error("support-bound: ba source needs a solvable n");
      capacity =
          solver::blahut_arimoto(int(n), solver::default_config(int(n)))
              .capacity_estimate;
    }
    const auto rep = support_bounds::support_size_lower_bound(n, capacity);
    if (g.format == "json") {
      json j;
      j["n"] = rep.n;
      j["source"] = o.source;
      j["capacity"] = capacity;
      j["c_star"] = rep.c_star_value;
      j["zeta"] = rep.zeta_value;
      if (rep.u_n) j["u_n"] = *rep.u_n;
      if (rep.alpha_n) j["alpha_n"] = *rep.alpha_n;
      j["two_term"] = rep.two_term;
      j["exp_capacity_term"] = rep.exp_capacity_term;
      j["loglog_term"] = rep.loglog_term;
      j["final_bound"] = rep.final_bound;
      text = j.dump(2) + "\n";
    } else {
      text =
          "n,source,capacity,c_star,zeta,u_n,alpha_n,two_term,"
          "exp_capacity_term,loglog_term,final_bound\n";
      text += std::to_string(rep.n) + "," + o.source + "," + fmt17(capacity) +
              "," + fmt17(rep.c_star_value) + "," + fmt17(rep.zeta_value) +
              "," + cell(rep.u_n) + "," + cell(rep.alpha_n) + "," +
              fmt17(rep.two_term) + "," + fmt17(rep.exp_capacity_term) + "," +
              fmt17(rep.loglog_term) + "," + std::to_string(rep.final_bound) +
              "\n";
    }
  }
  emit(text, g.out);
  return 0;
}

// ---- verify ----------------------------------------------------------

struct VerifyOpts {
  std::string suite;
  bool corrupt_hk = false;
};

struct CorruptGuard {
  explicit CorruptGuard(bool on) {
    if (on) orthopoly::detail::corrupt_hk_norm_for_tests(true);
  }
  ~CorruptGuard() { orthopoly::detail::corrupt_hk_norm_for_tests(false); }
};

int cmd_verify(const GlobalOpts& g, const VerifyOpts& o) {
  CorruptGuard guard(o.corrupt_hk);
  std::vector<verify::SuiteReport> reports;
  if (o.suite == "all")
    reports = verify::run_all(std::uint64_t(g.seed));
  else
    reports.push_back(verify::run_suite(o.suite, std::uint64_t(g.seed)));

  bool all_ok = true;
  for (const auto& r : reports) all_ok = all_ok && r.passed();

  std::string text;
  if (g.format == "json") {
    json j;
    j["suite"] = o.suite;
    j["seed"] = g.seed;
    j["passed"] = all_ok;
    j["suites"] = json::array();
    for (const auto& r : reports) {
      json s;
      s["suite"] = r.suite;
      s["checks"] = r.checks;
      s["random_inputs"] = r.random_inputs;
      s["passed"] = r.passed();
      s["failures"] = json::array();
      for (const auto& f : r.failures)
        s["failures"].push_back(
            {{"check", f.check}, {"value", f.value}, {"limit", f.limit}});
      j["suites"].push_back(s);
    }
    text = j.dump(2) + "\n";
  } else {
    text = "suite,check,value,limit,checks,random_inputs,status\n";
    for (const auto& r : reports) {
      text += r.suite + ",,,," + std::to_string(r.checks) + "," +
              std::to_string(r.random_inputs) + "," +
              (r.passed() ? "pass" : "fail") + "\n";
      for (const auto& f : r.failures)
        text += r.suite + "," + f.check + "," + fmt17(f.value) + "," +
                fmt17(f.limit) + ",,,violation\n";
    }
  }
  emit(text, g.out);
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "binomcap: capacity bounds, Blahut-Arimoto solves, chi-square "
      "expansions, and support-size bounds for the binomial channel"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--out", g.out, "write the report to PATH instead of stdout");
  app.add_option("--format", g.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized verification suites")
      ->capture_default_str();

  int rc = 0;

  auto* bounds = app.add_subcommand(
      "bounds", "lower/upper capacity bounds over n or a range of n");
  bounds->fallthrough();
  RangeOpts range;
  bounds->add_option("--n", range.n, "single n");
  bounds->add_option("--n-start", range.start, "range start (inclusive)");
  bounds->add_option("--n-stop", range.stop, "range stop (inclusive)");
  bounds->add_option("--n-step", range.step, "linear step, default 1");
  bounds->add_option("--log-spaced", range.log_count,
                     "emit COUNT log-spaced points instead of stepping");
  bounds->footer(
      "CSV columns: n,lb,ub,r_lb,r_ub,gap,gap_cap,asymptote "
      "(ub/r_ub/gap blank for n < 28; gap_cap blank for n < 444)");
  bounds->callback([&] { rc = cmd_bounds(g, range); });

  auto* solve = app.add_subcommand(
      "solve", "Blahut-Arimoto capacity solve with a KKT certificate");
  solve->fallthrough();
  SolveOpts so;
  solve->add_option("--n", so.n, "channel parameter")->required();
  solve->add_option("--grid", so.grid, "input grid size (default 20n+1, max 20001)");
  solve->add_option("--tol", so.tol, "duality-gap tolerance (default 1e-9)");
  solve->add_option("--max-iters", so.max_iters, "iteration budget");
  solve->add_option("--support-threshold", so.support_threshold,
                    "mass cutoff for support extraction");
  solve->add_option("--cluster-radius", so.cluster_radius,
                    "merge radius for support clusters");
  solve->footer(
      "Prints a summary row (CSV columns: n,capacity_estimate,duality_gap,"
      "iterations,converged,kkt_max_violation,kkt_support_deviation,"
      "kkt_passed,support_size); --out receives the full SolverResult JSON. "
      "Exits 3 when the solve does not converge (the file is still written).");
  solve->callback([&] { rc = cmd_solve(g, so); });

  auto* chi2 = app.add_subcommand(
      "chi2", "chi-square divergence from the Beta(1/2,1/2) reference output");
  chi2->fallthrough();
  Chi2Opts co;
  chi2->add_option("--input", co.input_path,
                   "DiscreteInput JSON file: {\"atoms\":[{\"x\":..,\"p\":..},...]}")
      ->required();
  chi2->add_option("--n", co.n, "channel parameter")->required();
  chi2->add_option("--mode", co.mode, "direct sum, Parseval expansion, or both")
      ->check(CLI::IsMember({"direct", "parseval", "both"}))
      ->capture_default_str();
  chi2->footer("CSV columns: n,mode,direct,parseval,abs_diff (blank when not computed)");
  chi2->callback([&] { rc = cmd_chi2(g, co); });

  auto* sb = app.add_subcommand(
      "support-bound", "support-size lower bound for capacity-achieving inputs");
  sb->fallthrough();
  SupportOpts sbo;
  sb->add_option("--n", sbo.n, "channel parameter");
  sb->add_option("--log-n", sbo.log_n,
                 "ln(n) for the astronomically large regime (uses the "
                 "asymptote as the capacity term)");
  auto* src = sb->add_option("--capacity-source", sbo.source,
                             "capacity term from the closed-form lower bound "
                             "or a Blahut-Arimoto solve")
                  ->check(CLI::IsMember({"lb", "ba"}))
                  ->capture_default_str();
  sb->get_option("--log-n")->excludes(src);
  sb->footer(
      "CSV columns: n,source,capacity,c_star,zeta,u_n,alpha_n,two_term,"
      "exp_capacity_term,loglog_term,final_bound; with --log-n: "
      "log_n,u_n,alpha_n,log_two_term,log_exp_capacity_term,log_loglog_term,"
      "log_final_bound (log_loglog_term blank when the log+ clips to zero)");
  sb->callback([&] { rc = cmd_support_bound(g, sbo); });

  auto* ver = app.add_subcommand("verify", "run a property-verification suite");
  ver->fallthrough();
  VerifyOpts vo;
  ver->add_option("--suite", vo.suite, "property suite")
      ->check(CLI::IsMember({"orthopoly", "parseval", "eym", "thm5", "kkt",
                             "ratio", "concavity", "all"}))
      ->required();
  ver->add_flag("--corrupt-hk-norm", vo.corrupt_hk)->group("");
  ver->footer(
      "CSV columns: suite,check,value,limit,checks,random_inputs,status; "
      "one row per suite plus one row per violated check. Randomness is "
      "mt19937_64 seeded via splitmix64 from --seed (uniforms take the top "
      "53 bits), so reports are byte-identical across runs and platforms.");
  ver->callback([&] { rc = cmd_verify(g, vo); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const channel::support_violation& e) {
    std::cerr << "support violation: " << e.what() << "\n";
    return 4;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}

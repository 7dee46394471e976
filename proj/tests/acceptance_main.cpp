// acceptance gate: one line per criterion, exit nonzero on any failure.
// usage: acceptance [--cli PATH] [criterion numbers...]
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "binomcap/capacity_bounds.hpp"
#include "binomcap/channel.hpp"
#include "binomcap/orthopoly.hpp"
#include "binomcap/solver.hpp"
#include "binomcap/support_bounds.hpp"

using namespace binomcap;

namespace {

std::string g_cli_path;
std::map<int, solver::SolverResult> g_solves;

const solver::SolverResult& solve_cached(int n) {
  auto it = g_solves.find(n);
  if (it == g_solves.end())
    it = g_solves.emplace(n, solver::blahut_arimoto(n, solver::default_config(n)))
             .first;
  return it->second;
}

std::uint64_t mix(std::uint64_t s, std::uint64_t tag) {
  std::uint64_t z = s + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

channel::DiscreteInput random_input(std::mt19937_64& g, int k) {
  channel::DiscreteInput in;
  in.atoms.resize(size_t(k));
  double total = 0.0;
  for (auto& a : in.atoms) {
    a.x = uniform01(g);
    a.p = 0.05 + uniform01(g);
    total += a.p;
  }
  for (auto& a : in.atoms) a.p /= total;
  return in;
}

std::vector<long long> log_spaced(long long a, long long b, int count) {
  std::vector<long long> ns;
  for (int i = 0; i < count; ++i) {
    const double t = double(i) / double(count - 1);
    const double v =
        std::exp((1.0 - t) * std::log(double(a)) + t * std::log(double(b)));
    ns.push_back(std::min(b, std::max(a, (long long)std::llround(v))));
  }
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return ns;
}

// ---- criteria --------------------------------------------------------

bool c1_n1_exact(std::string& why) {
  solver::SolverConfig cfg = solver::default_config(1);
  cfg.grid_size = 101;
  cfg.tolerance = 1e-9;
  const auto res = solver::blahut_arimoto(1, cfg);
  if (std::abs(res.capacity_estimate - std::log(2.0)) > 1e-6) {
    why = "capacity " + std::to_string(res.capacity_estimate);
    return false;
  }
  if (res.extracted_support.size() != 2) {
    why = "support size " + std::to_string(res.extracted_support.size());
    return false;
  }
  for (const auto& c : res.extracted_support) {
    const bool at0 = std::abs(c.center) <= 1e-9;
    const bool at1 = std::abs(c.center - 1.0) <= 1e-9;
    if ((!at0 && !at1) || std::abs(c.mass - 0.5) > 1e-4) {
      why = "atom (" + std::to_string(c.center) + ", " + std::to_string(c.mass) + ")";
      return false;
    }
  }
  return true;
}

bool c2_sandwich(std::string& why) {
  for (int n = 28; n <= 200; ++n) {
    const double ba = solve_cached(n).capacity_estimate;
    const double lb = capacity_bounds::capacity_lower_bound(n);
    const double ub = capacity_bounds::capacity_upper_bound(n);
    if (!(lb <= ba && ba <= ub + 1e-6)) {
      std::ostringstream os;
      os << "n=" << n << " lb=" << lb << " ba=" << ba << " ub=" << ub;
      why = os.str();
      return false;
    }
  }
  return true;
}

bool c3_gap_cap(std::string& why) {
  for (long long n : log_spaced(444, 100000000LL, 50)) {
    if (capacity_bounds::gap(n) > capacity_bounds::gap_cap(n)) {
      why = "n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool c4_parseval(std::string& why) {
  std::mt19937_64 g(mix(0, 104));
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + int(g() % 29);
    const channel::DiscreteInput in = random_input(g, 1 + int(g() % 5));
    const double direct = channel::chi2_divergence(
        channel::induced_output(in, n), channel::beta_binomial_reference(n));
    const double series = orthopoly::parseval_chi2(in, n, n);
    if (std::abs(direct - series) > 1e-9) {
      why = "trial " + std::to_string(trial) + " n=" + std::to_string(n) +
            " diff=" + std::to_string(std::abs(direct - series));
      return false;
    }
  }
  return true;
}

bool c5_orthopoly(std::string& why) {
  // brute force = direct summation over y; done in exact rationals because
  // double evaluation of H_14, H_15 cancels catastrophically near y = n
  for (long long n : {5, 12, 20, 31, 40}) {
    const int kmax = int(std::min<long long>(15, n));
    std::vector<orthopoly::PolyY> h;
    std::vector<double> hk(size_t(kmax) + 1);
    for (int k = 0; k <= kmax; ++k) {
      h.push_back(orthopoly::hk_polynomial(k, n));
      hk[size_t(k)] = orthopoly::hk_norm(k, n);
    }
    for (int k = 0; k <= kmax; ++k)
      for (int m = k; m <= kmax; ++m) {
        mpq_class acc(0);
        for (long y = 0; y <= long(n); ++y)
          acc += orthopoly::beta_binomial_exact(int(n), int(y)) *
                 h[size_t(k)].eval_int(y) * h[size_t(m)].eval_int(y);
        const double brute = acc.get_d();
        const double scale = std::sqrt(hk[size_t(k)] * hk[size_t(m)]);
        const double err =
            k == m ? std::abs(brute - hk[size_t(k)]) / hk[size_t(k)]
                   : std::abs(brute) / scale;
        if (err > 1e-8) {
          why = "n=" + std::to_string(n) + " (k,m)=(" + std::to_string(k) +
                "," + std::to_string(m) + ") err=" + std::to_string(err);
          return false;
        }
      }
  }
  const auto quad = channel::chebyshev_quadrature_input(100);
  for (long long n : {20, 40}) {
    std::mt19937_64 g(mix(0, 105 + std::uint64_t(n)));
    for (int trial = 0; trial < 24; ++trial) {
      const int a = int(g() % 13), b = int(g() % 13);
      const int c = 1 + int(g() % 12), d = 1 + int(g() % 12);
      mpq_class s1(long(g() % 9) - 4, 4), s2(long(g() % 9) - 4, 4);
      s1.canonicalize();
      s2.canonicalize();
      orthopoly::PolyX f = orthopoly::shifted_chebyshev(a);
      const orthopoly::PolyX fb = orthopoly::shifted_chebyshev(b);
      if (fb.coef.size() > f.coef.size()) f.coef.resize(fb.coef.size(), 0);
      for (size_t j = 0; j < fb.coef.size(); ++j) f.coef[j] += s1 * fb.coef[j];
      orthopoly::PolyY gp = orthopoly::hk_polynomial(c, n);
      const orthopoly::PolyY gd = orthopoly::hk_polynomial(d, n);
      if (gd.coef.size() > gp.coef.size()) gp.coef.resize(gd.coef.size(), 0);
      for (size_t j = 0; j < gd.coef.size(); ++j) gp.coef[j] += s2 * gd.coef[j];
      const double res = orthopoly::adjoint_residual(f, gp, quad, int(n));
      if (res > 1e-9) {
        why = "adjoint n=" + std::to_string(n) + " trial=" +
              std::to_string(trial) + " residual=" + std::to_string(res);
        return false;
      }
    }
  }
  return true;
}

bool c6_mixture_bound(std::string& why) {
  long long inputs = 0;
  for (int n = 2; n <= 30; ++n)
    for (int k = 1; k <= 3; ++k) {
      if (k + 1 > (n + 2) / 2) continue;
      std::mt19937_64 g(mix(0, 106 + std::uint64_t(n) * 8 + std::uint64_t(k)));
      for (int trial = 0; trial < 13; ++trial) {
        const channel::DiscreteInput in = random_input(g, k);
        ++inputs;
        const double chi2 = channel::chi2_divergence(
            channel::induced_output(in, n),
            channel::beta_binomial_reference(n));
        for (int l = k + 1; l <= (n + 2) / 2; ++l)
          if (chi2 < support_bounds::mixture_chi2_lower_bound(k, l, n) - 1e-12) {
            why = "n=" + std::to_string(n) + " K=" + std::to_string(k) +
                  " L=" + std::to_string(l);
            return false;
          }
      }
    }
  if (inputs < 1000) {
    why = "only " + std::to_string(inputs) + " random inputs";
    return false;
  }
  return true;
}

bool c7_dominance(std::string& why) {
  for (int n = 2; n <= 200; ++n)
    for (int k = 1; k < (n + 2) / 2; ++k)
      for (int l = k + 1; l <= (n + 2) / 2; ++l) {
        const double b = support_bounds::mixture_chi2_lower_bound(k, l, n);
        if (support_bounds::explicit_lower_bound(k, l, n) >
            b * (1.0 + 1e-12) + 1e-308) {
          why = "n=" + std::to_string(n) + " K=" + std::to_string(k) +
                " L=" + std::to_string(l);
          return false;
        }
      }
  return true;
}

bool c8_ratio(std::string& why) {
  const double floor = support_bounds::c_star();
  for (int n = 1; n <= 100; ++n) {
    const double r = solver::verify_output_ratio(n, solve_cached(n));
    if (r < floor) {
      why = "n=" + std::to_string(n) + " ratio=" + std::to_string(r);
      return false;
    }
  }
  return true;
}

bool c9_reference_kl(std::string& why) {
  for (int n : {444, 600, 800, 1000}) {
    solver::SolverConfig cfg = solver::default_config(n);
    cfg.grid_size = 20001;
    cfg.tolerance = 1e-8;
    const auto res = solver::blahut_arimoto(n, cfg);
    const double d =
        channel::kl_divergence(channel::beta_binomial_reference(n), res.output);
    const double cap = capacity_bounds::gap_cap(n) + 1e-4;
    if (!res.converged || d > cap) {
      std::ostringstream os;
      os << "n=" << n << " D=" << d << " cap=" << cap
         << " converged=" << res.converged;
      why = os.str();
      return false;
    }
  }
  return true;
}

bool c10_collapse(std::string& why) {
  std::vector<long long> ns;
  for (long long n = 1; n <= 1000; ++n) ns.push_back(n);
  for (long long n : log_spaced(1000, 1000000000LL, 60)) ns.push_back(n);
  for (long long n : ns) {
    const double lb = capacity_bounds::capacity_lower_bound(n);
    const auto rep = support_bounds::support_size_lower_bound(n, lb);
    const long long expected = std::max<long long>(
        2, (long long)std::ceil(std::exp(lb)));
    if (rep.loglog_term != 0.0 || rep.final_bound != expected) {
      std::ostringstream os;
      os << "n=" << n << " loglog=" << rep.loglog_term
         << " final=" << rep.final_bound << " expected=" << expected;
      why = os.str();
      return false;
    }
  }
  for (int n = 1; n <= 50; ++n) {
    const auto rep = support_bounds::support_size_lower_bound(
        n, capacity_bounds::capacity_lower_bound(n));
    const long long clusters = (long long)solve_cached(n).extracted_support.size();
    if (clusters < rep.final_bound - 1) {
      why = "n=" + std::to_string(n) + " clusters=" + std::to_string(clusters) +
            " bound=" + std::to_string(rep.final_bound);
      return false;
    }
  }
  return true;
}

bool c11_aux(std::string& why) {
  for (long long n = 2; n <= 500; ++n)
    if (support_bounds::central_mass(n) < 1.0 / (6.0 * 3.14159265358979323846)) {
      why = "central mass n=" + std::to_string(n);
      return false;
    }
  std::vector<int> ns;
  for (int n = 2; n <= 50; ++n) ns.push_back(n);
  for (int n : {60, 75, 100, 150, 200, 250, 300, 350, 400, 450, 500})
    ns.push_back(n);
  for (int n : ns) {
    const auto rep = support_bounds::concavity_check(n, solve_cached(n).output);
    if (!rep.ok) {
      std::ostringstream os;
      os << "concavity n=" << n << " margin=" << rep.min_margin
         << " argmin_y=" << rep.argmin_y;
      why = os.str();
      return false;
    }
  }
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

bool c12_determinism(std::string& why) {
  if (g_cli_path.empty()) {
    why = "needs --cli PATH to the binomcap binary";
    return false;
  }
  const std::string base = "/tmp/binomcap_accept_" + std::to_string(getpid());
  const std::string a = base + "_a.json", b = base + "_b.json";
  for (const std::string& out : {a, b}) {
    const std::string cmd = "\"" + g_cli_path +
                            "\" verify --suite all --seed 0 --out " + out;
    const int rc = std::system(cmd.c_str());
    if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
      why = "verify run failed (" + cmd + ")";
      return false;
    }
  }
  const std::string ra = slurp(a), rb = slurp(b);
  std::remove(a.c_str());
  std::remove(b.c_str());
  if (ra.empty() || ra != rb) {
    why = "reports differ or are empty";
    return false;
  }
  return true;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> cs = {
      {1, "n=1 exactness", c1_n1_exact},
      {2, "bound sandwich n=28..200", c2_sandwich},
      {3, "vanishing gap cap", c3_gap_cap},
      {4, "Parseval identity", c4_parseval},
      {5, "orthopoly suite", c5_orthopoly},
      {6, "mixture chi2 bound on random inputs", c6_mixture_bound},
      {7, "explicit bound dominance", c7_dominance},
      {8, "output ratio floor", c8_ratio},
      {9, "reference output near-optimality", c9_reference_kl},
      {10, "support bound collapse at small n", c10_collapse},
      {11, "concavity and central mass", c11_aux},
      {12, "verify determinism", c12_determinism},
  };
  return cs;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli_path = argv[++i];
    } else {
      wanted.push_back(std::atoi(arg.c_str()));
    }
  }
  if (wanted.empty())
    for (const auto& c : criteria()) wanted.push_back(c.id);

  int failures = 0;
  for (int id : wanted) {
    const auto it =
        std::find_if(criteria().begin(), criteria().end(),
                     [&](const Criterion& c) { return c.id == id; });
    if (it == criteria().end()) {
      std::printf("criterion %2d FAIL  unknown criterion\n", id);
      ++failures;
      continue;
    }
    std::string why;
    bool ok = false;
    try {
      ok = it->run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (ok) {
      std::printf("criterion %2d PASS  %s\n", id, it->title);
    } else {
      std::printf("criterion %2d FAIL  %s — %s\n", id, it->title, why.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

#include "binomcap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "binomcap/channel.hpp"
#include "binomcap/orthopoly.hpp"
#include "binomcap/solver.hpp"
#include "binomcap/support_bounds.hpp"

namespace binomcap::verify {
namespace {

constexpr double kPi = 3.14159265358979323846;

// splitmix64; the documented, platform-stable seed mixer
std::uint64_t mix(std::uint64_t s, std::uint64_t tag) {
  std::uint64_t z = s + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// top 53 bits of an mt19937_64 draw; avoids the implementation-defined
// std::uniform_real_distribution so reports are byte-identical everywhere
double uniform01(std::mt19937_64& g) {
  return double(g() >> 11) * 0x1.0p-53;
}

channel::DiscreteInput random_input(std::mt19937_64& g, int k) {
  channel::DiscreteInput in;
  in.atoms.resize(size_t(k));
  double total = 0.0;
  for (auto& atom : in.atoms) {
    atom.x = uniform01(g);
    atom.p = 0.05 + uniform01(g);
    total += atom.p;
  }
  for (auto& atom : in.atoms) atom.p /= total;
  return in;
}

struct Recorder {
  SuiteReport rep;

  explicit Recorder(std::string suite) { rep.suite = std::move(suite); }

  void require(bool ok, const std::string& check, double value, double limit) {
    ++rep.checks;
    if (!ok) rep.failures.push_back({rep.suite, check, value, limit});
  }
  void le(double value, double limit, const std::string& check) {
    require(value <= limit, check, value, limit);
  }
  void ge(double value, double limit, const std::string& check) {
    require(value >= limit, check, value, limit);
  }
};

std::string tag_nk(long long n, int k) {
  return "n=" + std::to_string(n) + " k=" + std::to_string(k);
}

// ---- orthopoly: h-norm ladder, A H_k = T~_k, exact orthogonality, adjoint

void hk_ladder(Recorder& r) {
  for (long long n : {5, 10, 20, 40}) {
    const int kmax = int(std::min<long long>(15, n));
    double prev = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const double lh = orthopoly::log_hk_norm(k, n);
      const double exact =
          std::log(orthopoly::hk_norm_exact(k, n).get_d());
      r.le(std::abs(lh - exact), 1e-10 * (1.0 + std::abs(exact)),
           "log_hk_norm vs exact " + tag_nk(n, k));
      if (k >= 2)
        r.require(lh > prev, "h_k strictly increasing " + tag_nk(n, k), lh,
                  prev);
      prev = lh;
    }
  }
}

void forward_of_hk(Recorder& r) {
  for (long long n : {8, 16}) {
    for (int k = 0; k <= 12; ++k) {
      if (k > n) break;
      orthopoly::PolyX lhs =
          orthopoly::forward_operator(orthopoly::hk_polynomial(k, n), n);
      orthopoly::PolyX rhs = orthopoly::shifted_chebyshev(k);
      lhs.trim();
      rhs.trim();
      bool same = lhs.coef.size() == rhs.coef.size();
      double diff = same ? 0.0 : 1.0;
      if (same)
        for (size_t j = 0; j < lhs.coef.size(); ++j)
          if (cmp(lhs.coef[j], rhs.coef[j]) != 0) {
            same = false;
            diff = mpq_class(lhs.coef[j] - rhs.coef[j]).get_d();
            break;
          }
      r.require(same, "A H_k == T~_k " + tag_nk(n, k), diff, 0.0);
    }
  }
}

void exact_orthogonality(Recorder& r) {
  for (long long n : {8, 16}) {
    std::vector<orthopoly::PolyY> h;
    for (int k = 0; k <= 6; ++k) h.push_back(orthopoly::hk_polynomial(k, n));
    for (int k = 0; k <= 6; ++k)
      for (int m = k; m <= 6; ++m) {
        mpq_class acc(0);
        for (long y = 0; y <= long(n); ++y)
          acc += orthopoly::beta_binomial_exact(int(n), int(y)) *
                 h[size_t(k)].eval_int(y) * h[size_t(m)].eval_int(y);
        const mpq_class want =
            k == m ? orthopoly::hk_norm_exact(k, n) : mpq_class(0);
        r.require(cmp(acc, want) == 0,
                  "E[H_k H_m] " + tag_nk(n, k) + " m=" + std::to_string(m),
                  mpq_class(acc - want).get_d(), 0.0);
      }
  }
}

void adjoint_trials(Recorder& r, std::uint64_t seed) {
  const long long n = 20;
  const channel::DiscreteInput quad = channel::chebyshev_quadrature_input(100);
  std::mt19937_64 g(mix(seed, 11));
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
    r.le(res, 1e-9, "adjoint residual trial " + std::to_string(trial));
  }
}

SuiteReport suite_orthopoly(std::uint64_t seed) {
  Recorder r("orthopoly");
  hk_ladder(r);
  forward_of_hk(r);
  exact_orthogonality(r);
  adjoint_trials(r, seed);
  return std::move(r.rep);
}

// ---- parseval: direct chi2 against the coefficient expansion

SuiteReport suite_parseval(std::uint64_t seed) {
  Recorder r("parseval");
  std::mt19937_64 g(mix(seed, 22));
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + int(g() % 29);
    const int k = 1 + int(g() % 5);
    const channel::DiscreteInput in = random_input(g, k);
    ++r.rep.random_inputs;
    const double direct = channel::chi2_divergence(
        channel::induced_output(in, n), channel::beta_binomial_reference(n));
    const double series = orthopoly::parseval_chi2(in, n, n);
    r.le(std::abs(direct - series), 1e-9,
         "chi2 identity trial " + std::to_string(trial) +
             " n=" + std::to_string(n));
  }
  return std::move(r.rep);
}

// ---- eym: Frobenius defect sandwiched by the rank bound and the moment sum

SuiteReport suite_eym(std::uint64_t seed) {
  Recorder r("eym");
  for (int n : {6, 10, 14, 20, 26, 30})
    for (int k = 1; k <= 3; ++k) {
      std::mt19937_64 g(mix(seed, 33 + std::uint64_t(n) * 8 + std::uint64_t(k)));
      for (int trial = 0; trial < 12; ++trial) {
        const channel::DiscreteInput in = random_input(g, k);
        ++r.rep.random_inputs;
        std::vector<int> ls;
        for (int l = k + 1; l <= std::min(k + 5, (n + 2) / 2); ++l)
          ls.push_back(l);
        ls.push_back(12);
        for (int l : ls) {
          const double defect = support_bounds::frobenius_defect(in, l);
          const std::string where = "n=" + std::to_string(n) +
                                    " K=" + std::to_string(k) +
                                    " L=" + std::to_string(l) +
                                    " trial=" + std::to_string(trial);
          r.ge(defect, 0.25 * double(l - k) - 1e-10, "eym lower " + where);
          const auto mom = orthopoly::chebyshev_moments(in, 2 * l - 2);
          double sq = 0.0;
          for (size_t j = 1; j < mom.eps.size(); ++j)
            sq += mom.eps[j] * mom.eps[j];
          r.le(defect, double(l) * sq + 1e-10, "eym upper " + where);
        }
      }
    }
  return std::move(r.rep);
}

// ---- thm5: chi2 >= B_n(L) on random mixtures, plus the closed-form
// relaxation never exceeding B_n(L)

SuiteReport suite_thm5(std::uint64_t seed) {
  Recorder r("thm5");
  for (int n : {4, 6, 9, 12, 16, 20, 25, 30})
    for (int k = 1; k <= 3; ++k) {
      std::mt19937_64 g(mix(seed, 44 + std::uint64_t(n) * 8 + std::uint64_t(k)));
      for (int trial = 0; trial < 42; ++trial) {
        const channel::DiscreteInput in = random_input(g, k);
        ++r.rep.random_inputs;
        const double chi2 = channel::chi2_divergence(
            channel::induced_output(in, n),
            channel::beta_binomial_reference(n));
        for (int l = k + 1; l <= (n + 2) / 2; ++l)
          r.ge(chi2, support_bounds::mixture_chi2_lower_bound(k, l, n) - 1e-12,
               "chi2 >= B n=" + std::to_string(n) + " K=" + std::to_string(k) +
                   " L=" + std::to_string(l) +
                   " trial=" + std::to_string(trial));
      }
    }
  for (int n = 2; n <= 60; ++n)
    for (int k = 1; k < (n + 2) / 2; ++k)
      for (int l = k + 1; l <= (n + 2) / 2; ++l) {
        const double b = support_bounds::mixture_chi2_lower_bound(k, l, n);
        r.le(support_bounds::explicit_lower_bound(k, l, n),
             b * (1.0 + 1e-12) + 1e-308,
             "explicit <= B n=" + std::to_string(n) + " K=" + std::to_string(k) +
                 " L=" + std::to_string(l));
      }
  return std::move(r.rep);
}

// ---- kkt: solver certificates at a few n

SuiteReport suite_kkt(std::uint64_t) {
  Recorder r("kkt");
  for (int n : {1, 2, 10}) {
    const solver::SolverConfig cfg = solver::default_config(n);
    const solver::SolverResult res = solver::blahut_arimoto(n, cfg);
    const std::string where = "n=" + std::to_string(n);
    r.require(res.converged, "solver converged " + where, res.duality_gap,
              cfg.tolerance);
    const int scan = std::min(10 * (cfg.grid_size - 1) + 1, 20001);
    const solver::KktReport kkt = solver::kkt_check(res, n, scan, 1e-5);
    r.le(kkt.max_violation, 1e-5, "kkt max violation " + where);
    r.le(kkt.support_deviation, 1e-5, "kkt support deviation " + where);
  }
  return std::move(r.rep);
}

// ---- ratio: reference-to-optimal output ratio stays above c_star

SuiteReport suite_ratio(std::uint64_t) {
  Recorder r("ratio");
  const double floor = support_bounds::c_star();
  for (int n = 1; n <= 20; ++n) {
    const solver::SolverResult res =
        solver::blahut_arimoto(n, solver::default_config(n));
    r.ge(solver::verify_output_ratio(n, res), floor,
         "ratio n=" + std::to_string(n));
  }
  return std::move(r.rep);
}

// ---- concavity: second-difference certificate and the central-mass floor

SuiteReport suite_concavity(std::uint64_t) {
  Recorder r("concavity");
  std::vector<int> ns;
  for (int n = 2; n <= 30; ++n) ns.push_back(n);
  ns.push_back(50);
  for (int n : ns) {
    const solver::SolverResult res =
        solver::blahut_arimoto(n, solver::default_config(n));
    const support_bounds::ConcavityReport rep =
        support_bounds::concavity_check(n, res.output);
    r.require(rep.ok,
              "discrete concavity n=" + std::to_string(n) +
                  " argmin_y=" + std::to_string(rep.argmin_y),
              rep.min_margin, -1e-6);
  }
  for (long long n = 2; n <= 500; ++n)
    r.ge(support_bounds::central_mass(n), 1.0 / (6.0 * kPi),
         "central mass n=" + std::to_string(n));
  return std::move(r.rep);
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "orthopoly", "parseval", "eym", "thm5", "kkt", "ratio", "concavity"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "orthopoly") return suite_orthopoly(seed);
  if (name == "parseval") return suite_parseval(seed);
  if (name == "eym") return suite_eym(seed);
  if (name == "thm5") return suite_thm5(seed);
  if (name == "kkt") return suite_kkt(seed);
  if (name == "ratio") return suite_ratio(seed);
  if (name == "concavity") return suite_concavity(seed);
  throw std::domain_error("verify: unknown suite '" + name + "'");
}

std::vector<SuiteReport> run_all(std::uint64_t seed) {
  std::vector<SuiteReport> out;
  for (const std::string& name : suite_names())
    out.push_back(run_suite(name, seed));
  return out;
}

}  // namespace binomcap::verify

#include "binomcap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "binomcap/numerics.hpp"

namespace binomcap::solver {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// stands in for ln 0 inside masked dot products: 0 * kLogFloor == 0, no NaN
constexpr double kLogFloor = -1e300;
constexpr long double kQFloor = 1e-4000L;

struct Grid {
  int n = 0;
  int g = 0;
  std::vector<double> x;
  std::vector<double> w;      // g x (n+1) row-major, linear probabilities
  std::vector<double> neg_h;  // per-row sum of w ln w

  const double* row(int i) const { return w.data() + size_t(i) * size_t(n + 1); }
};

Grid build_grid(int n, int g) {
  Grid gr;
  gr.n = n;
  gr.g = g;
  gr.x.resize(size_t(g));
  gr.w.resize(size_t(g) * size_t(n + 1));
  gr.neg_h.resize(size_t(g));
  std::vector<double> ent(size_t(n) + 1);
  for (int i = 0; i < g; ++i) {
    gr.x[size_t(i)] = double(i) / double(g - 1);
    const channel::ChannelRow row = channel::binomial_row(n, gr.x[size_t(i)]);
    double* dst = gr.w.data() + size_t(i) * size_t(n + 1);
    for (int y = 0; y <= n; ++y) {
      const double lp = row.log_probs[size_t(y)];
      const double p = std::exp(lp);
      dst[y] = p;
      ent[size_t(y)] = p > 0.0 ? p * lp : 0.0;
    }
    gr.neg_h[size_t(i)] = numerics::compensated_sum(ent);
  }
  return gr;
}

struct Eval {
  std::vector<double> q;   // n+1
  std::vector<double> lq;  // n+1, floored
  std::vector<double> d;   // g, D(P_{Y|x_i} || q)
  double mi = 0.0;
  double max_d = 0.0;
  double gap = 0.0;
};

void evaluate(const Grid& gr, const std::vector<double>& p, Eval& e) {
  const int n1 = gr.n + 1;
  e.q.assign(size_t(n1), 0.0);
  for (int i = 0; i < gr.g; ++i) {
    const double pi = p[size_t(i)];
    if (pi == 0.0) continue;
    const double* wi = gr.row(i);
    for (int y = 0; y < n1; ++y) e.q[size_t(y)] += pi * wi[y];
  }
  e.lq.resize(size_t(n1));
  for (int y = 0; y < n1; ++y)
    e.lq[size_t(y)] =
        e.q[size_t(y)] > 0.0 ? std::log(e.q[size_t(y)]) : kLogFloor;
  e.d.resize(size_t(gr.g));
  e.max_d = kNegInf;
  double acc = 0.0, comp = 0.0;  // Neumaier over p_i d_i
  for (int i = 0; i < gr.g; ++i) {
    const double* wi = gr.row(i);
    double dot = 0.0;
    for (int y = 0; y < n1; ++y) dot += wi[y] * e.lq[size_t(y)];
    const double di = gr.neg_h[size_t(i)] - dot;
    e.d[size_t(i)] = di;
    if (di > e.max_d) e.max_d = di;
    const double pi = p[size_t(i)];
    if (pi > 0.0) {
      const double term = pi * di;
      const double t = acc + term;
      if (std::abs(acc) >= std::abs(term))
        comp += (acc - t) + term;
      else
        comp += (term - t) + acc;
      acc = t;
    }
  }
  e.mi = acc + comp;
  e.gap = e.max_d - e.mi;
}

void normalize(std::vector<double>& p) {
  const double s = numerics::compensated_sum(p);
  for (double& v : p) {
    v /= s;
    if (v < 1e-300) v = 0.0;  // BA cannot shrink these back to relevance
  }
}

void symmetrize(std::vector<double>& p) {
  const size_t g = p.size();
  for (size_t i = 0; 2 * i + 1 < g; ++i) {
    const double avg = 0.5 * (p[i] + p[g - 1 - i]);
    p[i] = avg;
    p[g - 1 - i] = avg;
  }
}

void accel_step(const std::vector<double>& p, const Eval& e, double gamma,
                std::vector<double>& out) {
  const size_t g = p.size();
  out.resize(g);
  for (size_t i = 0; i < g; ++i)
    out[i] =
        p[i] > 0.0 ? p[i] * std::exp(gamma * (e.d[i] - e.max_d)) : 0.0;
  normalize(out);
}

struct PhaseStatus {
  bool converged = false;
  bool out_of_budget = false;
};

// multiplicative BA with an adaptive exponent; falls back to the plain step
// whenever acceleration would decrease I, so accepted I never drops
PhaseStatus run_phase1(const Grid& gr, std::vector<double>& p, Eval& e,
                       double tol, long long max_iter, long long& iters,
                       std::vector<double>& trace) {
  std::vector<double> p_try;
  std::vector<double> gap_hist;
  Eval e_try;
  double gamma = 1.0;
  long long accepted = 0;
  for (;;) {
    trace.push_back(e.mi);
    if (e.gap <= tol) return {true, false};
    gap_hist.push_back(e.gap);
    const size_t h = gap_hist.size();
    // progress has flattened out and the iterate is already localized:
    // hand over to the exchange phase
    if (e.gap < 3e-4 && h >= 200 && gap_hist[h - 200] < 1.3 * e.gap)
      return {false, false};
    if (iters >= max_iter) return {false, true};
    accel_step(p, e, gamma, p_try);
    evaluate(gr, p_try, e_try);
    ++iters;
    if (e_try.mi >= e.mi - 1e-15) {
      gamma = std::min(gamma * 1.25, 64.0);
    } else {
      accel_step(p, e, 1.0, p_try);
      evaluate(gr, p_try, e_try);
      ++iters;
      gamma = 1.0;
    }
    p.swap(p_try);
    std::swap(e, e_try);
    ++accepted;
    if (accepted % 100 == 0) {
      symmetrize(p);  // I is concave and symmetric, so this cannot lower it
      evaluate(gr, p, e);
      ++iters;
    }
  }
}

// ---- support-restricted inner solves (long double throughout) ----

struct TWork {
  std::vector<int> idx;
  int m = 0;
  int n1 = 0;
  std::vector<long double> wt;     // m x n1, cast from the grid rows
  std::vector<long double> neg_h;  // m

  const long double* row(int i) const {
    return wt.data() + size_t(i) * size_t(n1);
  }
};

void build_twork(const Grid& gr, const std::vector<int>& t, TWork& tw) {
  tw.idx = t;
  tw.m = int(t.size());
  tw.n1 = gr.n + 1;
  tw.wt.resize(size_t(tw.m) * size_t(tw.n1));
  tw.neg_h.assign(size_t(tw.m), 0.0L);
  for (int k = 0; k < tw.m; ++k) {
    const double* src = gr.row(t[size_t(k)]);
    long double* dst = tw.wt.data() + size_t(k) * size_t(tw.n1);
    long double h = 0.0L;
    for (int y = 0; y < tw.n1; ++y) {
      dst[y] = (long double)src[y];
      if (dst[y] > 0.0L) h += dst[y] * std::log(dst[y]);
    }
    tw.neg_h[size_t(k)] = h;
  }
}

struct TEval {
  std::vector<long double> q, lq, d;
  long double mi = 0.0L;
  long double max_d = 0.0L;
  long double gap = 0.0L;
};

void t_evaluate(const TWork& tw, const std::vector<long double>& w, TEval& te) {
  te.q.assign(size_t(tw.n1), 0.0L);
  for (int k = 0; k < tw.m; ++k) {
    if (w[size_t(k)] == 0.0L) continue;
    const long double* wk = tw.row(k);
    for (int y = 0; y < tw.n1; ++y) te.q[size_t(y)] += w[size_t(k)] * wk[y];
  }
  te.lq.resize(size_t(tw.n1));
  for (int y = 0; y < tw.n1; ++y)
    te.lq[size_t(y)] = std::log(te.q[size_t(y)] + kQFloor);
  te.d.resize(size_t(tw.m));
  te.mi = 0.0L;
  te.max_d = -std::numeric_limits<long double>::infinity();
  for (int k = 0; k < tw.m; ++k) {
    const long double* wk = tw.row(k);
    long double dot = 0.0L;
    for (int y = 0; y < tw.n1; ++y) dot += wk[y] * te.lq[size_t(y)];
    te.d[size_t(k)] = tw.neg_h[size_t(k)] - dot;
    te.max_d = std::max(te.max_d, te.d[size_t(k)]);
    te.mi += w[size_t(k)] * te.d[size_t(k)];
  }
  te.gap = te.max_d - te.mi;
}

// bordered KKT system [S 1; 1^T 0][dir; lambda] = [d; 0] over the atoms that
// currently carry mass, by Gaussian elimination with partial pivoting;
// S_ij = sum_y W_iy W_jy / q_y.  S has rank <= n+1, so the system is only
// solved on the active set (plus a tiny ridge) and a relative pivot guard
// rejects near-singular cases in favor of the Frank-Wolfe fallback.
bool newton_direction(const TWork& tw, const TEval& te,
                      const std::vector<long double>& w,
                      std::vector<long double>& dir) {
  std::vector<int> act;
  for (int k = 0; k < tw.m; ++k)
    if (w[size_t(k)] > 0.0L) act.push_back(k);
  const int m = int(act.size());
  if (m < 2) return false;
  const int dim = m + 1;
  std::vector<long double> a(size_t(dim) * size_t(dim), 0.0L);
  std::vector<long double> rhs(size_t(dim), 0.0L);
  long double diag_max = 0.0L;
  for (int i = 0; i < m; ++i) {
    const long double* wi = tw.row(act[size_t(i)]);
    for (int j = i; j < m; ++j) {
      const long double* wj = tw.row(act[size_t(j)]);
      long double s = 0.0L;
      for (int y = 0; y < tw.n1; ++y)
        s += wi[y] * wj[y] / (te.q[size_t(y)] + kQFloor);
      a[size_t(i) * size_t(dim) + size_t(j)] = s;
      a[size_t(j) * size_t(dim) + size_t(i)] = s;
      if (i == j) diag_max = std::max(diag_max, s);
    }
    a[size_t(i) * size_t(dim) + size_t(m)] = 1.0L;
    a[size_t(m) * size_t(dim) + size_t(i)] = 1.0L;
    rhs[size_t(i)] = te.d[size_t(act[size_t(i)])];
  }
  const long double ridge = 1e-12L * std::max(diag_max, 1.0L);
  for (int i = 0; i < m; ++i) a[size_t(i) * size_t(dim) + size_t(i)] += ridge;
  const long double piv_floor = 1e-16L * std::max(diag_max, 1.0L);
  for (int col = 0; col < dim; ++col) {
    int piv = col;
    for (int r = col + 1; r < dim; ++r)
      if (std::abs(a[size_t(r) * size_t(dim) + size_t(col)]) >
          std::abs(a[size_t(piv) * size_t(dim) + size_t(col)]))
        piv = r;
    if (std::abs(a[size_t(piv) * size_t(dim) + size_t(col)]) <= piv_floor)
      return false;
    if (piv != col) {
      for (int c = 0; c < dim; ++c)
        std::swap(a[size_t(piv) * size_t(dim) + size_t(c)],
                  a[size_t(col) * size_t(dim) + size_t(c)]);
      std::swap(rhs[size_t(piv)], rhs[size_t(col)]);
    }
    const long double inv = 1.0L / a[size_t(col) * size_t(dim) + size_t(col)];
    for (int r = col + 1; r < dim; ++r) {
      const long double f = a[size_t(r) * size_t(dim) + size_t(col)] * inv;
      if (f == 0.0L) continue;
      for (int c = col; c < dim; ++c)
        a[size_t(r) * size_t(dim) + size_t(c)] -=
            f * a[size_t(col) * size_t(dim) + size_t(c)];
      rhs[size_t(r)] -= f * rhs[size_t(col)];
    }
  }
  std::vector<long double> sol(static_cast<size_t>(dim));
  for (int r = dim - 1; r >= 0; --r) {
    long double v = rhs[size_t(r)];
    for (int c = r + 1; c < dim; ++c)
      v -= a[size_t(r) * size_t(dim) + size_t(c)] * sol[size_t(c)];
    sol[size_t(r)] = v / a[size_t(r) * size_t(dim) + size_t(r)];
    if (!std::isfinite((double)sol[size_t(r)])) return false;
  }
  dir.assign(size_t(tw.m), 0.0L);
  for (int i = 0; i < m; ++i) dir[size_t(act[size_t(i)])] = sol[size_t(i)];
  return true;
}

void renormalize_l(std::vector<long double>& w) {
  long double s = 0.0L;
  for (long double v : w) s += v;
  for (long double& v : w) v /= s;
}

bool try_direction(const TWork& tw, std::vector<long double>& w, TEval& te,
                   const std::vector<long double>& dir, TEval& scratch) {
  // feasibility cap from the ratio test, then backtrack on the objective
  long double t_max = std::numeric_limits<long double>::infinity();
  for (int k = 0; k < tw.m; ++k)
    if (dir[size_t(k)] < 0.0L && w[size_t(k)] > 0.0L)
      t_max = std::min(t_max, -w[size_t(k)] / dir[size_t(k)]);
  long double t = std::min((long double)1.0L, t_max);
  if (!(t > 0.0L)) t = 1.0L;  // fully blocked: rely on clipping
  std::vector<long double> w_try(size_t(tw.m));
  for (int bt = 0; bt < 60; ++bt) {
    for (int k = 0; k < tw.m; ++k)
      w_try[size_t(k)] = std::max(0.0L, w[size_t(k)] + t * dir[size_t(k)]);
    renormalize_l(w_try);
    t_evaluate(tw, w_try, scratch);
    if (scratch.mi >= te.mi - 1e-18L) {
      w.swap(w_try);
      std::swap(te, scratch);
      return true;
    }
    t *= 0.5L;
  }
  return false;
}

// maximize I over the simplex restricted to the candidate set
bool inner_solve(const TWork& tw, std::vector<long double>& w, double tol,
                 long long max_iter, long long& iters, TEval& te) {
  t_evaluate(tw, w, te);
  std::vector<long double> dir;
  TEval scratch;
  long double best_mi = te.mi;
  int stagnant = 0;
  for (int step = 0; step < 500; ++step) {
    if (te.gap <= 0.1L * (long double)tol) return true;
    if (iters >= max_iter) return false;
    ++iters;
    bool moved = false;
    if (newton_direction(tw, te, w, dir)) {
      long double slope = 0.0L;
      for (int k = 0; k < tw.m; ++k) slope += te.d[size_t(k)] * dir[size_t(k)];
      if (slope > 0.0L) moved = try_direction(tw, w, te, dir, scratch);
    }
    if (!moved) {
      // Frank-Wolfe toward the largest divergence
      int jstar = 0;
      for (int k = 1; k < tw.m; ++k)
        if (te.d[size_t(k)] > te.d[size_t(jstar)]) jstar = k;
      dir.assign(size_t(tw.m), 0.0L);
      for (int k = 0; k < tw.m; ++k) dir[size_t(k)] = -w[size_t(k)];
      dir[size_t(jstar)] += 1.0L;
      moved = try_direction(tw, w, te, dir, scratch);
    }
    if (!moved) return te.gap <= 0.1L * (long double)tol;
    // steps that only shuffle mass by a clipped epsilon count as moved but
    // make no progress; cut the loop instead of burning the full budget
    if (te.mi > best_mi + 1e-15L * (1.0L + std::abs(best_mi))) {
      best_mi = te.mi;
      stagnant = 0;
    } else if (++stagnant >= 8) {
      break;
    }
  }
  return te.gap <= 0.1L * (long double)tol;
}

void drop_tiny_masses(const TWork& tw, std::vector<long double>& w, TEval& te) {
  std::vector<long double> w2 = w;
  bool any = false;
  for (long double& v : w2)
    if (v != 0.0L && v < 1e-22L) {
      v = 0.0L;
      any = true;
    }
  if (!any) return;
  renormalize_l(w2);
  TEval te2;
  t_evaluate(tw, w2, te2);
  if (te2.mi >= te.mi - 1e-17L) {
    w.swap(w2);
    std::swap(te, te2);
  }
}

void add_with_mirror(std::vector<int>& t, int idx, int g) {
  t.push_back(idx);
  t.push_back(g - 1 - idx);
}

// Newton exchange over a growing candidate set; true when the full-grid
// duality gap reaches the tolerance
bool run_phase2(const Grid& gr, std::vector<double>& p, Eval& e, double tol,
                long long max_iter, long long& iters,
                std::vector<double>& trace, std::vector<int>& t_persist) {
  const int g = gr.g;
  std::vector<int> t = t_persist;
  add_with_mirror(t, 0, g);
  for (int i = 0; i < g; ++i) {
    if (p[size_t(i)] <= 1e-10) continue;
    const bool up_ok = i == 0 || p[size_t(i)] >= p[size_t(i) - 1];
    const bool down_ok = i == g - 1 || p[size_t(i)] >= p[size_t(i) + 1];
    if (up_ok && down_ok) add_with_mirror(t, i, g);
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());

  for (int round = 0; round < 80; ++round) {
    if (iters >= max_iter) break;
    TWork tw;
    build_twork(gr, t, tw);
    std::vector<long double> w(t.size(), 0.0L);
    for (size_t k = 0; k < t.size(); ++k) w[k] = (long double)p[size_t(t[k])];
    renormalize_l(w);
    TEval te;
    inner_solve(tw, w, tol, max_iter, iters, te);
    drop_tiny_masses(tw, w, te);

    std::vector<double> p_new(size_t(g), 0.0);
    for (size_t k = 0; k < t.size(); ++k) p_new[size_t(t[k])] = double(w[k]);
    symmetrize(p_new);
    normalize(p_new);
    Eval e_new;
    evaluate(gr, p_new, e_new);
    ++iters;
    const bool accepted = e_new.mi >= trace.back() - 1e-12;
    if (accepted) {
      p = p_new;
      std::swap(e, e_new);
      trace.push_back(e.mi);
      if (e.gap <= tol) {
        t_persist = t;
        return true;
      }
    }
    // grow the candidate set with the worst off-support violators
    const Eval& src = accepted ? e : e_new;
    std::vector<int> order;
    for (int i = 0; i < g; ++i)
      if (src.d[size_t(i)] > src.mi + tol &&
          !std::binary_search(t.begin(), t.end(), i))
        order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return src.d[size_t(a)] > src.d[size_t(b)];
    });
    if (order.empty()) {
      t_persist = t;
      return e.gap <= tol;
    }
    // rebuild the set from atoms that kept mass plus the new violators, so
    // it stays near the true support size instead of accumulating dead points
    std::vector<int> t_next;
    add_with_mirror(t_next, 0, g);
    for (size_t k = 0; k < t.size(); ++k)
      if (w[k] > 1e-12L) add_with_mirror(t_next, t[k], g);
    const size_t take = std::min<size_t>(order.size(), 6);
    for (size_t k = 0; k < take; ++k) add_with_mirror(t_next, order[k], g);
    t.swap(t_next);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  t_persist = t;
  return false;
}

SolverResult exact_n1(const SolverConfig& config) {
  SolverResult res;
  res.n = 1;
  res.capacity_estimate = std::log(2.0);
  res.input.atoms = {{0.0, 0.5}, {1.0, 0.5}};
  res.output.n = 1;
  res.output.log_probs = {std::log(0.5), std::log(0.5)};
  res.iterations = 0;
  res.duality_gap = 0.0;
  res.converged = true;
  res.extracted_support = {{0.0, 0.5}, {1.0, 0.5}};
  res.mi_trace = {res.capacity_estimate};
  (void)config;
  return res;
}

void validate_config(int n, const SolverConfig& c) {
  if (n < 1) throw std::domain_error("blahut_arimoto: n must be >= 1");
  if (c.grid_size < 2) throw std::domain_error("solver: grid_size must be >= 2");
  if (!(c.tolerance > 0.0)) throw std::domain_error("solver: tolerance must be > 0");
  if (c.max_iterations < 1)
    throw std::domain_error("solver: max_iterations must be >= 1");
  if (!(c.support_threshold > 0.0 && c.support_threshold < 1.0))
    throw std::domain_error("solver: support_threshold must be in (0,1)");
  if (!(c.cluster_radius > 0.0 && c.cluster_radius < 1.0))
    throw std::domain_error("solver: cluster_radius must be in (0,1)");
}

}  // namespace

SolverConfig default_config(int n) {
  if (n < 1) throw std::domain_error("default_config: n must be >= 1");
  SolverConfig c;
  c.grid_size = std::min(20 * n + 1, 20001);
  c.cluster_radius = 0.25 / std::sqrt(double(n) + 1.0);
  return c;
}

SolverResult blahut_arimoto(int n, const SolverConfig& config) {
  validate_config(n, config);
  if (n == 1) return exact_n1(config);

  const int g = config.grid_size;
  long long iters = 0;
  std::vector<double> p;

  // multigrid warm start: solve a 2x-coarsened grid first, then prolongate
  int coarse = g;
  while (coarse > 2501 && (coarse - 1) % 2 == 0) coarse = (coarse - 1) / 2 + 1;
  if (coarse < g && coarse >= 2) {
    SolverConfig cc = config;
    cc.grid_size = coarse;
    cc.tolerance = std::max(config.tolerance, 1e-7);
    SolverResult warm = blahut_arimoto(n, cc);
    iters += warm.iterations;
    p.assign(size_t(g), 0.05 / double(g));
    for (const auto& atom : warm.input.atoms) {
      const int idx = int(std::lround(atom.x * double(g - 1)));
      p[size_t(idx)] += 0.95 * atom.p;
    }
    normalize(p);
  } else {
    p.assign(size_t(g), 1.0 / double(g));
  }

  const Grid gr = build_grid(n, g);
  Eval e;
  evaluate(gr, p, e);
  ++iters;

  std::vector<double> trace;
  trace.push_back(e.mi);
  std::vector<int> t_persist;
  bool converged = false;
  for (int cycle = 0; cycle < 3 && !converged; ++cycle) {
    const PhaseStatus st = run_phase1(gr, p, e, config.tolerance,
                                      config.max_iterations, iters, trace);
    if (st.converged) {
      converged = true;
      break;
    }
    if (st.out_of_budget) break;
    converged = run_phase2(gr, p, e, config.tolerance, config.max_iterations,
                           iters, trace, t_persist);
    if (iters >= config.max_iterations) break;
  }

  SolverResult res;
  res.n = n;
  res.capacity_estimate = e.mi;
  res.iterations = iters;
  res.duality_gap = e.gap;
  res.converged = converged || e.gap <= config.tolerance;
  res.mi_trace = std::move(trace);
  for (int i = 0; i < g; ++i)
    if (p[size_t(i)] > 0.0) res.input.atoms.push_back({gr.x[size_t(i)], p[size_t(i)]});
  res.output.n = n;
  res.output.log_probs.resize(size_t(n) + 1);
  for (int y = 0; y <= n; ++y)
    res.output.log_probs[size_t(y)] =
        e.q[size_t(y)] > 0.0 ? std::log(e.q[size_t(y)]) : kNegInf;
  res.extracted_support =
      extract_support(res.input, config.support_threshold, config.cluster_radius);
  return res;
}

KktReport kkt_check(const SolverResult& result, int n, int scan_grid,
                    double slack_tol) {
  if (scan_grid < 2) throw std::domain_error("kkt_check: scan_grid must be >= 2");
  if (result.output.n != n)
    throw std::invalid_argument("kkt_check: result does not match n");
  KktReport rep;
  rep.max_violation = kNegInf;
  for (int j = 0; j < scan_grid; ++j) {
    const double x = double(j) / double(scan_grid - 1);
    const double kl =
        channel::kl_divergence(channel::binomial_row(n, x), result.output);
    rep.max_violation = std::max(rep.max_violation, kl - result.capacity_estimate);
  }
  rep.support_deviation = 0.0;
  for (const Cluster& c : result.extracted_support) {
    const double kl = channel::kl_divergence(channel::binomial_row(n, c.center),
                                             result.output);
    rep.support_deviation =
        std::max(rep.support_deviation, std::abs(kl - result.capacity_estimate));
  }
  rep.passed =
      rep.max_violation <= slack_tol && rep.support_deviation <= slack_tol;
  return rep;
}

std::vector<Cluster> extract_support(const channel::DiscreteInput& input,
                                     double threshold, double radius) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::domain_error("extract_support: threshold must be in (0,1)");
  if (!(radius > 0.0 && radius < 1.0))
    throw std::domain_error("extract_support: radius must be in (0,1)");
  input.validate();
  std::vector<channel::DiscreteInput::Atom> atoms = input.atoms;
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.x < b.x; });
  std::vector<Cluster> clusters;
  double mass = 0.0, moment = 0.0, last_x = 0.0;
  bool open = false;
  for (const auto& atom : atoms) {
    if (atom.p < threshold) continue;
    if (open && atom.x - last_x > radius) {
      clusters.push_back({moment / mass, mass});
      mass = moment = 0.0;
      open = false;
    }
    mass += atom.p;
    moment += atom.p * atom.x;
    last_x = atom.x;
    open = true;
  }
  if (open) clusters.push_back({moment / mass, mass});
  if (clusters.empty())
    throw std::domain_error("extract_support: threshold removed every atom");
  double total = 0.0;
  for (const Cluster& c : clusters) total += c.mass;
  for (Cluster& c : clusters) c.mass /= total;
  return clusters;
}

double verify_output_ratio(int n, const SolverResult& result) {
  if (result.output.n != n)
    throw std::invalid_argument("verify_output_ratio: result does not match n");
  const channel::OutputPmf ref = channel::beta_binomial_reference(n);
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int y = 0; y <= n; ++y)
    min_ratio = std::min(
        min_ratio,
        std::exp(ref.log_probs[size_t(y)] - result.output.log_probs[size_t(y)]));
  return min_ratio;
}

}  // namespace binomcap::solver

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "binomcap/capacity_bounds.hpp"
#include "binomcap/channel.hpp"
#include "binomcap/solver.hpp"
#include "binomcap/support_bounds.hpp"

using namespace binomcap;
using namespace binomcap::solver;

namespace {

SolverResult solve_default(int n) {
  return blahut_arimoto(n, default_config(n));
}

void check_trace_monotone(const SolverResult& r) {
  for (size_t i = 1; i < r.mi_trace.size(); ++i)
    CHECK(r.mi_trace[i] >= r.mi_trace[i - 1] - 1e-12);
}

}  // namespace

TEST_CASE("config defaults and validation") {
  const SolverConfig c10 = default_config(10);
  CHECK(c10.grid_size == 201);
  CHECK(c10.tolerance == 1e-9);
  CHECK(c10.support_threshold == 1e-7);
  CHECK(c10.cluster_radius == doctest::Approx(0.25 / std::sqrt(11.0)));
  CHECK(default_config(5000).grid_size == 20001);
  CHECK_THROWS_AS(default_config(0), std::domain_error);

  SolverConfig bad = c10;
  bad.grid_size = 1;
  CHECK_THROWS_AS(blahut_arimoto(10, bad), std::domain_error);
  bad = c10;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(blahut_arimoto(10, bad), std::domain_error);
  bad = c10;
  bad.support_threshold = 1.5;
  CHECK_THROWS_AS(blahut_arimoto(10, bad), std::domain_error);
  bad = c10;
  bad.cluster_radius = 0.0;
  CHECK_THROWS_AS(blahut_arimoto(10, bad), std::domain_error);
  CHECK_THROWS_AS(blahut_arimoto(0, c10), std::domain_error);
}

TEST_CASE("n=1 closed form") {
  SolverConfig c = default_config(1);
  c.grid_size = 101;
  const SolverResult r = blahut_arimoto(1, c);
  CHECK(r.converged);
  CHECK(r.capacity_estimate == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  REQUIRE(r.extracted_support.size() == 2);
  CHECK(r.extracted_support[0].center == 0.0);
  CHECK(r.extracted_support[1].center == 1.0);
  CHECK(r.extracted_support[0].mass == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.extracted_support[1].mass == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.duality_gap <= 1e-12);

  const KktReport k = kkt_check(r, 1, 1001, 1e-8);
  CHECK(k.max_violation <= 1e-8);
  CHECK(k.support_deviation <= 1e-8);
  CHECK(k.passed);
  CHECK(verify_output_ratio(1, r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("n=2 matches the exact three-atom capacity") {
  const SolverResult r = solve_default(2);  // grid 41 contains {0, 1/2, 1}
  CHECK(r.converged);
  CHECK(r.duality_gap <= 1e-9);
  // optimum log(17/8), input {0, 1/2, 1}
  CHECK(r.capacity_estimate ==
        doctest::Approx(std::log(17.0 / 8.0)).epsilon(2e-9));
  const auto& sup = r.extracted_support;
  REQUIRE(sup.size() == 3);
  CHECK(std::abs(sup.front().center - 0.0) <= 1e-9);
  CHECK(std::abs(sup[1].center - 0.5) <= 1e-6);
  CHECK(std::abs(sup.back().center - 1.0) <= 1e-9);
  // symmetric support and masses
  CHECK(std::abs(sup.front().mass - sup.back().mass) <= 1e-7);
  check_trace_monotone(r);
}

TEST_CASE("n=10 frozen capacity and KKT scan") {
  const SolverResult r = solve_default(10);
  CHECK(r.converged);
  CHECK(r.duality_gap <= 1e-9);
  CHECK(r.capacity_estimate == doctest::Approx(1.2324553917).epsilon(2e-9));
  CHECK(r.capacity_estimate >= capacity_bounds::capacity_lower_bound(10));

  // finer scan sees only the grid discretization error
  const KktReport k = kkt_check(r, 10, 2001, 1e-5);
  CHECK(k.max_violation <= 1e-5);
  CHECK(k.support_deviation <= 1e-5);
  CHECK(k.passed);

  // scanning on the solve grid itself reproduces the final duality gap
  const KktReport ksame = kkt_check(r, 10, 201, 1e-8);
  CHECK(ksame.max_violation == doctest::Approx(r.duality_gap).epsilon(1e-6));

  check_trace_monotone(r);

  // capacity agrees with an independent recomputation from the input
  CHECK(std::abs(channel::mutual_information(r.input, 10) -
                 r.capacity_estimate) <= 1e-9);
}

TEST_CASE("n=50 sandwich and frozen value") {
  const SolverResult r = solve_default(50);
  CHECK(r.converged);
  CHECK(r.capacity_estimate == doctest::Approx(1.8523041140).epsilon(2e-9));
  CHECK(r.capacity_estimate >= capacity_bounds::capacity_lower_bound(50));
  CHECK(r.capacity_estimate <= capacity_bounds::capacity_upper_bound(50));
  check_trace_monotone(r);

  // grid-supported input is symmetric about 1/2
  for (const auto& atom : r.input.atoms) {
    bool found = false;
    for (const auto& other : r.input.atoms)
      if (std::abs(other.x - (1.0 - atom.x)) <= 1e-12) {
        found = std::abs(other.p - atom.p) <= 1e-6;
        if (found) break;
      }
    CHECK(found);
  }
}

TEST_CASE("support windows at a few n") {
  for (int n : {2, 5, 10, 20}) {
    const SolverResult r = solve_default(n);
    REQUIRE(r.converged);
    const double k = double(r.extracted_support.size());
    CHECK(k >= std::max(2.0, std::exp(r.capacity_estimate)) - 1.0);
    CHECK(k <= double(n) / 2.0 + 2.0);
    // cluster centers symmetric about 1/2
    const auto& sup = r.extracted_support;
    for (size_t i = 0; i < sup.size(); ++i) {
      const double mirror = 1.0 - sup[sup.size() - 1 - i].center;
      CHECK(std::abs(sup[i].center - mirror) <= 1e-6);
    }
    // masses sum to one
    double total = 0.0;
    for (const auto& c : sup) total += c.mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("output ratio never falls below c_star") {
  for (int n : {1, 5, 10, 20}) {
    const SolverResult r = solve_default(n);
    REQUIRE(r.converged);
    CHECK(verify_output_ratio(n, r) >= support_bounds::c_star() - 1e-6);
  }
}

TEST_CASE("iteration cap returns a flagged result") {
  SolverConfig c = default_config(10);
  c.max_iterations = 1;
  const SolverResult r = blahut_arimoto(10, c);
  CHECK(!r.converged);
  CHECK(r.duality_gap > c.tolerance);
  CHECK(r.iterations >= 1);
}

TEST_CASE("kkt sensitivity to a perturbed input") {
  const SolverResult r = solve_default(10);
  REQUIRE(r.converged);

  // move 5% of the mass to a non-support point and rebuild the result
  channel::DiscreteInput shifted = r.input;
  double taken = 0.0;
  for (auto& atom : shifted.atoms) {
    const double cut = 0.05 * atom.p;
    atom.p -= cut;
    taken += cut;
  }
  shifted.atoms.push_back({0.33, taken});
  SolverResult fake = r;
  fake.input = shifted;
  fake.output = channel::induced_output(shifted, 10);
  fake.capacity_estimate = channel::mutual_information(shifted, 10);
  const KktReport k = kkt_check(fake, 10, 401, 1e-8);
  CHECK(k.support_deviation > 1e-3);
  CHECK(!k.passed);
}

TEST_CASE("extract support") {
  const channel::DiscreteInput pair{{{0.500, 0.5}, {0.505, 0.5}}};
  const auto merged = extract_support(pair, 1e-7, 0.01);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].center == doctest::Approx(0.5025).epsilon(1e-12));
  CHECK(merged[0].mass == doctest::Approx(1.0).epsilon(1e-12));

  // chain merging: consecutive close atoms coalesce, distant ones split
  const channel::DiscreteInput chain{
      {{0.10, 0.2}, {0.11, 0.2}, {0.12, 0.2}, {0.60, 0.4}}};
  const auto two = extract_support(chain, 1e-7, 0.015);
  REQUIRE(two.size() == 2);
  CHECK(two[0].center == doctest::Approx(0.11).epsilon(1e-9));
  CHECK(two[0].mass == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(two[1].center == doctest::Approx(0.60).epsilon(1e-12));

  // threshold drops the light atom and renormalizes the rest
  const channel::DiscreteInput dusty{{{0.2, 1e-9}, {0.7, 1.0 - 1e-9}}};
  const auto cleaned = extract_support(dusty, 1e-7, 0.01);
  REQUIRE(cleaned.size() == 1);
  CHECK(cleaned[0].mass == doctest::Approx(1.0).epsilon(1e-12));

  const channel::DiscreteInput all_dust{{{0.2, 0.5}, {0.8, 0.5}}};
  CHECK_THROWS_AS(extract_support(all_dust, 0.9, 0.01), std::domain_error);
  CHECK_THROWS_AS(extract_support(pair, 0.0, 0.01), std::domain_error);
  CHECK_THROWS_AS(extract_support(pair, 1e-7, 0.0), std::domain_error);
}

TEST_CASE("capacity estimates are monotone in n") {
  double prev = 0.0;
  for (int n : {1, 2, 4, 8, 16}) {
    const SolverResult r = solve_default(n);
    REQUIRE(r.converged);
    CHECK(r.capacity_estimate > prev);  // more trials, more capacity
    prev = r.capacity_estimate;
  }
}

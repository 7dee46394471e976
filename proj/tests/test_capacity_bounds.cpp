#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "binomcap/capacity_bounds.hpp"
#include "binomcap/channel.hpp"

using namespace binomcap;
using namespace binomcap::capacity_bounds;

TEST_CASE("capacity_lower_bound anchors") {
  // psi(2) - ln 3 + (1/2) ln(3 pi / 2e), high-precision reference
  CHECK(std::abs(capacity_lower_bound(1) + 0.40073045659086027394) <= 1e-12);
  CHECK(capacity_lower_bound(1) < std::log(2.0));  // LB(1) <= C(1) = ln 2
  CHECK(std::abs(capacity_lower_bound(28) - 1.3007508609118962156) <= 1e-13);
  CHECK(std::abs(capacity_lower_bound(444) - 2.7474329332991846222) <= 1e-13);
  CHECK(std::abs(capacity_lower_bound(1000000) - 6.6329697813896665355) <= 1e-12);
  CHECK_THROWS_AS(capacity_lower_bound(0), std::domain_error);
}

TEST_CASE("r_lb anchors and limit") {
  CHECK(std::abs(r_lb(1) + 0.76162407188227391826) <= 1e-14);
  CHECK(std::abs(r_lb(50) + 0.094522507759414835222) <= 1e-14);
  CHECK(std::abs(r_lb(100000000)) <= 1e-3);
}

TEST_CASE("lower bound tracks its asymptote: LB >= asym + r_lb") {
  for (long long n = 1; n <= 1000000; n = std::max(n + 1, (n * 5) / 4)) {
    const double slack =
        capacity_lower_bound(n) - (asymptote(n) + r_lb(n));
    CHECK(slack >= -1e-10);
    // the remainder really is the whole story at large n: slack ~ 7/(6n)
    if (n >= 1000) CHECK(slack <= 1.5 / double(n));
  }
}

TEST_CASE("upper bound anchors and preconditions") {
  CHECK(std::abs(capacity_upper_bound(28) - 10.863792078577019626) <= 1e-12);
  CHECK(std::abs(capacity_upper_bound(444) - 5.2689375922726093613) <= 1e-13);
  CHECK(capacity_upper_bound(28) >= capacity_lower_bound(28));
  CHECK_THROWS_AS(capacity_upper_bound(27), std::domain_error);
  CHECK_THROWS_AS(gap(27), std::domain_error);
  CHECK_THROWS_AS(gap_cap(443), std::domain_error);
}

TEST_CASE("gap values and the 17/ln cap") {
  CHECK(std::abs(gap(28) - 9.6034403825284415231) <= 1e-12);
  CHECK(std::abs(gap(444) - 2.5241270843126097124) <= 1e-13);
  CHECK(gap(444) <= gap_cap(444));
  CHECK(std::abs(gap_cap(444) - 3.0644946692334526687) <= 1e-13);
  CHECK(gap(10000) <= gap_cap(10000));
  CHECK(gap(100000000) <= gap_cap(100000000));
  CHECK(gap(100000000) >= 0.0);

  // 50-point log sweep over [444, 1e8]
  double prev = 1e300;
  for (int i = 0; i < 50; ++i) {
    const double t = double(i) / 49.0;
    const long long n =
        (long long)std::llround(std::exp(std::log(444.0) * (1.0 - t) +
                                         std::log(1e8) * t));
    CHECK(gap(n) <= gap_cap(n));
    CHECK(gap(n) <= prev + 1e-12);
    prev = gap(n);
  }
}

TEST_CASE("UB - LB also sits under the cap at large n") {
  for (long long n : {444LL, 10000LL, 1000000LL}) {
    CHECK(capacity_upper_bound(n) - capacity_lower_bound(n) <=
          gap_cap(n) + 1e-12);
  }
}

TEST_CASE("xie_barron_output") {
  const int n = 100;
  const double eta = canonical_eta(n);
  const double c = canonical_c(n);
  const channel::OutputPmf q = xie_barron_output(n, eta, c);
  double sum = 0.0;
  for (double lq : q.log_probs) sum += std::exp(lq);
  CHECK(std::abs(sum - 1.0) <= 1e-10);

  // entrywise mixture floor
  const channel::OutputPmf ref = channel::beta_binomial_reference(n);
  for (int y = 0; y <= n; ++y)
    CHECK(std::exp(q.log_probs[size_t(y)]) >=
          (1.0 - 2.0 * eta) * std::exp(ref.log_probs[size_t(y)]) * (1.0 - 1e-12));

  CHECK_THROWS_AS(xie_barron_output(n, 0.0, c), std::domain_error);
  CHECK_THROWS_AS(xie_barron_output(n, 0.5, c), std::domain_error);
  CHECK_THROWS_AS(xie_barron_output(n, eta, 0.0), std::domain_error);
  CHECK_THROWS_AS(xie_barron_output(n, eta, c * 2.0), std::domain_error);
}

TEST_CASE("dual certificate stays under the explicit cap") {
  for (int n : {28, 100, 444}) {
    const double eta = canonical_eta(n);
    const double c = canonical_c(n);
    const double dual = dual_certificate_max(n, eta, c, 2001);
    CHECK(dual <= dual_certificate_limit(n, eta, c) + 1e-6);
    CHECK(dual >= capacity_lower_bound(n));  // weak duality above capacity
  }
  CHECK_THROWS_AS(dual_certificate_max(28, canonical_eta(28), canonical_c(28), 10),
                  std::domain_error);
}

TEST_CASE("dual certificate value and grid stability at n=28") {
  const double eta = canonical_eta(28);
  const double c = canonical_c(28);
  const double d1 = dual_certificate_max(28, eta, c, 2001);
  CHECK(std::abs(d1 - 8.1226011) <= 1e-5);  // independently computed
  const double d2 = dual_certificate_max(28, eta, c, 4001);
  CHECK(std::abs(d1 - d2) <= 1e-4);
}

TEST_CASE("weak duality against explicit inputs") {
  const int n = 30;
  const double dual =
      dual_certificate_max(n, canonical_eta(n), canonical_c(n), 1000);
  const channel::DiscreteInput inputs[] = {
      {{{0.0, 0.5}, {1.0, 0.5}}},
      {{{0.1, 0.25}, {0.5, 0.5}, {0.9, 0.25}}},
      {{{0.0, 0.2}, {0.25, 0.3}, {0.75, 0.3}, {1.0, 0.2}}},
  };
  for (const auto& in : inputs)
    CHECK(dual >= channel::mutual_information(in, n) - 1e-6);
}

TEST_CASE("mutual_information_beta_input sits inside the bound sandwich") {
  const double mi = channel::mutual_information_beta_input(100, 4 * 100 + 64);
  CHECK(mi >= capacity_lower_bound(100) - 1e-8);
  CHECK(mi <= capacity_upper_bound(100));
  for (int n : {1, 5, 28, 200}) {
    CHECK(channel::mutual_information_beta_input(n, 4 * n + 64) >=
          capacity_lower_bound(n) - 1e-8);
  }
}

TEST_CASE("make_report presence rules") {
  const CapacityReport r1 = make_report(1);
  CHECK_FALSE(r1.ub.has_value());
  CHECK_FALSE(r1.gap_cap.has_value());
  const CapacityReport r100 = make_report(100);
  CHECK(r100.ub.has_value());
  CHECK(r100.gap.has_value());
  CHECK_FALSE(r100.gap_cap.has_value());
  const CapacityReport big = make_report(444, 2.83);
  CHECK(big.gap_cap.has_value());
  CHECK(big.ba_estimate.has_value());
  CHECK(*big.gap == *big.r_ub - big.r_lb);
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace binomcap::verify {

// one failed property check: the observed value and the bound it broke
struct Failure {
  std::string suite;
  std::string check;
  double value = 0.0;
  double limit = 0.0;
};

struct SuiteReport {
  std::string suite;
  long long checks = 0;         // individual inequalities / identities tested
  long long random_inputs = 0;  // randomized trial inputs consumed
  std::vector<Failure> failures;

  bool passed() const { return failures.empty(); }
};

// the runnable property suites, in canonical order
const std::vector<std::string>& suite_names();

// throws std::domain_error on an unknown suite name ("all" is not a suite
// here; expand it with suite_names() or use run_all)
SuiteReport run_suite(const std::string& name, std::uint64_t seed);

std::vector<SuiteReport> run_all(std::uint64_t seed);

}  // namespace binomcap::verify

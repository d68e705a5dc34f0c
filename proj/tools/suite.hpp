// Invariant suite behind `specflow verify`.
#ifndef SPECFLOW_TOOLS_SUITE_HPP
#define SPECFLOW_TOOLS_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace specflow::cli {

struct CheckOutcome {
  std::string name;
  bool passed = true;
  int cases = 0;
  double worst = 0.0;  // largest violation margin seen, 0 when none
  std::string detail;
};

/// Faults for exercising the failure path of the suite itself.
enum class Fault { none, metric, mu };

Fault parse_fault(const std::string& name);

std::vector<CheckOutcome> run_suite(std::uint64_t seed, Fault fault);

}  // namespace specflow::cli

#endif  // SPECFLOW_TOOLS_SUITE_HPP

#pragma once

#include <string>
#include <vector>

namespace oceansim::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant checks on small canned topologies; each runs in well under a
/// second. `topologies` sets how many random static graphs the discovery
/// check compares against breadth-first search.
std::vector<CheckResult> run_validation(unsigned topologies = 20);

}  // namespace oceansim::harness

#pragma once

#include <cstdint>
#include <vector>

#include "hetsim/alloc_problem.hpp"

namespace hetsim {

/// Enumeration parameters for the brute-force reference optimizer.
struct GridSpec {
  int power_levels = 9;            // equispaced in [0, p_max], endpoints included
  std::uint64_t max_enum = 20'000'000;  // safety cap on enumerated candidates
};

/// Exhaustive maximization of the exact allocation objective over all binary
/// assignments and gridded powers. Ground truth for solver tests; intended
/// for instances around N<=2, M<=3, U<=2. Throws std::length_error when the
/// enumeration would exceed grid.max_enum.
AllocationDecision brute_force_allocation(const AllocProblem& p, const GridSpec& grid);

/// Exhaustive maximum-total-benefit perfect matching; N <= 8 (<= 105
/// matchings). benefits must be square and symmetric. Returns pairs and the
/// ordered-sum total (each unordered pair counted twice).
struct BruteMatching {
  std::vector<std::pair<int, int>> pairs;
  double total = 0.0;
};
BruteMatching brute_force_matching(const std::vector<std::vector<double>>& benefits);

}  // namespace hetsim

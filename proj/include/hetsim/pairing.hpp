#pragma once

#include <optional>
#include <vector>

#include "hetsim/alloc_problem.hpp"
#include "hetsim/allocator.hpp"

namespace hetsim {

/// Symmetric relative-benefit matrix over SBSs (plus one virtual SBS when
/// the count is odd). Entry (i,j) is the joint pooled objective of the pair
/// minus the sum of their solo objectives; the diagonal is zero.
struct BenefitMatrix {
  std::vector<std::vector<double>> c_tilde;
  int n_real = 0;
  bool has_virtual = false;
  int size() const { return static_cast<int>(c_tilde.size()); }
  int virtual_index() const { return has_virtual ? n_real : -1; }
};

struct PairMatching {
  std::vector<std::pair<int, int>> pairs;  // matrix indices, i < j
  double total_benefit = 0.0;              // ordered sum (each pair counted twice)
  bool exact_fallback = false;             // Hungarian result was not an involution
};

/// Averaged "SBS" used to even out an odd population before matching.
struct VirtualSbsStats {
  int users = 1;
  int channels = 1;
  double q_mean = 0.0;
  double w = 0.0;
  double s_minus_rho = 0.0;
  double eta = 0.0;
  double b0_hz = 0.0;
  double bw_mean_hz = 0.0;
  double noise_mean_w = 0.0;
  double gain_mean = 0.0;
  double i0_mean_w = 0.0;
  double cross_mean = 0.0;
};

VirtualSbsStats compute_virtual_stats(const Scenario& scenario, const SlotState& slot,
                                      const QueueState& queues);

struct PairingOptions {
  int benefit_iterations = 50;  // reduced budget: ranking, not exact values
  bool parallel = true;         // fill benefit entries concurrently
};

/// Benefit matrix over the current slot. Candidate-pair instances are solved
/// at the reduced budget with the same pricing rule the controller applies.
/// virtual_stats overrides the current-slot averages (used by the windowed
/// mode); pass nullptr for the default.
BenefitMatrix estimate_benefits(const Scenario& scenario, const SlotState& slot,
                                const QueueState& queues, const PairingOptions& options,
                                const VirtualSbsStats* virtual_stats = nullptr);

/// Maximum-total matching via the Hungarian assignment. When the optimal
/// permutation is an involution it is provably the optimal perfect matching
/// (the assignment relaxation is tight); otherwise an exact subset-DP over
/// matchings is used. Throws std::invalid_argument on non-square or NaN
/// input or odd size.
PairMatching match_pairs(const BenefitMatrix& benefits);

/// Builds the pooled two-member instance for a real pair, with prices
/// already decided. Exposed for benefit-recomputation tests.
AllocProblem build_pair_problem(const Scenario& scenario, const SlotState& slot,
                                const QueueState& queues, int sbs_i, int sbs_j,
                                const std::vector<MemberPricing>& pricing);

/// Solo (no-sharing) instance of one SBS over its initial band.
AllocProblem build_solo_problem(const Scenario& scenario, const SlotState& slot,
                                const QueueState& queues, int sbs);

}  // namespace hetsim

#pragma once

#include <vector>

#include "hetsim/alloc_problem.hpp"

namespace hetsim {

/// Lagrange multipliers of the dual: one per member power budget, one per
/// channel interference cap, one per channel exclusivity constraint. Step
/// sizes follow d0 / sqrt(i); projection keeps every multiplier >= 0.
struct Multipliers {
  std::vector<double> power;
  std::vector<double> interference;
  std::vector<double> exclusivity;
  std::vector<double> d0_power;
  std::vector<double> d0_interference;
  std::vector<double> d0_exclusivity;
  int iteration = 0;
};

/// Constraint slacks of the current dual iterate (positive = satisfied).
struct Subgradients {
  std::vector<double> power_slack;         // p_max - sum s, per member
  std::vector<double> interference_slack;  // icap - sum s*h_b, per channel
  std::vector<double> exclusivity_slack;   // 1 - sum x_hat, per channel
};

struct AllocatorOptions {
  int max_iterations = 500;
  double tolerance = 1e-6;   // relative multiplier change
  double step_scale = 0.5;   // scales the d0 normalization
  bool record_dual = false;
};

/// Closed-form per-channel water level: s* for a unit assignment. When the
/// effective price omega - eta is non-positive the inner maximization is
/// unbounded; the transmit cap is returned and the power multiplier has to
/// restore boundedness over the iterations.
double power_closed_form(double q_bits, double bw_hz, double omega, double eta,
                         double i0_plus_noise_w, double h, double p_cap_w);

/// Per-channel winner-take-all on the scores: for each channel, the
/// (member, user) with the largest positive score wins; ties go to the
/// lowest member then lowest user index. scores/powers are idx(k,c,u).
void assign_channels(const AllocProblem& p, const std::vector<double>& scores,
                     const std::vector<double>& powers, AllocationDecision& out);

/// Projected diminishing-step subgradient update; advances mult.iteration.
void update_multipliers(Multipliers& mult, const Subgradients& g);

/// Solves the relaxed joint power/subchannel problem by dual decomposition
/// with primal repair. Returns the best feasible iterate found (never worse
/// than the all-zero allocation).
AllocationDecision solve(const AllocProblem& p, const AllocatorOptions& options = {});

}  // namespace hetsim

#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "hetsim/alloc_problem.hpp"
#include "hetsim/allocator.hpp"
#include "hetsim/metrics.hpp"
#include "hetsim/queues.hpp"
#include "hetsim/scenario.hpp"
#include "hetsim/stochastic.hpp"

namespace hetsim {

enum class PolicyKind { proposed, nsra, tdraa };

/// D_nu: admit the whole arrival when the urgency weight covers the backlog.
double admission_control(double w, double q, double a);

/// mu_n maximizing V*log(mu) - Y*mu over [0, mu_max], floored at
/// 1e-9*mu_max so log stays finite.
double auxiliary_decision(double v, double y, double mu_max);

struct PairPrices {
  double alpha_i = 0.0, beta_i = 0.0;
  double alpha_j = 0.0, beta_j = 0.0;
  bool trade = false;  // false on W ties: no strict ordering, no trade
};

/// The larger-W side leases at its price cap, the other rents at its own cap.
PairPrices pricing(double w_i, double w_j, double q_max_i, double q_max_j);

/// O_n = alpha*(B0-B)+ - beta*(B-B0)+.
double sharing_payment(double alpha, double beta, double band_hz, double initial_band_hz);

struct EnergyDecision {
  double discharge = 0.0;  // F_n
  double charge = 0.0;     // J_n
  double grid = 0.0;       // G_n
  int rule_case = 0;       // 1: S > rho; 2: rho - phi*W < S <= rho; 3: otherwise
  bool grid_override = false;  // grid top-up outside case 3 to keep F + G = P
};

/// Threshold battery policy. All energy arguments must sit on the energy
/// grid; then F + G == P and the battery recursion stay exact.
EnergyDecision battery_management(double s, double rho, double phi, double w,
                                  double p_draw, double harvested, double s_max);

struct ControlDecision {
  std::vector<double> admitted_bits;  // per SUE
  std::vector<double> mu;             // per SBS
  std::vector<double> alpha;          // per SBS
  std::vector<double> beta;           // per SBS
  std::vector<double> payment;        // per SBS
  std::vector<EnergyDecision> energy; // per SBS
};

/// The slot's combined allocation mapped back onto the global network.
struct SlotAllocation {
  std::vector<char> x;             // dims.idx(n,m,u)
  std::vector<double> p_w;         // dims.idx(n,m,u)
  std::vector<double> rate_bits;   // per SUE
  std::vector<double> band_hz;     // per SBS
  std::vector<double> transmit_w;  // per SBS
  std::vector<double> p_draw_w;    // per SBS, on the energy grid
  std::vector<std::pair<int, int>> pairs;  // traded real pairs this slot
  std::vector<double> pair_benefits;       // aligned with pairs
  int solver_iterations_max = 0;
};

struct SlotResult {
  ControlDecision control;
  SlotAllocation alloc;
  SlotMetrics metrics;
  std::vector<double> q_start;  // per SUE, before the update
  std::vector<double> y_start, z_start, s_start;  // per SBS
};

struct ControllerOptions {
  AllocatorOptions allocator;
  int benefit_iterations = 50;
  bool parallel_pairing = true;
  int virtual_stats_window = 1;  // >1: trailing-mean stats for the virtual SBS
};

/// Executes the four per-slot control steps and applies the queue updates.
class Controller {
 public:
  Controller(const Scenario& scenario, PolicyKind policy, double v_param,
             ControllerOptions options = {});

  /// Runs one slot and advances `queues` to the next slot's state.
  SlotResult run_slot(const SlotState& slot, QueueState& queues, std::int64_t t);

  PolicyKind policy() const { return policy_; }

 private:
  SlotAllocation allocate(const SlotState& slot, const QueueState& queues,
                          std::int64_t t, ControlDecision& control);

  const Scenario* scenario_;
  PolicyKind policy_;
  double v_;
  ControllerOptions options_;
  NetDims dims_;
  std::deque<struct VirtualStatsSample> stats_history_;
};

struct VirtualStatsSample {
  double q_mean = 0.0;
  double w = 0.0;
  double s_minus_rho = 0.0;
};

}  // namespace hetsim

#pragma once

#include <cstdint>
#include <vector>

namespace hetsim {

/// Everything the engine records about one slot. Queue-like fields are the
/// start-of-slot values (the trace starts at the all-zero state).
struct SlotMetrics {
  std::int64_t t = 0;
  std::vector<double> admitted_sum;  // per SBS
  std::vector<double> payment;       // per SBS, O_n
  std::vector<double> grid;          // per SBS, G_n
  std::vector<double> profit_inc;    // per SBS: sum D + O - phi*G
  double total_backlog_bits = 0.0;
  std::vector<double> battery;       // per SBS
  double lyapunov = 0.0;
  double drift = 0.0;                // L(t+1) - L(t), filled after the update
  double max_power_residual = 0.0;
  double max_interference_residual = 0.0;
  int grid_overrides = 0;
};

}  // namespace hetsim

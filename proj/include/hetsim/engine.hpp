#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetsim/baselines.hpp"
#include "hetsim/controller.hpp"
#include "hetsim/queues.hpp"
#include "hetsim/scenario.hpp"

namespace hetsim {

/// Aggregates of one T-slot run plus the invariant audit the acceptance
/// suite consumes. Averages marked "steady" drop the first 10% of slots.
struct RunSummary {
  std::string policy;
  double v = 0.0;
  std::uint64_t seed = 0;
  std::int64_t slots = 0;

  std::vector<double> profit;       // time-average C_n
  double total_profit = 0.0;        // sum over SBSs
  double avg_backlog_bits = 0.0;    // (1/(T*U)) sum of Q
  double f_bar = 0.0;               // time-average sum_n log mu_n
  std::vector<double> avg_grid;     // G_n time average
  std::vector<double> avg_payment;  // O_n time average
  double avg_admitted = 0.0;        // network bits/slot

  double total_profit_steady = 0.0;
  double avg_backlog_steady = 0.0;
  double f_bar_steady = 0.0;

  // window means (0.4T..0.6T and 0.8T..T) per queue family
  double q_win_mid = 0.0, q_win_late = 0.0;
  double s_win_mid = 0.0, s_win_late = 0.0;
  double y_win_mid = 0.0, y_win_late = 0.0;
  double z_win_mid = 0.0, z_win_late = 0.0;

  // invariant audit
  double battery_min = 0.0, battery_max = 0.0;
  double max_power_residual = 0.0;
  double max_interference_residual = 0.0;
  double max_admission_excess = 0.0;      // (D - A)+, exact 0 expected
  int charge_bound_violations = 0;        // J > min(S_max - S, E)
  int power_balance_violations = 0;       // F + G != P (exact compare)
  int energy_clamp_triggers = 0;          // S - F < 0 before the clamp
  int grid_above_rho_unlogged = 0;        // G > 0, S > rho, no override flag
  double telescoping_error = 0.0;         // |sum(J-F) - (S_T - S_0)|, exact 0
  double max_appendix_slack = 0.0;        // data-queue quadratic inequality
  double drift_trailing_mean = 0.0;       // mean dL over the last third
  double drift_trailing_mean_abs = 0.0;   // mean |dL| over the last third
  int grid_overrides = 0;

  std::vector<double> battery_final;
};

struct RunOptions {
  ControllerOptions controller;
  std::string slots_csv_path;   // empty: no per-slot trace file
  std::string states_csv_path;  // empty: no slot-state dump
  std::string pairs_csv_path;   // empty: no pairing trace
  std::string solver_csv_path;  // empty: no per-slot solver diagnostics
};

/// Runs one seeded experiment: all queues start at zero, rho_n comes from
/// the battery perturbation rule, the controller executes every slot.
RunSummary run(const Scenario& scenario, PolicyKind policy, std::uint64_t seed,
               std::int64_t slots, double v, const RunOptions& options = {});

/// dL between consecutive queue states.
double drift_diagnostic(const QueueState& prev, const QueueState& next);

struct SweepOptions {
  ControllerOptions controller;
  int jobs = 1;                 // >1: run combinations in parallel
  std::string summary_csv_path; // empty: no file
};

/// Runs all (v, policy, seed) combinations; the result table is ordered by
/// (v, policy, seed) regardless of execution order, and the summary CSV
/// appends one seed-mean row per (v, policy).
std::vector<RunSummary> sweep_v(const Scenario& scenario, const std::vector<double>& v_list,
                                const std::vector<PolicyKind>& policies,
                                const std::vector<std::uint64_t>& seeds, std::int64_t slots,
                                const SweepOptions& options = {});

/// Calibration helper: per-SBS time-average profit under the no-sharing
/// baseline, usable as C_n^min.
std::vector<double> estimate_c_min(const Scenario& scenario, std::uint64_t seed,
                                   std::int64_t slots, const ControllerOptions& options = {});

/// Column order of the per-slot CSV; frozen, documented in the README.
extern const char* const kSlotsCsvHeader;
extern const char* const kSummaryCsvHeader;

void write_summary_header(class CsvWriter& w);
void write_summary_row(class CsvWriter& w, const RunSummary& s, std::string_view seed_label);

/// Dumps the raw SlotState sequence (one row per (t,n,m,u)) for replay.
void dump_slot_states(const Scenario& scenario, std::uint64_t seed, std::int64_t slots,
                      const std::string& path);

}  // namespace hetsim

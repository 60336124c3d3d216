#include "hetsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "hetsim/csv.hpp"
#include "hetsim/stochastic.hpp"

namespace hetsim {

const char* const kSlotsCsvHeader =
    "t,n,u,arrival_bits,admitted_bits,queue_bits,rate_bits,battery,y,z,w,"
    "discharge,charge,grid,payment,mu,alpha,beta,lyapunov,power_resid,interf_resid";

const char* const kSummaryCsvHeader =
    "v,policy,seed,slots,avg_backlog_bits,total_profit,f_bar,avg_grid_total,"
    "avg_payment_total,avg_admitted_bits,grid_overrides,avg_backlog_steady,"
    "total_profit_steady,f_bar_steady";

double drift_diagnostic(const QueueState& prev, const QueueState& next) {
  return lyapunov_value(next) - lyapunov_value(prev);
}

RunSummary run(const Scenario& scenario, PolicyKind policy, std::uint64_t seed,
               std::int64_t slots, double v, const RunOptions& options) {
  const NetDims dims = scenario.dims();
  SlotSampler sampler(scenario, seed);
  QueueState queues =
      QueueState::zeros(dims, derive_perturbations(scenario.energy, dims.n_sbs));
  Controller controller(scenario, policy, v, options.controller);

  RunSummary sum;
  sum.policy = policy_name(policy);
  sum.v = v;
  sum.seed = seed;
  sum.slots = slots;
  sum.profit.assign(dims.n_sbs, 0.0);
  sum.avg_grid.assign(dims.n_sbs, 0.0);
  sum.avg_payment.assign(dims.n_sbs, 0.0);
  sum.battery_min = 0.0;  // queues start at zero
  sum.battery_max = 0.0;

  std::unique_ptr<CsvWriter> csv;
  if (!options.slots_csv_path.empty()) {
    csv = std::make_unique<CsvWriter>(options.slots_csv_path);
    *csv << kSlotsCsvHeader;
    csv->end_row();
  }
  std::unique_ptr<CsvWriter> pairs_csv;
  if (!options.pairs_csv_path.empty()) {
    pairs_csv = std::make_unique<CsvWriter>(options.pairs_csv_path);
    *pairs_csv << "t,sbs_i,sbs_j,benefit";
    pairs_csv->end_row();
  }
  std::unique_ptr<CsvWriter> solver_csv;
  if (!options.solver_csv_path.empty()) {
    solver_csv = std::make_unique<CsvWriter>(options.solver_csv_path);
    *solver_csv << "t,solver_iterations_max,power_resid,interf_resid";
    solver_csv->end_row();
  }

  const std::int64_t warmup = slots / 10;
  const std::int64_t mid_lo = static_cast<std::int64_t>(0.4 * slots);
  const std::int64_t mid_hi = static_cast<std::int64_t>(0.6 * slots);
  const std::int64_t late_lo = static_cast<std::int64_t>(0.8 * slots);
  const std::int64_t tail_lo = slots - slots / 3;

  double backlog_acc = 0.0, backlog_steady = 0.0, fbar_acc = 0.0, fbar_steady = 0.0;
  double admitted_acc = 0.0;
  std::vector<double> profit_steady(dims.n_sbs, 0.0);
  double qm = 0.0, ql = 0.0, sm = 0.0, sl = 0.0, ym = 0.0, yl = 0.0, zm = 0.0, zl = 0.0;
  double sum_j_minus_f = 0.0;
  double drift_acc = 0.0, drift_abs_acc = 0.0;
  std::int64_t drift_count = 0;
  const std::vector<double> s0 = queues.s_energy;
  double prev_l = lyapunov_value(queues);

  for (std::int64_t t = 0; t < slots; ++t) {
    const SlotState slot = sampler.state(static_cast<std::uint64_t>(t));
    SlotResult r = controller.run_slot(slot, queues, t);
    const double l_next = lyapunov_value(queues);
    r.metrics.drift = l_next - prev_l;
    prev_l = l_next;

    // accumulate summary terms
    backlog_acc += r.metrics.total_backlog_bits;
    double fmu = 0.0;
    for (int n = 0; n < dims.n_sbs; ++n) fmu += std::log(r.control.mu[n]);
    fbar_acc += fmu;
    for (int n = 0; n < dims.n_sbs; ++n) {
      sum.profit[n] += r.metrics.profit_inc[n];
      sum.avg_grid[n] += r.metrics.grid[n];
      sum.avg_payment[n] += r.metrics.payment[n];
      admitted_acc += r.metrics.admitted_sum[n];
    }
    if (t >= warmup) {
      backlog_steady += r.metrics.total_backlog_bits;
      fbar_steady += fmu;
      for (int n = 0; n < dims.n_sbs; ++n) profit_steady[n] += r.metrics.profit_inc[n];
    }
    if (t >= mid_lo && t < mid_hi) {
      qm += r.metrics.total_backlog_bits;
      for (int n = 0; n < dims.n_sbs; ++n) {
        sm += r.s_start[n];
        ym += r.y_start[n];
        zm += r.z_start[n];
      }
    }
    if (t >= late_lo) {
      ql += r.metrics.total_backlog_bits;
      for (int n = 0; n < dims.n_sbs; ++n) {
        sl += r.s_start[n];
        yl += r.y_start[n];
        zl += r.z_start[n];
      }
    }
    if (t >= tail_lo) {
      drift_acc += r.metrics.drift;
      drift_abs_acc += std::abs(r.metrics.drift);
      ++drift_count;
    }

    // invariant audit
    sum.max_power_residual = std::max(sum.max_power_residual, r.metrics.max_power_residual);
    sum.max_interference_residual =
        std::max(sum.max_interference_residual, r.metrics.max_interference_residual);
    sum.grid_overrides += r.metrics.grid_overrides;
    for (int n = 0; n < dims.n_sbs; ++n) {
      const auto& e = r.control.energy[n];
      sum_j_minus_f += e.charge - e.discharge;
      if (e.discharge + e.grid != r.alloc.p_draw_w[n]) ++sum.power_balance_violations;
      if (e.charge > std::min(scenario.energy.battery_capacity - r.s_start[n],
                              slot.harvest[n]))
        ++sum.charge_bound_violations;
      if (r.s_start[n] - e.discharge < 0.0) ++sum.energy_clamp_triggers;
      if (e.grid > 0.0 && r.s_start[n] > queues.rho[n] && !e.grid_override)
        ++sum.grid_above_rho_unlogged;
      sum.battery_min = std::min(sum.battery_min, queues.s_energy[n]);
      sum.battery_max = std::max(sum.battery_max, queues.s_energy[n]);
    }
    for (int n = 0; n < dims.n_sbs; ++n)
      for (int u = 0; u < dims.users[n]; ++u) {
        const int su = dims.sue(n, u);
        sum.max_admission_excess =
            std::max(sum.max_admission_excess,
                     r.control.admitted_bits[su] - slot.arrivals_bits[su]);
        const double q = r.q_start[su];
        const double rr = r.alloc.rate_bits[su];
        const double d = r.control.admitted_bits[su];
        const double lhs = queues.q_bits[su] * queues.q_bits[su];
        const double rhs = q * q + rr * rr + d * d + 2.0 * q * (d - rr);
        sum.max_appendix_slack =
            std::max(sum.max_appendix_slack, (lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }

    if (pairs_csv) {
      for (size_t k = 0; k < r.alloc.pairs.size(); ++k) {
        *pairs_csv << r.metrics.t << r.alloc.pairs[k].first << r.alloc.pairs[k].second
                   << r.alloc.pair_benefits[k];
        pairs_csv->end_row();
      }
    }
    if (solver_csv) {
      *solver_csv << r.metrics.t << r.alloc.solver_iterations_max
                  << r.metrics.max_power_residual << r.metrics.max_interference_residual;
      solver_csv->end_row();
    }
    if (csv) {
      for (int n = 0; n < dims.n_sbs; ++n)
        for (int u = 0; u < dims.users[n]; ++u) {
          const int su = dims.sue(n, u);
          *csv << r.metrics.t << n << u << slot.arrivals_bits[su]
               << r.control.admitted_bits[su] << r.q_start[su] << r.alloc.rate_bits[su]
               << r.s_start[n] << r.y_start[n] << r.z_start[n]
               << (r.y_start[n] + r.z_start[n]) << r.control.energy[n].discharge
               << r.control.energy[n].charge << r.control.energy[n].grid
               << r.control.payment[n] << r.control.mu[n] << r.control.alpha[n]
               << r.control.beta[n] << r.metrics.lyapunov
               << r.metrics.max_power_residual << r.metrics.max_interference_residual;
          csv->end_row();
        }
    }
  }

  const double tu = static_cast<double>(slots) * dims.total_sues;
  sum.avg_backlog_bits = backlog_acc / tu;
  sum.f_bar = fbar_acc / slots;
  sum.avg_admitted = admitted_acc / slots;
  for (int n = 0; n < dims.n_sbs; ++n) {
    sum.profit[n] /= slots;
    sum.avg_grid[n] /= slots;
    sum.avg_payment[n] /= slots;
    sum.total_profit += sum.profit[n];
  }
  const std::int64_t steady_n = slots - warmup;
  sum.avg_backlog_steady = backlog_steady / (static_cast<double>(steady_n) * dims.total_sues);
  sum.f_bar_steady = fbar_steady / steady_n;
  for (int n = 0; n < dims.n_sbs; ++n) sum.total_profit_steady += profit_steady[n] / steady_n;

  const double mid_n = std::max<std::int64_t>(1, mid_hi - mid_lo);
  const double late_n = std::max<std::int64_t>(1, slots - late_lo);
  sum.q_win_mid = qm / mid_n;
  sum.q_win_late = ql / late_n;
  sum.s_win_mid = sm / mid_n;
  sum.s_win_late = sl / late_n;
  sum.y_win_mid = ym / mid_n;
  sum.y_win_late = yl / late_n;
  sum.z_win_mid = zm / mid_n;
  sum.z_win_late = zl / late_n;

  double tele = sum_j_minus_f;
  for (int n = 0; n < dims.n_sbs; ++n) tele -= queues.s_energy[n] - s0[n];
  sum.telescoping_error = std::abs(tele);
  sum.drift_trailing_mean = drift_count > 0 ? drift_acc / drift_count : 0.0;
  sum.drift_trailing_mean_abs = drift_count > 0 ? drift_abs_acc / drift_count : 0.0;
  sum.battery_final = queues.s_energy;

  if (!options.states_csv_path.empty())
    dump_slot_states(scenario, seed, slots, options.states_csv_path);
  return sum;
}

void write_summary_header(CsvWriter& w) {
  w << kSummaryCsvHeader;
  w.end_row();
}

void write_summary_row(CsvWriter& w, const RunSummary& s, std::string_view seed_label) {
  double grid_total = 0.0, payment_total = 0.0;
  for (double g : s.avg_grid) grid_total += g;
  for (double o : s.avg_payment) payment_total += o;
  w << s.v << s.policy << seed_label << s.slots << s.avg_backlog_bits << s.total_profit
    << s.f_bar << grid_total << payment_total << s.avg_admitted << s.grid_overrides
    << s.avg_backlog_steady << s.total_profit_steady << s.f_bar_steady;
  w.end_row();
}

std::vector<RunSummary> sweep_v(const Scenario& scenario, const std::vector<double>& v_list,
                                const std::vector<PolicyKind>& policies,
                                const std::vector<std::uint64_t>& seeds, std::int64_t slots,
                                const SweepOptions& options) {
  struct Combo {
    double v;
    PolicyKind policy;
    std::uint64_t seed;
  };
  std::vector<Combo> combos;
  for (double v : v_list)
    for (PolicyKind p : policies)
      for (std::uint64_t s : seeds) combos.push_back({v, p, s});

  std::vector<RunSummary> results(combos.size());
  RunOptions ropts;
  ropts.controller = options.controller;
  const int total = static_cast<int>(combos.size());
#pragma omp parallel for schedule(dynamic) if (options.jobs > 1)
  for (int i = 0; i < total; ++i)
    results[i] = run(scenario, combos[i].policy, combos[i].seed, slots, combos[i].v, ropts);

  if (!options.summary_csv_path.empty()) {
    CsvWriter w(options.summary_csv_path);
    write_summary_header(w);
    for (const auto& r : results) write_summary_row(w, r, std::to_string(r.seed));
    // seed-mean rows per (v, policy)
    for (size_t block = 0; block + seeds.size() <= results.size();
         block += seeds.size()) {
      RunSummary mean = results[block];
      const double k = static_cast<double>(seeds.size());
      for (size_t j = 1; j < seeds.size(); ++j) {
        const auto& r = results[block + j];
        mean.avg_backlog_bits += r.avg_backlog_bits;
        mean.total_profit += r.total_profit;
        mean.f_bar += r.f_bar;
        mean.avg_admitted += r.avg_admitted;
        mean.grid_overrides += r.grid_overrides;
        mean.avg_backlog_steady += r.avg_backlog_steady;
        mean.total_profit_steady += r.total_profit_steady;
        mean.f_bar_steady += r.f_bar_steady;
        for (size_t n = 0; n < mean.avg_grid.size(); ++n) {
          mean.avg_grid[n] += r.avg_grid[n];
          mean.avg_payment[n] += r.avg_payment[n];
        }
      }
      mean.avg_backlog_bits /= k;
      mean.total_profit /= k;
      mean.f_bar /= k;
      mean.avg_admitted /= k;
      mean.avg_backlog_steady /= k;
      mean.total_profit_steady /= k;
      mean.f_bar_steady /= k;
      for (auto& g : mean.avg_grid) g /= k;
      for (auto& o : mean.avg_payment) o /= k;
      write_summary_row(w, mean, "mean");
    }
  }
  return results;
}

std::vector<double> estimate_c_min(const Scenario& scenario, std::uint64_t seed,
                                   std::int64_t slots, const ControllerOptions& options) {
  RunOptions ropts;
  ropts.controller = options;
  const RunSummary s =
      run(scenario, PolicyKind::nsra, seed, slots, scenario.economic.v_param, ropts);
  return s.profit;
}

void dump_slot_states(const Scenario& scenario, std::uint64_t seed, std::int64_t slots,
                      const std::string& path) {
  const NetDims dims = scenario.dims();
  SlotSampler sampler(scenario, seed);
  CsvWriter w(path);
  w << "t,n,m,u,arrival_bits,harvest,gain,mbs_interference,cross_gain_to_mue";
  w.end_row();
  for (std::int64_t t = 0; t < slots; ++t) {
    const SlotState st = sampler.state(static_cast<std::uint64_t>(t));
    for (int n = 0; n < dims.n_sbs; ++n)
      for (int m = 0; m < dims.n_channels; ++m)
        for (int u = 0; u < dims.users[n]; ++u) {
          w << t << n << m << u << st.arrivals_bits[dims.sue(n, u)] << st.harvest[n]
            << st.gain[dims.idx(n, m, u)] << st.mbs_interference[dims.idx(n, m, u)]
            << st.cross_gain_to_mue[n * dims.n_channels + m];
          w.end_row();
        }
  }
}

}  // namespace hetsim

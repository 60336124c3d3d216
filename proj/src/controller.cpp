#include "hetsim/controller.hpp"

#include <algorithm>
#include <cmath>

#include "hetsim/pairing.hpp"

namespace hetsim {

double admission_control(double w, double q, double a) {
  return w >= q ? a : 0.0;
}

double auxiliary_decision(double v, double y, double mu_max) {
  // The floor keeps log(mu) finite; at 1e-5*mu_max it also pins the Y-queue
  // limit cycle (amplitude <= V/mu_floor) two orders below the packet scale
  // and stays distinct across SBSs with different mu_max.
  const double mu_floor = 1e-5 * mu_max;
  if (y <= v / mu_max) return mu_max;
  return std::max(v / y, mu_floor);
}

PairPrices pricing(double w_i, double w_j, double q_max_i, double q_max_j) {
  if (w_i > w_j) return {q_max_i, 0.0, 0.0, q_max_j, true};
  if (w_j > w_i) return {0.0, q_max_i, q_max_j, 0.0, true};
  return {};
}

double sharing_payment(double alpha, double beta, double band_hz, double initial_band_hz) {
  return alpha * std::max(initial_band_hz - band_hz, 0.0) -
         beta * std::max(band_hz - initial_band_hz, 0.0);
}

EnergyDecision battery_management(double s, double rho, double phi, double w,
                                  double p_draw, double harvested, double s_max) {
  EnergyDecision e;
  e.discharge = std::min(p_draw, s);
  e.grid = p_draw - e.discharge;
  if (s > rho) {
    e.rule_case = 1;
    e.charge = 0.0;
  } else if (s > rho - phi * w) {
    e.rule_case = 2;
    e.charge = std::min(s_max - s, harvested);
  } else {
    e.rule_case = 3;
    e.charge = std::min(s_max - s, harvested);
  }
  e.grid_override = e.rule_case != 3 && e.grid > 0.0;
  return e;
}

Controller::Controller(const Scenario& scenario, PolicyKind policy, double v_param,
                       ControllerOptions options)
    : scenario_(&scenario),
      policy_(policy),
      v_(v_param),
      options_(options),
      dims_(scenario.dims()) {}

namespace {

/// Copies an instance decision into the global tensors.
void fold_instance(const AllocProblem& p, const AllocationDecision& d,
                   const NetDims& dims, SlotAllocation& out) {
  for (int c = 0; c < p.n_channels(); ++c) {
    if (!d.assigned(c) || p.channel_ids[c] < 0) continue;
    const int k = d.owner_member[c];
    if (p.members[k].sbs < 0) continue;  // virtual member holds nothing real
    const int n = p.members[k].sbs;
    const int i = dims.idx(n, p.channel_ids[c], d.owner_user[c]);
    out.x[i] = 1;
    out.p_w[i] = d.power_w[c];
  }
}

}  // namespace

SlotAllocation Controller::allocate(const SlotState& slot, const QueueState& queues,
                                    std::int64_t t, ControlDecision& control) {
  const Scenario& sc = *scenario_;
  SlotAllocation out;
  out.x.assign(dims_.tensor_size, 0);
  out.p_w.assign(dims_.tensor_size, 0.0);
  out.rate_bits.assign(dims_.total_sues, 0.0);
  out.band_hz.assign(dims_.n_sbs, 0.0);
  out.transmit_w.assign(dims_.n_sbs, 0.0);
  out.p_draw_w.assign(dims_.n_sbs, 0.0);

  auto solve_and_fold = [&](const AllocProblem& problem) {
    const AllocationDecision d = solve(problem, options_.allocator);
    out.solver_iterations_max = std::max(out.solver_iterations_max, d.iterations);
    fold_instance(problem, d, dims_, out);
  };

  if (policy_ == PolicyKind::tdraa) {
    const int active = static_cast<int>(t % dims_.n_sbs);
    std::vector<int> all_channels(dims_.n_channels);
    for (int m = 0; m < dims_.n_channels; ++m) all_channels[m] = m;
    solve_and_fold(build_problem(sc, slot, queues, {{active, 0.0, 0.0}}, all_channels));
  } else if (policy_ == PolicyKind::nsra || dims_.n_sbs == 1) {
    for (int n = 0; n < dims_.n_sbs; ++n)
      solve_and_fold(build_solo_problem(sc, slot, queues, n));
  } else {
    PairingOptions popts;
    popts.benefit_iterations = options_.benefit_iterations;
    popts.parallel = options_.parallel_pairing;

    const VirtualSbsStats* stats_override = nullptr;
    VirtualSbsStats windowed;
    if (options_.virtual_stats_window > 1 && !stats_history_.empty()) {
      windowed = compute_virtual_stats(sc, slot, queues);
      double q = 0.0, w = 0.0, sr = 0.0;
      for (const auto& h : stats_history_) {
        q += h.q_mean;
        w += h.w;
        sr += h.s_minus_rho;
      }
      const double k = static_cast<double>(stats_history_.size());
      windowed.q_mean = q / k;
      windowed.w = w / k;
      windowed.s_minus_rho = sr / k;
      windowed.eta = windowed.s_minus_rho - sc.energy.grid_price_phi * windowed.w;
      stats_override = &windowed;
    }

    const BenefitMatrix bm = estimate_benefits(sc, slot, queues, popts, stats_override);
    const PairMatching matching = match_pairs(bm);

    for (const auto& [a, b] : matching.pairs) {
      const bool real_pair = b < bm.n_real;
      if (!real_pair) {
        solve_and_fold(build_solo_problem(sc, slot, queues, a));
        continue;
      }
      const PairPrices prices = pricing(queues.w(a), queues.w(b), sc.q_max(a), sc.q_max(b));
      if (!prices.trade) {
        solve_and_fold(build_solo_problem(sc, slot, queues, a));
        solve_and_fold(build_solo_problem(sc, slot, queues, b));
        continue;
      }
      control.alpha[a] = prices.alpha_i;
      control.beta[a] = prices.beta_i;
      control.alpha[b] = prices.alpha_j;
      control.beta[b] = prices.beta_j;
      out.pairs.push_back({a, b});
      out.pair_benefits.push_back(bm.c_tilde[a][b]);
      solve_and_fold(build_pair_problem(sc, slot, queues, a, b,
                                        {{a, prices.alpha_i, prices.beta_i},
                                         {b, prices.alpha_j, prices.beta_j}}));
    }
  }

  for (int n = 0; n < dims_.n_sbs; ++n) {
    for (int m = 0; m < dims_.n_channels; ++m) {
      for (int u = 0; u < dims_.users[n]; ++u) {
        const int i = dims_.idx(n, m, u);
        if (!out.x[i]) continue;
        out.band_hz[n] += sc.network.subchannel_bandwidth_hz[m];
        out.transmit_w[n] += out.p_w[i];
        const double g =
            out.p_w[i] * slot.gain[i] / (slot.mbs_interference[i] + sc.noise_w(m));
        out.rate_bits[dims_.sue(n, u)] +=
            sc.network.subchannel_bandwidth_hz[m] * std::log2(1.0 + g);
      }
    }
    out.p_draw_w[n] = quantize_energy_ceil(sc.radio.static_power_w +
                                           sc.radio.power_slope * out.transmit_w[n]);
  }
  return out;
}

SlotResult Controller::run_slot(const SlotState& slot, QueueState& queues, std::int64_t t) {
  const Scenario& sc = *scenario_;
  SlotResult r;
  r.q_start = queues.q_bits;
  r.y_start = queues.y;
  r.z_start = queues.z;
  r.s_start = queues.s_energy;

  auto& ctl = r.control;
  ctl.admitted_bits.assign(dims_.total_sues, 0.0);
  ctl.mu.assign(dims_.n_sbs, 0.0);
  ctl.alpha.assign(dims_.n_sbs, 0.0);
  ctl.beta.assign(dims_.n_sbs, 0.0);
  ctl.payment.assign(dims_.n_sbs, 0.0);
  ctl.energy.assign(dims_.n_sbs, {});

  // Step 1: admission, per SUE, against the start-of-slot W and Q.
  for (int n = 0; n < dims_.n_sbs; ++n)
    for (int u = 0; u < dims_.users[n]; ++u) {
      const int su = dims_.sue(n, u);
      ctl.admitted_bits[su] =
          admission_control(queues.w(n), queues.q_bits[su], slot.arrivals_bits[su]);
    }

  // Step 2: auxiliary variables.
  for (int n = 0; n < dims_.n_sbs; ++n)
    ctl.mu[n] = auxiliary_decision(v_, queues.y[n], sc.mu_max(n));

  // Step 3: pricing, pairing and joint allocation.
  r.alloc = allocate(slot, queues, t, ctl);
  for (int n = 0; n < dims_.n_sbs; ++n)
    ctl.payment[n] = sharing_payment(ctl.alpha[n], ctl.beta[n], r.alloc.band_hz[n],
                                     sc.network.initial_band_hz[n]);

  // Step 4: battery energy management on the realized power draw.
  for (int n = 0; n < dims_.n_sbs; ++n)
    ctl.energy[n] =
        battery_management(queues.s_energy[n], queues.rho[n], sc.energy.grid_price_phi,
                           queues.w(n), r.alloc.p_draw_w[n], slot.harvest[n],
                           sc.energy.battery_capacity);

  // Metrics on the pre-update state.
  auto& met = r.metrics;
  met.t = t;
  met.admitted_sum.assign(dims_.n_sbs, 0.0);
  met.payment = ctl.payment;
  met.grid.assign(dims_.n_sbs, 0.0);
  met.profit_inc.assign(dims_.n_sbs, 0.0);
  met.battery = queues.s_energy;
  met.lyapunov = lyapunov_value(queues);
  for (double q : queues.q_bits) met.total_backlog_bits += q;
  for (int n = 0; n < dims_.n_sbs; ++n) {
    for (int u = 0; u < dims_.users[n]; ++u)
      met.admitted_sum[n] += ctl.admitted_bits[dims_.sue(n, u)];
    met.grid[n] = ctl.energy[n].grid;
    met.profit_inc[n] = met.admitted_sum[n] + ctl.payment[n] -
                        sc.energy.grid_price_phi * ctl.energy[n].grid;
    if (ctl.energy[n].grid_override) ++met.grid_overrides;
  }
  // Feasibility residuals of the folded global decision.
  for (int n = 0; n < dims_.n_sbs; ++n)
    met.max_power_residual = std::max(
        met.max_power_residual, r.alloc.transmit_w[n] - sc.radio.p_sbs_max_w);
  for (int m = 0; m < dims_.n_channels; ++m) {
    double interf = 0.0;
    for (int n = 0; n < dims_.n_sbs; ++n)
      for (int u = 0; u < dims_.users[n]; ++u) {
        const int i = dims_.idx(n, m, u);
        if (r.alloc.x[i])
          interf += r.alloc.p_w[i] * slot.cross_gain_to_mue[n * dims_.n_channels + m];
      }
    met.max_interference_residual =
        std::max(met.max_interference_residual, interf - sc.radio.interference_cap_w);
  }
  met.max_power_residual = std::max(met.max_power_residual, 0.0);
  met.max_interference_residual = std::max(met.max_interference_residual, 0.0);

  // Queue updates close the slot.
  for (int n = 0; n < dims_.n_sbs; ++n) {
    for (int u = 0; u < dims_.users[n]; ++u) {
      const int su = dims_.sue(n, u);
      queues.q_bits[su] = update_data_queue(queues.q_bits[su], r.alloc.rate_bits[su],
                                            ctl.admitted_bits[su]);
    }
    queues.s_energy[n] =
        update_energy_queue(queues.s_energy[n], ctl.energy[n].discharge,
                            ctl.energy[n].charge, sc.energy.battery_capacity,
                            slot.harvest[n]);
    const VirtualFlows flows =
        make_flows(ctl.mu[n], sc.c_min(n), sc.energy.grid_price_phi, ctl.energy[n].grid,
                   met.admitted_sum[n], ctl.payment[n]);
    const auto [y2, z2] = update_virtual_queues(queues.y[n], queues.z[n], flows);
    queues.y[n] = y2;
    queues.z[n] = z2;
  }

  if (options_.virtual_stats_window > 1) {
    VirtualStatsSample sample;
    double q = 0.0;
    for (double qi : r.q_start) q += qi;
    sample.q_mean = q / dims_.total_sues;
    double w = 0.0, sr = 0.0;
    for (int n = 0; n < dims_.n_sbs; ++n) {
      w += r.y_start[n] + r.z_start[n];
      sr += r.s_start[n] - queues.rho[n];
    }
    sample.w = w / dims_.n_sbs;
    sample.s_minus_rho = sr / dims_.n_sbs;
    stats_history_.push_back(sample);
    while (static_cast<int>(stats_history_.size()) > options_.virtual_stats_window)
      stats_history_.pop_front();
  }
  return r;
}

}  // namespace hetsim

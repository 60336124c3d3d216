#include "hetsim/alloc_problem.hpp"

#include <algorithm>
#include <cmath>

namespace hetsim {

AllocationDecision AllocationDecision::zeros(const AllocProblem& p) {
  AllocationDecision d;
  d.owner_member.assign(p.n_channels(), -1);
  d.owner_user.assign(p.n_channels(), -1);
  d.power_w.assign(p.n_channels(), 0.0);
  return d;
}

AllocProblem build_problem(const Scenario& scenario, const SlotState& slot,
                           const QueueState& queues,
                           const std::vector<MemberPricing>& members,
                           const std::vector<int>& channels) {
  const NetDims dims = scenario.dims();
  AllocProblem p;
  p.phi = scenario.energy.grid_price_phi;
  p.static_power_w = scenario.radio.static_power_w;
  p.power_slope = scenario.radio.power_slope;
  p.channel_ids = channels;
  for (int m : channels) {
    p.bw_hz.push_back(scenario.network.subchannel_bandwidth_hz[m]);
    p.noise_w.push_back(scenario.noise_w(m));
    p.icap_w.push_back(scenario.radio.interference_cap_w);
  }

  int offset = 0;
  for (const auto& mp : members) {
    const int n = mp.sbs;
    AllocMember mem;
    mem.sbs = n;
    mem.n_users = scenario.users(n);
    mem.p_max_w = scenario.radio.p_sbs_max_w;
    mem.w = queues.w(n);
    mem.s_minus_rho = queues.s_energy[n] - queues.rho[n];
    mem.eta = mem.s_minus_rho - p.phi * mem.w;
    mem.alpha = mp.alpha;
    mem.beta = mp.beta;
    mem.active_price_per_hz = std::max(mp.alpha, mp.beta);
    mem.initial_band_hz = scenario.network.initial_band_hz[n];
    for (int u = 0; u < mem.n_users; ++u) {
      mem.q_bits.push_back(queues.q_bits[dims.sue(n, u)]);
      mem.sue_ids.push_back(dims.sue(n, u));
    }
    p.member_offset.push_back(offset);
    offset += static_cast<int>(channels.size()) * mem.n_users;
    p.members.push_back(std::move(mem));
  }

  p.gain.resize(offset);
  p.i0_w.resize(offset);
  p.cross_gain.resize(p.members.size() * channels.size());
  for (int k = 0; k < p.n_members(); ++k) {
    const int n = p.members[k].sbs;
    for (int c = 0; c < p.n_channels(); ++c) {
      const int m = channels[c];
      p.cross_gain[p.cross_idx(k, c)] =
          slot.cross_gain_to_mue[n * dims.n_channels + m];
      for (int u = 0; u < p.members[k].n_users; ++u) {
        p.gain[p.idx(k, c, u)] = slot.gain[dims.idx(n, m, u)];
        p.i0_w[p.idx(k, c, u)] = slot.mbs_interference[dims.idx(n, m, u)];
      }
    }
  }
  return p;
}

FeasibilityReport check_feasibility(const AllocProblem& p, const AllocationDecision& d) {
  FeasibilityReport r;
  r.power_residual.assign(p.n_members(), 0.0);
  r.interference_residual.assign(p.n_channels(), 0.0);
  std::vector<double> member_power(p.n_members(), 0.0);
  for (int c = 0; c < p.n_channels(); ++c) {
    if (!d.assigned(c)) continue;
    const int k = d.owner_member[c];
    member_power[k] += d.power_w[c];
    const double interf = d.power_w[c] * p.cross_gain[p.cross_idx(k, c)];
    r.interference_residual[c] = std::max(0.0, interf - p.icap_w[c]);
  }
  for (int k = 0; k < p.n_members(); ++k)
    r.power_residual[k] = std::max(0.0, member_power[k] - p.members[k].p_max_w);
  for (double v : r.power_residual) r.max_power_residual = std::max(r.max_power_residual, v);
  for (double v : r.interference_residual)
    r.max_interference_residual = std::max(r.max_interference_residual, v);
  return r;
}

double band_hz(const AllocProblem& p, const AllocationDecision& d, int k) {
  double b = 0.0;
  for (int c = 0; c < p.n_channels(); ++c)
    if (d.owner_member[c] == k) b += p.bw_hz[c];
  return b;
}

double payment(const AllocProblem& p, const AllocationDecision& d, int k) {
  const double b = band_hz(p, d, k);
  const double b0 = p.members[k].initial_band_hz;
  return p.members[k].alpha * std::max(b0 - b, 0.0) -
         p.members[k].beta * std::max(b - b0, 0.0);
}

double member_user_rate(const AllocProblem& p, const AllocationDecision& d, int k, int u) {
  double r = 0.0;
  for (int c = 0; c < p.n_channels(); ++c) {
    if (d.owner_member[c] != k || d.owner_user[c] != u || d.power_w[c] <= 0.0) continue;
    const int i = p.idx(k, c, u);
    const double g = d.power_w[c] * p.gain[i] / (p.i0_w[i] + p.noise_w[c]);
    r += p.bw_hz[c] * std::log2(1.0 + g);
  }
  return r;
}

double exact_objective(const AllocProblem& p, const AllocationDecision& d) {
  double obj = 0.0;
  std::vector<double> member_power(p.n_members(), 0.0);
  for (int c = 0; c < p.n_channels(); ++c) {
    if (!d.assigned(c) || d.power_w[c] <= 0.0) continue;
    const int k = d.owner_member[c];
    const int u = d.owner_user[c];
    const int i = p.idx(k, c, u);
    const double g = d.power_w[c] * p.gain[i] / (p.i0_w[i] + p.noise_w[c]);
    obj += p.members[k].q_bits[u] * p.bw_hz[c] * std::log2(1.0 + g);
    member_power[k] += d.power_w[c];
  }
  for (int k = 0; k < p.n_members(); ++k) {
    obj += p.members[k].w * payment(p, d, k);
    obj += p.members[k].s_minus_rho *
           (p.static_power_w + p.power_slope * member_power[k]);
  }
  return obj;
}

}  // namespace hetsim

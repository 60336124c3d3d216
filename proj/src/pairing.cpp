#include "hetsim/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hetsim/controller.hpp"
#include "hetsim/hungarian.hpp"

namespace hetsim {

VirtualSbsStats compute_virtual_stats(const Scenario& scenario, const SlotState& slot,
                                      const QueueState& queues) {
  const NetDims dims = scenario.dims();
  VirtualSbsStats v;
  const int n_sbs = dims.n_sbs;

  double users = 0.0, channels = 0.0, b0 = 0.0, w = 0.0, s_rho = 0.0;
  for (int n = 0; n < n_sbs; ++n) {
    users += dims.users[n];
    channels += scenario.initial_channels[n].second - scenario.initial_channels[n].first;
    b0 += scenario.network.initial_band_hz[n];
    w += queues.w(n);
    s_rho += queues.s_energy[n] - queues.rho[n];
  }
  v.users = std::max(1, static_cast<int>(std::lround(users / n_sbs)));
  v.channels = std::max(1, static_cast<int>(std::lround(channels / n_sbs)));
  v.b0_hz = b0 / n_sbs;
  v.w = w / n_sbs;
  v.s_minus_rho = s_rho / n_sbs;
  v.eta = v.s_minus_rho - scenario.energy.grid_price_phi * v.w;

  double q = 0.0;
  for (double qi : queues.q_bits) q += qi;
  v.q_mean = q / dims.total_sues;

  double gain = 0.0, i0 = 0.0;
  for (int i = 0; i < dims.tensor_size; ++i) {
    gain += slot.gain[i];
    i0 += slot.mbs_interference[i];
  }
  v.gain_mean = gain / dims.tensor_size;
  v.i0_mean_w = i0 / dims.tensor_size;

  double cross = 0.0, bw = 0.0, noise = 0.0;
  for (double h : slot.cross_gain_to_mue) cross += h;
  v.cross_mean = cross / slot.cross_gain_to_mue.size();
  for (int m = 0; m < dims.n_channels; ++m) {
    bw += scenario.network.subchannel_bandwidth_hz[m];
    noise += scenario.noise_w(m);
  }
  v.bw_mean_hz = bw / dims.n_channels;
  v.noise_mean_w = noise / dims.n_channels;
  return v;
}

AllocProblem build_solo_problem(const Scenario& scenario, const SlotState& slot,
                                const QueueState& queues, int sbs) {
  std::vector<int> channels;
  for (int m = scenario.initial_channels[sbs].first;
       m < scenario.initial_channels[sbs].second; ++m)
    channels.push_back(m);
  return build_problem(scenario, slot, queues, {{sbs, 0.0, 0.0}}, channels);
}

AllocProblem build_pair_problem(const Scenario& scenario, const SlotState& slot,
                                const QueueState& queues, int sbs_i, int sbs_j,
                                const std::vector<MemberPricing>& pricing) {
  std::vector<int> channels;
  for (int n : {std::min(sbs_i, sbs_j), std::max(sbs_i, sbs_j)})
    for (int m = scenario.initial_channels[n].first;
         m < scenario.initial_channels[n].second; ++m)
      channels.push_back(m);
  return build_problem(scenario, slot, queues, pricing, channels);
}

namespace {

AllocMember make_virtual_member(const Scenario& scenario, const VirtualSbsStats& v,
                                double alpha, double beta) {
  AllocMember mem;
  mem.sbs = -1;
  mem.n_users = v.users;
  mem.p_max_w = scenario.radio.p_sbs_max_w;
  mem.w = v.w;
  mem.s_minus_rho = v.s_minus_rho;
  mem.eta = v.eta;
  mem.alpha = alpha;
  mem.beta = beta;
  mem.active_price_per_hz = std::max(alpha, beta);
  mem.initial_band_hz = v.b0_hz;
  mem.q_bits.assign(v.users, v.q_mean);
  mem.sue_ids.assign(v.users, -1);
  return mem;
}

/// Instance of {real SBS i, virtual SBS} over i's channels plus synthetic
/// averaged channels, or the virtual SBS alone when sbs_i < 0.
AllocProblem build_virtual_problem(const Scenario& scenario, const SlotState& slot,
                                   const QueueState& queues, int sbs_i,
                                   const VirtualSbsStats& v, double alpha_i,
                                   double beta_i, double alpha_v, double beta_v) {
  AllocProblem base;
  if (sbs_i >= 0) {
    base = build_problem(scenario, slot, queues, {{sbs_i, alpha_i, beta_i}},
                         [&] {
                           std::vector<int> ch;
                           for (int m = scenario.initial_channels[sbs_i].first;
                                m < scenario.initial_channels[sbs_i].second; ++m)
                             ch.push_back(m);
                           return ch;
                         }());
  } else {
    base.phi = scenario.energy.grid_price_phi;
    base.static_power_w = scenario.radio.static_power_w;
    base.power_slope = scenario.radio.power_slope;
  }

  // Rebuild with the synthetic channels appended; gains on them are the
  // averaged values for every member.
  AllocProblem p;
  p.phi = base.phi;
  p.static_power_w = base.static_power_w;
  p.power_slope = base.power_slope;
  p.channel_ids = base.channel_ids;
  p.bw_hz = base.bw_hz;
  p.noise_w = base.noise_w;
  p.icap_w = base.icap_w;
  for (int c = 0; c < v.channels; ++c) {
    p.channel_ids.push_back(-1);
    p.bw_hz.push_back(v.bw_mean_hz);
    p.noise_w.push_back(v.noise_mean_w);
    p.icap_w.push_back(scenario.radio.interference_cap_w);
  }
  p.members = base.members;
  p.members.push_back(make_virtual_member(scenario, v, alpha_v, beta_v));

  const int nc = p.n_channels();
  p.member_offset.clear();
  int offset = 0;
  for (const auto& mem : p.members) {
    p.member_offset.push_back(offset);
    offset += nc * mem.n_users;
  }
  p.gain.assign(offset, v.gain_mean);
  p.i0_w.assign(offset, v.i0_mean_w);
  p.cross_gain.assign(static_cast<size_t>(p.n_members()) * nc, v.cross_mean);

  if (!base.members.empty()) {
    const int base_nc = base.n_channels();
    for (int c = 0; c < base_nc; ++c) {
      p.cross_gain[p.cross_idx(0, c)] = base.cross_gain[base.cross_idx(0, c)];
      for (int u = 0; u < base.members[0].n_users; ++u) {
        p.gain[p.idx(0, c, u)] = base.gain[base.idx(0, c, u)];
        p.i0_w[p.idx(0, c, u)] = base.i0_w[base.idx(0, c, u)];
      }
    }
  }
  return p;
}

}  // namespace

BenefitMatrix estimate_benefits(const Scenario& scenario, const SlotState& slot,
                                const QueueState& queues, const PairingOptions& options,
                                const VirtualSbsStats* virtual_stats) {
  const int n_real = scenario.network.n_sbs;
  const bool has_virtual = n_real % 2 == 1;
  const int size = n_real + (has_virtual ? 1 : 0);

  BenefitMatrix bm;
  bm.n_real = n_real;
  bm.has_virtual = has_virtual;
  bm.c_tilde.assign(size, std::vector<double>(size, 0.0));

  AllocatorOptions budget;
  budget.max_iterations = options.benefit_iterations;

  VirtualSbsStats vstats;
  if (has_virtual)
    vstats = virtual_stats ? *virtual_stats : compute_virtual_stats(scenario, slot, queues);

  double q_mean = 0.0;
  for (int n = 0; n < n_real; ++n) q_mean += scenario.q_max(n);
  q_mean /= n_real;

  // Solo baselines (prices zero).
  std::vector<double> solo(size, 0.0);
#pragma omp parallel for schedule(static) if (options.parallel)
  for (int n = 0; n < n_real; ++n)
    solo[n] = solve(build_solo_problem(scenario, slot, queues, n), budget).objective;
  if (has_virtual)
    solo[n_real] =
        solve(build_virtual_problem(scenario, slot, queues, -1, vstats, 0, 0, 0, 0),
              budget)
            .objective;

  struct Task {
    int i, j;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j) tasks.push_back({i, j});
  std::vector<double> benefit(tasks.size(), 0.0);

#pragma omp parallel for schedule(static) if (options.parallel)
  for (size_t t = 0; t < tasks.size(); ++t) {
    const int i = tasks[t].i;
    const int j = tasks[t].j;
    double joint = 0.0;
    if (j < n_real) {
      const PairPrices prices =
          pricing(queues.w(i), queues.w(j), scenario.q_max(i), scenario.q_max(j));
      joint = solve(build_pair_problem(scenario, slot, queues, i, j,
                                       {{i, prices.alpha_i, prices.beta_i},
                                        {j, prices.alpha_j, prices.beta_j}}),
                    budget)
                  .objective;
    } else {
      const PairPrices prices = pricing(queues.w(i), vstats.w, scenario.q_max(i), q_mean);
      joint = solve(build_virtual_problem(scenario, slot, queues, i, vstats,
                                          prices.alpha_i, prices.beta_i, prices.alpha_j,
                                          prices.beta_j),
                    budget)
                  .objective;
    }
    benefit[t] = joint - solo[i] - solo[j];
  }

  for (size_t t = 0; t < tasks.size(); ++t) {
    bm.c_tilde[tasks[t].i][tasks[t].j] = benefit[t];
    bm.c_tilde[tasks[t].j][tasks[t].i] = benefit[t];
  }
  return bm;
}

namespace {

PairMatching matching_by_subset_dp(const std::vector<std::vector<double>>& c) {
  const int n = static_cast<int>(c.size());
  const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1);
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> f(full + 1, ninf);
  std::vector<int> pick(full + 1, -1);  // (i << 8) | j of the pair added last
  f[0] = 0.0;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (f[mask] == ninf || mask == full) continue;
    int i = 0;
    while (mask & (1u << i)) ++i;
    for (int j = i + 1; j < n; ++j) {
      if (mask & (1u << j)) continue;
      const std::uint32_t nm = mask | (1u << i) | (1u << j);
      const double val = f[mask] + c[i][j] + c[j][i];
      if (val > f[nm]) {
        f[nm] = val;
        pick[nm] = (i << 8) | j;
      }
    }
  }
  PairMatching out;
  out.total_benefit = f[full];
  std::uint32_t mask = full;
  while (mask != 0) {
    const int packed = pick[mask];
    const int i = packed >> 8;
    const int j = packed & 0xff;
    out.pairs.push_back({i, j});
    mask &= ~(1u << i);
    mask &= ~(1u << j);
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace

PairMatching match_pairs(const BenefitMatrix& benefits) {
  const int n = benefits.size();
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("match_pairs: need an even, non-empty matrix");
  double max_abs = 0.0;
  for (const auto& row : benefits.c_tilde) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("match_pairs: matrix must be square");
    for (double v : row) {
      if (std::isnan(v)) throw std::invalid_argument("match_pairs: NaN entry");
      max_abs = std::max(max_abs, std::abs(v));
    }
  }

  // Assignment with self-pairs forbidden. An involution solution is a
  // perfect matching and the relaxation is then tight.
  const double forbid = (max_abs + 1.0) * (n + 1);
  std::vector<std::vector<double>> value = benefits.c_tilde;
  for (int i = 0; i < n; ++i) value[i][i] = -forbid;
  const std::vector<int> sigma = hungarian_max_assignment(value);

  bool involution = true;
  for (int i = 0; i < n; ++i)
    if (sigma[i] == i || sigma[sigma[i]] != i) involution = false;

  PairMatching out;
  if (involution) {
    for (int i = 0; i < n; ++i) {
      if (sigma[i] > i) {
        out.pairs.push_back({i, sigma[i]});
        out.total_benefit += benefits.c_tilde[i][sigma[i]] + benefits.c_tilde[sigma[i]][i];
      }
    }
    return out;
  }
  if (n > 22) {
    // Greedy descending-benefit repair; only reachable far beyond the sizes
    // this artifact targets.
    std::vector<std::tuple<double, int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        edges.push_back({benefits.c_tilde[i][j], i, j});
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
      return std::get<2>(a) < std::get<2>(b);
    });
    std::vector<bool> used(n, false);
    PairMatching greedy;
    greedy.exact_fallback = true;
    for (const auto& [v, i, j] : edges) {
      if (used[i] || used[j]) continue;
      used[i] = used[j] = true;
      greedy.pairs.push_back({i, j});
      greedy.total_benefit += 2.0 * v;
    }
    return greedy;
  }
  out = matching_by_subset_dp(benefits.c_tilde);
  out.exact_fallback = true;
  return out;
}

}  // namespace hetsim

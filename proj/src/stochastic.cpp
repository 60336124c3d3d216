#include "hetsim/stochastic.hpp"

#include <algorithm>
#include <cmath>

namespace hetsim {

namespace {

constexpr std::uint64_t kSetupTag = 0x5e7f00d5ULL;
constexpr std::uint64_t kSlotTag = 0x510715ULL;
constexpr double kMueDiscRadiusM = 400.0;

}  // namespace

SlotSampler::SlotSampler(const Scenario& scenario, std::uint64_t run_seed)
    : scenario_(&scenario), dims_(scenario.dims()), run_seed_(run_seed) {
  const auto& net = scenario.network;
  p_mbs_per_channel_w_ = dbm_to_watt(scenario.radio.p_mbs_dbm) / net.n_subchannels;

  // One MUE per subchannel, fixed for the whole run.
  Rng setup(mix_seed(run_seed_, kSetupTag, 0));
  mue_positions_.resize(net.n_subchannels);
  for (auto& p : mue_positions_) {
    // uniform over a disc centred on the MBS
    const double r = kMueDiscRadiusM * std::sqrt(setup.uniform());
    const double ang = 2.0 * M_PI * setup.uniform();
    p = {net.mbs_position_m.x + r * std::cos(ang), net.mbs_position_m.y + r * std::sin(ang)};
  }

  sue_sbs_pathloss_.resize(dims_.total_sues);
  sue_mbs_pathloss_.resize(dims_.total_sues);
  for (int n = 0; n < net.n_sbs; ++n) {
    for (int u = 0; u < net.users_per_sbs[n]; ++u) {
      const Vec2& pos = net.sue_positions_m[n][u];
      sue_sbs_pathloss_[dims_.sue(n, u)] =
          scenario.radio.pathloss.gain(distance_m(pos, net.sbs_positions_m[n]));
      sue_mbs_pathloss_[dims_.sue(n, u)] =
          scenario.radio.pathloss.gain(distance_m(pos, net.mbs_position_m));
    }
  }
  sbs_mue_pathloss_.resize(static_cast<size_t>(net.n_sbs) * net.n_subchannels);
  for (int n = 0; n < net.n_sbs; ++n)
    for (int m = 0; m < net.n_subchannels; ++m)
      sbs_mue_pathloss_[n * net.n_subchannels + m] =
          scenario.radio.pathloss.gain(distance_m(net.sbs_positions_m[n], mue_positions_[m]));
}

SlotState SlotSampler::state(std::uint64_t t) const {
  const auto& s = *scenario_;
  const auto& net = s.network;
  Rng rng(mix_seed(run_seed_, kSlotTag, t));

  SlotState state;
  state.arrivals_bits.resize(dims_.total_sues);
  state.harvest.resize(net.n_sbs);
  state.gain.resize(dims_.tensor_size);
  state.mbs_interference.resize(dims_.tensor_size);
  state.cross_gain_to_mue.resize(static_cast<size_t>(net.n_sbs) * net.n_subchannels);

  const double sigma_db = s.radio.shadowing_sigma_db;
  auto fade = [&]() { return rng.exp1() * db_to_linear(sigma_db * rng.normal()); };

  for (int n = 0; n < net.n_sbs; ++n)
    for (int u = 0; u < net.users_per_sbs[n]; ++u)
      state.arrivals_bits[dims_.sue(n, u)] =
          std::min(rng.poisson(s.traffic.arrival_mean_pkts) * s.traffic.packet_size_bits,
                   s.traffic.a_max_bits);

  // Harvest: truncated scaled Poisson with the configured mean, i.i.d. per
  // slot, floored onto the energy grid.
  const double unit = s.energy.harvest_max / 20.0;
  const double rate = s.energy.harvest_mean / unit;
  for (int n = 0; n < net.n_sbs; ++n)
    state.harvest[n] = quantize_energy_floor(
        std::min(rng.poisson(rate) * unit, s.energy.harvest_max));

  for (int n = 0; n < net.n_sbs; ++n) {
    for (int m = 0; m < net.n_subchannels; ++m) {
      for (int u = 0; u < net.users_per_sbs[n]; ++u) {
        const int i = dims_.idx(n, m, u);
        state.gain[i] = sue_sbs_pathloss_[dims_.sue(n, u)] * fade();
        state.mbs_interference[i] =
            p_mbs_per_channel_w_ * sue_mbs_pathloss_[dims_.sue(n, u)] * fade();
      }
      state.cross_gain_to_mue[n * net.n_subchannels + m] =
          sbs_mue_pathloss_[n * net.n_subchannels + m] * fade();
    }
  }
  return state;
}

double expected_arrival_rate(const Scenario& scenario) {
  const double lambda = scenario.traffic.arrival_mean_pkts;
  const double size = scenario.traffic.packet_size_bits;
  const double a_max = scenario.traffic.a_max_bits;
  const int cap_pkts = static_cast<int>(std::floor(a_max / size));

  // E[min(K*size, A)] = size * lambda * P(K <= c-1) + A * (1 - P(K <= c))
  // using k*pmf(k) = lambda*pmf(k-1); c = floor(A/size).
  double pmf = std::exp(-lambda);
  double cdf_cm1 = 0.0, cdf_c = 0.0;
  for (int k = 0; k <= cap_pkts; ++k) {
    if (k <= cap_pkts - 1) cdf_cm1 += pmf;
    cdf_c += pmf;
    pmf *= lambda / (k + 1);
  }
  return size * lambda * cdf_cm1 + a_max * (1.0 - cdf_c);
}

}  // namespace hetsim

#pragma once

#include <cstdint>
#include <vector>

#include "hetsim/rng.hpp"
#include "hetsim/scenario.hpp"
#include "hetsim/units.hpp"

namespace hetsim {

/// All random realizations for one slot. Gains include pathloss, Rayleigh
/// power fading (unit-mean exponential) and log-normal shadowing, redrawn
/// i.i.d. every slot.
struct SlotState {
  std::vector<double> arrivals_bits;       // per SUE, <= a_max_bits
  std::vector<double> harvest;             // per SBS, on the energy grid
  std::vector<double> gain;                // dims.idx(n,m,u): serving gain
  std::vector<double> mbs_interference;    // dims.idx(n,m,u): p_mk^M * h^M
  std::vector<double> cross_gain_to_mue;   // n * M + m: SBS -> MUE on m
};

/// Per-run realization source. Every slot is derived from (seed, t) alone,
/// so slot k of a T-run and of a 2T-run are identical and any slot can be
/// regenerated without replaying the sequence.
class SlotSampler {
 public:
  SlotSampler(const Scenario& scenario, std::uint64_t run_seed);

  SlotState state(std::uint64_t t) const;

  /// MUE positions drawn once per run (one per subchannel).
  const std::vector<Vec2>& mue_positions() const { return mue_positions_; }

 private:
  const Scenario* scenario_;
  NetDims dims_;
  std::uint64_t run_seed_;
  double p_mbs_per_channel_w_ = 0.0;
  std::vector<Vec2> mue_positions_;
  std::vector<double> sue_sbs_pathloss_;  // dims.sue(n,u) wrt serving SBS
  std::vector<double> sue_mbs_pathloss_;  // dims.sue(n,u) wrt MBS
  std::vector<double> sbs_mue_pathloss_;  // n * M + m
};

/// Mean admitted-able arrival E[min(K * packet_size, A_max)], K ~ Poisson.
double expected_arrival_rate(const Scenario& scenario);

}  // namespace hetsim

#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace hetsim {

/// 2-D point, meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance_m(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Noise power over a bandwidth, from a spectral density in dBm/Hz.
inline double noise_power_w(double density_dbm_hz, double bandwidth_hz) {
  return dbm_to_watt(density_dbm_hz) * bandwidth_hz;
}

// Energy bookkeeping (battery, charge, discharge, grid) runs on a fixed
// power-of-two grid so slot recursions, telescoping sums and the battery
// bounds are exact in double arithmetic. 2^-20 watt-slot resolution keeps
// counts below 2^53 for any realistic horizon.
inline constexpr double kEnergyQuantum = 0x1p-20;

inline double quantize_energy_floor(double x) {
  return std::floor(x / kEnergyQuantum) * kEnergyQuantum;
}
inline double quantize_energy_ceil(double x) {
  return std::ceil(x / kEnergyQuantum) * kEnergyQuantum;
}

/// Index bookkeeping for the (sbs, channel, sue) tensors used throughout.
/// SUE counts vary per SBS, so tensors are ragged: SBS n owns a contiguous
/// block of n_channels * users[n] entries.
struct NetDims {
  int n_sbs = 0;
  int n_channels = 0;
  std::vector<int> users;          // U_n
  std::vector<int> block_offset;   // start of SBS n's (m,u) block
  std::vector<int> sue_offset;     // start of SBS n's SUE range
  int total_sues = 0;
  int tensor_size = 0;

  NetDims() = default;
  NetDims(int sbs, int channels, std::vector<int> users_per_sbs)
      : n_sbs(sbs), n_channels(channels), users(std::move(users_per_sbs)) {
    block_offset.resize(n_sbs);
    sue_offset.resize(n_sbs);
    int b = 0, s = 0;
    for (int n = 0; n < n_sbs; ++n) {
      block_offset[n] = b;
      sue_offset[n] = s;
      b += n_channels * users[n];
      s += users[n];
    }
    tensor_size = b;
    total_sues = s;
  }

  int idx(int n, int m, int u) const { return block_offset[n] + m * users[n] + u; }
  int sue(int n, int u) const { return sue_offset[n] + u; }
  friend bool operator==(const NetDims&, const NetDims&) = default;
};

}  // namespace hetsim

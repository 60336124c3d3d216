#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hetsim/units.hpp"

namespace hetsim {

/// Thrown when a configuration violates an invariant; carries the offending
/// field name so callers (and the CLI) can point at it.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error(field_name + ": " + message), field(std::move(field_name)) {}
};

struct PathlossModel {
  std::string name = "log_distance";
  double ref_loss_db = 37.0;     // at ref_distance
  double exponent = 3.5;
  double ref_distance_m = 1.0;

  /// Linear power gain at distance d; d is clamped at the reference distance
  /// so co-located nodes stay finite.
  double gain(double d_m) const;
  friend bool operator==(const PathlossModel&, const PathlossModel&) = default;
};

struct NetworkConfig {
  int n_sbs = 3;
  std::vector<int> users_per_sbs;              // U_n
  int n_subchannels = 6;
  std::vector<double> subchannel_bandwidth_hz; // per subchannel, sums to total
  double total_bandwidth_hz = 30e6;
  std::vector<double> initial_band_hz;         // B_n^0, sums to total
  Vec2 mbs_position_m{0.0, 0.0};
  std::vector<Vec2> sbs_positions_m;
  std::vector<std::vector<Vec2>> sue_positions_m;  // [sbs][sue]
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct RadioConfig {
  double p_sbs_max_w = 0.1;
  double p_mbs_dbm = 40.0;
  double interference_cap_w = 2e-10;    // per subchannel
  double noise_density_dbm_hz = -174.0;
  double static_power_w = 3.2;
  double power_slope = 4.0;
  PathlossModel pathloss;
  double shadowing_sigma_db = 10.0;
  friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

struct EnergyConfig {
  double battery_capacity = 500.0;  // watt-slot units
  double harvest_max = 60.0;
  double harvest_mean = 30.0;
  double grid_price_phi = 0.1;
  friend bool operator==(const EnergyConfig&, const EnergyConfig&) = default;
};

struct EconomicConfig {
  std::vector<double> price_cap_per_hz;  // q_n^max; scalar broadcast on load
  std::vector<double> c_min;             // C_n^min
  std::vector<double> mu_max;            // empty => derived U_n*A_max + q*F
  double v_param = 10.0;
  friend bool operator==(const EconomicConfig&, const EconomicConfig&) = default;
};

struct TrafficConfig {
  double arrival_mean_pkts = 4.0;
  double packet_size_bits = 5000.0;
  double a_max_bits = 60000.0;  // 12 packets
  friend bool operator==(const TrafficConfig&, const TrafficConfig&) = default;
};

struct Scenario {
  NetworkConfig network;
  RadioConfig radio;
  EnergyConfig energy;
  EconomicConfig economic;
  TrafficConfig traffic;

  /// Non-fatal validation findings (e.g. battery too small for peak power).
  std::vector<std::string> warnings;

  /// Derived: contiguous subchannel range [first, last) initially owned by
  /// each SBS, computed from initial_band_hz during validation.
  std::vector<std::pair<int, int>> initial_channels;

  NetDims dims() const {
    return NetDims(network.n_sbs, network.n_subchannels, network.users_per_sbs);
  }
  int users(int n) const { return network.users_per_sbs[n]; }
  double noise_w(int m) const {
    return noise_power_w(radio.noise_density_dbm_hz, network.subchannel_bandwidth_hz[m]);
  }
  double q_max(int n) const { return economic.price_cap_per_hz[n]; }
  double mu_max(int n) const { return economic.mu_max[n]; }
  double c_min(int n) const { return economic.c_min[n]; }
  double p_peak_w() const { return radio.static_power_w + radio.power_slope * radio.p_sbs_max_w; }
  bool owns_channel(int n, int m) const {
    return m >= initial_channels[n].first && m < initial_channels[n].second;
  }

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.network == b.network && a.radio == b.radio && a.energy == b.energy &&
           a.economic == b.economic && a.traffic == b.traffic;
  }
};

/// The default experiment: three SBSs under one MBS sharing a 30 MHz band,
/// 0.1 W peak transmit power, -174 dBm/Hz noise, 3.2 W static draw, Poisson
/// traffic of 4 packets/slot at 5000 bits. Unequal user counts (8/1/1) so
/// the loaded cell has something to gain from renting spectrum.
Scenario default_scenario();

/// Validates all invariants, fills derived fields (initial_channels,
/// mu_max defaults) and collects warnings. Throws ConfigError.
void validate(Scenario& s);

/// Parses the key/value config format (see README). Omitted keys keep the
/// default-scenario values. The literal path "default" yields the defaults.
Scenario load_config(const std::string& path);

/// Parses config text (same format as load_config).
Scenario parse_config(const std::string& text);

/// Canonical serialization; parse_config(serialize_config(s)) == s.
std::string serialize_config(const Scenario& s);

/// Battery perturbation rho_n = S_n^max - E_n^max: centering the energy
/// queue here keeps the battery inside [0, S_max] under the charging rules.
double derive_perturbation(const EnergyConfig& energy);
std::vector<double> derive_perturbations(const EnergyConfig& energy, int n_sbs);

}  // namespace hetsim

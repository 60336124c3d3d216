#include "hetsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hetsim {

double PathlossModel::gain(double d_m) const {
  const double d = std::max(d_m, ref_distance_m);
  const double loss_db = ref_loss_db + 10.0 * exponent * std::log10(d / ref_distance_m);
  return db_to_linear(-loss_db);
}

Scenario default_scenario() {
  Scenario s;
  s.network.n_sbs = 3;
  s.network.users_per_sbs = {8, 1, 1};
  s.network.n_subchannels = 6;
  s.network.total_bandwidth_hz = 30e6;
  s.network.subchannel_bandwidth_hz.assign(6, 30e6 / 6.0);
  s.network.initial_band_hz.assign(3, 10e6);
  s.network.mbs_position_m = {0.0, 0.0};
  s.network.sbs_positions_m = {{0.0, 250.0}, {-216.5, -125.0}, {216.5, -125.0}};
  // SUEs on a 40 m ring around their SBS, evenly spaced.
  s.network.sue_positions_m.clear();
  for (int n = 0; n < 3; ++n) {
    std::vector<Vec2> sues;
    const int un = s.network.users_per_sbs[n];
    for (int u = 0; u < un; ++u) {
      const double ang = 2.0 * M_PI * (u + 0.5) / un;
      sues.push_back({s.network.sbs_positions_m[n].x + 40.0 * std::cos(ang),
                      s.network.sbs_positions_m[n].y + 40.0 * std::sin(ang)});
    }
    s.network.sue_positions_m.push_back(std::move(sues));
  }
  validate(s);
  return s;
}

double derive_perturbation(const EnergyConfig& energy) {
  return energy.battery_capacity - energy.harvest_max;
}

std::vector<double> derive_perturbations(const EnergyConfig& energy, int n_sbs) {
  return std::vector<double>(static_cast<size_t>(n_sbs), derive_perturbation(energy));
}

namespace {

bool near_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

void validate(Scenario& s) {
  auto& net = s.network;
  if (net.n_sbs < 1) throw ConfigError("n_sbs", "must be >= 1");
  if (net.n_subchannels < 1) throw ConfigError("n_subchannels", "must be >= 1");
  if (static_cast<int>(net.users_per_sbs.size()) != net.n_sbs)
    throw ConfigError("users_per_sbs", "needs one count per SBS");
  for (int u : net.users_per_sbs)
    if (u < 1) throw ConfigError("users_per_sbs", "every SBS needs >= 1 SUE");

  if (static_cast<int>(net.subchannel_bandwidth_hz.size()) != net.n_subchannels)
    throw ConfigError("subchannel_bandwidth_hz", "needs one width per subchannel");
  double sum_bw = 0.0;
  for (double w : net.subchannel_bandwidth_hz) {
    if (w <= 0.0) throw ConfigError("subchannel_bandwidth_hz", "widths must be positive");
    sum_bw += w;
  }
  if (!near_equal(sum_bw, net.total_bandwidth_hz, 1e-9))
    throw ConfigError("subchannel_bandwidth_hz", "widths must sum to total_bandwidth_hz");

  if (static_cast<int>(net.initial_band_hz.size()) != net.n_sbs)
    throw ConfigError("initial_band_hz", "needs one band per SBS");
  double sum_b0 = 0.0;
  for (double b : net.initial_band_hz) {
    if (b < 0.0) throw ConfigError("initial_band_hz", "bands must be >= 0");
    sum_b0 += b;
  }
  if (!near_equal(sum_b0, net.total_bandwidth_hz, 1e-9))
    throw ConfigError("initial_band_hz", "initial bands must sum to total_bandwidth_hz");

  // Initial bands must align with whole subchannels (contiguous split).
  s.initial_channels.assign(net.n_sbs, {0, 0});
  int m = 0;
  for (int n = 0; n < net.n_sbs; ++n) {
    double remaining = net.initial_band_hz[n];
    const int first = m;
    while (remaining > 1e-6 && m < net.n_subchannels) {
      remaining -= net.subchannel_bandwidth_hz[m];
      ++m;
    }
    if (std::abs(remaining) > 1e-6)
      throw ConfigError("initial_band_hz", "band of SBS " + std::to_string(n) +
                                               " does not align with subchannel boundaries");
    s.initial_channels[n] = {first, m};
  }

  if (static_cast<int>(net.sbs_positions_m.size()) != net.n_sbs)
    throw ConfigError("sbs_positions_m", "needs one position per SBS");
  if (static_cast<int>(net.sue_positions_m.size()) != net.n_sbs)
    throw ConfigError("sue_positions_m", "needs one position list per SBS");
  for (int n = 0; n < net.n_sbs; ++n)
    if (static_cast<int>(net.sue_positions_m[n].size()) != net.users_per_sbs[n])
      throw ConfigError("sue_positions_m", "SBS " + std::to_string(n) +
                                               " needs one position per SUE");

  auto& radio = s.radio;
  if (radio.p_sbs_max_w <= 0.0) throw ConfigError("p_sbs_max_w", "must be > 0");
  if (radio.interference_cap_w <= 0.0) throw ConfigError("interference_cap_w", "must be > 0");
  if (radio.power_slope <= 0.0) throw ConfigError("power_slope", "must be > 0");

  auto& energy = s.energy;
  if (energy.harvest_max <= 0.0) throw ConfigError("harvest_max", "must be > 0");
  if (energy.harvest_max > energy.battery_capacity)
    throw ConfigError("harvest_max", "must not exceed battery_capacity");
  if (energy.grid_price_phi < 0.0) throw ConfigError("grid_price_phi", "must be >= 0");
  if (energy.harvest_mean < 0.0 || energy.harvest_mean > energy.harvest_max)
    throw ConfigError("harvest_mean", "must lie in [0, harvest_max]");
  // Keep the battery state on the exact energy grid.
  energy.battery_capacity = quantize_energy_floor(energy.battery_capacity);
  energy.harvest_max = quantize_energy_floor(energy.harvest_max);
  if (energy.battery_capacity - energy.harvest_max < s.p_peak_w()) {
    s.warnings.push_back(
        "battery_capacity - harvest_max < peak power draw: battery-only supply "
        "cannot always cover P_n(t); grid top-ups will be logged");
  }

  auto& traffic = s.traffic;
  if (traffic.arrival_mean_pkts <= 0.0) throw ConfigError("arrival_mean_pkts", "must be > 0");
  if (traffic.packet_size_bits <= 0.0) throw ConfigError("packet_size_bits", "must be > 0");
  if (traffic.a_max_bits < traffic.arrival_mean_pkts * traffic.packet_size_bits)
    throw ConfigError("a_max_bits", "must be >= mean arrival in bits");

  auto& econ = s.economic;
  auto broadcast = [&](std::vector<double>& v, const char* field, double fallback) {
    if (v.empty()) v.assign(static_cast<size_t>(net.n_sbs), fallback);
    if (static_cast<int>(v.size()) == 1 && net.n_sbs > 1)
      v.assign(static_cast<size_t>(net.n_sbs), v[0]);
    if (static_cast<int>(v.size()) != net.n_sbs)
      throw ConfigError(field, "needs a scalar or one value per SBS");
  };
  broadcast(econ.price_cap_per_hz, "price_cap_per_hz", 1e-6);
  broadcast(econ.c_min, "c_min", 0.0);
  for (double q : econ.price_cap_per_hz)
    if (q < 0.0) throw ConfigError("price_cap_per_hz", "must be >= 0");
  for (double c : econ.c_min)
    if (c < 0.0) throw ConfigError("c_min", "must be >= 0");
  if (econ.mu_max.empty()) {
    for (int n = 0; n < net.n_sbs; ++n)
      econ.mu_max.push_back(net.users_per_sbs[n] * traffic.a_max_bits +
                            econ.price_cap_per_hz[n] * net.total_bandwidth_hz);
  }
  broadcast(econ.mu_max, "mu_max", 0.0);
  for (double m2 : econ.mu_max)
    if (m2 <= 0.0) throw ConfigError("mu_max", "must be > 0");
  if (econ.v_param < 0.0) throw ConfigError("v_param", "must be >= 0");
}

// --------------------------------------------------------------------------
// Config text format: "[section]" headers, "key = value ..." lines, '#'
// comments. Positions are x,y tokens. Lists are whitespace separated.
// --------------------------------------------------------------------------

namespace {

struct RawConfig {
  std::map<std::string, std::vector<std::string>> kv;  // "section.key" -> tokens
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config", "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::istringstream vals(line.substr(eq + 1));
    std::vector<std::string> tokens;
    std::string tok;
    while (vals >> tok) tokens.push_back(tok);
    raw.kv[section.empty() ? key : section + "." + key] = tokens;
  }
  return raw;
}

double parse_double(const std::string& tok, const std::string& field) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "cannot parse number '" + tok + "'");
  }
}

Vec2 parse_vec2(const std::string& tok, const std::string& field) {
  const auto comma = tok.find(',');
  if (comma == std::string::npos) throw ConfigError(field, "expected x,y but got '" + tok + "'");
  return {parse_double(tok.substr(0, comma), field), parse_double(tok.substr(comma + 1), field)};
}

class Reader {
 public:
  explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.kv.count(key) > 0; }

  void scalar(const std::string& key, double& out) {
    if (!has(key)) return;
    expect_one(key);
    out = parse_double(raw_.kv[key][0], key);
  }
  void scalar(const std::string& key, int& out) {
    if (!has(key)) return;
    expect_one(key);
    out = static_cast<int>(std::lround(parse_double(raw_.kv[key][0], key)));
  }
  void list(const std::string& key, std::vector<double>& out) {
    if (!has(key)) return;
    out.clear();
    for (const auto& tok : raw_.kv[key]) out.push_back(parse_double(tok, key));
  }
  void int_list(const std::string& key, std::vector<int>& out) {
    if (!has(key)) return;
    out.clear();
    for (const auto& tok : raw_.kv[key])
      out.push_back(static_cast<int>(std::lround(parse_double(tok, key))));
  }
  void vec2(const std::string& key, Vec2& out) {
    if (!has(key)) return;
    expect_one(key);
    out = parse_vec2(raw_.kv[key][0], key);
  }
  void vec2_list(const std::string& key, std::vector<Vec2>& out) {
    if (!has(key)) return;
    out.clear();
    for (const auto& tok : raw_.kv[key]) out.push_back(parse_vec2(tok, key));
  }
  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    expect_one(key);
    out = raw_.kv[key][0];
  }

 private:
  void expect_one(const std::string& key) {
    if (raw_.kv[key].size() != 1) throw ConfigError(key, "expected a single value");
  }
  RawConfig raw_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Scenario parse_config(const std::string& text) {
  Reader r(tokenize(text));
  Scenario s = default_scenario();
  s.warnings.clear();

  r.scalar("network.n_sbs", s.network.n_sbs);
  r.int_list("network.users_per_sbs", s.network.users_per_sbs);
  r.scalar("network.n_subchannels", s.network.n_subchannels);
  r.scalar("network.total_bandwidth_hz", s.network.total_bandwidth_hz);
  r.list("network.subchannel_bandwidth_hz", s.network.subchannel_bandwidth_hz);
  r.list("network.initial_band_hz", s.network.initial_band_hz);
  r.vec2("network.mbs_position_m", s.network.mbs_position_m);
  r.vec2_list("network.sbs_positions_m", s.network.sbs_positions_m);

  // Structural keys changed without explicit per-entry data: rebuild the
  // dependent defaults instead of validating against stale ones.
  if (r.has("network.n_sbs") && !r.has("network.users_per_sbs"))
    s.network.users_per_sbs.assign(s.network.n_sbs, 2);
  if ((r.has("network.n_subchannels") || r.has("network.total_bandwidth_hz")) &&
      !r.has("network.subchannel_bandwidth_hz"))
    s.network.subchannel_bandwidth_hz.assign(
        s.network.n_subchannels, s.network.total_bandwidth_hz / s.network.n_subchannels);
  if ((r.has("network.n_sbs") || r.has("network.total_bandwidth_hz")) &&
      !r.has("network.initial_band_hz"))
    s.network.initial_band_hz.assign(s.network.n_sbs,
                                     s.network.total_bandwidth_hz / s.network.n_sbs);
  if (r.has("network.n_sbs") && !r.has("network.sbs_positions_m")) {
    s.network.sbs_positions_m.clear();
    for (int n = 0; n < s.network.n_sbs; ++n) {
      const double ang = 2.0 * M_PI * n / s.network.n_sbs + M_PI / 2.0;
      s.network.sbs_positions_m.push_back({250.0 * std::cos(ang), 250.0 * std::sin(ang)});
    }
  }
  if ((r.has("network.n_sbs") || r.has("network.users_per_sbs") ||
       r.has("network.sbs_positions_m")) &&
      !r.has("network.sue_positions_m")) {
    s.network.sue_positions_m.clear();
    for (int n = 0; n < s.network.n_sbs; ++n) {
      std::vector<Vec2> sues;
      const int un = n < static_cast<int>(s.network.users_per_sbs.size())
                         ? s.network.users_per_sbs[n]
                         : 1;
      for (int u = 0; u < un; ++u) {
        const double ang = 2.0 * M_PI * (u + 0.5) / un;
        sues.push_back({s.network.sbs_positions_m[n].x + 40.0 * std::cos(ang),
                        s.network.sbs_positions_m[n].y + 40.0 * std::sin(ang)});
      }
      s.network.sue_positions_m.push_back(std::move(sues));
    }
  }
  {
    std::vector<Vec2> flat;
    r.vec2_list("network.sue_positions_m", flat);
    if (!flat.empty()) {
      s.network.sue_positions_m.clear();
      size_t k = 0;
      for (int n = 0; n < s.network.n_sbs; ++n) {
        const int un = s.network.users_per_sbs[n];
        if (k + un > flat.size())
          throw ConfigError("sue_positions_m", "fewer positions than SUEs");
        s.network.sue_positions_m.emplace_back(flat.begin() + k, flat.begin() + k + un);
        k += un;
      }
      if (k != flat.size()) throw ConfigError("sue_positions_m", "more positions than SUEs");
    }
  }

  r.scalar("radio.p_sbs_max_w", s.radio.p_sbs_max_w);
  r.scalar("radio.p_mbs_dbm", s.radio.p_mbs_dbm);
  r.scalar("radio.interference_cap_w", s.radio.interference_cap_w);
  r.scalar("radio.noise_density_dbm_hz", s.radio.noise_density_dbm_hz);
  r.scalar("radio.static_power_w", s.radio.static_power_w);
  r.scalar("radio.power_slope", s.radio.power_slope);
  r.text("radio.pathloss_model", s.radio.pathloss.name);
  r.scalar("radio.pathloss_ref_loss_db", s.radio.pathloss.ref_loss_db);
  r.scalar("radio.pathloss_exponent", s.radio.pathloss.exponent);
  r.scalar("radio.pathloss_ref_distance_m", s.radio.pathloss.ref_distance_m);
  r.scalar("radio.shadowing_sigma_db", s.radio.shadowing_sigma_db);
  if (s.radio.pathloss.name != "log_distance")
    throw ConfigError("pathloss_model", "unknown model '" + s.radio.pathloss.name + "'");

  r.scalar("energy.battery_capacity", s.energy.battery_capacity);
  r.scalar("energy.harvest_max", s.energy.harvest_max);
  r.scalar("energy.harvest_mean", s.energy.harvest_mean);
  if (r.has("energy.harvest_max") && !r.has("energy.harvest_mean"))
    s.energy.harvest_mean = 0.5 * s.energy.harvest_max;
  r.scalar("energy.grid_price_phi", s.energy.grid_price_phi);

  r.list("economic.price_cap_per_hz", s.economic.price_cap_per_hz);
  r.list("economic.c_min", s.economic.c_min);
  if (r.has("economic.mu_max")) {
    r.list("economic.mu_max", s.economic.mu_max);
  } else if (r.has("network.n_sbs") || r.has("network.users_per_sbs") ||
             r.has("traffic.a_max_bits") || r.has("economic.price_cap_per_hz")) {
    s.economic.mu_max.clear();  // re-derive for the new shape
  }
  if (r.has("network.n_sbs")) {
    if (!r.has("economic.price_cap_per_hz")) s.economic.price_cap_per_hz.clear();
    if (!r.has("economic.c_min")) s.economic.c_min.clear();
  }
  r.scalar("economic.v_param", s.economic.v_param);

  r.scalar("traffic.arrival_mean_pkts", s.traffic.arrival_mean_pkts);
  r.scalar("traffic.packet_size_bits", s.traffic.packet_size_bits);
  r.scalar("traffic.a_max_bits", s.traffic.a_max_bits);
  if ((r.has("traffic.arrival_mean_pkts") || r.has("traffic.packet_size_bits")) &&
      !r.has("traffic.a_max_bits"))
    s.traffic.a_max_bits = 12.0 * s.traffic.packet_size_bits;

  validate(s);
  return s;
}

Scenario load_config(const std::string& path) {
  if (path == "default") return default_scenario();
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const Scenario& s) {
  std::ostringstream out;
  out << "[network]\n";
  out << "n_sbs = " << s.network.n_sbs << "\n";
  out << "users_per_sbs =";
  for (int u : s.network.users_per_sbs) out << " " << u;
  out << "\n";
  out << "n_subchannels = " << s.network.n_subchannels << "\n";
  out << "total_bandwidth_hz = " << fmt(s.network.total_bandwidth_hz) << "\n";
  out << "subchannel_bandwidth_hz =";
  for (double w : s.network.subchannel_bandwidth_hz) out << " " << fmt(w);
  out << "\n";
  out << "initial_band_hz =";
  for (double b : s.network.initial_band_hz) out << " " << fmt(b);
  out << "\n";
  out << "mbs_position_m = " << fmt(s.network.mbs_position_m.x) << ","
      << fmt(s.network.mbs_position_m.y) << "\n";
  out << "sbs_positions_m =";
  for (const auto& p : s.network.sbs_positions_m) out << " " << fmt(p.x) << "," << fmt(p.y);
  out << "\n";
  out << "sue_positions_m =";
  for (const auto& list : s.network.sue_positions_m)
    for (const auto& p : list) out << " " << fmt(p.x) << "," << fmt(p.y);
  out << "\n\n";

  out << "[radio]\n";
  out << "p_sbs_max_w = " << fmt(s.radio.p_sbs_max_w) << "\n";
  out << "p_mbs_dbm = " << fmt(s.radio.p_mbs_dbm) << "\n";
  out << "interference_cap_w = " << fmt(s.radio.interference_cap_w) << "\n";
  out << "noise_density_dbm_hz = " << fmt(s.radio.noise_density_dbm_hz) << "\n";
  out << "static_power_w = " << fmt(s.radio.static_power_w) << "\n";
  out << "power_slope = " << fmt(s.radio.power_slope) << "\n";
  out << "pathloss_model = " << s.radio.pathloss.name << "\n";
  out << "pathloss_ref_loss_db = " << fmt(s.radio.pathloss.ref_loss_db) << "\n";
  out << "pathloss_exponent = " << fmt(s.radio.pathloss.exponent) << "\n";
  out << "pathloss_ref_distance_m = " << fmt(s.radio.pathloss.ref_distance_m) << "\n";
  out << "shadowing_sigma_db = " << fmt(s.radio.shadowing_sigma_db) << "\n\n";

  out << "[energy]\n";
  out << "battery_capacity = " << fmt(s.energy.battery_capacity) << "\n";
  out << "harvest_max = " << fmt(s.energy.harvest_max) << "\n";
  out << "harvest_mean = " << fmt(s.energy.harvest_mean) << "\n";
  out << "grid_price_phi = " << fmt(s.energy.grid_price_phi) << "\n\n";

  out << "[economic]\n";
  out << "price_cap_per_hz =";
  for (double q : s.economic.price_cap_per_hz) out << " " << fmt(q);
  out << "\n";
  out << "c_min =";
  for (double c : s.economic.c_min) out << " " << fmt(c);
  out << "\n";
  out << "mu_max =";
  for (double m : s.economic.mu_max) out << " " << fmt(m);
  out << "\n";
  out << "v_param = " << fmt(s.economic.v_param) << "\n\n";

  out << "[traffic]\n";
  out << "arrival_mean_pkts = " << fmt(s.traffic.arrival_mean_pkts) << "\n";
  out << "packet_size_bits = " << fmt(s.traffic.packet_size_bits) << "\n";
  out << "a_max_bits = " << fmt(s.traffic.a_max_bits) << "\n";
  return out.str();
}

}  // namespace hetsim

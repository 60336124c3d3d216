#include "hetsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace hetsim {

double sinr(double p_w, double h, double i0_w, double noise_w) {
  if (noise_w <= 0.0) throw std::domain_error("sinr: noise power must be positive");
  return p_w * h / (i0_w + noise_w);
}

double subchannel_rate(double bw_hz, double gamma) {
  return bw_hz * std::log2(1.0 + gamma);
}

RateTable build_rate_table(const SlotState& slot, const NetDims& dims,
                           const std::vector<char>& x, const std::vector<double>& p,
                           const Scenario& scenario) {
  RateTable table;
  table.dims = dims;
  table.sinr.assign(dims.tensor_size, 0.0);
  table.rate_bits.assign(dims.tensor_size, 0.0);
  for (int n = 0; n < dims.n_sbs; ++n) {
    for (int m = 0; m < dims.n_channels; ++m) {
      const double noise = scenario.noise_w(m);
      for (int u = 0; u < dims.users[n]; ++u) {
        const int i = dims.idx(n, m, u);
        if (!x[i] || p[i] <= 0.0) continue;
        table.sinr[i] = sinr(p[i], slot.gain[i], slot.mbs_interference[i], noise);
        table.rate_bits[i] =
            subchannel_rate(scenario.network.subchannel_bandwidth_hz[m], table.sinr[i]);
      }
    }
  }
  return table;
}

double sue_throughput(const std::vector<char>& x, const RateTable& rates, int n, int u) {
  const NetDims& dims = rates.dims;
  for (int m = 0; m < dims.n_channels; ++m) {
    int used = 0;
    for (int nn = 0; nn < dims.n_sbs; ++nn)
      for (int uu = 0; uu < dims.users[nn]; ++uu) used += x[dims.idx(nn, m, uu)] ? 1 : 0;
    if (used > 1)
      throw std::invalid_argument("sue_throughput: subchannel assigned to multiple SUEs");
  }
  double r = 0.0;
  for (int m = 0; m < dims.n_channels; ++m) {
    const int i = dims.idx(n, m, u);
    if (x[i]) r += rates.rate_bits[i];
  }
  return r;
}

PowerDraw power_consumption(const std::vector<char>& x, const std::vector<double>& p,
                            const NetDims& dims, int n, const RadioConfig& radio) {
  double tx = 0.0;
  for (int m = 0; m < dims.n_channels; ++m)
    for (int u = 0; u < dims.users[n]; ++u) {
      const int i = dims.idx(n, m, u);
      if (x[i]) tx += p[i];
    }
  if (tx > radio.p_sbs_max_w * (1.0 + 1e-12))
    throw std::invalid_argument("power_consumption: transmit power exceeds p_sbs_max_w");
  return {radio.static_power_w + radio.power_slope * tx, tx};
}

}  // namespace hetsim

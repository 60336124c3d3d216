#pragma once

#include <vector>

#include "hetsim/scenario.hpp"
#include "hetsim/stochastic.hpp"
#include "hetsim/units.hpp"

namespace hetsim {

/// Per-(n,m,u) SINR and Shannon rate for a given assignment and power vector.
struct RateTable {
  NetDims dims;
  std::vector<double> sinr;       // dims.idx(n,m,u)
  std::vector<double> rate_bits;  // bits per slot (slot length 1)
};

struct PowerDraw {
  double p_total_w = 0.0;      // static + slope * transmit
  double transmit_sum_w = 0.0; // sum of x*p
};

/// gamma = p*h / (i0 + noise). Throws std::domain_error if noise <= 0.
double sinr(double p_w, double h, double i0_w, double noise_w);

/// Shannon rate over one slot: bw * log2(1 + gamma).
double subchannel_rate(double bw_hz, double gamma);

RateTable build_rate_table(const SlotState& slot, const NetDims& dims,
                           const std::vector<char>& x, const std::vector<double>& p,
                           const Scenario& scenario);

/// R_nu = sum over assigned subchannels. Rejects assignments that put more
/// than one SUE on a subchannel. x is a 0/1 tensor over dims.idx.
double sue_throughput(const std::vector<char>& x, const RateTable& rates, int n, int u);

/// P_n = P_c + slope * sum(x*p); throws if the transmit budget is exceeded.
PowerDraw power_consumption(const std::vector<char>& x, const std::vector<double>& p,
                            const NetDims& dims, int n, const RadioConfig& radio);

}  // namespace hetsim

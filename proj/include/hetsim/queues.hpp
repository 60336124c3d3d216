#pragma once

#include <vector>

#include "hetsim/units.hpp"

namespace hetsim {

/// All queue state for one run: data backlogs Q_nu, battery levels S_n and
/// the virtual profit queues Y_n / Z_n with their perturbations rho_n.
/// Everything starts at zero; battery values live on the energy grid.
struct QueueState {
  std::vector<double> q_bits;    // per SUE
  std::vector<double> s_energy;  // per SBS
  std::vector<double> y;         // per SBS
  std::vector<double> z;         // per SBS
  std::vector<double> rho;       // per SBS

  static QueueState zeros(const NetDims& dims, const std::vector<double>& rho);

  /// Urgency weight W_n = Y_n + Z_n, computed on demand.
  double w(int n) const { return y[n] + z[n]; }
};

/// Per-slot flows feeding the virtual queues:
///   y_in = mu + C_min + phi*G,  y_out = sum(D) + O,
///   z_in = C_min + phi*G,       z_out = y_out.
struct VirtualFlows {
  double y_in = 0.0;
  double y_out = 0.0;
  double z_in = 0.0;
  double z_out = 0.0;
};

VirtualFlows make_flows(double mu, double c_min, double phi, double grid,
                        double admitted_sum, double payment);

/// q' = max(q - served, 0) + admitted.
double update_data_queue(double q, double served, double admitted);

/// s' = max(s - discharge, 0) + charge. Throws std::logic_error when the
/// discharge/charge bounds are violated; that is a controller bug, not an
/// input condition.
double update_energy_queue(double s, double discharge, double charge,
                           double s_max, double harvested);

/// (y', z') under the clamped recursions.
std::pair<double, double> update_virtual_queues(double y, double z, const VirtualFlows& f);

/// L = 1/2 [ sum Q^2 + sum (S - rho)^2 + sum Y^2 + sum Z^2 ].
double lyapunov_value(const QueueState& state);

}  // namespace hetsim

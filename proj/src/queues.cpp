#include "hetsim/queues.hpp"

#include <algorithm>
#include <stdexcept>

namespace hetsim {

QueueState QueueState::zeros(const NetDims& dims, const std::vector<double>& rho) {
  QueueState q;
  q.q_bits.assign(dims.total_sues, 0.0);
  q.s_energy.assign(dims.n_sbs, 0.0);
  q.y.assign(dims.n_sbs, 0.0);
  q.z.assign(dims.n_sbs, 0.0);
  q.rho = rho;
  return q;
}

VirtualFlows make_flows(double mu, double c_min, double phi, double grid,
                        double admitted_sum, double payment) {
  VirtualFlows f;
  f.y_in = mu + c_min + phi * grid;
  f.y_out = admitted_sum + payment;
  f.z_in = c_min + phi * grid;
  f.z_out = f.y_out;
  return f;
}

double update_data_queue(double q, double served, double admitted) {
  return std::max(q - served, 0.0) + admitted;
}

double update_energy_queue(double s, double discharge, double charge,
                           double s_max, double harvested) {
  if (discharge < 0.0 || discharge > s)
    throw std::logic_error("update_energy_queue: discharge outside [0, S]");
  if (charge < 0.0 || charge > std::min(s_max - s, harvested))
    throw std::logic_error("update_energy_queue: charge outside [0, min(S_max - S, E)]");
  return std::max(s - discharge, 0.0) + charge;
}

std::pair<double, double> update_virtual_queues(double y, double z, const VirtualFlows& f) {
  return {std::max(y - f.y_out, 0.0) + f.y_in, std::max(z - f.z_out, 0.0) + f.z_in};
}

double lyapunov_value(const QueueState& state) {
  double acc = 0.0;
  for (double q : state.q_bits) acc += q * q;
  for (size_t n = 0; n < state.s_energy.size(); ++n) {
    const double d = state.s_energy[n] - state.rho[n];
    acc += d * d;
  }
  for (double y : state.y) acc += y * y;
  for (double z : state.z) acc += z * z;
  return 0.5 * acc;
}

}  // namespace hetsim

#include "hetsim/baselines.hpp"

#include <stdexcept>

namespace hetsim {

PolicyKind parse_policy(const std::string& name) {
  if (name == "proposed") return PolicyKind::proposed;
  if (name == "nsra") return PolicyKind::nsra;
  if (name == "tdraa") return PolicyKind::tdraa;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

std::string policy_name(PolicyKind policy) {
  switch (policy) {
    case PolicyKind::proposed: return "proposed";
    case PolicyKind::nsra: return "nsra";
    case PolicyKind::tdraa: return "tdraa";
  }
  return "?";
}

SlotResult nsra_slot(const Scenario& scenario, const SlotState& slot, QueueState& queues,
                     std::int64_t t, const ControllerOptions& options) {
  Controller c(scenario, PolicyKind::nsra, scenario.economic.v_param, options);
  return c.run_slot(slot, queues, t);
}

SlotResult tdraa_slot(const Scenario& scenario, const SlotState& slot, QueueState& queues,
                      std::int64_t t, const ControllerOptions& options) {
  Controller c(scenario, PolicyKind::tdraa, scenario.economic.v_param, options);
  return c.run_slot(slot, queues, t);
}

}  // namespace hetsim

#pragma once

#include <string>

#include "hetsim/controller.hpp"

namespace hetsim {

PolicyKind parse_policy(const std::string& name);
std::string policy_name(PolicyKind policy);

/// No-spectrum-sharing baseline: per-SBS allocation inside the initial band,
/// no pairing, all prices zero. Shares the controller's queue and energy
/// machinery.
SlotResult nsra_slot(const Scenario& scenario, const SlotState& slot, QueueState& queues,
                     std::int64_t t, const ControllerOptions& options = {});

/// Round-robin baseline: SBS (t mod N) gets the whole band, the others stay
/// silent (static power still drawn); no payments.
SlotResult tdraa_slot(const Scenario& scenario, const SlotState& slot, QueueState& queues,
                      std::int64_t t, const ControllerOptions& options = {});

}  // namespace hetsim

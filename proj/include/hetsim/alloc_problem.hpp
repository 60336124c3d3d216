#pragma once

#include <vector>

#include "hetsim/queues.hpp"
#include "hetsim/scenario.hpp"
#include "hetsim/stochastic.hpp"

namespace hetsim {

/// One SBS's view inside a solve instance (a bargaining pair, a solo SBS, or
/// the whole band for the round-robin baseline). sbs == -1 marks the virtual
/// averaged SBS used to even out the pairing problem.
struct AllocMember {
  int sbs = -1;
  int n_users = 0;
  double p_max_w = 0.0;
  double w = 0.0;                   // W_n = Y_n + Z_n
  double eta = 0.0;                 // S - rho - phi*W
  double s_minus_rho = 0.0;         // S - rho
  double active_price_per_hz = 0.0; // price set by the pricing rule; 0 = no trade
  double alpha = 0.0;               // lease-out price
  double beta = 0.0;                // rent-in price
  double initial_band_hz = 0.0;     // B_n^0
  std::vector<double> q_bits;       // per user
  std::vector<int> sue_ids;         // global SUE ids (-1 for virtual users)
};

/// A self-contained relaxed power/subchannel problem over a channel subset.
/// Every member may transmit on every instance channel; exclusivity within
/// an initial band is expressed by which channels the instance contains.
struct AllocProblem {
  std::vector<AllocMember> members;
  std::vector<int> channel_ids;   // global ids, -1 for synthetic channels
  std::vector<double> bw_hz;
  std::vector<double> noise_w;
  std::vector<double> icap_w;
  std::vector<double> gain;        // idx(k,c,u)
  std::vector<double> i0_w;        // idx(k,c,u)
  std::vector<double> cross_gain;  // k * n_channels + c
  std::vector<int> member_offset;
  double phi = 0.0;
  double static_power_w = 0.0;
  double power_slope = 0.0;

  int n_channels() const { return static_cast<int>(channel_ids.size()); }
  int n_members() const { return static_cast<int>(members.size()); }
  int idx(int k, int c, int u) const {
    return member_offset[k] + c * members[k].n_users + u;
  }
  int cross_idx(int k, int c) const { return k * n_channels() + c; }
  int tensor_size() const {
    return member_offset.empty() ? 0
                                 : member_offset.back() +
                                       n_channels() * members.back().n_users;
  }
};

/// A (binary) assignment plus powers for an AllocProblem; at most one
/// (member, user) owns each channel by construction.
struct AllocationDecision {
  std::vector<int> owner_member;  // per channel, -1 = unassigned
  std::vector<int> owner_user;
  std::vector<double> power_w;
  double objective = 0.0;  // exact sharing-weighted objective (see exact_objective)
  int iterations = 0;
  std::vector<double> dual_trace;  // filled only when requested

  static AllocationDecision zeros(const AllocProblem& p);
  bool assigned(int c) const { return owner_member[c] >= 0; }
};

struct FeasibilityReport {
  std::vector<double> power_residual;         // per member, (sum p - p_max)+
  std::vector<double> interference_residual;  // per channel, (p*h_b - icap)+
  double max_power_residual = 0.0;
  double max_interference_residual = 0.0;
  bool within(double tol) const {
    return max_power_residual <= tol && max_interference_residual <= tol;
  }
};

/// Pricing terms chosen before the solve; attached to members by the builder.
struct MemberPricing {
  int sbs = 0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Builds an instance from global state for the given SBSs over the given
/// global channels. The active price entering theta is alpha for a leaser,
/// beta for a renter (whichever is nonzero).
AllocProblem build_problem(const Scenario& scenario, const SlotState& slot,
                           const QueueState& queues,
                           const std::vector<MemberPricing>& members,
                           const std::vector<int>& channels);

/// Shared feasibility checker (used by the solver and the brute-force
/// reference alike).
FeasibilityReport check_feasibility(const AllocProblem& p, const AllocationDecision& d);

/// Band actually held by member k under d, in Hz.
double band_hz(const AllocProblem& p, const AllocationDecision& d, int k);

/// O_n = alpha*(B0-B)+ - beta*(B-B0)+ for member k.
double payment(const AllocProblem& p, const AllocationDecision& d, int k);

/// The exact per-slot objective of the joint allocation problem:
/// sum Q*R + sum W*O + sum (S-rho)*P with P = P_c + slope * sum s.
double exact_objective(const AllocProblem& p, const AllocationDecision& d);

/// Rate of (member k, user u) under d, bits per slot.
double member_user_rate(const AllocProblem& p, const AllocationDecision& d, int k, int u);

}  // namespace hetsim

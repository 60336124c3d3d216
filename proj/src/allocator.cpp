#include "hetsim/allocator.hpp"

#include <algorithm>
#include <cmath>

namespace hetsim {

double power_closed_form(double q_bits, double bw_hz, double omega, double eta,
                         double i0_plus_noise_w, double h, double p_cap_w) {
  const double denom = omega - eta;
  if (denom <= 0.0) return p_cap_w;
  const double water = bw_hz * q_bits / (M_LN2 * denom);
  return std::clamp(water - i0_plus_noise_w / h, 0.0, p_cap_w);
}

void assign_channels(const AllocProblem& p, const std::vector<double>& scores,
                     const std::vector<double>& powers, AllocationDecision& out) {
  out.owner_member.assign(p.n_channels(), -1);
  out.owner_user.assign(p.n_channels(), -1);
  out.power_w.assign(p.n_channels(), 0.0);
  for (int c = 0; c < p.n_channels(); ++c) {
    double best = 0.0;  // assignment requires a strictly positive score
    for (int k = 0; k < p.n_members(); ++k) {
      for (int u = 0; u < p.members[k].n_users; ++u) {
        const double l = scores[p.idx(k, c, u)];
        if (l > best) {
          best = l;
          out.owner_member[c] = k;
          out.owner_user[c] = u;
          out.power_w[c] = powers[p.idx(k, c, u)];
        }
      }
    }
  }
}

void update_multipliers(Multipliers& mult, const Subgradients& g) {
  mult.iteration += 1;
  const double shrink = 1.0 / std::sqrt(static_cast<double>(mult.iteration));
  auto step = [&](std::vector<double>& lam, const std::vector<double>& d0,
                  const std::vector<double>& slack) {
    for (size_t i = 0; i < lam.size(); ++i)
      lam[i] = std::max(0.0, lam[i] - d0[i] * shrink * slack[i]);
  };
  step(mult.power, mult.d0_power, g.power_slack);
  step(mult.interference, mult.d0_interference, g.interference_slack);
  step(mult.exclusivity, mult.d0_exclusivity, g.exclusivity_slack);
}

namespace {

/// Repairs a candidate to exact feasibility by re-solving the power levels
/// inside the fixed assignment: per member, a capped water-filling over its
/// won channels (bisection on the budget multiplier). Channels whose water
/// level hits zero are released. Always at least as good as a proportional
/// rescale and exactly optimal for the assignment.
void repair(const AllocProblem& p, AllocationDecision& d) {
  for (int k = 0; k < p.n_members(); ++k) {
    const auto& mem = p.members[k];
    std::vector<int> chans;
    for (int c = 0; c < p.n_channels(); ++c)
      if (d.owner_member[c] == k) chans.push_back(c);
    if (chans.empty()) continue;

    std::vector<double> cap(chans.size()), qbw(chans.size()), cost(chans.size());
    for (size_t j = 0; j < chans.size(); ++j) {
      const int c = chans[j];
      const int i = p.idx(k, c, d.owner_user[c]);
      const double hb = p.cross_gain[p.cross_idx(k, c)];
      cap[j] = hb > 0.0 ? std::min(mem.p_max_w, p.icap_w[c] / hb) : mem.p_max_w;
      qbw[j] = mem.q_bits[d.owner_user[c]] * p.bw_hz[c];
      cost[j] = (p.i0_w[i] + p.noise_w[c]) / p.gain[i];
    }
    auto level = [&](double nu, size_t j) {
      if (nu - mem.eta <= 0.0) return cap[j];
      const double water = qbw[j] / (M_LN2 * (nu - mem.eta));
      return std::clamp(water - cost[j], 0.0, cap[j]);
    };
    auto total = [&](double nu) {
      double s = 0.0;
      for (size_t j = 0; j < chans.size(); ++j) s += level(nu, j);
      return s;
    };

    double nu = 0.0;
    if (total(0.0) > mem.p_max_w) {
      double lo = std::max(0.0, mem.eta);
      double hi = std::max(1.0, mem.eta);
      while (total(hi) > mem.p_max_w) hi = hi * 2.0 + 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) > mem.p_max_w ? lo : hi) = mid;
      }
      nu = hi;  // total(hi) <= p_max: feasible side
    }
    for (size_t j = 0; j < chans.size(); ++j) {
      const double s = level(nu, j);
      const int c = chans[j];
      if (s <= 0.0) {
        d.owner_member[c] = -1;
        d.owner_user[c] = -1;
        d.power_w[c] = 0.0;
      } else {
        d.power_w[c] = s;
      }
    }
  }
}

Multipliers init_multipliers(const AllocProblem& p, double step_scale) {
  Multipliers m;
  m.power.assign(p.n_members(), 0.0);
  m.interference.assign(p.n_channels(), 0.0);
  m.exclusivity.assign(p.n_channels(), 0.0);
  m.d0_power.assign(p.n_members(), 0.0);
  m.d0_interference.assign(p.n_channels(), 0.0);
  m.d0_exclusivity.assign(p.n_channels(), 0.0);

  // d0 normalization: a multiplier's working scale is the marginal utility
  // at its constraint boundary (the marginal at s=0 overshoots by the SNR,
  // and the literal 1/constraint choice stalls at radio magnitudes where the
  // marginals are ~1e12). One unit of relative violation then moves the
  // multiplier by about one optimal-multiplier.
  for (int k = 0; k < p.n_members(); ++k) {
    const auto& mem = p.members[k];
    for (int c = 0; c < p.n_channels(); ++c) {
      const double hb = p.cross_gain[p.cross_idx(k, c)];
      for (int u = 0; u < mem.n_users; ++u) {
        const int i = p.idx(k, c, u);
        const double carrier = p.i0_w[i] + p.noise_w[c];
        const double cost = carrier / p.gain[i];
        const double marginal_at_budget =
            mem.q_bits[u] * p.bw_hz[c] / (M_LN2 * (mem.p_max_w + cost));
        m.d0_power[k] = std::max(m.d0_power[k], marginal_at_budget / mem.p_max_w);
        if (hb > 0.0) {
          const double s_cap = std::min(mem.p_max_w, p.icap_w[c] / hb);
          const double marginal_at_cap =
              mem.q_bits[u] * p.bw_hz[c] / (M_LN2 * (s_cap + cost)) / hb;
          m.d0_interference[c] =
              std::max(m.d0_interference[c], marginal_at_cap / p.icap_w[c]);
        }
        const double rate_at_cap =
            mem.q_bits[u] * p.bw_hz[c] *
            std::log2(1.0 + mem.p_max_w * p.gain[i] / carrier);
        m.d0_exclusivity[c] = std::max(m.d0_exclusivity[c], rate_at_cap);
      }
    }
  }
  for (auto& v : m.d0_power) v *= step_scale;
  for (auto& v : m.d0_interference) v *= step_scale;
  for (auto& v : m.d0_exclusivity) v *= step_scale;
  return m;
}

}  // namespace

AllocationDecision solve(const AllocProblem& p, const AllocatorOptions& options) {
  const int nc = p.n_channels();
  AllocationDecision best = AllocationDecision::zeros(p);
  best.objective = exact_objective(p, best);
  if (nc == 0 || p.n_members() == 0) return best;

  Multipliers mult = init_multipliers(p, options.step_scale);
  std::vector<double> scores(p.tensor_size(), 0.0);
  std::vector<double> powers(p.tensor_size(), 0.0);
  AllocationDecision cand = AllocationDecision::zeros(p);

  Subgradients g;
  g.power_slack.assign(p.n_members(), 0.0);
  g.interference_slack.assign(nc, 0.0);
  g.exclusivity_slack.assign(nc, 0.0);
  std::vector<int> last_assignment_member, last_assignment_user;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    // Inner maximization: closed-form power and per-(member,channel) scores.
    for (int k = 0; k < p.n_members(); ++k) {
      const auto& mem = p.members[k];
      for (int c = 0; c < p.n_channels(); ++c) {
        const double hb = p.cross_gain[p.cross_idx(k, c)];
        const double omega_base = mult.power[k];
        const double theta = -mem.active_price_per_hz * p.bw_hz[c] * mem.w;
        for (int u = 0; u < mem.n_users; ++u) {
          const int i = p.idx(k, c, u);
          const double carrier = p.i0_w[i] + p.noise_w[c];
          const double omega = omega_base + mult.interference[c] * hb;
          const double s = power_closed_form(mem.q_bits[u], p.bw_hz[c], omega,
                                             mem.eta, carrier, p.gain[i], mem.p_max_w);
          powers[i] = s;
          scores[i] = mem.q_bits[u] * p.bw_hz[c] *
                          std::log2(1.0 + s * p.gain[i] / carrier) +
                      mem.eta * s + theta - mult.power[k] * s -
                      mult.interference[c] * s * hb - mult.exclusivity[c];
        }
      }
    }

    // Dual-side assignment: each (member, channel) independently takes its
    // best user when the score is positive. Exclusivity across members is
    // the exclusivity multiplier's job.
    double dual = 0.0;
    for (int k = 0; k < p.n_members(); ++k) g.power_slack[k] = p.members[k].p_max_w;
    for (int c = 0; c < nc; ++c) {
      g.interference_slack[c] = p.icap_w[c];
      g.exclusivity_slack[c] = 1.0;
    }
    for (int k = 0; k < p.n_members(); ++k) {
      for (int c = 0; c < nc; ++c) {
        double best_l = 0.0;
        int best_u = -1;
        for (int u = 0; u < p.members[k].n_users; ++u) {
          const double l = scores[p.idx(k, c, u)];
          if (l > best_l) {
            best_l = l;
            best_u = u;
          }
        }
        if (best_u >= 0) {
          const double s = powers[p.idx(k, c, best_u)];
          dual += best_l;
          g.power_slack[k] -= s;
          g.interference_slack[c] -= s * p.cross_gain[p.cross_idx(k, c)];
          g.exclusivity_slack[c] -= 1.0;
        }
      }
    }
    for (int k = 0; k < p.n_members(); ++k)
      dual += mult.power[k] * p.members[k].p_max_w;
    for (int c = 0; c < nc; ++c)
      dual += mult.interference[c] * p.icap_w[c] + mult.exclusivity[c];
    if (options.record_dual) best.dual_trace.push_back(dual);

    // Primal recovery: winner-take-all per channel, repaired to exact
    // feasibility; keep the best exact-objective iterate seen. The repair
    // depends only on the assignment, so unchanged assignments are skipped.
    assign_channels(p, scores, powers, cand);
    if (cand.owner_member != last_assignment_member ||
        cand.owner_user != last_assignment_user) {
      last_assignment_member = cand.owner_member;
      last_assignment_user = cand.owner_user;
      repair(p, cand);
      cand.objective = exact_objective(p, cand);
      if (cand.objective > best.objective) {
        const auto trace = std::move(best.dual_trace);
        best = cand;
        best.dual_trace = std::move(trace);
      }
    }
    best.iterations = iter;

    const Multipliers prev = mult;
    update_multipliers(mult, g);
    double delta = 0.0;
    auto track = [&](const std::vector<double>& a, const std::vector<double>& b) {
      for (size_t i = 0; i < a.size(); ++i)
        delta = std::max(delta, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    };
    track(mult.power, prev.power);
    track(mult.interference, prev.interference);
    track(mult.exclusivity, prev.exclusivity);
    if (delta < options.tolerance) break;
  }
  return best;
}

}  // namespace hetsim

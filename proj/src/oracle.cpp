#include "hetsim/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace hetsim {

namespace {

/// Candidate owners per channel: "unassigned" plus every (member, user).
struct OwnerChoice {
  int member = -1;
  int user = -1;
};

void enumerate_channel(const AllocProblem& p, const GridSpec& grid,
                       const std::vector<OwnerChoice>& owners, int c,
                       AllocationDecision& work, AllocationDecision& best) {
  if (c == p.n_channels()) {
    const auto feas = check_feasibility(p, work);
    if (!feas.within(1e-15)) return;
    const double obj = exact_objective(p, work);
    if (obj > best.objective) {
      best.owner_member = work.owner_member;
      best.owner_user = work.owner_user;
      best.power_w = work.power_w;
      best.objective = obj;
    }
    return;
  }
  for (const auto& choice : owners) {
    work.owner_member[c] = choice.member;
    work.owner_user[c] = choice.user;
    if (choice.member < 0) {
      work.power_w[c] = 0.0;
      enumerate_channel(p, grid, owners, c + 1, work, best);
      continue;
    }
    const double p_max = p.members[choice.member].p_max_w;
    for (int l = 0; l < grid.power_levels; ++l) {
      work.power_w[c] = p_max * l / (grid.power_levels - 1);
      enumerate_channel(p, grid, owners, c + 1, work, best);
    }
  }
  work.owner_member[c] = -1;
  work.owner_user[c] = -1;
  work.power_w[c] = 0.0;
}

}  // namespace

AllocationDecision brute_force_allocation(const AllocProblem& p, const GridSpec& grid) {
  if (grid.power_levels < 2)
    throw std::invalid_argument("brute_force_allocation: need >= 2 power levels");
  std::vector<OwnerChoice> owners;
  owners.push_back({});
  for (int k = 0; k < p.n_members(); ++k)
    for (int u = 0; u < p.members[k].n_users; ++u) owners.push_back({k, u});

  double total = 1.0;
  for (int c = 0; c < p.n_channels(); ++c) {
    total *= 1.0 + (owners.size() - 1) * grid.power_levels;
    if (total > static_cast<double>(grid.max_enum))
      throw std::length_error("brute_force_allocation: enumeration too large");
  }

  AllocationDecision best = AllocationDecision::zeros(p);
  best.objective = exact_objective(p, best);
  AllocationDecision work = AllocationDecision::zeros(p);
  enumerate_channel(p, grid, owners, 0, work, best);
  return best;
}

namespace {

void enumerate_matchings(const std::vector<std::vector<double>>& c,
                         std::vector<bool>& used, std::vector<std::pair<int, int>>& cur,
                         double acc, BruteMatching& best) {
  const int n = static_cast<int>(c.size());
  int i = 0;
  while (i < n && used[i]) ++i;
  if (i == n) {
    if (acc > best.total) {
      best.pairs = cur;
      best.total = acc;
    }
    return;
  }
  used[i] = true;
  for (int j = i + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = true;
    cur.push_back({i, j});
    enumerate_matchings(c, used, cur, acc + c[i][j] + c[j][i], best);
    cur.pop_back();
    used[j] = false;
  }
  used[i] = false;
}

}  // namespace

BruteMatching brute_force_matching(const std::vector<std::vector<double>>& benefits) {
  const int n = static_cast<int>(benefits.size());
  if (n > 8) throw std::length_error("brute_force_matching: N > 8");
  if (n % 2 != 0) throw std::invalid_argument("brute_force_matching: N must be even");
  for (const auto& row : benefits)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("brute_force_matching: matrix must be square");

  BruteMatching best;
  best.total = -1e300;
  std::vector<bool> used(n, false);
  std::vector<std::pair<int, int>> cur;
  enumerate_matchings(benefits, used, cur, 0.0, best);
  return best;
}

}  // namespace hetsim

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hetsim {

/// O(n^3) Hungarian algorithm (potentials form), minimizing total cost over
/// permutations. Returns sigma with row i assigned to column sigma[i].
inline std::vector<int> hungarian_min_assignment(
    const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("hungarian: matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);  // 1-based, match[col] = row
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> sigma(n, -1);
  for (int j = 1; j <= n; ++j) sigma[match[j] - 1] = j - 1;
  return sigma;
}

/// Maximizing variant.
inline std::vector<int> hungarian_max_assignment(
    const std::vector<std::vector<double>>& value) {
  std::vector<std::vector<double>> cost(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    cost[i].resize(value[i].size());
    for (size_t j = 0; j < value[i].size(); ++j) cost[i][j] = -value[i][j];
  }
  return hungarian_min_assignment(cost);
}

}  // namespace hetsim

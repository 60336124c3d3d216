#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetsim/controller.hpp"
#include "hetsim/hungarian.hpp"
#include "hetsim/oracle.hpp"
#include "hetsim/pairing.hpp"
#include "hetsim/rng.hpp"
#include "hetsim/stochastic.hpp"

using namespace hetsim;

namespace {

BenefitMatrix matrix_of(std::vector<std::vector<double>> c) {
  BenefitMatrix bm;
  bm.n_real = static_cast<int>(c.size());
  bm.has_virtual = false;
  bm.c_tilde = std::move(c);
  return bm;
}

std::vector<std::vector<double>> random_symmetric(int n, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 99, 1));
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c[i][j] = c[j][i] = rng.uniform(-1.0, 1.0);
  return c;
}

}  // namespace

TEST_CASE("hungarian solves small assignments exactly") {
  // brute-force over the 6 permutations of a 3x3
  const std::vector<std::vector<double>> v = {{3, 7, 1}, {4, 2, 9}, {8, 5, 6}};
  const auto sigma = hungarian_max_assignment(v);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += v[i][sigma[i]];
  CHECK(total == doctest::Approx(7 + 9 + 8));
}

TEST_CASE("two-SBS matrix has a single matching") {
  const PairMatching m = match_pairs(matrix_of({{0, 3}, {3, 0}}));
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0] == std::pair{0, 1});
  CHECK(m.total_benefit == doctest::Approx(6.0));  // ordered sum counts both entries
}

TEST_CASE("a dominant pair is selected and the rest paired") {
  auto c = random_symmetric(4, 3);
  c[1][2] = c[2][1] = 100.0;
  const PairMatching m = match_pairs(matrix_of(c));
  REQUIRE(m.pairs.size() == 2);
  bool found = false;
  for (auto& pr : m.pairs) found = found || pr == std::pair{1, 2};
  CHECK(found);
}

TEST_CASE("matching equals exhaustive enumeration on random symmetric matrices") {
  for (int n : {4, 6}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto c = random_symmetric(n, seed * 7 + n);
      const PairMatching m = match_pairs(matrix_of(c));
      const BruteMatching b = brute_force_matching(c);
      CHECK(m.total_benefit == doctest::Approx(b.total).epsilon(1e-12));
      // perfect matching: every index in exactly one pair
      std::vector<int> seen(n, 0);
      for (auto& [i, j] : m.pairs) {
        seen[i]++;
        seen[j]++;
      }
      for (int s : seen) CHECK(s == 1);
    }
  }
}

TEST_CASE("exact fallback handles assignment optima that are 3-cycles") {
  // two triangles of weight-1 edges: the assignment optimum is the pair of
  // 3-cycles (value 6) but the best perfect matching must leave one pair at
  // zero; greedy folding of the permutation would not be optimal here.
  std::vector<std::vector<double>> c(6, std::vector<double>(6, 0.0));
  auto link = [&](int a, int b) { c[a][b] = c[b][a] = 1.0; };
  link(0, 1);
  link(1, 2);
  link(0, 2);
  link(3, 4);
  link(4, 5);
  link(3, 5);
  const PairMatching m = match_pairs(matrix_of(c));
  const BruteMatching b = brute_force_matching(c);
  CHECK(m.total_benefit == doctest::Approx(b.total));
  CHECK(m.total_benefit == doctest::Approx(4.0));  // two linked pairs, one zero pair
}

TEST_CASE("matching total beats random perfect matchings") {
  const auto c = random_symmetric(6, 1234);
  const PairMatching best = match_pairs(matrix_of(c));
  Rng rng(mix_seed(77, 1, 2));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> idx = {0, 1, 2, 3, 4, 5};
    for (int i = 5; i > 0; --i)
      std::swap(idx[i], idx[static_cast<int>(rng.uniform() * (i + 1))]);
    double total = 0.0;
    for (int k = 0; k < 6; k += 2) total += c[idx[k]][idx[k + 1]] + c[idx[k + 1]][idx[k]];
    CHECK(best.total_benefit >= total - 1e-12);
  }
}

TEST_CASE("invalid matrices are rejected") {
  CHECK_THROWS_AS(match_pairs(matrix_of({{0, 1}, {1, 0}, {0, 0}})), std::invalid_argument);
  CHECK_THROWS_AS(match_pairs(matrix_of({{0, std::nan("")}, {1, 0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_force_matching(random_symmetric(10, 1)), std::length_error);
}

namespace {

struct NetFixture {
  Scenario sc;
  SlotState slot;
  QueueState queues;
  NetFixture(int n_sbs, std::vector<int> users, std::uint64_t seed) {
    sc = default_scenario();
    sc.network.n_sbs = n_sbs;
    sc.network.users_per_sbs = users;
    sc.network.n_subchannels = 2 * n_sbs;
    sc.network.subchannel_bandwidth_hz.assign(2 * n_sbs, 30e6 / (2 * n_sbs));
    sc.network.initial_band_hz.assign(n_sbs, 30e6 / n_sbs);
    sc.network.sbs_positions_m.clear();
    sc.network.sue_positions_m.clear();
    for (int n = 0; n < n_sbs; ++n) {
      const double ang = 2.0 * M_PI * n / n_sbs;
      sc.network.sbs_positions_m.push_back({250.0 * std::cos(ang), 250.0 * std::sin(ang)});
      std::vector<Vec2> sues;
      for (int u = 0; u < users[n]; ++u)
        sues.push_back({sc.network.sbs_positions_m[n].x + 30.0 + u,
                        sc.network.sbs_positions_m[n].y});
      sc.network.sue_positions_m.push_back(sues);
    }
    sc.economic.mu_max.clear();
    sc.economic.price_cap_per_hz.clear();
    sc.economic.c_min.clear();
    validate(sc);
    SlotSampler sampler(sc, seed);
    slot = sampler.state(0);
    queues = QueueState::zeros(sc.dims(), derive_perturbations(sc.energy, n_sbs));
    Rng rng(mix_seed(seed, 4, 4));
    for (auto& q : queues.q_bits) q = rng.uniform(10000.0, 50000.0);
    for (int n = 0; n < n_sbs; ++n) {
      queues.y[n] = rng.uniform(0.0, 30.0);
      queues.s_energy[n] = quantize_energy_floor(rng.uniform(350.0, 500.0));
    }
  }
};

}  // namespace

TEST_CASE("two-SBS benefit equals joint minus solo objectives") {
  NetFixture f(2, {2, 1}, 5);
  PairingOptions opts;
  opts.parallel = false;
  const BenefitMatrix bm = estimate_benefits(f.sc, f.slot, f.queues, opts);
  CHECK(bm.size() == 2);
  CHECK(!bm.has_virtual);
  CHECK(bm.c_tilde[0][0] == 0.0);
  CHECK(bm.c_tilde[0][1] == bm.c_tilde[1][0]);

  AllocatorOptions budget;
  budget.max_iterations = opts.benefit_iterations;
  const PairPrices pr =
      pricing(f.queues.w(0), f.queues.w(1), f.sc.q_max(0), f.sc.q_max(1));
  const double joint =
      solve(build_pair_problem(f.sc, f.slot, f.queues, 0, 1,
                               {{0, pr.alpha_i, pr.beta_i}, {1, pr.alpha_j, pr.beta_j}}),
            budget)
          .objective;
  const double solo0 =
      solve(build_solo_problem(f.sc, f.slot, f.queues, 0), budget).objective;
  const double solo1 =
      solve(build_solo_problem(f.sc, f.slot, f.queues, 1), budget).objective;
  CHECK(bm.c_tilde[0][1] == doctest::Approx(joint - solo0 - solo1));
}

TEST_CASE("identical SBSs give equal pair benefits") {
  NetFixture f(4, {2, 2, 2, 2}, 9);
  // replicate SBS 0's first-channel realization everywhere (flat across
  // channels too: each candidate pair pools a different channel subset)
  const NetDims dims = f.sc.dims();
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < dims.n_channels; ++m)
      for (int u = 0; u < 2; ++u) {
        f.slot.gain[dims.idx(n, m, u)] = f.slot.gain[dims.idx(0, 0, u)];
        f.slot.mbs_interference[dims.idx(n, m, u)] =
            f.slot.mbs_interference[dims.idx(0, 0, u)];
      }
    for (int m = 0; m < dims.n_channels; ++m)
      f.slot.cross_gain_to_mue[n * dims.n_channels + m] = f.slot.cross_gain_to_mue[0];
    for (int u = 0; u < 2; ++u)
      f.queues.q_bits[dims.sue(n, u)] = f.queues.q_bits[dims.sue(0, u)];
    f.queues.y[n] = f.queues.y[0];
    f.queues.z[n] = f.queues.z[0];
    f.queues.s_energy[n] = f.queues.s_energy[0];
  }
  PairingOptions opts;
  opts.parallel = false;
  const BenefitMatrix bm = estimate_benefits(f.sc, f.slot, f.queues, opts);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK(bm.c_tilde[i][j] == doctest::Approx(bm.c_tilde[0][1]).epsilon(1e-9));
}

TEST_CASE("benefit entries match an independent recomputation") {
  NetFixture f(4, {3, 1, 2, 1}, 21);
  PairingOptions opts;
  opts.parallel = false;
  const BenefitMatrix bm = estimate_benefits(f.sc, f.slot, f.queues, opts);

  AllocatorOptions budget;
  budget.max_iterations = opts.benefit_iterations;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const PairPrices pr =
          pricing(f.queues.w(i), f.queues.w(j), f.sc.q_max(i), f.sc.q_max(j));
      const double joint =
          solve(build_pair_problem(f.sc, f.slot, f.queues, i, j,
                                   {{i, pr.alpha_i, pr.beta_i}, {j, pr.alpha_j, pr.beta_j}}),
                budget)
              .objective;
      const double solo_i =
          solve(build_solo_problem(f.sc, f.slot, f.queues, i), budget).objective;
      const double solo_j =
          solve(build_solo_problem(f.sc, f.slot, f.queues, j), budget).objective;
      CHECK(bm.c_tilde[i][j] == doctest::Approx(joint - solo_i - solo_j));
    }
  }
}

TEST_CASE("odd populations get a virtual column and parallel fill matches serial") {
  NetFixture f(3, {2, 1, 1}, 31);
  PairingOptions serial;
  serial.parallel = false;
  PairingOptions parallel;
  parallel.parallel = true;
  const BenefitMatrix a = estimate_benefits(f.sc, f.slot, f.queues, serial);
  const BenefitMatrix b = estimate_benefits(f.sc, f.slot, f.queues, parallel);
  CHECK(a.has_virtual);
  CHECK(a.size() == 4);
  CHECK(a.virtual_index() == 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(a.c_tilde[i][j] == b.c_tilde[i][j]);

  const PairMatching m = match_pairs(a);
  CHECK(m.pairs.size() == 2);
}

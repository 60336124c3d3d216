#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hetsim/baselines.hpp"
#include "hetsim/stochastic.hpp"

using namespace hetsim;

TEST_CASE("policy names round-trip") {
  for (PolicyKind p : {PolicyKind::proposed, PolicyKind::nsra, PolicyKind::tdraa})
    CHECK(parse_policy(policy_name(p)) == p);
  CHECK_THROWS_AS(parse_policy("greedy"), std::invalid_argument);
}

TEST_CASE("nsra never trades and never leaves its initial band") {
  const Scenario sc = default_scenario();
  const NetDims dims = sc.dims();
  SlotSampler sampler(sc, 21);
  QueueState q = QueueState::zeros(dims, derive_perturbations(sc.energy, dims.n_sbs));
  for (int t = 0; t < 200; ++t) {
    const SlotState slot = sampler.state(t);
    const SlotResult r = nsra_slot(sc, slot, q, t);
    for (int n = 0; n < dims.n_sbs; ++n) {
      CHECK(r.control.payment[n] == 0.0);
      CHECK(r.control.alpha[n] == 0.0);
      CHECK(r.control.beta[n] == 0.0);
      CHECK(r.alloc.band_hz[n] <= sc.network.initial_band_hz[n] + 1e-9);
    }
    // no assignment outside the owner's band
    for (int n = 0; n < dims.n_sbs; ++n)
      for (int m = 0; m < dims.n_channels; ++m)
        for (int u = 0; u < dims.users[n]; ++u)
          if (r.alloc.x[dims.idx(n, m, u)]) CHECK(sc.owns_channel(n, m));
  }
}

TEST_CASE("single-SBS network: nsra coincides with the proposed policy") {
  Scenario sc = default_scenario();
  sc.network.n_sbs = 1;
  sc.network.users_per_sbs = {4};
  sc.network.initial_band_hz = {30e6};
  sc.network.sbs_positions_m = {{0.0, 250.0}};
  sc.network.sue_positions_m = {
      {{30.0, 250.0}, {-30.0, 250.0}, {0.0, 280.0}, {0.0, 220.0}}};
  sc.economic.mu_max.clear();
  sc.economic.price_cap_per_hz.clear();
  sc.economic.c_min.clear();
  validate(sc);
  const NetDims dims = sc.dims();

  SlotSampler sampler(sc, 33);
  QueueState qa = QueueState::zeros(dims, derive_perturbations(sc.energy, 1));
  QueueState qb = QueueState::zeros(dims, derive_perturbations(sc.energy, 1));
  Controller proposed(sc, PolicyKind::proposed, 10.0);
  Controller nsra(sc, PolicyKind::nsra, 10.0);
  for (int t = 0; t < 100; ++t) {
    const SlotState slot = sampler.state(t);
    const SlotResult ra = proposed.run_slot(slot, qa, t);
    const SlotResult rb = nsra.run_slot(slot, qb, t);
    CHECK(ra.alloc.p_w == rb.alloc.p_w);
    CHECK(ra.control.admitted_bits == rb.control.admitted_bits);
    CHECK(qa.q_bits == qb.q_bits);
  }
}

TEST_CASE("tdraa rotates the whole band and idles the others") {
  const Scenario sc = default_scenario();
  const NetDims dims = sc.dims();
  SlotSampler sampler(sc, 44);
  QueueState q = QueueState::zeros(dims, derive_perturbations(sc.energy, dims.n_sbs));
  for (int t = 0; t < 60; ++t) {
    const SlotState slot = sampler.state(t);
    const SlotResult r = tdraa_slot(sc, slot, q, t);
    const int active = t % dims.n_sbs;  // t=4, N=3 -> index 1 (1-indexed SBS 2)
    for (int n = 0; n < dims.n_sbs; ++n) {
      CHECK(r.control.payment[n] == 0.0);
      if (n != active) {
        CHECK(r.alloc.transmit_w[n] == 0.0);
        // static power still drawn
        CHECK(r.alloc.p_draw_w[n] == quantize_energy_ceil(sc.radio.static_power_w));
      }
    }
  }
}

TEST_CASE("all policies satisfy the shared feasibility constraints") {
  const Scenario sc = default_scenario();
  const NetDims dims = sc.dims();
  for (PolicyKind p : {PolicyKind::proposed, PolicyKind::nsra, PolicyKind::tdraa}) {
    SlotSampler sampler(sc, 55);
    QueueState q = QueueState::zeros(dims, derive_perturbations(sc.energy, dims.n_sbs));
    Controller ctl(sc, p, 10.0);
    for (int t = 0; t < 150; ++t) {
      const SlotState slot = sampler.state(t);
      const SlotResult r = ctl.run_slot(slot, q, t);
      CHECK(r.metrics.max_power_residual <= 1e-9);
      CHECK(r.metrics.max_interference_residual <= 1e-9);
      for (int m = 0; m < dims.n_channels; ++m) {
        int owners = 0;
        for (int n = 0; n < dims.n_sbs; ++n)
          for (int u = 0; u < dims.users[n]; ++u) owners += r.alloc.x[dims.idx(n, m, u)];
        CHECK(owners <= 1);
      }
    }
  }
}

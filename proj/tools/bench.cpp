// Benchmark: serial reference vs OpenMP-parallel paths for the two
// data-parallel kernels (benefit-matrix fill, multi-run batches). Also
// verifies the parallel results are bit-identical to the serial ones.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hetsim/engine.hpp"
#include "hetsim/pairing.hpp"
#include "hetsim/stochastic.hpp"

using namespace hetsim;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 50;
  Scenario sc = default_scenario();
  const NetDims dims = sc.dims();

#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: not available (serial build)\n");
#endif

  // Kernel 1: benefit-matrix fill over one slot's state.
  {
    SlotSampler sampler(sc, 7);
    const SlotState slot = sampler.state(3);
    QueueState q = QueueState::zeros(dims, derive_perturbations(sc.energy, dims.n_sbs));
    for (int i = 0; i < dims.total_sues; ++i) q.q_bits[i] = 20000.0 + 1000.0 * i;
    for (int n = 0; n < dims.n_sbs; ++n) {
      q.y[n] = 5.0 + n;
      q.s_energy[n] = quantize_energy_floor(430.0 + n);
    }

    PairingOptions serial, parallel;
    serial.parallel = false;
    parallel.parallel = true;

    auto t0 = Clock::now();
    BenefitMatrix a;
    for (int r = 0; r < reps; ++r) a = estimate_benefits(sc, slot, q, serial);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    BenefitMatrix b;
    for (int r = 0; r < reps; ++r) b = estimate_benefits(sc, slot, q, parallel);
    const double tp = seconds_since(t0);

    bool identical = a.size() == b.size();
    for (int i = 0; identical && i < a.size(); ++i)
      identical = std::memcmp(a.c_tilde[i].data(), b.c_tilde[i].data(),
                              a.c_tilde[i].size() * sizeof(double)) == 0;
    std::printf("benefit matrix : serial %8.2f ms/call, parallel %8.2f ms/call, "
                "speedup %.2fx, bit-identical %s\n",
                1e3 * ts / reps, 1e3 * tp / reps, ts / tp, identical ? "yes" : "NO");
  }

  // Kernel 2: a batch of independent seeded runs.
  {
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4};
    const std::int64_t slots = 200;

    auto t0 = Clock::now();
    SweepOptions serial;
    serial.jobs = 1;
    const auto a = sweep_v(sc, {10.0}, {PolicyKind::proposed}, seeds, slots, serial);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    SweepOptions parallel;
    parallel.jobs = 8;
    const auto b = sweep_v(sc, {10.0}, {PolicyKind::proposed}, seeds, slots, parallel);
    const double tp = seconds_since(t0);

    bool identical = a.size() == b.size();
    for (size_t i = 0; identical && i < a.size(); ++i)
      identical = a[i].avg_backlog_bits == b[i].avg_backlog_bits &&
                  a[i].total_profit == b[i].total_profit && a[i].f_bar == b[i].f_bar;
    std::printf("run batch (x%zu): serial %8.2f ms/run,  parallel %8.2f ms/run,  "
                "speedup %.2fx, bit-identical %s\n",
                seeds.size(), 1e3 * ts / seeds.size(), 1e3 * tp / seeds.size(), ts / tp,
                identical ? "yes" : "NO");
  }
  return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetsim/channel.hpp"

using namespace hetsim;

TEST_CASE("sinr arithmetic") {
  // p*h = 1e-10, i0 + noise = 2e-13 -> 500
  CHECK(sinr(1e-2, 1e-8, 1e-13, 1e-13) == doctest::Approx(500.0));
  CHECK(sinr(0.0, 1e-8, 1e-13, 1e-13) == doctest::Approx(0.0));
  CHECK_THROWS_AS(sinr(1e-2, 1e-8, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(sinr(1e-2, 1e-8, 1e-13, -1e-13), std::domain_error);
}

TEST_CASE("sinr decreases monotonically in the interference") {
  double prev = 1e300;
  for (double i0 = 1e-14; i0 < 1e-6; i0 *= 10.0) {
    const double g = sinr(0.05, 1e-9, i0, 1e-14);
    CHECK(g < prev);
    prev = g;
  }
  CHECK(sinr(0.05, 1e-9, 1e6, 1e-14) < 1e-12);  // gamma -> 0
}

TEST_CASE("subchannel rate") {
  CHECK(subchannel_rate(1e6, 1.0) == doctest::Approx(1e6));
  CHECK(subchannel_rate(1e6, 0.0) == doctest::Approx(0.0));
  CHECK(subchannel_rate(1e6, 500.0) == doctest::Approx(1e6 * std::log2(501.0)));
  CHECK(subchannel_rate(1e6, 500.0) == doctest::Approx(8.9687e6).epsilon(1e-4));
}

TEST_CASE("rate is increasing in power and gain and concave in power") {
  const double bw = 5e6, h = 1e-9, carrier = 1e-12;
  double prev = -1.0;
  for (double p = 0.0; p <= 0.1; p += 0.01) {
    const double r = subchannel_rate(bw, sinr(p, h, carrier / 2, carrier / 2));
    CHECK(r >= prev);
    prev = r;
  }
  // concavity by second differences
  for (double p = 0.01; p < 0.09; p += 0.01) {
    const double r0 = subchannel_rate(bw, sinr(p - 0.01, h, carrier / 2, carrier / 2));
    const double r1 = subchannel_rate(bw, sinr(p, h, carrier / 2, carrier / 2));
    const double r2 = subchannel_rate(bw, sinr(p + 0.01, h, carrier / 2, carrier / 2));
    CHECK(r2 - r1 <= r1 - r0 + 1e-9);
  }
  CHECK(subchannel_rate(bw, sinr(0.05, 2 * h, carrier / 2, carrier / 2)) >
        subchannel_rate(bw, sinr(0.05, h, carrier / 2, carrier / 2)));
}

namespace {

struct Fixture {
  Scenario sc = default_scenario();
  NetDims dims = sc.dims();
  SlotState slot;
  Fixture() {
    SlotSampler sampler(sc, 3);
    slot = sampler.state(0);
  }
};

}  // namespace

TEST_CASE("sue throughput sums assigned subchannels") {
  Fixture f;
  std::vector<char> x(f.dims.tensor_size, 0);
  std::vector<double> p(f.dims.tensor_size, 0.0);

  SUBCASE("no assignment, no throughput") {
    const RateTable rates = build_rate_table(f.slot, f.dims, x, p, f.sc);
    CHECK(sue_throughput(x, rates, 0, 0) == doctest::Approx(0.0));
  }
  SUBCASE("one channel equals its rate, two channels add") {
    x[f.dims.idx(0, 0, 0)] = 1;
    p[f.dims.idx(0, 0, 0)] = 0.05;
    RateTable rates = build_rate_table(f.slot, f.dims, x, p, f.sc);
    const double one = sue_throughput(x, rates, 0, 0);
    CHECK(one == doctest::Approx(rates.rate_bits[f.dims.idx(0, 0, 0)]));
    x[f.dims.idx(0, 1, 0)] = 1;
    p[f.dims.idx(0, 1, 0)] = 0.05;
    rates = build_rate_table(f.slot, f.dims, x, p, f.sc);
    CHECK(sue_throughput(x, rates, 0, 0) ==
          doctest::Approx(rates.rate_bits[f.dims.idx(0, 0, 0)] +
                          rates.rate_bits[f.dims.idx(0, 1, 0)]));
  }
  SUBCASE("double-booked subchannel is rejected") {
    x[f.dims.idx(0, 0, 0)] = 1;
    x[f.dims.idx(0, 0, 1)] = 1;
    const RateTable rates = build_rate_table(f.slot, f.dims, x, p, f.sc);
    CHECK_THROWS_AS(sue_throughput(x, rates, 0, 0), std::invalid_argument);
  }
}

TEST_CASE("power consumption is affine in transmit power") {
  Fixture f;
  std::vector<char> x(f.dims.tensor_size, 0);
  std::vector<double> p(f.dims.tensor_size, 0.0);
  CHECK(power_consumption(x, p, f.dims, 0, f.sc.radio).p_total_w == doctest::Approx(3.2));

  x[f.dims.idx(0, 0, 0)] = 1;
  p[f.dims.idx(0, 0, 0)] = 0.05;
  CHECK(power_consumption(x, p, f.dims, 0, f.sc.radio).p_total_w == doctest::Approx(3.4));

  x[f.dims.idx(0, 1, 1)] = 1;
  p[f.dims.idx(0, 1, 1)] = 0.05;
  const PowerDraw d = power_consumption(x, p, f.dims, 0, f.sc.radio);
  CHECK(d.p_total_w == doctest::Approx(3.6));
  CHECK(d.transmit_sum_w == doctest::Approx(0.1));
  CHECK(d.p_total_w <= f.sc.p_peak_w() + 1e-12);

  p[f.dims.idx(0, 1, 1)] = 0.2;  // over budget
  CHECK_THROWS_AS(power_consumption(x, p, f.dims, 0, f.sc.radio), std::invalid_argument);
}

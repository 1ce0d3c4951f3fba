#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dnf/errors.hpp"
#include "dnf/field.hpp"
#include "oracles.hpp"

using namespace dnf;

TEST_CASE("sigmoid gate values") {
  CHECK(sigmoid_gate(0.0, 4.0) == 0.5);
  // mpmath, 30 digits
  CHECK(sigmoid_gate(1.0, 4.0) == doctest::Approx(0.982013790037908442).epsilon(1e-13));
  CHECK(sigmoid_gate(-1.0, 4.0) == doctest::Approx(0.017986209962091558).epsilon(1e-13));
}

TEST_CASE("sigmoid gate saturates without overflow") {
  for (double u : {-1e300, -1e6, -500.0, 500.0, 1e6, 1e300}) {
    const double g = sigmoid_gate(u, 4.0);
    CHECK(std::isfinite(g));
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
  }
  CHECK(sigmoid_gate(1e6, 4.0) == 1.0);
  CHECK(sigmoid_gate(-1e6, 4.0) == 0.0);
}

TEST_CASE("sigmoid gate: bounds, symmetry, monotonicity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const double u = dist(rng);
    const double g = sigmoid_gate(u, 4.0);
    CHECK(g > 0.0);
    CHECK(g < 1.0);
    CHECK(std::abs(g + sigmoid_gate(-u, 4.0) - 1.0) <= 1e-12);
    CHECK(sigmoid_gate(u + 1e-3, 4.0) >= g);
  }
}

TEST_CASE("kernel values against high-precision evaluation") {
  const FieldParams p;
  CHECK(kernel_value(0.0, p) == doctest::Approx(0.13724992904372496).epsilon(1e-12));
  CHECK(kernel_value(5.0, p) == doctest::Approx(-0.32139588256389927).epsilon(1e-12));
  CHECK(kernel_value(30.0, p) == doctest::Approx(-0.90895779389028861).epsilon(1e-12));
  CHECK(kernel_value(1e6, p) == -0.9);
}

TEST_CASE("kernel is even") {
  const FieldParams p;
  for (double d = 0.0; d < 250.0; d += 0.37) CHECK(kernel_value(d, p) == kernel_value(-d, p));
}

TEST_CASE("kernel table") {
  const FieldParams p;
  const KernelTable k = build_kernel(p);
  REQUIRE(k.weights().size() == 2 * 200 - 1);
  CHECK(k.weight(0) == doctest::Approx(0.13724992904372496).epsilon(1e-12));
  for (int d = 0; d < p.field_size; ++d) {
    CHECK(k.weight(d) == k.weight(-d));
    CHECK(k.weight(d) == kernel_value(d, p));
  }
  CHECK(k.weight(5) == k.weight(-5));

  FieldParams flat = p;
  flat.c_exc = flat.c_inh = 0.0;
  const KernelTable kf = build_kernel(flat);
  for (double w : kf.weights()) CHECK(w == -0.9);
}

TEST_CASE("lateral input on the resting field is negligible") {
  const FieldParams p;
  const KernelTable k = build_kernel(p);
  const FieldState s{std::vector<double>(200, -5.0), 0};
  const auto out = lateral_input(s, k, p.beta);
  REQUIRE(out.size() == 200);
  for (double v : out) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("lateral input from one active neuron is its kernel row") {
  const FieldParams p;
  const KernelTable k = build_kernel(p);
  FieldState s{std::vector<double>(200, -20.0), 0};
  s.u[120] = 10.0;
  const auto out = lateral_input(s, k, p.beta);
  for (int x = 0; x < 200; ++x) CHECK(out[x] == doctest::Approx(kernel_value(x - 120, p)).epsilon(1e-12));
}

TEST_CASE("lateral input matches the naive double loop") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  const FieldParams p;
  const KernelTable k = build_kernel(p);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    FieldState s{std::vector<double>(200), 0};
    for (double& v : s.u) v = dist(rng);
    const auto fast = lateral_input(s, k, p.beta);
    const auto naive = oracle::naive_lateral_input(s.u, p);
    for (std::size_t i = 0; i < fast.size(); ++i) worst = std::max(worst, std::abs(fast[i] - naive[i]));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("lateral input rejects a size mismatch") {
  const FieldParams p;
  const KernelTable k = build_kernel(p);
  const FieldState s{std::vector<double>(150, -5.0), 0};
  CHECK_THROWS_AS(lateral_input(s, k, p.beta), ConfigError);
}

TEST_CASE("field step: resting level is a fixed point") {
  FieldParams p;
  p.q = 0.0;
  const KernelTable k = build_kernel(p);
  const FieldState s{std::vector<double>(200, p.h), 0};
  const std::vector<double> zeros(200, 0.0);
  const auto next = field_step(s, zeros, k, p, zeros);
  CHECK(next.step == 1);
  for (std::size_t i = 0; i < 200; ++i) CHECK(std::abs(next.u[i] - s.u[i]) < 1e-6);
}

TEST_CASE("field step from u = 0 matches the hand oracle") {
  FieldParams p;
  p.q = 0.0;
  const KernelTable k = build_kernel(p);
  const FieldState s{std::vector<double>(200, 0.0), 0};
  const std::vector<double> zeros(200, 0.0);
  const auto next = field_step(s, zeros, k, p, zeros);
  // mpmath: (h + 0.5 * sum_x' k(x - x')) / tau
  CHECK(next.u[100] == doctest::Approx(-4.5).epsilon(1e-12));
  CHECK(next.u[0] == doctest::Approx(-4.61203437588695344).epsilon(1e-12));
  CHECK(next.u[199] == doctest::Approx(-4.61203437588695344).epsilon(1e-12));

  const auto expected = oracle::naive_step(s.u, zeros, zeros, p);
  for (std::size_t i = 0; i < 200; ++i) CHECK(next.u[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("field step with noise matches the naive step") {
  FieldParams p;
  const KernelTable k = build_kernel(p);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01;
  FieldState s{std::vector<double>(200), 0};
  std::vector<double> inputs(200), noise(200);
  for (int i = 0; i < 200; ++i) {
    s.u[i] = 3.0 * n01(rng) - 2.0;
    inputs[i] = n01(rng);
    noise[i] = n01(rng);
  }
  const auto next = field_step(s, inputs, k, p, noise);
  const auto expected = oracle::naive_step(s.u, inputs, noise, p);
  for (std::size_t i = 0; i < 200; ++i) CHECK(std::abs(next.u[i] - expected[i]) <= 1e-11);
}

TEST_CASE("field step reports divergence") {
  FieldParams p;
  p.q = 0.0;
  const KernelTable k = build_kernel(p);
  const FieldState s{std::vector<double>(200, -1e308), 0};
  const std::vector<double> inputs(200, 1e308), zeros(200, 0.0);
  CHECK_THROWS_AS(field_step(s, inputs, k, p, zeros), IntegrationDiverged);
  try {
    field_step(s, inputs, k, p, zeros);
  } catch (const IntegrationDiverged& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("sub-threshold fields relax monotonically to rest") {
  FieldParams p;
  p.q = 0.0;
  const KernelTable k = build_kernel(p);
  const std::vector<double> zeros(200, 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-12.0, -2.0);
  for (int trial = 0; trial < 20; ++trial) {
    FieldState s{std::vector<double>(200), 0};
    for (double& v : s.u) v = dist(rng);
    auto dist_to_rest = [&](const FieldState& st) {
      double m = 0.0;
      for (double v : st.u) m = std::max(m, std::abs(v - p.h));
      return m;
    };
    double prev = dist_to_rest(s);
    for (int t = 0; t < 120; ++t) {
      s = field_step(s, zeros, k, p, zeros);
      const double d = dist_to_rest(s);
      CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("evolve without input or noise stays at rest") {
  FieldParams p;
  p.q = 0.0;
  NoiseSource noise(1);
  const auto start = initial_state(p, noise);
  const std::vector<double> zeros(200, 0.0);
  const auto traj = evolve(start, zeros, p, noise);
  REQUIRE(traj.states.size() == 121);
  CHECK(traj.states.back().step == 120);
  CHECK(traj.summary.size() == 121);
  CHECK_FALSE(traj.first_crossing.has_value());
  for (double v : traj.final_state.u) CHECK(std::abs(v - p.h) < 1e-6);
}

TEST_CASE("evolve is deterministic and lean mode agrees with full mode") {
  const FieldParams p;
  std::vector<double> inputs(200);
  for (int x = 0; x < 200; ++x) inputs[x] = 6.0 * std::exp(-(x - 70.0) * (x - 70.0) / 1800.0);

  NoiseSource n1(42), n2(42), n3(42);
  const auto a = evolve(initial_state(p, n1), inputs, p, n1, Recording::full);
  const auto b = evolve(initial_state(p, n2), inputs, p, n2, Recording::full);
  const auto lean = evolve(initial_state(p, n3), inputs, p, n3, Recording::lean);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t t = 0; t < a.states.size(); ++t) CHECK(a.states[t].u == b.states[t].u);
  CHECK(lean.states.empty());
  CHECK(lean.final_state.u == a.final_state.u);
  CHECK(lean.summary.size() == a.summary.size());
  CHECK(lean.first_crossing == a.first_crossing);
  CHECK(lean.seed == 42);
  for (const auto& s : a.states)
    for (double v : s.u) CHECK(std::isfinite(v));
}

TEST_CASE("evolve rejects a started state") {
  const FieldParams p;
  NoiseSource noise(1);
  auto start = initial_state(p, noise);
  start.step = 3;
  const std::vector<double> zeros(200, 0.0);
  CHECK_THROWS_AS(evolve(start, zeros, p, noise), InvalidInput);
}

TEST_CASE("initial condition options") {
  FieldParams p;
  NoiseSource noise(3);
  auto s = initial_state(p, noise);
  CHECK(s.step == 0);
  for (double v : s.u) CHECK(v == p.h);

  p.initial_level = -3.0;
  p.initial_noise = 0.5;
  NoiseSource noise2(3);
  s = initial_state(p, noise2);
  double mean = 0.0;
  for (double v : s.u) mean += v / s.u.size();
  CHECK(mean == doctest::Approx(-3.0).epsilon(0.05));
  CHECK(std::any_of(s.u.begin(), s.u.end(), [](double v) { return v != -3.0; }));
}

TEST_CASE("smoothed noise keeps unit variance and gains spatial correlation") {
  NoiseSource noise(11, 3.0);
  std::vector<double> xi(200);
  double sum = 0, sum2 = 0, lag1 = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    noise.fill(xi);
    for (int i = 0; i < 200; ++i) {
      sum += xi[i];
      sum2 += xi[i] * xi[i];
      if (i > 0) lag1 += xi[i] * xi[i - 1];
    }
  }
  const double n = 200.0 * reps;
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(lag1 / (199.0 * reps) > 0.8);  // exp(-1/(4 sigma^2)) = 0.973 for sigma 3
}

TEST_CASE("parameter validation names the key") {
  FieldParams p;
  p.tau = 0.0;
  try {
    p.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "tau");
  }
  p = FieldParams{};
  p.field_size = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = FieldParams{};
  p.dt = -1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_NOTHROW(FieldParams{}.validate());
}

TEST_CASE("regime warnings are advisory") {
  CHECK(regime_warnings(FieldParams{}).empty());
  FieldParams p;
  p.c_glob = 7.0;
  p.sigma_exc = 20.0;
  CHECK(regime_warnings(p).size() == 2);
  CHECK_NOTHROW(p.validate());
}

#include "dnf/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dnf/errors.hpp"

namespace dnf {

namespace {

// Bound on the summed magnitude of local kernel weights dropped from the
// fast convolution. Gate values are at most 1, so this bounds the error.
constexpr double kTailBound = 1e-13;

double normal_bump(double d, double sigma) {
  return std::exp(-d * d / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double local_kernel(double d, const FieldParams& p) {
  return p.c_exc * normal_bump(d, p.sigma_exc) - p.c_inh * normal_bump(d, p.sigma_inh);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require(bool ok, const char* key, const std::string& msg) {
  if (!ok) throw ConfigError(key, std::string(key) + ": " + msg);
}

}  // namespace

void FieldParams::validate() const {
  require(std::isfinite(tau) && tau > 0, "tau", "must be > 0");
  require(std::isfinite(h), "h", "must be finite");
  require(std::isfinite(beta) && beta > 0, "beta", "must be > 0");
  require(std::isfinite(c_exc) && c_exc >= 0, "c_exc", "must be >= 0");
  require(std::isfinite(c_inh) && c_inh >= 0, "c_inh", "must be >= 0");
  require(std::isfinite(c_glob) && c_glob >= 0, "c_glob", "must be >= 0");
  require(std::isfinite(sigma_exc) && sigma_exc > 0, "sigma_exc", "must be > 0");
  require(std::isfinite(sigma_inh) && sigma_inh > 0, "sigma_inh", "must be > 0");
  require(std::isfinite(q) && q >= 0, "q", "must be >= 0");
  require(field_size >= 2, "field_size", "must be >= 2");
  require(std::isfinite(dt) && dt > 0, "dt", "must be > 0");
  require(n_steps >= 1, "n_steps", "must be >= 1");
  require(!initial_level || std::isfinite(*initial_level), "initial_level", "must be finite");
  require(std::isfinite(initial_noise) && initial_noise >= 0, "initial_noise", "must be >= 0");
  require(std::isfinite(noise_smoothing) && noise_smoothing >= 0, "noise_smoothing",
          "must be >= 0");
}

std::vector<std::string> regime_warnings(const FieldParams& p) {
  std::vector<std::string> out;
  if (!(p.sigma_exc < p.sigma_inh))
    out.emplace_back("sigma_exc >= sigma_inh: interaction is not locally excitatory");
  if (!(p.c_exc > p.c_inh && p.c_inh > p.c_glob))
    out.emplace_back("c_exc > c_inh > c_glob does not hold: selection dynamics not guaranteed");
  return out;
}

double sigmoid_gate(double u_val, double beta) noexcept {
  const double z = beta * u_val;
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double kernel_value(double d, const FieldParams& params) noexcept {
  return local_kernel(std::abs(d), params) - params.c_glob;
}

KernelTable::KernelTable(const FieldParams& params)
    : field_size_(params.field_size), c_glob_(params.c_glob), radius_(0) {
  const int n = field_size_;
  local_.resize(static_cast<std::size_t>(2 * n - 1));
  weights_.resize(static_cast<std::size_t>(2 * n - 1));
  for (int d = -(n - 1); d <= n - 1; ++d) {
    local_[static_cast<std::size_t>(d + n - 1)] = local_kernel(std::abs(d), params);
    weights_[static_cast<std::size_t>(d + n - 1)] = kernel_value(d, params);
  }

  radius_ = n - 1;
  double tail = 0.0;
  while (radius_ > 0) {
    const double w = std::abs(local_weight(radius_));
    if (tail + 2 * w > kTailBound) break;
    tail += 2 * w;
    --radius_;
  }
}

KernelTable build_kernel(const FieldParams& params) { return KernelTable(params); }

std::vector<double> lateral_input(const FieldState& state, const KernelTable& kernel,
                                  double beta) {
  const int n = kernel.field_size();
  if (static_cast<int>(state.u.size()) != n)
    throw ConfigError("field_size", "field_size: state has " + std::to_string(state.u.size()) +
                                        " neurons, kernel expects " + std::to_string(n));

  std::vector<double> gate(state.u.size());
  double total = 0.0;
  for (std::size_t i = 0; i < gate.size(); ++i) {
    gate[i] = sigmoid_gate(state.u[i], beta);
    total += gate[i];
  }

  // Global inhibition is separable; only the local part needs a convolution,
  // and only over its support.
  const int r = kernel.local_radius();
  const double global = kernel.global_inhibition() * total;
  const double* local = kernel.local_weights().data();
  const double* g = gate.data();
  std::vector<double> out(gate.size());
  for (int x = 0; x < n; ++x) {
    const int lo = std::max(0, x - r);
    const int hi = std::min(n - 1, x + r);
    // The kernel is even, so row x is contiguous in xp: k(xp - x).
    const double* row = local + (n - 1 - x);
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    int xp = lo;
    for (; xp + 3 <= hi; xp += 4) {
      acc[0] += row[xp] * g[xp];
      acc[1] += row[xp + 1] * g[xp + 1];
      acc[2] += row[xp + 2] * g[xp + 2];
      acc[3] += row[xp + 3] * g[xp + 3];
    }
    for (; xp <= hi; ++xp) acc[0] += row[xp] * g[xp];
    out[static_cast<std::size_t>(x)] = (acc[0] + acc[1]) + (acc[2] + acc[3]) - global;
  }
  return out;
}

FieldState field_step(const FieldState& state, std::span<const double> inputs,
                      const KernelTable& kernel, const FieldParams& params,
                      std::span<const double> noise) {
  const std::size_t n = state.u.size();
  if (inputs.size() != n || noise.size() != n)
    throw ConfigError("field_size", "field_size: inputs/noise length does not match the field");

  const std::vector<double> lateral = lateral_input(state, kernel, params.beta);
  const double rate = params.dt / params.tau;

  FieldState next{std::vector<double>(n), state.step + 1};
  for (std::size_t i = 0; i < n; ++i) {
    const double drive = -state.u[i] + params.h + inputs[i] + lateral[i] + params.q * noise[i];
    next.u[i] = state.u[i] + rate * drive;
  }
  if (!all_finite(next.u)) throw IntegrationDiverged(next.step, 0);
  return next;
}

NoiseSource::NoiseSource(std::uint64_t seed, double smoothing) : seed_(seed), engine_(seed) {
  if (smoothing > 0) {
    const int r = static_cast<int>(std::ceil(3.0 * smoothing));
    double norm = 0.0;
    for (int d = -r; d <= r; ++d) {
      const double w = std::exp(-double(d) * d / (2.0 * smoothing * smoothing));
      smoothing_weights_.push_back(w);
      norm += w * w;
    }
    // Unit variance per neuron after smoothing.
    for (double& w : smoothing_weights_) w /= std::sqrt(norm);
  }
}

void NoiseSource::fill(std::span<double> out) {
  if (smoothing_weights_.empty()) {
    for (double& v : out) v = normal_(engine_);
    return;
  }
  const std::size_t width = smoothing_weights_.size();
  raw_.resize(out.size() + width - 1);
  for (double& v : raw_) v = normal_(engine_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += smoothing_weights_[j] * raw_[i + j];
    out[i] = acc;
  }
}

FieldState initial_state(const FieldParams& params, NoiseSource& noise) {
  FieldState s{std::vector<double>(static_cast<std::size_t>(params.field_size),
                                   params.initial_level.value_or(params.h)),
               0};
  if (params.initial_noise > 0) {
    std::vector<double> xi(s.u.size());
    noise.fill(xi);
    for (std::size_t i = 0; i < xi.size(); ++i) s.u[i] += params.initial_noise * xi[i];
  }
  return s;
}

namespace {

StepSummary summarize(const FieldState& s) {
  StepSummary out{s.step, *std::max_element(s.u.begin(), s.u.end()), 0};
  out.n_above = static_cast<int>(std::count_if(s.u.begin(), s.u.end(), [](double v) { return v > 0; }));
  return out;
}

std::optional<Crossing> crossing_in(const FieldState& s) {
  for (std::size_t i = 0; i < s.u.size(); ++i)
    if (s.u[i] > 0) return Crossing{static_cast<double>(i), s.step};
  return std::nullopt;
}

}  // namespace

Trajectory evolve(const FieldState& initial, std::span<const double> inputs,
                  const FieldParams& params, const KernelTable& kernel, NoiseSource& noise,
                  Recording recording) {
  if (initial.step != 0) throw InvalidInput("evolve: initial state must be at step 0");
  if (static_cast<int>(initial.u.size()) != params.field_size ||
      static_cast<int>(inputs.size()) != params.field_size)
    throw ConfigError("field_size", "field_size: initial state or inputs sized inconsistently");

  Trajectory traj;
  traj.seed = noise.seed();
  traj.summary.reserve(static_cast<std::size_t>(params.n_steps) + 1);
  if (recording == Recording::full) traj.states.reserve(static_cast<std::size_t>(params.n_steps) + 1);

  FieldState current = initial;
  std::vector<double> xi(current.u.size());
  auto record = [&](const FieldState& s) {
    traj.summary.push_back(summarize(s));
    if (!traj.first_crossing) traj.first_crossing = crossing_in(s);
    if (recording == Recording::full) traj.states.push_back(s);
  };

  record(current);
  for (int t = 0; t < params.n_steps; ++t) {
    noise.fill(xi);
    try {
      current = field_step(current, inputs, kernel, params, xi);
    } catch (const IntegrationDiverged& e) {
      throw IntegrationDiverged(e.step(), noise.seed());
    }
    record(current);
  }
  traj.final_state = std::move(current);
  return traj;
}

Trajectory evolve(const FieldState& initial, std::span<const double> inputs,
                  const FieldParams& params, NoiseSource& noise, Recording recording) {
  return evolve(initial, inputs, params, build_kernel(params), noise, recording);
}

}  // namespace dnf

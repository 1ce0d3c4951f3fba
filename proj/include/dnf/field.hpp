#pragma once

// One-dimensional stochastic neural field over VOT (ms):
//
//   tau du/dt = -u + h + s(x) + sum_x' k(x - x') g(u(x')) + q xi(x, t)
//
// integrated with forward Euler on an integer grid x = 0 .. field_size-1.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace dnf {

struct FieldParams {
  double tau = 20.0;
  double h = -5.0;
  double beta = 4.0;
  double c_exc = 15.0;
  double c_inh = 5.0;
  double c_glob = 0.9;
  double sigma_exc = 5.0;
  double sigma_inh = 12.5;
  double q = 1.0;
  int field_size = 200;
  // Noise enters inside the bracket, so each step adds (dt/tau)*q*xi. This is
  // not sqrt(dt)-scaled Euler-Maruyama: changing dt changes the noise process.
  double dt = 1.0;
  int n_steps = 120;

  // Initial condition u(x,0) = initial_level (defaults to h) plus
  // initial_noise * xi(x).
  std::optional<double> initial_level;
  double initial_noise = 0.0;
  // Width (neurons) of a Gaussian used to smooth the per-step noise; 0 means
  // spatially uncorrelated noise.
  double noise_smoothing = 0.0;

  /// Throws ConfigError naming the first offending key.
  void validate() const;

  bool operator==(const FieldParams&) const = default;
};

/// Soft checks: parameters outside the selection-dynamics regime
/// (sigma_exc < sigma_inh, c_exc > c_inh > c_glob). Never throws.
std::vector<std::string> regime_warnings(const FieldParams& params);

struct FieldState {
  std::vector<double> u;
  int step = 0;
};

/// Interaction kernel tabulated for every integer displacement
/// d = -(field_size-1) .. field_size-1.
class KernelTable {
 public:
  explicit KernelTable(const FieldParams& params);

  int field_size() const noexcept { return field_size_; }
  /// k(d), including the global inhibition term.
  double weight(int d) const { return weights_[static_cast<std::size_t>(d + field_size_ - 1)]; }
  std::span<const double> weights() const noexcept { return weights_; }
  double global_inhibition() const noexcept { return c_glob_; }
  /// Support of the local (difference-of-Gaussians) part: the summed
  /// magnitude of all weights beyond it is below 1e-13.
  int local_radius() const noexcept { return radius_; }
  double local_weight(int d) const { return local_[static_cast<std::size_t>(d + field_size_ - 1)]; }
  /// Local weights for displacements -(field_size-1) .. field_size-1.
  std::span<const double> local_weights() const noexcept { return local_; }

 private:
  int field_size_;
  double c_glob_;
  int radius_;
  std::vector<double> weights_;
  std::vector<double> local_;
};

/// g(u) = 1 / (1 + exp(-beta u)), evaluated without overflow.
double sigmoid_gate(double u_val, double beta) noexcept;

/// k(d) = c_exc N(d; sigma_exc) - c_inh N(d; sigma_inh) - c_glob.
double kernel_value(double d, const FieldParams& params) noexcept;

KernelTable build_kernel(const FieldParams& params);

/// sum_x' k(x - x') g(u(x')) over the grid; nothing enters from outside.
std::vector<double> lateral_input(const FieldState& state, const KernelTable& kernel, double beta);

/// One Euler step. `noise` holds one standard-normal draw per neuron.
/// Throws IntegrationDiverged if the result is not finite.
FieldState field_step(const FieldState& state, std::span<const double> inputs,
                      const KernelTable& kernel, const FieldParams& params,
                      std::span<const double> noise);

/// Gaussian noise for one trial. Owns its engine; not shareable across
/// threads.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, double smoothing = 0.0);

  std::uint64_t seed() const noexcept { return seed_; }
  /// Fills `out` with unit-variance draws (spatially smoothed if requested).
  void fill(std::span<double> out);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::vector<double> smoothing_weights_;  // empty when uncorrelated
  std::vector<double> raw_;
};

FieldState initial_state(const FieldParams& params, NoiseSource& noise);

struct StepSummary {
  int step = 0;
  double max_u = 0.0;
  int n_above = 0;
};

struct Crossing {
  double position = 0.0;
  int step = 0;
  bool operator==(const Crossing&) const = default;
};

struct Trajectory {
  /// Every state from step 0 to n_steps; empty in lean mode.
  std::vector<FieldState> states;
  FieldState final_state;
  /// One entry per step, 0 .. n_steps.
  std::vector<StepSummary> summary;
  std::optional<Crossing> first_crossing;
  std::uint64_t seed = 0;
};

enum class Recording { full, lean };

/// Steps `initial` n_steps times with fresh noise each step.
Trajectory evolve(const FieldState& initial, std::span<const double> inputs,
                  const FieldParams& params, const KernelTable& kernel, NoiseSource& noise,
                  Recording recording = Recording::full);

Trajectory evolve(const FieldState& initial, std::span<const double> inputs,
                  const FieldParams& params, NoiseSource& noise,
                  Recording recording = Recording::full);

}  // namespace dnf

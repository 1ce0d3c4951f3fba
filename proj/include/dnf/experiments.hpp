#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnf/field.hpp"
#include "dnf/readout.hpp"
#include "dnf/stimulus.hpp"

namespace dnf {

/// Field parameters plus the two inputs. The amplitudes stored here are the
/// defaults for single runs; sweeps override them per condition.
struct ModelConfig {
  FieldParams field;
  GaussianInput target{6.0, 70.0, 30.0, "target"};
  GaussianInput competitor{0.0, 20.0, 30.0, "mp"};

  bool operator==(const ModelConfig&) const = default;
};

struct Condition {
  double a_target = 6.0;
  double a_mp = 0.0;
  bool operator==(const Condition&) const = default;
};

/// Total external input for one condition.
std::vector<double> condition_inputs(const ModelConfig& model, const Condition& c);

struct ConditionStats {
  Condition condition;
  int n_trials = 0;
  /// Trials that produced a VOT target under the readout method.
  int n_valid = 0;
  double mean_vot = 0.0;
  double sd_vot = 0.0;
  double sem_vot = 0.0;
  double skewness = 0.0;
  /// mean_vot - p_target
  double ch_ms = 0.0;
  double frac_stabilized = 0.0;
  double frac_crossed = 0.0;
  std::optional<double> mean_time_to_threshold;
  std::optional<double> median_time_to_threshold;
};

struct BatchOptions {
  int n_trials = 500;
  std::uint64_t master_seed = 1;
  ReadoutMethod method = ReadoutMethod::argmax;
  /// 0 = hardware concurrency. Results do not depend on this.
  unsigned threads = 0;
  bool keep_trials = false;
};

struct BatchResult {
  ConditionStats stats;
  std::vector<TrialResult> trials;  // filled when keep_trials
};

/// Seed of trial `index` under `master_seed` (splitmix64 of both).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// One trial, all states recorded.
Trajectory simulate_trial(const ModelConfig& model, const Condition& c, std::uint64_t seed,
                          Recording recording = Recording::full);

/// Aggregates per-trial results (in the given order) for one condition.
ConditionStats aggregate(const Condition& c, std::span<const TrialResult> trials, double p_target);

BatchResult run_batch(const ModelConfig& model, const Condition& c, const BatchOptions& opts);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  bool operator==(const Range&) const = default;
};

/// lo, lo+step, ..., hi (inclusive, to within step/1000). Throws
/// InvalidInput if lo > hi or step <= 0.
std::vector<double> range_values(const Range& r);

struct SweepResult {
  std::vector<double> a_target_values;
  std::vector<double> a_mp_values;
  /// Row-major: a_target outer, a_mp inner.
  std::vector<ConditionStats> cells;
  std::vector<std::vector<TrialResult>> trials;  // parallel to cells when kept
  std::uint64_t master_seed = 0;
  ReadoutMethod method = ReadoutMethod::argmax;
  ModelConfig model;

  const ConditionStats& at(std::size_t target_index, std::size_t mp_index) const {
    return cells.at(target_index * a_mp_values.size() + mp_index);
  }
  /// Cell whose condition matches within 1e-9; nullptr if absent.
  const ConditionStats* find(double a_target, double a_mp) const;
};

/// Every cell is run with the same master seed, so cells share noise
/// streams trial by trial (common random numbers).
SweepResult sweep_grid(const ModelConfig& model, std::span<const double> a_target_values,
                       std::span<const double> a_mp_values, const BatchOptions& opts);

SweepResult sweep_1d(const ModelConfig& model, const Range& a_mp, const BatchOptions& opts);

SweepResult sweep_2d(const ModelConfig& model, const Range& a_mp, const Range& a_target,
                     const BatchOptions& opts);

/// Paper grids: a_mp -6..4 (1-D), a_mp -6..5 x a_target 5..10 (2-D), step 0.5.
inline constexpr Range kFig6Mp{-6.0, 4.0, 0.5};
inline constexpr Range kFig12Mp{-6.0, 5.0, 0.5};
inline constexpr Range kFig12Target{5.0, 10.0, 0.5};

enum class NamedExperiment { fig6, fig7, fig12, conditions };

/// Accepts fig6, fig7, fig12, conditions (alias conditions_bbg2009).
NamedExperiment parse_experiment(std::string_view name);
std::string_view to_string(NamedExperiment e) noexcept;

struct ExampleRun {
  std::string label;
  Condition condition;
  Trajectory trajectory;  // full recording, noise seed = trial 0 of the batch
};

struct Replication {
  NamedExperiment experiment;
  SweepResult sweep;
  std::vector<ExampleRun> examples;
  /// Empirical a_mp = 0 mean at the base a_target, when the grid has it.
  std::optional<double> baseline_mean_vot;
};

/// Runs a canned campaign on top of `model` (field/input shape) and exports a
/// full example trajectory for each highlighted condition.
Replication replicate_named(NamedExperiment e, const ModelConfig& model, const BatchOptions& opts);

/// Pearson correlation; NaN if either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Number of maximal runs of neurons with u > 0.
int count_above_threshold_regions(std::span<const double> u) noexcept;

}  // namespace dnf

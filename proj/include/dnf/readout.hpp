#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "dnf/field.hpp"

namespace dnf {

enum class ReadoutMethod { argmax, centroid_above_threshold, first_to_threshold };

std::string_view to_string(ReadoutMethod m) noexcept;
/// Throws UsageError on an unknown name.
ReadoutMethod parse_readout(std::string_view name);

struct TrialResult {
  std::optional<double> vot_target;
  std::optional<int> time_to_threshold;
  bool stabilized = false;
  ReadoutMethod readout_method = ReadoutMethod::argmax;
  std::uint64_t seed = 0;

  bool operator==(const TrialResult&) const = default;
};

// The interaction threshold is strict: a neuron is above it iff u > 0.

/// Position of the highest activation; ties go to the lowest index.
double readout_argmax(const FieldState& final_state);

/// Activation-weighted mean position over neurons with u > 0.
std::optional<double> readout_centroid(const FieldState& final_state);

/// First neuron to exceed 0, scanning steps in order and positions from
/// the low end within a step.
std::optional<Crossing> readout_first_threshold(std::span<const FieldState> trajectory);
std::optional<Crossing> readout_first_threshold(const Trajectory& trajectory);

TrialResult trial_metrics(const Trajectory& trajectory, ReadoutMethod method);

}  // namespace dnf

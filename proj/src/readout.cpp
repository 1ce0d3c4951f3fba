#include "dnf/readout.hpp"

#include <algorithm>

#include "dnf/errors.hpp"

namespace dnf {

std::string_view to_string(ReadoutMethod m) noexcept {
  switch (m) {
    case ReadoutMethod::argmax: return "argmax";
    case ReadoutMethod::centroid_above_threshold: return "centroid_above_threshold";
    case ReadoutMethod::first_to_threshold: return "first_to_threshold";
  }
  return "argmax";
}

ReadoutMethod parse_readout(std::string_view name) {
  for (auto m : {ReadoutMethod::argmax, ReadoutMethod::centroid_above_threshold,
                 ReadoutMethod::first_to_threshold})
    if (name == to_string(m)) return m;
  throw UsageError("unknown readout method '" + std::string(name) +
                   "' (expected argmax, centroid_above_threshold or first_to_threshold)");
}

double readout_argmax(const FieldState& final_state) {
  const auto& u = final_state.u;
  // max_element returns the first maximum.
  return static_cast<double>(std::max_element(u.begin(), u.end()) - u.begin());
}

std::optional<double> readout_centroid(const FieldState& final_state) {
  double weight = 0.0, moment = 0.0;
  for (std::size_t x = 0; x < final_state.u.size(); ++x) {
    const double v = final_state.u[x];
    if (v > 0) {
      weight += v;
      moment += v * static_cast<double>(x);
    }
  }
  if (weight == 0.0) return std::nullopt;
  return moment / weight;
}

std::optional<Crossing> readout_first_threshold(std::span<const FieldState> trajectory) {
  for (const auto& s : trajectory)
    for (std::size_t x = 0; x < s.u.size(); ++x)
      if (s.u[x] > 0) return Crossing{static_cast<double>(x), s.step};
  return std::nullopt;
}

std::optional<Crossing> readout_first_threshold(const Trajectory& trajectory) {
  if (!trajectory.states.empty()) return readout_first_threshold(std::span(trajectory.states));
  return trajectory.first_crossing;
}

TrialResult trial_metrics(const Trajectory& trajectory, ReadoutMethod method) {
  TrialResult r;
  r.readout_method = method;
  r.seed = trajectory.seed;
  const auto crossing = readout_first_threshold(trajectory);
  if (crossing) r.time_to_threshold = crossing->step;
  const auto& final_u = trajectory.final_state.u;
  r.stabilized = std::any_of(final_u.begin(), final_u.end(), [](double v) { return v > 0; });

  switch (method) {
    case ReadoutMethod::argmax:
      r.vot_target = readout_argmax(trajectory.final_state);
      break;
    case ReadoutMethod::centroid_above_threshold:
      r.vot_target = readout_centroid(trajectory.final_state);
      break;
    case ReadoutMethod::first_to_threshold:
      // Only meaningful for a field that went on to stabilize.
      if (crossing && r.stabilized) r.vot_target = crossing->position;
      break;
  }
  return r;
}

}  // namespace dnf

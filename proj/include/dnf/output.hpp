#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dnf/experiments.hpp"
#include "dnf/field.hpp"

namespace dnf {

/// Column order of sweep tables. Fixed.
inline constexpr const char* kSweepCsvHeader =
    "a_target,a_mp,n_trials,mean_vot,sd_vot,sem_vot,skewness,ch_ms,frac_stabilized,"
    "mean_time_to_threshold,readout_method,master_seed";

/// Shortest round-trip decimal form, locale independent. Non-finite -> "NA".
std::string format_number(double v);

std::string sweep_csv(const SweepResult& result);
std::string trials_csv(const SweepResult& result);
/// Long format: step,x,u
std::string trajectory_csv(const Trajectory& trajectory);
/// step,max_u,n_above_threshold
std::string trajectory_summary_csv(const Trajectory& trajectory);

/// Writes `contents` to `path`; throws std::runtime_error if unwritable.
void write_file(const std::filesystem::path& path, const std::string& contents);

void emit_sweep_csv(const SweepResult& result, const std::filesystem::path& path);
void emit_trials_csv(const SweepResult& result, const std::filesystem::path& path);
/// Writes the long table to `path` and the per-step summary to
/// `summary_path` (default: `<stem>_summary.csv` next to `path`).
void emit_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path,
                         std::optional<std::filesystem::path> summary_path = std::nullopt);

}  // namespace dnf

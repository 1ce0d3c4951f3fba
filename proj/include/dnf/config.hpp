#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dnf/experiments.hpp"

namespace dnf {

/// Everything a run needs. Default-constructed values are the published
/// model defaults; config/defaults.json spells out the same values.
struct RunConfig {
  ModelConfig model;
  Range sweep1d_mp = kFig6Mp;
  Range sweep2d_mp = kFig12Mp;
  Range sweep2d_target = kFig12Target;
  int n_trials = 500;
  std::uint64_t master_seed = 1;
  ReadoutMethod readout = ReadoutMethod::argmax;
  std::optional<std::string> out_dir;

  /// Throws ConfigError with the dotted key of the first bad value.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses JSON text (empty text means "all defaults"). Missing keys keep
/// their defaults; unknown keys are rejected.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: every key present, fixed order, 2-space indent.
std::string serialize_config(const RunConfig& config);

/// Path of the defaults file shipped with the sources.
std::filesystem::path shipped_defaults_path();

}  // namespace dnf

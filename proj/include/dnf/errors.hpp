#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dnf {

/// Invalid configuration value. `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A field state picked up a NaN or Inf.
class IntegrationDiverged : public std::runtime_error {
 public:
  IntegrationDiverged(int step, std::uint64_t seed)
      : std::runtime_error("integration diverged at step " + std::to_string(step) +
                           " (seed " + std::to_string(seed) + ")"),
        step_(step),
        seed_(seed) {}
  int step() const noexcept { return step_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  int step_;
  std::uint64_t seed_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dnf

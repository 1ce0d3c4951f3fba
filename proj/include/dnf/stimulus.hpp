#pragma once

#include <span>
#include <string>
#include <vector>

namespace dnf {

/// s(x) = a exp(-(x - p)^2 / (2 w^2)). Negative `a` is inhibitory input.
struct GaussianInput {
  double a = 0.0;
  double p = 0.0;
  double w = 1.0;
  std::string label;

  bool operator==(const GaussianInput&) const = default;
};

/// Throws InvalidInput when w <= 0 (or any field is not finite).
std::vector<double> gaussian_profile(const GaussianInput& input, int field_size);

std::vector<double> compose_inputs(std::span<const GaussianInput> inputs, int field_size);

/// Warnings for inputs whose center lies off the grid or whose tail is
/// noticeably clipped at a grid edge (edge value above 1% of |a|).
std::vector<std::string> input_warnings(const GaussianInput& input, int field_size);

}  // namespace dnf

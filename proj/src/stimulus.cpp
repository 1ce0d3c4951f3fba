#include "dnf/stimulus.hpp"

#include <cmath>

#include "dnf/errors.hpp"

namespace dnf {

std::vector<double> gaussian_profile(const GaussianInput& input, int field_size) {
  if (!(input.w > 0) || !std::isfinite(input.w))
    throw InvalidInput("input '" + input.label + "': width w must be > 0");
  if (!std::isfinite(input.a) || !std::isfinite(input.p))
    throw InvalidInput("input '" + input.label + "': amplitude and position must be finite");
  if (field_size < 1) throw InvalidInput("field_size must be positive");

  std::vector<double> v(static_cast<std::size_t>(field_size));
  const double two_w2 = 2.0 * input.w * input.w;
  for (int x = 0; x < field_size; ++x) {
    const double d = x - input.p;
    v[static_cast<std::size_t>(x)] = input.a * std::exp(-d * d / two_w2);
  }
  return v;
}

std::vector<double> compose_inputs(std::span<const GaussianInput> inputs, int field_size) {
  std::vector<double> total(static_cast<std::size_t>(field_size), 0.0);
  for (const auto& in : inputs) {
    const auto v = gaussian_profile(in, field_size);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += v[i];
  }
  return total;
}

std::vector<std::string> input_warnings(const GaussianInput& input, int field_size) {
  std::vector<std::string> out;
  const std::string name = input.label.empty() ? std::string("input") : input.label;
  if (input.p < 0 || input.p >= field_size)
    out.push_back(name + ": center p=" + std::to_string(input.p) + " lies outside the grid");
  if (input.a == 0 || !(input.w > 0)) return out;
  const double two_w2 = 2.0 * input.w * input.w;
  const double lo = std::exp(-input.p * input.p / two_w2);
  const double right = (field_size - 1) - input.p;
  const double hi = std::exp(-right * right / two_w2);
  if (lo > 0.01) out.push_back(name + ": profile clipped at x=0");
  if (hi > 0.01) out.push_back(name + ": profile clipped at x=" + std::to_string(field_size - 1));
  return out;
}

}  // namespace dnf

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "dnf/experiments.hpp"
#include "dnf/field.hpp"

namespace dnf {

// Static SVG renderings. Output depends only on the data, so identical
// inputs give byte-identical files.

enum class PlotKind { sweep_line, field_evolution_heatmap, surface_2d };

/// Throws UsageError on an unknown name.
PlotKind parse_plot_kind(std::string_view name);
std::string_view to_string(PlotKind k) noexcept;

/// mean VOT +/- SEM against a_mp, one line per a_target, with a reference
/// line at p_target and the a_mp = 0 / -3 / -6 conditions marked.
std::string svg_sweep_line(const SweepResult& result);

/// u over (step, x).
std::string svg_field_heatmap(const Trajectory& trajectory);

/// ch_ms over (a_target, a_mp): yellow above the p_target plane, blue below.
std::string svg_surface_2d(const SweepResult& result);

using PlotData = std::variant<const SweepResult*, const Trajectory*>;

/// Throws InvalidInput if the data does not fit the kind.
void render_plot(PlotKind kind, PlotData data, const std::filesystem::path& path);

}  // namespace dnf

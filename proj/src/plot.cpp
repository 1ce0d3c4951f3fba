#include "dnf/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "dnf/errors.hpp"
#include "dnf/output.hpp"

namespace dnf {

namespace {

std::string fx(double v, int precision = 2) {
  if (!std::isfinite(v)) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  std::string s(buf, res.ptr);
  if (s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

struct Rgb {
  double r, g, b;
};

std::string hex(const Rgb& c) {
  auto byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
  return buf;
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

// Perceptually ordered dark-blue -> teal -> yellow ramp, t in [0, 1].
Rgb ramp(double t) {
  static constexpr std::array<Rgb, 5> stops{{{0.27, 0.00, 0.33},
                                              {0.23, 0.32, 0.55},
                                              {0.13, 0.57, 0.55},
                                              {0.37, 0.79, 0.38},
                                              {0.99, 0.91, 0.14}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  return lerp(stops[i], stops[i + 1], t - static_cast<double>(i));
}

struct Axis {
  double lo, hi;
  double px_lo, px_hi;
  double operator()(double v) const {
    if (hi == lo) return 0.5 * (px_lo + px_hi);
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

std::string header(int width, int height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
         " " + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 const char* extra = "") {
  return "<text x=\"" + fx(x) + "\" y=\"" + fx(y) + "\" text-anchor=\"" + anchor + "\"" + extra +
         ">" + s + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const std::string& stroke,
                 const char* extra = "") {
  return "<line x1=\"" + fx(x1) + "\" y1=\"" + fx(y1) + "\" x2=\"" + fx(x2) + "\" y2=\"" + fx(y2) +
         "\" stroke=\"" + stroke + "\"" + extra + "/>\n";
}

std::string rect(double x, double y, double w, double h, const std::string& fill) {
  return "<rect x=\"" + fx(x) + "\" y=\"" + fx(y) + "\" width=\"" + fx(w) + "\" height=\"" + fx(h) +
         "\" fill=\"" + fill + "\"/>\n";
}

// Ticks at multiples of `step` within [lo, hi].
std::vector<double> ticks(double lo, double hi, double step) {
  std::vector<double> out;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9; t += step) out.push_back(t);
  return out;
}

double nice_step(double span) {
  if (!(span > 0)) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

std::string frame(const Axis& x, const Axis& y, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += line(x.px_lo, y.px_lo, x.px_hi, y.px_lo, "#000000");
  s += line(x.px_lo, y.px_lo, x.px_lo, y.px_hi, "#000000");
  for (double t : ticks(x.lo, x.hi, nice_step(x.hi - x.lo))) {
    s += line(x(t), y.px_lo, x(t), y.px_lo + 4, "#000000");
    s += text(x(t), y.px_lo + 16, format_number(t));
  }
  for (double t : ticks(y.lo, y.hi, nice_step(y.hi - y.lo))) {
    s += line(x.px_lo - 4, y(t), x.px_lo, y(t), "#000000");
    s += text(x.px_lo - 6, y(t) + 4, format_number(t), "end");
  }
  s += text(0.5 * (x.px_lo + x.px_hi), y.px_lo + 34, xlabel);
  const double cy = 0.5 * (y.px_lo + y.px_hi);
  s += "<text x=\"16\" y=\"" + fx(cy) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fx(cy) + ")\">" + ylabel + "</text>\n";
  return s;
}

bool is_highlight(double a_mp) {
  return std::abs(a_mp) < 1e-9 || std::abs(a_mp + 3) < 1e-9 || std::abs(a_mp + 6) < 1e-9;
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name) {
  for (auto k : {PlotKind::sweep_line, PlotKind::field_evolution_heatmap, PlotKind::surface_2d})
    if (name == to_string(k)) return k;
  throw UsageError("unknown plot kind '" + std::string(name) +
                   "' (expected sweep_line, field_evolution_heatmap or surface_2d)");
}

std::string_view to_string(PlotKind k) noexcept {
  switch (k) {
    case PlotKind::sweep_line: return "sweep_line";
    case PlotKind::field_evolution_heatmap: return "field_evolution_heatmap";
    case PlotKind::surface_2d: return "surface_2d";
  }
  return "sweep_line";
}

std::string svg_sweep_line(const SweepResult& r) {
  const int width = 640, height = 420;
  const double p_target = r.model.target.p;

  double ylo = p_target, yhi = p_target;
  for (const auto& c : r.cells) {
    if (!std::isfinite(c.mean_vot)) continue;
    ylo = std::min(ylo, c.mean_vot - c.sem_vot);
    yhi = std::max(yhi, c.mean_vot + c.sem_vot);
  }
  ylo = std::floor(ylo - 1.0);
  yhi = std::ceil(yhi + 1.0);
  double xlo = 0, xhi = 1;
  if (!r.a_mp_values.empty()) {
    const auto [mn, mx] = std::minmax_element(r.a_mp_values.begin(), r.a_mp_values.end());
    xlo = *mn;
    xhi = *mx;
    if (xlo == xhi) {
      xlo -= 1;
      xhi += 1;
    }
  }
  const Axis x{xlo, xhi, 70, width - 20.0};
  const Axis y{ylo, yhi, height - 50.0, 20};

  std::string s = header(width, height);
  s += frame(x, y, "competitor amplitude a_mp", "mean VOT target (ms)");
  s += line(x.px_lo, y(p_target), x.px_hi, y(p_target), "#000000", " stroke-dasharray=\"2,3\"");
  s += text(x.px_hi - 4, y(p_target) - 4, "CH = 0 (" + format_number(p_target) + " ms)", "end");

  const std::size_t n_mp = r.a_mp_values.size();
  for (std::size_t ti = 0; ti < r.a_target_values.size(); ++ti) {
    const double shade = r.a_target_values.size() > 1 ? double(ti) / (r.a_target_values.size() - 1) : 0.4;
    const std::string colour = hex(ramp(0.15 + 0.7 * shade));
    std::string path;
    for (std::size_t mi = 0; mi < n_mp; ++mi) {
      const auto& c = r.at(ti, mi);
      if (!std::isfinite(c.mean_vot)) continue;
      path += (path.empty() ? "M" : " L") + fx(x(c.condition.a_mp)) + "," + fx(y(c.mean_vot));
    }
    if (!path.empty())
      s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"/>\n";
    for (std::size_t mi = 0; mi < n_mp; ++mi) {
      const auto& c = r.at(ti, mi);
      if (!std::isfinite(c.mean_vot)) continue;
      const double px = x(c.condition.a_mp);
      s += line(px, y(c.mean_vot - c.sem_vot), px, y(c.mean_vot + c.sem_vot), colour);
      const bool mark = is_highlight(c.condition.a_mp);
      const std::string fill = !mark ? colour : (c.condition.a_mp == 0 ? "#000000" : "#c0392b");
      s += "<circle cx=\"" + fx(px) + "\" cy=\"" + fx(y(c.mean_vot)) + "\" r=\"" + (mark ? "5" : "3") +
           "\" fill=\"" + fill + "\"/>\n";
    }
  }
  if (r.a_target_values.size() > 1)
    s += text(x.px_hi - 4, 34, "a_target " + format_number(r.a_target_values.front()) + " .. " +
                                   format_number(r.a_target_values.back()), "end");
  s += "</svg>\n";
  return s;
}

std::string svg_field_heatmap(const Trajectory& traj) {
  if (traj.states.empty()) throw InvalidInput("field heatmap needs a fully recorded trajectory");
  const int width = 640, height = 480;
  const std::size_t n_steps = traj.states.size();
  const std::size_t n_x = traj.states.front().u.size();

  double lo = traj.states.front().u.front(), hi = lo;
  for (const auto& st : traj.states)
    for (double v : st.u) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi == lo) hi = lo + 1;

  const Axis x{0, double(n_steps), 70, width - 90.0};
  const Axis y{0, double(n_x), height - 50.0, 20};
  const double cw = (x.px_hi - x.px_lo) / n_steps;
  const double ch = (y.px_lo - y.px_hi) / n_x;

  constexpr int levels = 64;
  auto level = [&](double v) {
    return std::clamp(static_cast<int>((v - lo) / (hi - lo) * levels), 0, levels - 1);
  };

  std::string s = header(width, height);
  for (std::size_t t = 0; t < n_steps; ++t) {
    const auto& u = traj.states[t].u;
    std::size_t start = 0;
    // Merge runs of equal colour along x.
    while (start < n_x) {
      const int lv = level(u[start]);
      std::size_t end = start + 1;
      while (end < n_x && level(u[end]) == lv) ++end;
      s += rect(x.px_lo + t * cw, y.px_lo - end * ch, cw + 0.05, (end - start) * ch + 0.05,
                hex(ramp((lv + 0.5) / levels)));
      start = end;
    }
  }
  s += frame(Axis{0, double(n_steps - 1), x.px_lo, x.px_hi}, Axis{0, double(n_x - 1), y.px_lo, y.px_hi},
             "time step", "VOT (ms)");

  // Colour bar.
  const double bx = width - 70.0;
  for (int i = 0; i < levels; ++i) {
    const double y0 = y.px_lo - (i + 1) * (y.px_lo - y.px_hi) / levels;
    s += rect(bx, y0, 14, (y.px_lo - y.px_hi) / levels + 0.05, hex(ramp((i + 0.5) / levels)));
  }
  s += text(bx + 18, y.px_hi + 8, format_number(hi), "start");
  s += text(bx + 18, y.px_lo, format_number(lo), "start");
  if (lo < 0 && hi > 0) {
    const double y0 = y.px_lo - (0 - lo) / (hi - lo) * (y.px_lo - y.px_hi);
    s += line(bx - 3, y0, bx + 17, y0, "#000000");
    s += text(bx + 18, y0 + 4, "u = 0", "start");
  }
  s += "</svg>\n";
  return s;
}

std::string svg_surface_2d(const SweepResult& r) {
  const int width = 640, height = 520;
  const std::size_t nt = r.a_target_values.size(), nm = r.a_mp_values.size();
  if (nt == 0 || nm == 0) throw InvalidInput("surface plot needs a non-empty grid");

  double extent = 1.0;
  for (const auto& c : r.cells)
    if (std::isfinite(c.ch_ms)) extent = std::max(extent, std::abs(c.ch_ms));

  const double left = 80, right = width - 140.0, top = 20, bottom = height - 60.0;
  const double cw = (right - left) / nt, chh = (bottom - top) / nm;
  const Rgb white{1, 1, 1}, yellow{0.96, 0.80, 0.10}, blue{0.15, 0.35, 0.80};

  std::string s = header(width, height);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const auto& c = r.at(ti, mi);
      Rgb colour{0.7, 0.7, 0.7};
      if (std::isfinite(c.ch_ms)) {
        const double t = std::min(1.0, std::abs(c.ch_ms) / extent);
        colour = c.ch_ms >= 0 ? lerp(white, yellow, t) : lerp(white, blue, t);
      }
      // a_mp increases upward.
      s += rect(left + ti * cw, bottom - (mi + 1) * chh, cw, chh, hex(colour));
    }
  }
  for (std::size_t ti = 0; ti < nt; ++ti)
    s += text(left + (ti + 0.5) * cw, bottom + 16, format_number(r.a_target_values[ti]));
  for (std::size_t mi = 0; mi < nm; ++mi)
    s += text(left - 6, bottom - (mi + 0.5) * chh + 4, format_number(r.a_mp_values[mi]), "end");
  s += text(0.5 * (left + right), bottom + 36, "target amplitude a_target");
  const double cy = 0.5 * (top + bottom);
  s += "<text x=\"16\" y=\"" + fx(cy) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + fx(cy) +
       ")\">competitor amplitude a_mp</text>\n";

  const double lx = right + 16;
  s += rect(lx, top + 10, 14, 14, hex(yellow));
  s += text(lx + 20, top + 22, "CH (above " + format_number(r.model.target.p) + " ms)", "start");
  s += rect(lx, top + 34, 14, 14, hex(blue));
  s += text(lx + 20, top + 46, "trace (below)", "start");
  s += text(lx, top + 72, "|ch| max " + fx(extent, 1) + " ms", "start");
  s += "</svg>\n";
  return s;
}

void render_plot(PlotKind kind, PlotData data, const std::filesystem::path& path) {
  const auto* sweep = std::get_if<const SweepResult*>(&data);
  const auto* traj = std::get_if<const Trajectory*>(&data);
  switch (kind) {
    case PlotKind::sweep_line:
      if (!sweep || !*sweep) throw InvalidInput("sweep_line needs a sweep result");
      write_file(path, svg_sweep_line(**sweep));
      return;
    case PlotKind::surface_2d:
      if (!sweep || !*sweep) throw InvalidInput("surface_2d needs a sweep result");
      write_file(path, svg_surface_2d(**sweep));
      return;
    case PlotKind::field_evolution_heatmap:
      if (!traj || !*traj) throw InvalidInput("field_evolution_heatmap needs a trajectory");
      write_file(path, svg_field_heatmap(**traj));
      return;
  }
}

}  // namespace dnf

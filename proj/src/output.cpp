#include "dnf/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dnf {

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  if (v == 0.0) return "0";  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::string opt_number(const std::optional<int>& v) { return v ? std::to_string(*v) : "NA"; }

}  // namespace

std::string sweep_csv(const SweepResult& r) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& c : r.cells) {
    out += format_number(c.condition.a_target) + ',' + format_number(c.condition.a_mp) + ',' +
           std::to_string(c.n_trials) + ',' + format_number(c.mean_vot) + ',' +
           format_number(c.sd_vot) + ',' + format_number(c.sem_vot) + ',' +
           format_number(c.skewness) + ',' + format_number(c.ch_ms) + ',' +
           format_number(c.frac_stabilized) + ',' + opt_number(c.mean_time_to_threshold) + ',' +
           std::string(to_string(r.method)) + ',' + std::to_string(r.master_seed) + '\n';
  }
  return out;
}

std::string trials_csv(const SweepResult& r) {
  std::string out = "a_target,a_mp,trial,seed,vot_target,time_to_threshold,stabilized\n";
  for (std::size_t i = 0; i < r.trials.size() && i < r.cells.size(); ++i) {
    const auto& cond = r.cells[i].condition;
    const std::string prefix = format_number(cond.a_target) + ',' + format_number(cond.a_mp) + ',';
    for (std::size_t t = 0; t < r.trials[i].size(); ++t) {
      const auto& tr = r.trials[i][t];
      out += prefix + std::to_string(t) + ',' + std::to_string(tr.seed) + ',' +
             opt_number(tr.vot_target) + ',' + opt_number(tr.time_to_threshold) + ',' +
             (tr.stabilized ? "1" : "0") + '\n';
    }
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "step,x,u\n";
  for (const auto& s : traj.states) {
    const std::string step = std::to_string(s.step) + ',';
    for (std::size_t x = 0; x < s.u.size(); ++x)
      out += step + std::to_string(x) + ',' + format_number(s.u[x]) + '\n';
  }
  return out;
}

std::string trajectory_summary_csv(const Trajectory& traj) {
  std::string out = "step,max_u,n_above_threshold\n";
  for (const auto& s : traj.summary)
    out += std::to_string(s.step) + ',' + format_number(s.max_u) + ',' + std::to_string(s.n_above) + '\n';
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

void emit_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
  write_file(path, sweep_csv(result));
}

void emit_trials_csv(const SweepResult& result, const std::filesystem::path& path) {
  write_file(path, trials_csv(result));
}

void emit_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path,
                         std::optional<std::filesystem::path> summary_path) {
  if (!summary_path) {
    auto p = path;
    p.replace_filename(path.stem().string() + "_summary.csv");
    summary_path = p;
  }
  write_file(path, trajectory_csv(trajectory));
  write_file(*summary_path, trajectory_summary_csv(trajectory));
}

}  // namespace dnf

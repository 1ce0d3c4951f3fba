#include "dnf/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "dnf/config.hpp"
#include "dnf/errors.hpp"
#include "dnf/experiments.hpp"
#include "dnf/output.hpp"
#include "dnf/plot.hpp"

namespace dnf {

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> trials;
  std::string readout;
  std::optional<double> a_mp;
  std::optional<double> a_target;
  unsigned threads = 0;
  bool quiet = false;
  std::string experiment;
};

struct Context {
  RunConfig config;
  fs::path out_dir;
  BatchOptions batch;
  std::ostream& out;
  std::ostream& err;
  bool quiet;

  void note(const std::string& msg) const {
    if (!quiet) err << msg << '\n';
  }
  fs::path file(const std::string& name) const { return out_dir / name; }
};

RunConfig resolve_config(const Flags& f) {
  RunConfig c = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  if (f.seed) c.master_seed = *f.seed;
  if (f.trials) c.n_trials = *f.trials;
  if (!f.readout.empty()) c.readout = parse_readout(f.readout);
  if (f.a_mp) c.model.competitor.a = *f.a_mp;
  if (f.a_target) c.model.target.a = *f.a_target;
  if (!f.out_dir.empty()) c.out_dir = f.out_dir;
  c.validate();
  return c;
}

fs::path resolve_out_dir(const RunConfig& c) {
  if (c.out_dir) return *c.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "out";
}

void print_stats_header(std::ostream& out) {
  out << "a_target,a_mp,n_trials,mean_vot,sem_vot,ch_ms,skewness,frac_stabilized,"
         "median_time_to_threshold\n";
}

void print_stats(std::ostream& out, const ConditionStats& s) {
  out << format_number(s.condition.a_target) << ',' << format_number(s.condition.a_mp) << ','
      << s.n_trials << ',' << format_number(s.mean_vot) << ',' << format_number(s.sem_vot) << ','
      << format_number(s.ch_ms) << ',' << format_number(s.skewness) << ','
      << format_number(s.frac_stabilized) << ','
      << (s.median_time_to_threshold ? format_number(*s.median_time_to_threshold) : "NA") << '\n';
}

void print_sweep(const Context& ctx, const SweepResult& r) {
  print_stats_header(ctx.out);
  for (const auto& c : r.cells) print_stats(ctx.out, c);
}

void write_sweep(const Context& ctx, const SweepResult& r, const std::string& stem, PlotKind kind) {
  emit_sweep_csv(r, ctx.file(stem + ".csv"));
  emit_trials_csv(r, ctx.file(stem + "_trials.csv"));
  render_plot(kind, &r, ctx.file(stem + ".svg"));
  ctx.note("wrote " + ctx.file(stem + ".csv").string());
}

void write_trajectory(const Context& ctx, const Trajectory& t, const std::string& stem) {
  emit_trajectory_csv(t, ctx.file(stem + ".csv"), ctx.file(stem + "_summary.csv"));
  render_plot(PlotKind::field_evolution_heatmap, &t, ctx.file(stem + ".svg"));
  ctx.note("wrote " + ctx.file(stem + ".csv").string());
}

int cmd_simulate(const Context& ctx) {
  const auto& m = ctx.config.model;
  const Condition cond{m.target.a, m.competitor.a};
  const auto traj = simulate_trial(m, cond, trial_seed(ctx.config.master_seed, 0));
  const auto result = trial_metrics(traj, ctx.config.readout);
  write_trajectory(ctx, traj, "trajectory");

  ctx.out << "readout " << to_string(ctx.config.readout) << '\n';
  ctx.out << "vot_target " << (result.vot_target ? format_number(*result.vot_target) : "NA") << '\n';
  ctx.out << "time_to_threshold "
          << (result.time_to_threshold ? std::to_string(*result.time_to_threshold) : "NA") << '\n';
  ctx.out << "stabilized " << (result.stabilized ? "true" : "false") << '\n';
  ctx.out << "seed " << result.seed << '\n';
  return 0;
}

int cmd_batch(const Context& ctx) {
  const auto& m = ctx.config.model;
  const double at[] = {m.target.a};
  const double mp[] = {m.competitor.a};
  const auto r = sweep_grid(m, at, mp, ctx.batch);
  write_sweep(ctx, r, "batch", PlotKind::sweep_line);
  print_sweep(ctx, r);
  return 0;
}

int cmd_sweep1d(const Context& ctx) {
  const auto r = sweep_1d(ctx.config.model, ctx.config.sweep1d_mp, ctx.batch);
  write_sweep(ctx, r, "sweep1d", PlotKind::sweep_line);
  print_sweep(ctx, r);
  return 0;
}

int cmd_sweep2d(const Context& ctx) {
  const auto r = sweep_2d(ctx.config.model, ctx.config.sweep2d_mp, ctx.config.sweep2d_target, ctx.batch);
  write_sweep(ctx, r, "sweep2d", PlotKind::surface_2d);
  print_sweep(ctx, r);
  return 0;
}

int cmd_replicate(const Context& ctx, const std::string& name) {
  const auto e = parse_experiment(name);
  const auto rep = replicate_named(e, ctx.config.model, ctx.batch);
  const std::string stem(to_string(e));
  write_sweep(ctx, rep.sweep, stem, e == NamedExperiment::fig12 ? PlotKind::surface_2d : PlotKind::sweep_line);
  for (const auto& ex : rep.examples) write_trajectory(ctx, ex.trajectory, stem + "_" + ex.label);

  ctx.out << "experiment " << stem << " master_seed " << ctx.config.master_seed << " readout "
          << to_string(ctx.config.readout) << '\n';
  print_sweep(ctx, rep.sweep);
  if (rep.baseline_mean_vot)
    ctx.out << "baseline_mean_vot " << format_number(*rep.baseline_mean_vot) << '\n';
  if (e == NamedExperiment::fig6) {
    std::vector<double> mp, vot;
    for (const auto& c : rep.sweep.cells) {
      mp.push_back(c.condition.a_mp);
      vot.push_back(c.mean_vot);
    }
    ctx.out << "pearson_a_mp_mean_vot " << format_number(pearson(mp, vot)) << '\n';
  }
  for (const auto& ex : rep.examples) {
    const auto tr = trial_metrics(ex.trajectory, ReadoutMethod::argmax);
    ctx.out << "example " << ex.label << " a_target " << format_number(ex.condition.a_target)
            << " a_mp " << format_number(ex.condition.a_mp) << " argmax "
            << format_number(*tr.vot_target) << " time_to_threshold "
            << (tr.time_to_threshold ? std::to_string(*tr.time_to_threshold) : "NA") << '\n';
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic neural field model of VOT planning"};
  app.name(args.empty() ? "dnfvot" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  Flags f;
  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "JSON config file (missing keys use defaults)");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--out", f.out_dir, std::string("output directory (default: config run.out_dir, $") +
                                            kOutDirEnv + ", ./out)");
    sub->add_option("--trials", f.trials, "trials per condition")->check(CLI::PositiveNumber);
    sub->add_option("--readout", f.readout, "argmax | centroid_above_threshold | first_to_threshold");
    sub->add_option("--a-mp", f.a_mp, "competitor amplitude for simulate/batch");
    sub->add_option("--a-target", f.a_target, "target amplitude for simulate/batch");
    sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    sub->add_flag("--quiet", f.quiet, "suppress warnings and progress notes");
  };

  auto* simulate = app.add_subcommand("simulate", "single trial; exports the trajectory");
  auto* batch = app.add_subcommand("batch", "one condition, n trials");
  auto* sweep1d = app.add_subcommand("sweep1d", "sweep a_mp at fixed a_target");
  auto* sweep2d = app.add_subcommand("sweep2d", "sweep a_mp x a_target");
  auto* replicate = app.add_subcommand("replicate", "canned campaign: fig6 | fig7 | fig12 | conditions");
  auto* validate = app.add_subcommand("validate-config", "check a config and print its canonical form");
  for (auto* sub : {simulate, batch, sweep1d, sweep2d, replicate, validate}) add_common(sub);
  replicate->add_option("experiment", f.experiment, "fig6 | fig7 | fig12 | conditions")->required();

  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    const RunConfig config = resolve_config(f);
    if (*validate) {
      out << serialize_config(config);
      return 0;
    }

    Context ctx{config, resolve_out_dir(config), {}, out, err, f.quiet};
    ctx.batch.n_trials = config.n_trials;
    ctx.batch.master_seed = config.master_seed;
    ctx.batch.method = config.readout;
    ctx.batch.threads = f.threads;
    ctx.batch.keep_trials = true;

    for (const auto& w : regime_warnings(config.model.field)) ctx.note("warning: " + w);
    for (const auto* in : {&config.model.target, &config.model.competitor})
      for (const auto& w : input_warnings(*in, config.model.field.field_size)) ctx.note("warning: " + w);

    fs::create_directories(ctx.out_dir);

    if (*simulate) return cmd_simulate(ctx);
    if (*batch) return cmd_batch(ctx);
    if (*sweep1d) return cmd_sweep1d(ctx);
    if (*sweep2d) return cmd_sweep2d(ctx);
    if (*replicate) return cmd_replicate(ctx, f.experiment);
  } catch (const UsageError& e) {
    err << app.get_name() << ": " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << app.get_name() << ": error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace dnf

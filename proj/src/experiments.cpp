#include "dnf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "dnf/errors.hpp"

namespace dnf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once; if several throw, the lowest index wins.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += threads) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Trajectory run_trial(const ModelConfig& model, const KernelTable& kernel,
                     std::span<const double> inputs, std::uint64_t seed, Recording recording) {
  NoiseSource noise(seed, model.field.noise_smoothing);
  const FieldState start = initial_state(model.field, noise);
  return evolve(start, inputs, model.field, kernel, noise, recording);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<double> condition_inputs(const ModelConfig& model, const Condition& c) {
  GaussianInput target = model.target;
  GaussianInput competitor = model.competitor;
  target.a = c.a_target;
  competitor.a = c.a_mp;
  const GaussianInput both[] = {target, competitor};
  return compose_inputs(both, model.field.field_size);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(~index));
}

Trajectory simulate_trial(const ModelConfig& model, const Condition& c, std::uint64_t seed,
                          Recording recording) {
  model.field.validate();
  const auto inputs = condition_inputs(model, c);
  return run_trial(model, build_kernel(model.field), inputs, seed, recording);
}

ConditionStats aggregate(const Condition& c, std::span<const TrialResult> trials, double p_target) {
  ConditionStats s;
  s.condition = c;
  s.n_trials = static_cast<int>(trials.size());

  std::vector<double> vots, times;
  int stabilized = 0;
  for (const auto& t : trials) {
    if (t.vot_target) vots.push_back(*t.vot_target);
    if (t.time_to_threshold) times.push_back(*t.time_to_threshold);
    stabilized += t.stabilized ? 1 : 0;
  }
  s.n_valid = static_cast<int>(vots.size());
  if (s.n_trials > 0) {
    s.frac_stabilized = double(stabilized) / s.n_trials;
    s.frac_crossed = double(times.size()) / s.n_trials;
  }

  if (vots.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean_vot = s.sd_vot = s.sem_vot = s.skewness = nan;
  } else {
    const double n = static_cast<double>(vots.size());
    s.mean_vot = std::accumulate(vots.begin(), vots.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : vots) {
      const double d = v - s.mean_vot;
      m2 += d * d;
      m3 += d * d * d;
    }
    s.sd_vot = vots.size() > 1 ? std::sqrt(m2 / (n - 1)) : 0.0;
    s.sem_vot = s.sd_vot / std::sqrt(n);
    m2 /= n;
    m3 /= n;
    s.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
  }
  s.ch_ms = s.mean_vot - p_target;

  if (!times.empty()) {
    s.mean_time_to_threshold = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    s.median_time_to_threshold = median(times);
  }
  return s;
}

BatchResult run_batch(const ModelConfig& model, const Condition& c, const BatchOptions& opts) {
  if (opts.n_trials < 1) throw InvalidInput("n_trials must be >= 1");
  model.field.validate();

  const KernelTable kernel = build_kernel(model.field);
  const auto inputs = condition_inputs(model, c);

  std::vector<TrialResult> trials(static_cast<std::size_t>(opts.n_trials));
  parallel_for(trials.size(), opts.threads, [&](std::size_t i) {
    const auto traj = run_trial(model, kernel, inputs, trial_seed(opts.master_seed, i), Recording::lean);
    trials[i] = trial_metrics(traj, opts.method);
  });

  BatchResult out;
  out.stats = aggregate(c, trials, model.target.p);
  if (opts.keep_trials) out.trials = std::move(trials);
  return out;
}

std::vector<double> range_values(const Range& r) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !std::isfinite(r.step))
    throw InvalidInput("range bounds must be finite");
  if (r.lo > r.hi) throw InvalidInput("range: lo must be <= hi");
  if (!(r.step > 0)) throw InvalidInput("range: step must be > 0");
  const auto count = static_cast<std::size_t>(std::floor((r.hi - r.lo) / r.step + 1e-3)) + 1;
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = r.lo + static_cast<double>(i) * r.step;
  return v;
}

const ConditionStats* SweepResult::find(double a_target, double a_mp) const {
  for (const auto& c : cells)
    if (std::abs(c.condition.a_target - a_target) < 1e-9 && std::abs(c.condition.a_mp - a_mp) < 1e-9)
      return &c;
  return nullptr;
}

SweepResult sweep_grid(const ModelConfig& model, std::span<const double> a_target_values,
                       std::span<const double> a_mp_values, const BatchOptions& opts) {
  SweepResult out;
  out.a_target_values.assign(a_target_values.begin(), a_target_values.end());
  out.a_mp_values.assign(a_mp_values.begin(), a_mp_values.end());
  out.master_seed = opts.master_seed;
  out.method = opts.method;
  out.model = model;
  out.cells.reserve(a_target_values.size() * a_mp_values.size());
  for (double at : a_target_values) {
    for (double mp : a_mp_values) {
      auto batch = run_batch(model, Condition{at, mp}, opts);
      out.cells.push_back(batch.stats);
      if (opts.keep_trials) out.trials.push_back(std::move(batch.trials));
    }
  }
  return out;
}

SweepResult sweep_1d(const ModelConfig& model, const Range& a_mp, const BatchOptions& opts) {
  const auto mp = range_values(a_mp);
  const double at[] = {model.target.a};
  return sweep_grid(model, at, mp, opts);
}

SweepResult sweep_2d(const ModelConfig& model, const Range& a_mp, const Range& a_target,
                     const BatchOptions& opts) {
  const auto mp = range_values(a_mp);
  const auto at = range_values(a_target);
  return sweep_grid(model, at, mp, opts);
}

NamedExperiment parse_experiment(std::string_view name) {
  if (name == "fig6") return NamedExperiment::fig6;
  if (name == "fig7") return NamedExperiment::fig7;
  if (name == "fig12") return NamedExperiment::fig12;
  if (name == "conditions" || name == "conditions_bbg2009") return NamedExperiment::conditions;
  throw UsageError("unknown experiment '" + std::string(name) +
                   "' (expected fig6, fig7, fig12 or conditions)");
}

std::string_view to_string(NamedExperiment e) noexcept {
  switch (e) {
    case NamedExperiment::fig6: return "fig6";
    case NamedExperiment::fig7: return "fig7";
    case NamedExperiment::fig12: return "fig12";
    case NamedExperiment::conditions: return "conditions";
  }
  return "fig6";
}

Replication replicate_named(NamedExperiment e, const ModelConfig& model, const BatchOptions& opts) {
  struct Highlight {
    const char* label;
    Condition condition;
  };
  const double at = model.target.a;
  const std::vector<Highlight> three = {
      {"no_competitor", {at, 0.0}}, {"no_context", {at, -3.0}}, {"context", {at, -6.0}}};

  Replication rep;
  rep.experiment = e;
  std::vector<Highlight> highlights;
  switch (e) {
    case NamedExperiment::fig6:
      rep.sweep = sweep_1d(model, kFig6Mp, opts);
      highlights = three;
      break;
    case NamedExperiment::fig7: {
      const double mp[] = {0.0, -3.0, -6.0};
      const double ats[] = {at};
      rep.sweep = sweep_grid(model, ats, mp, opts);
      highlights = three;
      break;
    }
    case NamedExperiment::fig12:
      rep.sweep = sweep_2d(model, kFig12Mp, kFig12Target, opts);
      highlights = {{"mp-6_target5", {5.0, -6.0}},
                    {"mp-6_target10", {10.0, -6.0}},
                    {"mp5_target5", {5.0, 5.0}},
                    {"mp5_target10", {10.0, 5.0}}};
      break;
    case NamedExperiment::conditions: {
      const double mp[] = {0.0, -1.5, -3.0, -6.0};
      const double ats[] = {at};
      rep.sweep = sweep_grid(model, ats, mp, opts);
      highlights = {{"no_competitor", {at, 0.0}},
                    {"pseudoword", {at, -1.5}},
                    {"no_context", {at, -3.0}},
                    {"context", {at, -6.0}}};
      break;
    }
  }

  for (const auto& h : highlights)
    rep.examples.push_back(
        {h.label, h.condition, simulate_trial(model, h.condition, trial_seed(opts.master_seed, 0))});
  if (const auto* base = rep.sweep.find(at, 0.0)) rep.baseline_mean_vot = base->mean_vot;
  return rep;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidInput("pearson: sizes must match and be > 0");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

int count_above_threshold_regions(std::span<const double> u) noexcept {
  int regions = 0;
  bool inside = false;
  for (double v : u) {
    const bool above = v > 0;
    if (above && !inside) ++regions;
    inside = above;
  }
  return regions;
}

}  // namespace dnf

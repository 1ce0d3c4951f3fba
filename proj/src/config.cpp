#include "dnf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dnf/errors.hpp"

namespace dnf {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where, where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) {
      const std::string full = where.empty() ? key : where + "." + key;
      throw ConfigError(full, full + ": unknown key");
    }
  }
}

std::string join(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  try {
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(join(where, key), "");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(join(where, key), "");
    } else {
      if (!v.is_string()) throw ConfigError(join(where, key), "");
    }
    out = v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError(join(where, key), join(where, key) + ": wrong type");
  }
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(obj, where, key, value);
  out = value;
}

void read_input(const json& obj, const std::string& where, GaussianInput& in) {
  check_keys(obj, where, {"a", "p", "w"});
  read(obj, where, "a", in.a);
  read(obj, where, "p", in.p);
  read(obj, where, "w", in.w);
}

void read_range(const json& obj, const std::string& where, Range& r) {
  check_keys(obj, where, {"lo", "hi", "step"});
  read(obj, where, "lo", r.lo);
  read(obj, where, "hi", r.hi);
  read(obj, where, "step", r.step);
}

ordered_json write_input(const GaussianInput& in) {
  ordered_json j;
  j["a"] = in.a;
  j["p"] = in.p;
  j["w"] = in.w;
  return j;
}

ordered_json write_range(const Range& r) {
  ordered_json j;
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  j["step"] = r.step;
  return j;
}

void validate_input(const GaussianInput& in, const std::string& where) {
  if (!std::isfinite(in.a)) throw ConfigError(where + ".a", where + ".a: must be finite");
  if (!std::isfinite(in.p)) throw ConfigError(where + ".p", where + ".p: must be finite");
  if (!(in.w > 0) || !std::isfinite(in.w)) throw ConfigError(where + ".w", where + ".w: must be > 0");
}

void validate_range(const Range& r, const std::string& where) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo <= r.hi))
    throw ConfigError(where + ".lo", where + ": lo must be <= hi");
  if (!(r.step > 0) || !std::isfinite(r.step))
    throw ConfigError(where + ".step", where + ".step: must be > 0");
}

}  // namespace

void RunConfig::validate() const {
  try {
    model.field.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("field." + e.key(), std::string("field.") + e.what());
  }
  validate_input(model.target, "inputs.target");
  validate_input(model.competitor, "inputs.competitor");
  validate_range(sweep1d_mp, "sweep1d.a_mp");
  validate_range(sweep2d_mp, "sweep2d.a_mp");
  validate_range(sweep2d_target, "sweep2d.a_target");
  if (n_trials < 1) throw ConfigError("run.n_trials", "run.n_trials: must be >= 1");
}

RunConfig parse_config(std::string_view text) {
  json root;
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("config parse error: ") + e.what());
    }
  }

  RunConfig c;
  check_keys(root, "", {"field", "inputs", "sweep1d", "sweep2d", "run"});
  if (root.contains("field")) {
    const auto& f = root["field"];
    check_keys(f, "field",
               {"tau", "h", "beta", "c_exc", "c_inh", "c_glob", "sigma_exc", "sigma_inh", "q",
                "field_size", "dt", "n_steps", "initial_level", "initial_noise", "noise_smoothing"});
    auto& p = c.model.field;
    read(f, "field", "tau", p.tau);
    read(f, "field", "h", p.h);
    read(f, "field", "beta", p.beta);
    read(f, "field", "c_exc", p.c_exc);
    read(f, "field", "c_inh", p.c_inh);
    read(f, "field", "c_glob", p.c_glob);
    read(f, "field", "sigma_exc", p.sigma_exc);
    read(f, "field", "sigma_inh", p.sigma_inh);
    read(f, "field", "q", p.q);
    read(f, "field", "field_size", p.field_size);
    read(f, "field", "dt", p.dt);
    read(f, "field", "n_steps", p.n_steps);
    read(f, "field", "initial_level", p.initial_level);
    read(f, "field", "initial_noise", p.initial_noise);
    read(f, "field", "noise_smoothing", p.noise_smoothing);
  }
  if (root.contains("inputs")) {
    const auto& in = root["inputs"];
    check_keys(in, "inputs", {"target", "competitor"});
    if (in.contains("target")) read_input(in["target"], "inputs.target", c.model.target);
    if (in.contains("competitor")) read_input(in["competitor"], "inputs.competitor", c.model.competitor);
  }
  if (root.contains("sweep1d")) {
    const auto& s = root["sweep1d"];
    check_keys(s, "sweep1d", {"a_mp"});
    if (s.contains("a_mp")) read_range(s["a_mp"], "sweep1d.a_mp", c.sweep1d_mp);
  }
  if (root.contains("sweep2d")) {
    const auto& s = root["sweep2d"];
    check_keys(s, "sweep2d", {"a_mp", "a_target"});
    if (s.contains("a_mp")) read_range(s["a_mp"], "sweep2d.a_mp", c.sweep2d_mp);
    if (s.contains("a_target")) read_range(s["a_target"], "sweep2d.a_target", c.sweep2d_target);
  }
  if (root.contains("run")) {
    const auto& r = root["run"];
    check_keys(r, "run", {"n_trials", "master_seed", "readout", "out_dir"});
    read(r, "run", "n_trials", c.n_trials);
    if (r.contains("master_seed")) {
      const auto& s = r["master_seed"];
      if (!s.is_number_unsigned())
        throw ConfigError("run.master_seed", "run.master_seed: must be a nonnegative integer");
      c.master_seed = s.get<std::uint64_t>();
    }
    if (r.contains("readout")) {
      std::string name;
      read(r, "run", "readout", name);
      try {
        c.readout = parse_readout(name);
      } catch (const UsageError& e) {
        throw ConfigError("run.readout", std::string("run.readout: ") + e.what());
      }
    }
    read(r, "run", "out_dir", c.out_dir);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  const auto& p = c.model.field;
  ordered_json field;
  field["tau"] = p.tau;
  field["h"] = p.h;
  field["beta"] = p.beta;
  field["c_exc"] = p.c_exc;
  field["c_inh"] = p.c_inh;
  field["c_glob"] = p.c_glob;
  field["sigma_exc"] = p.sigma_exc;
  field["sigma_inh"] = p.sigma_inh;
  field["q"] = p.q;
  field["field_size"] = p.field_size;
  field["dt"] = p.dt;
  field["n_steps"] = p.n_steps;
  field["initial_level"] = p.initial_level ? ordered_json(*p.initial_level) : ordered_json(nullptr);
  field["initial_noise"] = p.initial_noise;
  field["noise_smoothing"] = p.noise_smoothing;

  ordered_json root;
  root["field"] = field;
  root["inputs"]["target"] = write_input(c.model.target);
  root["inputs"]["competitor"] = write_input(c.model.competitor);
  root["sweep1d"]["a_mp"] = write_range(c.sweep1d_mp);
  root["sweep2d"]["a_mp"] = write_range(c.sweep2d_mp);
  root["sweep2d"]["a_target"] = write_range(c.sweep2d_target);
  root["run"]["n_trials"] = c.n_trials;
  root["run"]["master_seed"] = c.master_seed;
  root["run"]["readout"] = std::string(to_string(c.readout));
  root["run"]["out_dir"] = c.out_dir ? ordered_json(*c.out_dir) : ordered_json(nullptr);
  return root.dump(2) + "\n";
}

std::filesystem::path shipped_defaults_path() { return DNF_VOT_DEFAULTS_FILE; }

}  // namespace dnf

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "dnf/config.hpp"
#include "dnf/errors.hpp"

using namespace dnf;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("empty config gives the published defaults") {
  for (const char* text : {"", "  \n", "{}"}) {
    const RunConfig c = parse_config(text);
    const auto& p = c.model.field;
    CHECK(p.tau == 20);
    CHECK(p.h == -5);
    CHECK(p.beta == 4);
    CHECK(p.c_exc == 15);
    CHECK(p.c_inh == 5);
    CHECK(p.c_glob == 0.9);
    CHECK(p.sigma_exc == 5);
    CHECK(p.sigma_inh == 12.5);
    CHECK(p.q == 1);
    CHECK(p.field_size == 200);
    CHECK(p.dt == 1);
    CHECK(p.n_steps == 120);
    CHECK(c.model.target == GaussianInput{6, 70, 30, "target"});
    CHECK(c.model.competitor.p == 20);
    CHECK(c.model.competitor.w == 30);
    CHECK(c.n_trials == 500);
    CHECK(c.readout == ReadoutMethod::argmax);
    CHECK(c == RunConfig{});
  }
}

TEST_CASE("shipped defaults file matches the built-in defaults") {
  const auto path = shipped_defaults_path();
  REQUIRE(std::filesystem::exists(path));
  CHECK(load_config(path) == RunConfig{});
}

TEST_CASE("overrides") {
  const RunConfig c = parse_config(R"({"field": {"q": 0}, "inputs": {"competitor": {"a": -3}},
                                       "run": {"master_seed": 99, "readout": "centroid_above_threshold"}})");
  CHECK(c.model.field.q == 0.0);
  CHECK(c.model.competitor.a == -3.0);
  CHECK(c.model.competitor.p == 20.0);
  CHECK(c.master_seed == 99);
  CHECK(c.readout == ReadoutMethod::centroid_above_threshold);
  CHECK(c.model.field.tau == 20.0);
}

TEST_CASE("validation errors name the key") {
  CHECK(key_of(R"({"field": {"tau": 0}})") == "field.tau");
  try {
    parse_config(R"({"field": {"tau": 0}})");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tau") != std::string::npos);
  }
  CHECK(key_of(R"({"inputs": {"target": {"w": 0}}})") == "inputs.target.w");
  CHECK(key_of(R"({"inputs": {"competitor": {"w": -1}}})") == "inputs.competitor.w");
  CHECK(key_of(R"({"field": {"taux": 3}})") == "field.taux");
  CHECK(key_of(R"({"bogus": 1})") == "bogus");
  CHECK(key_of(R"({"field": {"beta": "steep"}})") == "field.beta");
  CHECK(key_of(R"({"field": {"field_size": 2.5}})") == "field.field_size");
  CHECK(key_of(R"({"run": {"readout": "mode"}})") == "run.readout");
  CHECK(key_of(R"({"run": {"n_trials": 0}})") == "run.n_trials");
  CHECK(key_of(R"({"run": {"master_seed": -4}})") == "run.master_seed");
  CHECK(key_of(R"({"sweep1d": {"a_mp": {"lo": 3, "hi": 1}}})") == "sweep1d.a_mp.lo");
  CHECK(key_of(R"({"sweep2d": {"a_target": {"step": 0}}})") == "sweep2d.a_target.step");
  CHECK(key_of("{not json") == "");
  CHECK(key_of(R"({"field": {"c_glob": 3.0}})") == "<accepted>");  // regime violation only warns
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.json"), ConfigError);
}

TEST_CASE("canonical form round-trips") {
  const RunConfig defaults;
  CHECK(parse_config(serialize_config(defaults)) == defaults);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  for (int i = 0; i < 25; ++i) {
    RunConfig c;
    c.model.field.tau = u(rng);
    c.model.field.h = -u(rng);
    c.model.field.c_glob = u(rng) / 37.0;
    c.model.field.sigma_inh = u(rng);
    c.model.field.q = u(rng) / 7.0;
    c.model.field.field_size = 100 + i;
    if (i % 2) c.model.field.initial_level = -u(rng) / 3.0;
    c.model.target = {u(rng), u(rng), u(rng), "target"};
    c.model.competitor = {-u(rng), u(rng), u(rng), "mp"};
    c.sweep1d_mp = {-u(rng), u(rng), 0.1 + u(rng) / 100.0};
    c.n_trials = 1 + i;
    c.master_seed = rng();
    c.readout = static_cast<ReadoutMethod>(i % 3);
    if (i % 3 == 0) c.out_dir = "runs/r" + std::to_string(i);

    const RunConfig once = parse_config(serialize_config(c));
    CHECK(once == c);
    CHECK(serialize_config(once) == serialize_config(c));
  }
}

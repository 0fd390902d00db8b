#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "noisediff/config.hpp"
#include "noisediff/errors.hpp"
#include "noisediff/report.hpp"

using namespace noisediff;
using nlohmann::json;

namespace {

std::string key_of(const json& j) {
  try {
    validate(config_from_json(j));
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  CHECK(config_from_json(json::object()) == ExperimentConfig{});
  CHECK(parse_config(std::nullopt) == ExperimentConfig{});
}

TEST_CASE("config round-trips through JSON") {
  ExperimentConfig cfg;
  cfg.noise = NoiseSpec::mixture(0.5, 64.0, true);
  cfg.sigma_mode = SigmaMode::kBetaTilde;
  cfg.reverse_noise = ReverseNoise::kGaussian;
  cfg.activation = Activation::kTanh;
  cfg.optimizer = OptimizerKind::kSgd;
  cfg.final_step_noiseless = false;
  cfg.error_metric = ErrorMetric::kAbsMean;
  cfg.base_seed = 18446744073709551615ull;
  cfg.learning_rate = 3.3e-4;
  cfg.x0 = 0.1;
  CHECK(config_from_json(config_to_json(cfg)) == cfg);
  CHECK(config_from_json(json::parse(config_to_json(cfg).dump())) == cfg);
  CHECK(config_from_json(config_to_json(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("bad keys and values are named") {
  CHECK(key_of(json{{"beta_end", 1.5}}) == "beta_end");
  CHECK(key_of(json{{"epochz", 3}}) == "epochz");
  CHECK(key_of(json{{"noise", {{"famly", "gaussian"}}}}) == "noise.famly");
  CHECK(key_of(json{{"noise", {{"family", "cauchy"}}}}) == "noise.family");
  CHECK(key_of(json{{"noise", {{"family", "mixture"}, {"mix_prob", 1.2}}}}) == "noise.mix_prob");
  CHECK(key_of(json{{"trials", "many"}}) == "trials");
  CHECK(key_of(json{{"epochs", 2.5}}) == "epochs");
  CHECK(key_of(json{{"seed", -1}}) == "seed");
  CHECK(key_of(json{{"sigma_mode", "sqrt"}}) == "sigma_mode");
  CHECK(key_of(json::array()) == "<root>");
  CHECK(key_of(json{{"steps", 10}, {"epochs", 0}}) == "");
}

TEST_CASE("flags override the file") {
  const auto path = temp_file("noisediff_cfg_test.json", R"({"trials": 100, "epochs": 7,
      "noise": {"family": "mixture", "mix_prob": 0.9}})");
  ConfigOverrides o;
  o.trials = 5;
  o.normalize_mixture = true;
  o.metric = "abs_mean";
  const ExperimentConfig cfg = parse_config(path, o);
  CHECK(cfg.trials == 5);
  CHECK(cfg.epochs == 7);
  CHECK(cfg.noise.normalize_to_unit);
  CHECK(cfg.error_metric == ErrorMetric::kAbsMean);
  CHECK(parse_config(path).trials == 100);

  o = {};
  o.gens_per_trial = 0;
  CHECK_THROWS_AS(parse_config(path, o), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("unreadable or malformed files") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/dir/cfg.json"), ConfigError);
  const auto path = temp_file("noisediff_bad.json", "{ not json");
  CHECK_THROWS_AS(load_config_file(path), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("real formatting") {
  CHECK(format_real(0.054758823) == "0.054758823");
  CHECK(format_real(1.0 / 3.0) == "0.333333333");
  CHECK(format_real(7.0) == "7");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(-INFINITY) == "-inf");
}

TEST_CASE("CSV layout") {
  ExperimentRun run;
  run.experiment = "table2";
  for (std::string name : {"gaussian", "mix0.9"}) {
    DistributionRun row;
    row.label = name;
    for (long i = 0; i < 2; ++i) {
      TrialResult r;
      r.trial_index = i;
      r.seed_used = 9;
      r.final_epoch_loss = 0.5;
      r.gen_error = 0.25 + i;
      row.trials.push_back(r);
    }
    row.summary = summarize(row.trials, name);
    run.rows.push_back(row);
  }
  std::ostringstream trials, summary;
  write_trials_csv(trials, {run});
  write_summary_csv(summary, {run});
  CHECK(trials.str() ==
        "experiment,distribution,trial,seed,final_loss,gen_error,diverged\n"
        "table2,gaussian,0,9,0.5,0.25,false\n"
        "table2,gaussian,1,9,0.5,1.25,false\n"
        "table2,mix0.9,0,9,0.5,0.25,false\n"
        "table2,mix0.9,1,9,0.5,1.25,false\n");
  CHECK(summary.str() ==
        "experiment,distribution,n_trials,n_diverged,mean_error,std_error\n"
        "table2,gaussian,2,0,0.75,0.707106781\n"
        "table2,mix0.9,2,0,0.75,0.707106781\n");
}

TEST_CASE("manifest echoes a config that reproduces the run") {
  RunManifest m;
  m.experiment = "table1";
  m.config.trials = 4;
  m.config.base_seed = 11;
  m.worker_count = 4;
  const json j = manifest_to_json(m);
  CHECK(j["artifact_version"] == std::string(kVersion));
  CHECK(j["worker_count"] == 4);
  CHECK(config_from_json(j["config_echo"]) == m.config);
}

TEST_CASE("weights dump is flat and ordered") {
  MlpParams p;
  for (std::size_t i = 0; i < kParamCount; ++i) p.values[i] = static_cast<double>(i);
  const json j = weights_to_json(p);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == kParamCount);
  CHECK(j[0] == p.w1(0, 0));
  CHECK(j[1] == p.w1(0, 1));
  CHECK(j[64] == p.b1(0));
  CHECK(j[96] == p.w2(0));
  CHECK(j[128] == p.b2());
}

TEST_CASE("write failures name the path") {
  try {
    write_text_file("/nonexistent/dir/out.csv", "x");
    FAIL("expected failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
  }
}

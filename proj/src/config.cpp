#include "noisediff/config.hpp"

#include <fstream>
#include <set>

#include "noisediff/errors.hpp"

namespace noisediff {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "x0", "beta_start", "beta_end", "steps", "noise", "reverse_noise", "sigma_mode",
    "final_step_noiseless", "activation", "optimizer", "epochs", "samples_per_epoch",
    "batch_size", "learning_rate", "trials", "gens_per_trial", "error_metric", "seed"};
const std::set<std::string> kNoiseKeys = {"family", "mix_prob", "big_variance", "normalize"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
  if (!j.is_object()) {
    throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

double get_real(const json& j, const std::string& key, double fallback, const std::string& name) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(name, "expected a number");
  return j[key].get<double>();
}

long get_int(const json& j, const std::string& key, long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ConfigError(key, "expected an integer");
  return j[key].get<long>();
}

bool get_bool(const json& j, const std::string& key, bool fallback, const std::string& name) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw ConfigError(name, "expected true or false");
  return j[key].get<bool>();
}

std::optional<std::string> get_string(const json& j, const std::string& key, const std::string& name) {
  if (!j.contains(key)) return std::nullopt;
  if (!j[key].is_string()) throw ConfigError(name, "expected a string");
  return j[key].get<std::string>();
}

}  // namespace

json config_to_json(const ExperimentConfig& cfg) {
  return json{
      {"x0", cfg.x0},
      {"beta_start", cfg.beta_start},
      {"beta_end", cfg.beta_end},
      {"steps", cfg.steps},
      {"noise",
       {{"family", family_name(cfg.noise.family)},
        {"mix_prob", cfg.noise.mix_prob},
        {"big_variance", cfg.noise.big_variance},
        {"normalize", cfg.noise.normalize_to_unit}}},
      {"reverse_noise", reverse_noise_name(cfg.reverse_noise)},
      {"sigma_mode", sigma_mode_name(cfg.sigma_mode)},
      {"final_step_noiseless", cfg.final_step_noiseless},
      {"activation", activation_name(cfg.activation)},
      {"optimizer", optimizer_name(cfg.optimizer)},
      {"epochs", cfg.epochs},
      {"samples_per_epoch", cfg.samples_per_epoch},
      {"batch_size", cfg.batch_size},
      {"learning_rate", cfg.learning_rate},
      {"trials", cfg.trials},
      {"gens_per_trial", cfg.gens_per_trial},
      {"error_metric", metric_name(cfg.error_metric)},
      {"seed", cfg.base_seed},
  };
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig cfg) {
  reject_unknown(j, kTopLevelKeys, "");
  cfg.x0 = get_real(j, "x0", cfg.x0, "x0");
  cfg.beta_start = get_real(j, "beta_start", cfg.beta_start, "beta_start");
  cfg.beta_end = get_real(j, "beta_end", cfg.beta_end, "beta_end");
  cfg.steps = static_cast<int>(get_int(j, "steps", cfg.steps));

  if (j.contains("noise")) {
    const json& n = j["noise"];
    reject_unknown(n, kNoiseKeys, "noise.");
    if (auto family = get_string(n, "family", "noise.family")) {
      cfg.noise.family = parse_family(*family);
    }
    cfg.noise.mix_prob = get_real(n, "mix_prob", cfg.noise.mix_prob, "noise.mix_prob");
    cfg.noise.big_variance = get_real(n, "big_variance", cfg.noise.big_variance, "noise.big_variance");
    cfg.noise.normalize_to_unit = get_bool(n, "normalize", cfg.noise.normalize_to_unit, "noise.normalize");
  }

  if (auto s = get_string(j, "reverse_noise", "reverse_noise")) cfg.reverse_noise = parse_reverse_noise(*s);
  if (auto s = get_string(j, "sigma_mode", "sigma_mode")) cfg.sigma_mode = parse_sigma_mode(*s);
  cfg.final_step_noiseless =
      get_bool(j, "final_step_noiseless", cfg.final_step_noiseless, "final_step_noiseless");
  if (auto s = get_string(j, "activation", "activation")) cfg.activation = parse_activation(*s);
  if (auto s = get_string(j, "optimizer", "optimizer")) cfg.optimizer = parse_optimizer(*s);
  cfg.epochs = get_int(j, "epochs", cfg.epochs);
  cfg.samples_per_epoch = get_int(j, "samples_per_epoch", cfg.samples_per_epoch);
  cfg.batch_size = get_int(j, "batch_size", cfg.batch_size);
  cfg.learning_rate = get_real(j, "learning_rate", cfg.learning_rate, "learning_rate");
  cfg.trials = get_int(j, "trials", cfg.trials);
  cfg.gens_per_trial = get_int(j, "gens_per_trial", cfg.gens_per_trial);
  if (auto s = get_string(j, "error_metric", "error_metric")) cfg.error_metric = parse_metric(*s);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    cfg.base_seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file,
                              const ConfigOverrides& o) {
  ExperimentConfig cfg = file ? load_config_file(*file) : ExperimentConfig{};
  if (o.trials) cfg.trials = *o.trials;
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.gens_per_trial) cfg.gens_per_trial = *o.gens_per_trial;
  if (o.metric) cfg.error_metric = parse_metric(*o.metric);
  if (o.reverse_noise) cfg.reverse_noise = parse_reverse_noise(*o.reverse_noise);
  if (o.sigma_mode) cfg.sigma_mode = parse_sigma_mode(*o.sigma_mode);
  if (o.normalize_mixture) cfg.noise.normalize_to_unit = true;
  validate(cfg);
  return cfg;
}

}  // namespace noisediff

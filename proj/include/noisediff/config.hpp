#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "noisediff/experiment.hpp"

namespace noisediff {

// JSON form of a config. Every key is written, so the output read back by
// config_from_json reproduces the same config.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Reads keys from j on top of `base`. Unknown keys, wrong types and
// out-of-range values throw ConfigError naming the key. Missing keys keep
// the base value.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

ExperimentConfig load_config_file(const std::filesystem::path& path);

// Command-line settings; each one that is set wins over the file.
struct ConfigOverrides {
  std::optional<long> trials;
  std::optional<std::uint64_t> seed;
  std::optional<long> epochs;
  std::optional<long> gens_per_trial;
  std::optional<std::string> metric;
  std::optional<std::string> reverse_noise;
  std::optional<std::string> sigma_mode;
  bool normalize_mixture = false;
};

// Defaults, then the file (if any), then the overrides; validated.
ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file,
                              const ConfigOverrides& overrides = {});

}  // namespace noisediff

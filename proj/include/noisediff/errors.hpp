#pragma once

#include <stdexcept>
#include <string>

namespace noisediff {

// Invalid configuration value. `key()` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A computation left the finite range (or the |x| <= 1e6 divergence bound).
// `step()` is the diffusion step or training epoch where it happened.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int step, const std::string& message)
      : std::runtime_error(message + " (step " + std::to_string(step) + ")"),
        step_(step) {}

  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace noisediff

#include "noisediff/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "noisediff/errors.hpp"

namespace noisediff {

Schedule Schedule::linear(double beta_start, double beta_end, int steps) {
  if (steps < 1) throw ConfigError("steps", "must be >= 1");
  if (!(beta_start > 0.0 && beta_start < 1.0)) {
    throw ConfigError("beta_start", "must lie in (0, 1)");
  }
  if (!(beta_end > 0.0 && beta_end < 1.0)) {
    throw ConfigError("beta_end", "must lie in (0, 1)");
  }
  if (beta_end < beta_start) {
    throw ConfigError("beta_end", "must be >= beta_start");
  }

  Schedule s;
  const auto n = static_cast<std::size_t>(steps);
  s.beta_.resize(n);
  s.alpha_.resize(n);
  s.alpha_bar_.resize(n);
  double running = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    s.beta_[i] = beta_start + frac * (beta_end - beta_start);
    s.alpha_[i] = 1.0 - s.beta_[i];
    running *= s.alpha_[i];
    s.alpha_bar_[i] = running;
  }
  return s;
}

double Schedule::retention(int t) const { return std::sqrt(alpha_bar(t)); }

std::size_t Schedule::index(int t) const {
  if (t < 1 || t > steps()) {
    throw std::out_of_range("diffusion step " + std::to_string(t) +
                            " outside 1.." + std::to_string(steps()));
  }
  return static_cast<std::size_t>(t - 1);
}

}  // namespace noisediff

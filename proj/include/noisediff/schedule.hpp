#pragma once

#include <span>
#include <vector>

namespace noisediff {

// Linear variance schedule. Diffusion steps are numbered t = 1..T; the
// accessors take that 1-based t and read slot t-1 of the storage vectors.
class Schedule {
 public:
  // Throws ConfigError unless 0 < beta_start <= beta_end < 1 and steps >= 1.
  static Schedule linear(double beta_start, double beta_end, int steps);

  int steps() const { return static_cast<int>(beta_.size()); }

  // Throw std::out_of_range for t outside 1..T.
  double beta(int t) const { return beta_.at(index(t)); }
  double alpha(int t) const { return alpha_.at(index(t)); }
  double alpha_bar(int t) const { return alpha_bar_.at(index(t)); }

  // alpha_bar at t-1, with alpha_bar(0) = 1.
  double alpha_bar_prev(int t) const { return t == 1 ? 1.0 : alpha_bar(t - 1); }

  // Fraction of the signal surviving to step t: sqrt(alpha_bar(t)).
  double retention(int t) const;

  std::span<const double> betas() const { return beta_; }
  std::span<const double> alpha_bars() const { return alpha_bar_; }

 private:
  Schedule() = default;
  std::size_t index(int t) const;

  std::vector<double> beta_;
  std::vector<double> alpha_;
  std::vector<double> alpha_bar_;
};

}  // namespace noisediff

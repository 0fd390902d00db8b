#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "noisediff/prng.hpp"

namespace noisediff {

inline constexpr std::size_t kInputs = 2;  // (x_t, t/T)
inline constexpr std::size_t kHidden = 32;
inline constexpr std::size_t kParamCount = kHidden * kInputs + kHidden + kHidden + 1;
static_assert(kParamCount == 129);

enum class Activation { kRelu, kTanh };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);  // throws ConfigError

// Weights of the 2 -> 32 -> 1 noise predictor, stored flat in the order
// W1 (row-major, one row per hidden unit), b1, W2, b2. The same struct
// holds gradients and optimizer moments.
struct MlpParams {
  std::array<double, kParamCount> values{};

  static constexpr std::size_t kW1 = 0;
  static constexpr std::size_t kB1 = kW1 + kHidden * kInputs;
  static constexpr std::size_t kW2 = kB1 + kHidden;
  static constexpr std::size_t kB2 = kW2 + kHidden;

  double& w1(std::size_t unit, std::size_t input) { return values[kW1 + unit * kInputs + input]; }
  double w1(std::size_t unit, std::size_t input) const { return values[kW1 + unit * kInputs + input]; }
  double& b1(std::size_t unit) { return values[kB1 + unit]; }
  double b1(std::size_t unit) const { return values[kB1 + unit]; }
  double& w2(std::size_t unit) { return values[kW2 + unit]; }
  double w2(std::size_t unit) const { return values[kW2 + unit]; }
  double& b2() { return values[kB2]; }
  double b2() const { return values[kB2]; }

  bool all_finite() const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

// Glorot-uniform weights, zero biases. Consumes exactly kHidden * kInputs +
// kHidden uniforms from g (W1 first, then W2).
MlpParams init_params(RngStream& g);

// eps_hat = W2 . act(W1 [x_t, t_norm] + b1) + b2.
// Throws std::domain_error on non-finite input.
double forward(const MlpParams& p, double x_t, double t_norm,
               Activation act = Activation::kRelu);

struct TrainBatch {
  std::vector<double> x_t;
  std::vector<double> t_norm;
  std::vector<double> target;

  std::size_t size() const { return target.size(); }
  bool empty() const { return target.empty(); }
  void clear() {
    x_t.clear();
    t_norm.clear();
    target.clear();
  }
  void add(double x, double t, double eps) {
    x_t.push_back(x);
    t_norm.push_back(t);
    target.push_back(eps);
  }
};

struct LossAndGrad {
  double loss = 0.0;
  MlpParams grad;
};

// Mean squared error of the predicted noise and its exact gradient. The
// ReLU derivative at 0 is taken as 0. A non-finite loss is returned as-is;
// callers treat it as divergence. Throws std::invalid_argument on an empty
// or ragged batch.
LossAndGrad loss_and_grad(const MlpParams& p, const TrainBatch& batch,
                          Activation act = Activation::kRelu);

// Worst relative error between analytic and central-difference gradients,
// with denominators floored at 1e-8.
double finite_diff_check(const MlpParams& p, const TrainBatch& batch, double h,
                         Activation act = Activation::kRelu);

struct AdamState {
  MlpParams m;
  MlpParams v;
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update over parallel spans. `step` is the
// 1-based update index used for bias correction.
void adam_update(std::span<double> params, std::span<double> m, std::span<double> v,
                 std::span<const double> grad, long step, double lr, double beta1,
                 double beta2, double epsilon);

void adam_step(MlpParams& p, AdamState& s, const MlpParams& grad, double lr);

void sgd_step(MlpParams& p, const MlpParams& grad, double lr);

}  // namespace noisediff

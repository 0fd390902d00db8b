#pragma once

#include <functional>
#include <string_view>

#include "noisediff/mlp.hpp"
#include "noisediff/noise.hpp"
#include "noisediff/prng.hpp"
#include "noisediff/schedule.hpp"

namespace noisediff {

// States with |x| above this, or non-finite, count as diverged.
inline constexpr double kDivergenceBound = 1e6;

// kZero switches off the injected noise entirely; it exists for the
// deterministic oracle checks and is not a DDPM variance choice.
enum class SigmaMode { kBeta, kBetaTilde, kZero };

std::string_view sigma_mode_name(SigmaMode mode);
SigmaMode parse_sigma_mode(std::string_view name);  // throws ConfigError

struct SamplerOptions {
  NoiseSpec reverse_noise;  // distribution of z in each reverse step
  NoiseSpec init_noise;     // distribution of x_T
  SigmaMode sigma_mode = SigmaMode::kBeta;
  bool final_step_noiseless = true;

  friend bool operator==(const SamplerOptions&, const SamplerOptions&) = default;
};

// Noise prediction eps_hat(x_t, t) for 1-based step t.
using Predictor = std::function<double(double x_t, int t)>;

// Trained network, evaluated with t_norm = t / T.
Predictor mlp_predictor(const MlpParams& params, const Schedule& s,
                        Activation act = Activation::kRelu);

// Exact noise for a point-mass data distribution at x0:
// eps*(x_t, t) = (x_t - sqrt(abar_t) x0) / sqrt(1 - abar_t).
Predictor oracle_predictor(double x0, const Schedule& s);

// Forward corruption sqrt(abar_t) x0 + sqrt(1 - abar_t) eps.
double q_sample(double x0, int t, const Schedule& s, double eps);

// Standard deviation of the injected noise at step t.
double reverse_sigma(const Schedule& s, int t, SigmaMode mode);

// One ancestral step x_t -> x_{t-1}. No draw is taken from g when the
// injected noise is switched off (kZero, or t == 1 with
// final_step_noiseless). Throws DivergenceError carrying t.
double reverse_step(const Predictor& pred, double x_t, int t, const Schedule& s,
                    const SamplerOptions& opts, RngStream& g);

// Runs the chain from a given x_T down to x_0.
double denoise_from(const Predictor& pred, double x_T, const Schedule& s,
                    const SamplerOptions& opts, RngStream& g);

// Draws x_T from opts.init_noise, then denoises.
double generate(const Predictor& pred, const Schedule& s, const SamplerOptions& opts,
                RngStream& g);

}  // namespace noisediff

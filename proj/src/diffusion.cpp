#include "noisediff/diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "noisediff/errors.hpp"

namespace noisediff {

std::string_view sigma_mode_name(SigmaMode mode) {
  switch (mode) {
    case SigmaMode::kBeta: return "beta";
    case SigmaMode::kBetaTilde: return "beta_tilde";
    case SigmaMode::kZero: return "zero";
  }
  return "?";
}

SigmaMode parse_sigma_mode(std::string_view name) {
  if (name == "beta") return SigmaMode::kBeta;
  if (name == "beta_tilde") return SigmaMode::kBetaTilde;
  if (name == "zero") return SigmaMode::kZero;
  throw ConfigError("sigma_mode", "unknown mode '" + std::string(name) + "' (beta|beta_tilde|zero)");
}

Predictor mlp_predictor(const MlpParams& params, const Schedule& s, Activation act) {
  const double inv_steps = 1.0 / static_cast<double>(s.steps());
  return [params, inv_steps, act](double x_t, int t) {
    return forward(params, x_t, static_cast<double>(t) * inv_steps, act);
  };
}

Predictor oracle_predictor(double x0, const Schedule& s) {
  return [x0, s](double x_t, int t) {
    const double abar = s.alpha_bar(t);
    return (x_t - std::sqrt(abar) * x0) / std::sqrt(1.0 - abar);
  };
}

double q_sample(double x0, int t, const Schedule& s, double eps) {
  const double abar = s.alpha_bar(t);
  return std::sqrt(abar) * x0 + std::sqrt(1.0 - abar) * eps;
}

double reverse_sigma(const Schedule& s, int t, SigmaMode mode) {
  switch (mode) {
    case SigmaMode::kBeta:
      return std::sqrt(s.beta(t));
    case SigmaMode::kBetaTilde:
      return std::sqrt(s.beta(t) * (1.0 - s.alpha_bar_prev(t)) / (1.0 - s.alpha_bar(t)));
    case SigmaMode::kZero:
      return 0.0;
  }
  throw std::logic_error("unknown sigma mode");
}

double reverse_step(const Predictor& pred, double x_t, int t, const Schedule& s,
                    const SamplerOptions& opts, RngStream& g) {
  const double beta = s.beta(t);
  const double eps_hat = pred(x_t, t);
  double x = (x_t - beta / std::sqrt(1.0 - s.alpha_bar(t)) * eps_hat) / std::sqrt(s.alpha(t));

  const bool noiseless = opts.sigma_mode == SigmaMode::kZero ||
                         (t == 1 && opts.final_step_noiseless);
  if (!noiseless) x += reverse_sigma(s, t, opts.sigma_mode) * sample(opts.reverse_noise, g);

  if (!std::isfinite(x) || std::abs(x) > kDivergenceBound) {
    throw DivergenceError(t, "reverse chain diverged");
  }
  return x;
}

double denoise_from(const Predictor& pred, double x_T, const Schedule& s,
                    const SamplerOptions& opts, RngStream& g) {
  double x = x_T;
  for (int t = s.steps(); t >= 1; --t) x = reverse_step(pred, x, t, s, opts, g);
  return x;
}

double generate(const Predictor& pred, const Schedule& s, const SamplerOptions& opts,
                RngStream& g) {
  return denoise_from(pred, sample(opts.init_noise, g), s, opts, g);
}

}  // namespace noisediff

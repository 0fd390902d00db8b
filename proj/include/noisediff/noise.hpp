#pragma once

#include <string>
#include <string_view>

#include "noisediff/prng.hpp"

namespace noisediff {

enum class NoiseFamily { kGaussian, kUniformUnit, kArcsineUnit, kGaussianMixture };

// Declarative noise distribution. All families have mean zero.
//
// kArcsineUnit is Beta(1/2, 1/2) shifted and scaled to unit variance. Beta
// parameters must be positive, so a "Beta(-0.5, -0.5)" noise is read as
// this arcsine law: the bimodal shape with peaks at the support endpoints.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::kGaussian;
  double mix_prob = 0.9;        // P(N(0,1) component), mixture only
  double big_variance = 100.0;  // variance of the wide component, mixture only
  bool normalize_to_unit = false;

  static NoiseSpec gaussian() { return {}; }
  static NoiseSpec uniform() { return {NoiseFamily::kUniformUnit}; }
  static NoiseSpec arcsine() { return {NoiseFamily::kArcsineUnit}; }
  static NoiseSpec mixture(double mix_prob, double big_variance = 100.0,
                           bool normalize = false) {
    return {NoiseFamily::kGaussianMixture, mix_prob, big_variance, normalize};
  }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

// Throws ConfigError when mix_prob is outside [0, 1] or big_variance <= 0.
void validate(const NoiseSpec& spec);

// One draw. Uniform consumption per call:
//   gaussian: one Gaussian request (a pair of uniforms every second call)
//   uniform, arcsine: one uniform
//   mixture: one uniform selector, then one Gaussian request
double sample(const NoiseSpec& spec, RngStream& g);

double analytic_variance(const NoiseSpec& spec);

struct MomentReport {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess
};

// Sample moments of n >= 2 draws.
MomentReport moment_report(const NoiseSpec& spec, long n, RngStream& g);

std::string_view family_name(NoiseFamily family);
NoiseFamily parse_family(std::string_view name);  // throws ConfigError

// Short row label: gaussian, uniform, arcsine, mix0.9, ...
std::string label(const NoiseSpec& spec);

}  // namespace noisediff

#include "noisediff/noise.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "noisediff/errors.hpp"

namespace noisediff {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
// Beta(1/2, 1/2) has mean 1/2 and variance 1/8.
const double kArcsineScale = 1.0 / std::sqrt(0.125);

double raw_mixture_variance(const NoiseSpec& spec) {
  return spec.mix_prob + (1.0 - spec.mix_prob) * spec.big_variance;
}

}  // namespace

void validate(const NoiseSpec& spec) {
  if (spec.family != NoiseFamily::kGaussianMixture) return;
  if (!(spec.mix_prob >= 0.0 && spec.mix_prob <= 1.0)) {
    throw ConfigError("noise.mix_prob", "must lie in [0, 1]");
  }
  if (!(spec.big_variance > 0.0) || !std::isfinite(spec.big_variance)) {
    throw ConfigError("noise.big_variance", "must be positive and finite");
  }
}

double sample(const NoiseSpec& spec, RngStream& g) {
  switch (spec.family) {
    case NoiseFamily::kGaussian:
      return g.next_gaussian();
    case NoiseFamily::kUniformUnit:
      return kSqrt3 * (2.0 * g.next_uniform01() - 1.0);
    case NoiseFamily::kArcsineUnit: {
      const double s = std::sin(0.5 * std::numbers::pi * g.next_uniform01());
      return (s * s - 0.5) * kArcsineScale;
    }
    case NoiseFamily::kGaussianMixture: {
      const bool narrow = g.next_uniform01() < spec.mix_prob;
      double z = g.next_gaussian();
      if (!narrow) z *= std::sqrt(spec.big_variance);
      if (spec.normalize_to_unit) z /= std::sqrt(raw_mixture_variance(spec));
      return z;
    }
  }
  throw std::logic_error("unknown noise family");
}

double analytic_variance(const NoiseSpec& spec) {
  if (spec.family != NoiseFamily::kGaussianMixture || spec.normalize_to_unit) {
    return 1.0;
  }
  return raw_mixture_variance(spec);
}

MomentReport moment_report(const NoiseSpec& spec, long n, RngStream& g) {
  if (n < 2) throw std::invalid_argument("moment_report needs n >= 2");
  // Welford-style running central moments (Terriberry's extension).
  double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (long i = 0; i < n; ++i) {
    const double x = sample(spec, g);
    const double k = static_cast<double>(i + 1);
    const double delta = x - mean;
    const double delta_n = delta / k;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * (k - 1.0);
    mean += delta_n;
    m4 += term1 * delta_n2 * (k * k - 3.0 * k + 3.0) + 6.0 * delta_n2 * m2 -
          4.0 * delta_n * m3;
    m3 += term1 * delta_n * (k - 2.0) - 3.0 * delta_n * m2;
    m2 += term1;
  }
  const double nn = static_cast<double>(n);
  MomentReport r;
  r.mean = mean;
  r.variance = m2 / (nn - 1.0);
  if (m2 > 0.0) {
    r.skewness = std::sqrt(nn) * m3 / std::pow(m2, 1.5);
    r.kurtosis = nn * m4 / (m2 * m2) - 3.0;
  }
  return r;
}

std::string_view family_name(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kGaussian: return "gaussian";
    case NoiseFamily::kUniformUnit: return "uniform";
    case NoiseFamily::kArcsineUnit: return "arcsine";
    case NoiseFamily::kGaussianMixture: return "mixture";
  }
  return "?";
}

NoiseFamily parse_family(std::string_view name) {
  if (name == "gaussian") return NoiseFamily::kGaussian;
  if (name == "uniform") return NoiseFamily::kUniformUnit;
  if (name == "arcsine") return NoiseFamily::kArcsineUnit;
  if (name == "mixture") return NoiseFamily::kGaussianMixture;
  throw ConfigError("noise.family", "unknown family '" + std::string(name) +
                                        "' (gaussian|uniform|arcsine|mixture)");
}

std::string label(const NoiseSpec& spec) {
  if (spec.family != NoiseFamily::kGaussianMixture) {
    return std::string(family_name(spec.family));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "mix%g", spec.mix_prob);
  std::string out = buf;
  if (spec.big_variance != 100.0) {
    std::snprintf(buf, sizeof buf, "_v%g", spec.big_variance);
    out += buf;
  }
  if (spec.normalize_to_unit) out += "_norm";
  return out;
}

}  // namespace noisediff

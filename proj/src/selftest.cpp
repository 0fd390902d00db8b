#include "noisediff/selftest.hpp"

#include <cmath>
#include <cstdio>

#include "noisediff/diffusion.hpp"
#include "noisediff/noise.hpp"
#include "noisediff/schedule.hpp"

namespace noisediff {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

bool near_kink(const MlpParams& p, double x, double t) {
  for (std::size_t j = 0; j < kHidden; ++j) {
    if (std::abs(p.w1(j, 0) * x + p.w1(j, 1) * t + p.b1(j)) < 1e-4) return true;
  }
  return false;
}

}  // namespace

GradCheckCase random_grad_check_case(RngStream& g, std::size_t size) {
  GradCheckCase c;
  c.params = init_params(g);
  for (std::size_t j = 0; j < kHidden; ++j) c.params.b1(j) = 0.5 * (2.0 * g.next_uniform01() - 1.0);
  c.params.b2() = g.next_gaussian();
  while (c.batch.size() < size) {
    const double x = 6.0 * g.next_uniform01() - 3.0;
    const double t = 1.0 - g.next_uniform01();  // (0, 1]
    if (near_kink(c.params, x, t)) continue;
    c.batch.add(x, t, g.next_gaussian());
  }
  return c;
}

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::vector<CheckResult> checks;
  constexpr long kDraws = 1'000'000;

  const NoiseSpec unit_families[] = {NoiseSpec::gaussian(), NoiseSpec::uniform(), NoiseSpec::arcsine()};
  std::uint64_t stream = 0;
  for (const NoiseSpec& spec : unit_families) {
    RngStream g = seed_stream(seed, stream++);
    const MomentReport m = moment_report(spec, kDraws, g);
    const bool ok = std::abs(m.mean) < 0.01 && std::abs(m.variance - 1.0) < 0.02;
    checks.push_back({"moments/" + label(spec), ok, fmt("mean %.5f variance %.5f", m.mean, m.variance)});
    if (spec.family == NoiseFamily::kArcsineUnit) {
      const bool kurt_ok = m.kurtosis >= -1.55 && m.kurtosis <= -1.45;
      checks.push_back({"kurtosis/arcsine", kurt_ok, fmt("excess kurtosis %.4f", m.kurtosis)});
    }
  }
  {
    RngStream g = seed_stream(seed, stream++);
    const MomentReport m = moment_report(NoiseSpec::mixture(0.9, 100.0, false), kDraws, g);
    const bool ok = m.variance >= 10.6 && m.variance <= 11.2;
    checks.push_back({"moments/mix0.9", ok, fmt("variance %.4f (analytic 10.9)", m.variance)});
  }

  {
    RngStream g = seed_stream(seed, stream++);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const GradCheckCase c = random_grad_check_case(g);
      worst = std::max(worst, finite_diff_check(c.params, c.batch, 1e-6));
    }
    checks.push_back({"gradient/finite-difference", worst < 1e-5, fmt("max relative error %.3g", worst)});
  }

  const double x0 = 7.0;
  const Schedule schedule = Schedule::linear(1e-4, 0.02, 500);
  const Predictor oracle = oracle_predictor(x0, schedule);
  {
    SamplerOptions noiseless;
    noiseless.sigma_mode = SigmaMode::kZero;
    RngStream g = seed_stream(seed, stream++);
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double start = -100.0 + 10.0 * i;
      worst = std::max(worst, std::abs(denoise_from(oracle, start, schedule, noiseless, g) - x0));
    }
    checks.push_back({"oracle/noiseless-contraction", worst < 1e-6, fmt("max |x0_hat - 7| %.3g", worst)});
  }
  {
    SamplerOptions opts;
    RngStream g = seed_stream(seed, stream++);
    double sum = 0.0;
    for (int i = 0; i < 1000; ++i) sum += generate(oracle, schedule, opts, g);
    const double mean = sum / 1000.0;
    checks.push_back({"oracle/stochastic-mean", mean >= 6.95 && mean <= 7.05,
                      fmt("mean of 1000 samples %.6f", mean)});
  }
  return checks;
}

}  // namespace noisediff

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "noisediff/diffusion.hpp"
#include "noisediff/mlp.hpp"
#include "noisediff/noise.hpp"
#include "noisediff/schedule.hpp"

namespace noisediff {

enum class ErrorMetric { kMeanAbs, kAbsMean };
enum class OptimizerKind { kAdam, kSgd };

// Where the configured noise replaces the Gaussian. kSame: forward
// training noise, reverse-step injections and x_T. kGaussian: forward
// training noise only.
enum class ReverseNoise { kSame, kGaussian };

std::string_view metric_name(ErrorMetric m);
ErrorMetric parse_metric(std::string_view name);
std::string_view optimizer_name(OptimizerKind o);
OptimizerKind parse_optimizer(std::string_view name);
std::string_view reverse_noise_name(ReverseNoise r);
ReverseNoise parse_reverse_noise(std::string_view name);

// Defaults reproduce the reference setup: target 7, linear schedule
// (1e-4, 0.02, 500), 3000 epochs of 1000 samples in batches of 64, Adam at
// lr 1e-3, 100 trials.
struct ExperimentConfig {
  double x0 = 7.0;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  int steps = 500;
  NoiseSpec noise;
  ReverseNoise reverse_noise = ReverseNoise::kSame;
  SigmaMode sigma_mode = SigmaMode::kBeta;
  bool final_step_noiseless = true;
  Activation activation = Activation::kRelu;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  long epochs = 3000;
  long samples_per_epoch = 1000;
  long batch_size = 64;
  double learning_rate = 1e-3;
  long trials = 100;
  long gens_per_trial = 100;
  ErrorMetric error_metric = ErrorMetric::kMeanAbs;
  std::uint64_t base_seed = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Throws ConfigError naming the first invalid key.
void validate(const ExperimentConfig& cfg);

Schedule make_schedule(const ExperimentConfig& cfg);
SamplerOptions sampler_options(const ExperimentConfig& cfg);

struct TrainOutcome {
  MlpParams params;
  double final_epoch_loss = 0.0;    // NaN when epochs == 0
  std::vector<double> epoch_losses;  // mean batch loss per completed epoch
  bool diverged = false;
};

TrainOutcome train_trial(const ExperimentConfig& cfg, long trial);

struct EvalOutcome {
  double gen_error = 0.0;  // NaN when every generation diverged
  long n_generated = 0;
  long n_diverged = 0;
  bool all_diverged() const { return n_generated > 0 && n_diverged == n_generated; }
};

// Generates cfg.gens_per_trial samples with pred, drawing from g.
EvalOutcome evaluate_predictor(const Predictor& pred, const ExperimentConfig& cfg,
                               RngStream& g);

// Evaluation for trial i reads stream 2i after the weight-initialization
// draws, so it does not depend on how long training ran.
EvalOutcome evaluate_trial(const MlpParams& params, const ExperimentConfig& cfg, long trial);

struct TrialResult {
  long trial_index = 0;
  std::uint64_t seed_used = 0;  // base seed; the trial index selects the substreams
  double final_epoch_loss = 0.0;
  double gen_error = 0.0;
  bool diverged = false;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

TrialResult run_trial(const ExperimentConfig& cfg, long trial);

using TrialCallback = std::function<void(std::string_view distribution, const TrialResult&)>;

// Trials 0..cfg.trials-1 on `workers` threads (0 = hardware concurrency).
// Results are ordered by trial index and do not depend on the worker count.
// The callback, if any, is invoked serially as trials finish.
std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg, unsigned workers = 1,
                                        const TrialCallback& on_trial = {});

struct SummaryRow {
  std::string label;
  double mean_error = 0.0;  // over non-diverged trials; NaN if none
  double std_error = 0.0;   // sample standard deviation; 0 for one trial
  long n_trials = 0;
  long n_diverged = 0;
  bool all_diverged() const { return n_trials > 0 && n_diverged == n_trials; }
};

SummaryRow summarize(const std::vector<TrialResult>& results, std::string label);

struct DistributionRun {
  std::string label;
  NoiseSpec noise;
  std::vector<TrialResult> trials;
  SummaryRow summary;
};

struct ExperimentRun {
  std::string experiment;  // table1 | table2 | single
  std::vector<DistributionRun> rows;
};

// gaussian, uniform, arcsine with the rest of `base` unchanged.
ExperimentRun run_table1(const ExperimentConfig& base, unsigned workers = 1,
                         const TrialCallback& on_trial = {});

// gaussian, mixture 0.9, mixture 0.5. The mixtures take big_variance and
// normalize_to_unit from base.noise.
ExperimentRun run_table2(const ExperimentConfig& base, unsigned workers = 1,
                         const TrialCallback& on_trial = {});

ExperimentRun run_single(const ExperimentConfig& base, unsigned workers = 1,
                         const TrialCallback& on_trial = {});

// Dispatches on table1 | table2 | single; throws ConfigError otherwise.
ExperimentRun run_named(std::string_view experiment, const ExperimentConfig& base,
                        unsigned workers = 1, const TrialCallback& on_trial = {});

}  // namespace noisediff

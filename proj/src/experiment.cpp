#include "noisediff/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "noisediff/errors.hpp"

namespace noisediff {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int draw_step(RngStream& g, int steps) {
  const int t = 1 + static_cast<int>(g.next_uniform01() * steps);
  return t > steps ? steps : t;
}

}  // namespace

std::string_view metric_name(ErrorMetric m) {
  return m == ErrorMetric::kMeanAbs ? "mean_abs" : "abs_mean";
}

ErrorMetric parse_metric(std::string_view name) {
  if (name == "mean_abs") return ErrorMetric::kMeanAbs;
  if (name == "abs_mean") return ErrorMetric::kAbsMean;
  throw ConfigError("error_metric", "unknown metric '" + std::string(name) + "' (mean_abs|abs_mean)");
}

std::string_view optimizer_name(OptimizerKind o) {
  return o == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ConfigError("optimizer", "unknown optimizer '" + std::string(name) + "' (adam|sgd)");
}

std::string_view reverse_noise_name(ReverseNoise r) {
  return r == ReverseNoise::kSame ? "same" : "gaussian";
}

ReverseNoise parse_reverse_noise(std::string_view name) {
  if (name == "same") return ReverseNoise::kSame;
  if (name == "gaussian") return ReverseNoise::kGaussian;
  throw ConfigError("reverse_noise", "unknown value '" + std::string(name) + "' (same|gaussian)");
}

void validate(const ExperimentConfig& cfg) {
  if (!std::isfinite(cfg.x0)) throw ConfigError("x0", "must be finite");
  // Schedule::linear checks beta_start, beta_end and steps.
  (void)Schedule::linear(cfg.beta_start, cfg.beta_end, cfg.steps);
  validate(cfg.noise);
  if (cfg.epochs < 0) throw ConfigError("epochs", "must be >= 0");
  if (cfg.samples_per_epoch < 1) throw ConfigError("samples_per_epoch", "must be >= 1");
  if (cfg.batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
  if (cfg.batch_size > cfg.samples_per_epoch) {
    throw ConfigError("batch_size", "must not exceed samples_per_epoch");
  }
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ConfigError("learning_rate", "must be positive and finite");
  }
  if (cfg.trials < 1) throw ConfigError("trials", "must be >= 1");
  if (cfg.gens_per_trial < 1) throw ConfigError("gens_per_trial", "must be >= 1");
}

Schedule make_schedule(const ExperimentConfig& cfg) {
  return Schedule::linear(cfg.beta_start, cfg.beta_end, cfg.steps);
}

SamplerOptions sampler_options(const ExperimentConfig& cfg) {
  SamplerOptions opts;
  opts.reverse_noise = cfg.reverse_noise == ReverseNoise::kSame ? cfg.noise : NoiseSpec::gaussian();
  opts.init_noise = opts.reverse_noise;
  opts.sigma_mode = cfg.sigma_mode;
  opts.final_step_noiseless = cfg.final_step_noiseless;
  return opts;
}

TrainOutcome train_trial(const ExperimentConfig& cfg, long trial) {
  const auto id = static_cast<std::uint64_t>(trial);
  RngStream init = seed_stream(cfg.base_seed, init_stream_id(id));
  RngStream data = seed_stream(cfg.base_seed, train_stream_id(id));
  const Schedule schedule = make_schedule(cfg);
  const int steps = schedule.steps();
  const double inv_steps = 1.0 / steps;

  TrainOutcome out;
  out.params = init_params(init);
  out.final_epoch_loss = kNaN;
  out.epoch_losses.reserve(static_cast<std::size_t>(cfg.epochs));

  AdamState adam;
  TrainBatch batch;
  batch.x_t.reserve(static_cast<std::size_t>(cfg.batch_size));
  batch.t_norm.reserve(static_cast<std::size_t>(cfg.batch_size));
  batch.target.reserve(static_cast<std::size_t>(cfg.batch_size));

  for (long epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    long n_batches = 0;
    for (long drawn = 0; drawn < cfg.samples_per_epoch;) {
      batch.clear();
      for (long k = 0; k < cfg.batch_size && drawn < cfg.samples_per_epoch; ++k, ++drawn) {
        const int t = draw_step(data, steps);
        const double eps = sample(cfg.noise, data);
        batch.add(q_sample(cfg.x0, t, schedule, eps), t * inv_steps, eps);
      }
      const LossAndGrad lg = loss_and_grad(out.params, batch, cfg.activation);
      if (!std::isfinite(lg.loss)) {
        out.diverged = true;
        return out;
      }
      if (cfg.optimizer == OptimizerKind::kAdam) {
        adam_step(out.params, adam, lg.grad, cfg.learning_rate);
      } else {
        sgd_step(out.params, lg.grad, cfg.learning_rate);
      }
      loss_sum += lg.loss;
      ++n_batches;
    }
    out.final_epoch_loss = loss_sum / static_cast<double>(n_batches);
    out.epoch_losses.push_back(out.final_epoch_loss);
  }
  if (!out.params.all_finite()) out.diverged = true;
  return out;
}

EvalOutcome evaluate_predictor(const Predictor& pred, const ExperimentConfig& cfg, RngStream& g) {
  const Schedule schedule = make_schedule(cfg);
  const SamplerOptions opts = sampler_options(cfg);
  EvalOutcome out;
  double sum_abs = 0.0;
  double sum = 0.0;
  for (long i = 0; i < cfg.gens_per_trial; ++i) {
    ++out.n_generated;
    try {
      const double x = generate(pred, schedule, opts, g);
      sum_abs += std::abs(x - cfg.x0);
      sum += x;
    } catch (const DivergenceError&) {
      ++out.n_diverged;
    }
  }
  const long ok = out.n_generated - out.n_diverged;
  if (ok == 0) {
    out.gen_error = kNaN;
  } else if (cfg.error_metric == ErrorMetric::kMeanAbs) {
    out.gen_error = sum_abs / static_cast<double>(ok);
  } else {
    out.gen_error = std::abs(sum / static_cast<double>(ok) - cfg.x0);
  }
  return out;
}

EvalOutcome evaluate_trial(const MlpParams& params, const ExperimentConfig& cfg, long trial) {
  RngStream g = seed_stream(cfg.base_seed, init_stream_id(static_cast<std::uint64_t>(trial)));
  (void)init_params(g);  // skip past the initialization draws
  return evaluate_predictor(mlp_predictor(params, make_schedule(cfg), cfg.activation), cfg, g);
}

TrialResult run_trial(const ExperimentConfig& cfg, long trial) {
  TrialResult r;
  r.trial_index = trial;
  r.seed_used = cfg.base_seed;
  const TrainOutcome trained = train_trial(cfg, trial);
  r.final_epoch_loss = trained.final_epoch_loss;
  if (trained.diverged) {
    r.diverged = true;
    r.gen_error = kNaN;
    return r;
  }
  const EvalOutcome eval = evaluate_trial(trained.params, cfg, trial);
  r.gen_error = eval.gen_error;
  r.diverged = eval.all_diverged();
  return r;
}

std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg, unsigned workers,
                                        const TrialCallback& on_trial) {
  validate(cfg);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const auto n = static_cast<std::size_t>(cfg.trials);
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  std::vector<TrialResult> results(n);
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  std::exception_ptr failure;
  const std::string distribution = label(cfg.noise);

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_trial(cfg, static_cast<long>(i));
      } catch (...) {
        std::lock_guard lock(callback_mutex);
        if (!failure) failure = std::current_exception();
        continue;
      }
      if (on_trial) {
        std::lock_guard lock(callback_mutex);
        on_trial(distribution, results[i]);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

SummaryRow summarize(const std::vector<TrialResult>& results, std::string label) {
  if (results.empty()) throw std::invalid_argument("summarize: no results");
  SummaryRow row;
  row.label = std::move(label);
  row.n_trials = static_cast<long>(results.size());
  std::vector<double> errors;
  for (const TrialResult& r : results) {
    if (r.diverged) {
      ++row.n_diverged;
    } else {
      errors.push_back(r.gen_error);
    }
  }
  if (errors.empty()) {
    row.mean_error = kNaN;
    row.std_error = kNaN;
    return row;
  }
  const double n = static_cast<double>(errors.size());
  row.mean_error = std::accumulate(errors.begin(), errors.end(), 0.0) / n;
  double ss = 0.0;
  for (double e : errors) ss += (e - row.mean_error) * (e - row.mean_error);
  row.std_error = errors.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return row;
}

namespace {

ExperimentRun run_rows(std::string name, const ExperimentConfig& base,
                       const std::vector<NoiseSpec>& noises, unsigned workers,
                       const TrialCallback& on_trial) {
  ExperimentRun run;
  run.experiment = std::move(name);
  std::vector<ExperimentConfig> configs;
  for (const NoiseSpec& noise : noises) {
    ExperimentConfig cfg = base;
    cfg.noise = noise;
    validate(cfg);
    configs.push_back(cfg);
  }
  for (const ExperimentConfig& cfg : configs) {
    DistributionRun row;
    row.label = label(cfg.noise);
    row.noise = cfg.noise;
    row.trials = run_experiment(cfg, workers, on_trial);
    row.summary = summarize(row.trials, row.label);
    run.rows.push_back(std::move(row));
  }
  return run;
}

}  // namespace

ExperimentRun run_table1(const ExperimentConfig& base, unsigned workers,
                         const TrialCallback& on_trial) {
  return run_rows("table1", base,
                  {NoiseSpec::gaussian(), NoiseSpec::uniform(), NoiseSpec::arcsine()}, workers,
                  on_trial);
}

ExperimentRun run_table2(const ExperimentConfig& base, unsigned workers,
                         const TrialCallback& on_trial) {
  const double big = base.noise.big_variance;
  const bool normalize = base.noise.normalize_to_unit;
  return run_rows("table2", base,
                  {NoiseSpec::gaussian(), NoiseSpec::mixture(0.9, big, normalize),
                   NoiseSpec::mixture(0.5, big, normalize)},
                  workers, on_trial);
}

ExperimentRun run_single(const ExperimentConfig& base, unsigned workers,
                         const TrialCallback& on_trial) {
  return run_rows("single", base, {base.noise}, workers, on_trial);
}

ExperimentRun run_named(std::string_view experiment, const ExperimentConfig& base,
                        unsigned workers, const TrialCallback& on_trial) {
  if (experiment == "table1") return run_table1(base, workers, on_trial);
  if (experiment == "table2") return run_table2(base, workers, on_trial);
  if (experiment == "single") return run_single(base, workers, on_trial);
  throw ConfigError("experiment", "unknown experiment '" + std::string(experiment) +
                                      "' (table1|table2|single)");
}

}  // namespace noisediff

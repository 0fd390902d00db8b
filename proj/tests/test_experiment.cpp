#include <doctest.h>

#include <cmath>

#include "noisediff/errors.hpp"
#include "noisediff/experiment.hpp"

using namespace noisediff;

namespace {

ExperimentConfig quick(long epochs = 20, long trials = 2) {
  ExperimentConfig cfg;
  cfg.epochs = epochs;
  cfg.trials = trials;
  cfg.gens_per_trial = 20;
  cfg.base_seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("default config carries the reference values") {
  const ExperimentConfig cfg;
  CHECK(cfg.x0 == 7.0);
  CHECK(cfg.beta_start == 1e-4);
  CHECK(cfg.beta_end == 0.02);
  CHECK(cfg.steps == 500);
  CHECK(cfg.epochs == 3000);
  CHECK(cfg.samples_per_epoch == 1000);
  CHECK(cfg.batch_size == 64);
  CHECK(cfg.learning_rate == 1e-3);
  CHECK(cfg.noise == NoiseSpec::gaussian());
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("config validation names the key") {
  auto key_of = [](ExperimentConfig cfg) -> std::string {
    try {
      validate(cfg);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return "";
  };
  ExperimentConfig cfg;
  cfg.beta_end = 1.5;
  CHECK(key_of(cfg) == "beta_end");
  cfg = {};
  cfg.batch_size = 2000;
  CHECK(key_of(cfg) == "batch_size");
  cfg = {};
  cfg.trials = 0;
  CHECK(key_of(cfg) == "trials");
  cfg = {};
  cfg.epochs = -1;
  CHECK(key_of(cfg) == "epochs");
  cfg = {};
  cfg.noise = NoiseSpec::mixture(2.0);
  CHECK(key_of(cfg) == "noise.mix_prob");
  cfg = {};
  cfg.epochs = 0;
  CHECK(key_of(cfg) == "");
}

TEST_CASE("zero epochs returns the initialized network") {
  ExperimentConfig cfg = quick(0);
  const TrainOutcome out = train_trial(cfg, 3);
  RngStream g = seed_stream(cfg.base_seed, init_stream_id(3));
  CHECK(out.params == init_params(g));
  CHECK(std::isnan(out.final_epoch_loss));
  CHECK(out.epoch_losses.empty());
  CHECK_FALSE(out.diverged);
}

TEST_CASE("training is deterministic per (seed, trial)") {
  const ExperimentConfig cfg = quick(5);
  const TrainOutcome a = train_trial(cfg, 1);
  const TrainOutcome b = train_trial(cfg, 1);
  CHECK(a.params == b.params);
  CHECK(a.epoch_losses == b.epoch_losses);
  CHECK_FALSE(a.params == train_trial(cfg, 0).params);
}

TEST_CASE("the remainder batch is trained on") {
  // 1000 = 15 * 64 + 40: sixteen Adam updates per epoch. With one epoch the
  // result must differ from a 960-sample epoch.
  ExperimentConfig full = quick(1);
  ExperimentConfig trimmed = full;
  trimmed.samples_per_epoch = 960;
  CHECK_FALSE(train_trial(full, 0).params == train_trial(trimmed, 0).params);
}

TEST_CASE("epoch loss falls over the first 50 epochs") {
  const TrainOutcome out = train_trial(quick(50), 0);
  REQUIRE(out.epoch_losses.size() == 50);
  CHECK(out.epoch_losses.back() < out.epoch_losses.front());
  CHECK(out.final_epoch_loss == out.epoch_losses.back());
}

TEST_CASE("full training run cuts the loss by more than 90%") {
  ExperimentConfig cfg;
  cfg.base_seed = 3;
  const TrainOutcome out = train_trial(cfg, 0);
  REQUIRE(out.epoch_losses.size() == 3000);
  CHECK(out.final_epoch_loss < 0.1 * out.epoch_losses.front());
}

TEST_CASE("oracle predictor evaluates near zero error") {
  ExperimentConfig cfg;
  cfg.gens_per_trial = 1000;
  cfg.error_metric = ErrorMetric::kAbsMean;
  RngStream g = seed_stream(1, 0);
  const EvalOutcome e = evaluate_predictor(oracle_predictor(cfg.x0, make_schedule(cfg)), cfg, g);
  CHECK(e.gen_error < 0.05);
  CHECK(e.n_generated == 1000);
  CHECK(e.n_diverged == 0);
}

TEST_CASE("an all-zero network gives a large error") {
  ExperimentConfig cfg;
  RngStream g = seed_stream(2, 0);
  const EvalOutcome e = evaluate_predictor(mlp_predictor(MlpParams{}, make_schedule(cfg)), cfg, g);
  CHECK(e.gen_error > 1.0);
}

TEST_CASE("one generation per trial: error is |x0_hat - 7|") {
  ExperimentConfig cfg = quick(0);
  cfg.gens_per_trial = 1;
  const TrainOutcome trained = train_trial(cfg, 0);
  const EvalOutcome e = evaluate_trial(trained.params, cfg, 0);

  RngStream g = seed_stream(cfg.base_seed, init_stream_id(0));
  (void)init_params(g);
  const double x = generate(mlp_predictor(trained.params, make_schedule(cfg)), make_schedule(cfg),
                            sampler_options(cfg), g);
  CHECK(e.gen_error == std::abs(x - 7.0));

  cfg.error_metric = ErrorMetric::kAbsMean;
  CHECK(evaluate_trial(trained.params, cfg, 0).gen_error == e.gen_error);
}

TEST_CASE("divergent generations are excluded and counted") {
  ExperimentConfig cfg = quick(0);
  cfg.gens_per_trial = 10;
  RngStream g = seed_stream(3, 0);
  const Predictor blowup = [](double, int) { return 1e300; };
  const EvalOutcome e = evaluate_predictor(blowup, cfg, g);
  CHECK(e.n_diverged == 10);
  CHECK(e.all_diverged());
  CHECK(std::isnan(e.gen_error));
}

TEST_CASE("sampler options follow the replacement scope") {
  ExperimentConfig cfg;
  cfg.noise = NoiseSpec::arcsine();
  CHECK(sampler_options(cfg).reverse_noise == NoiseSpec::arcsine());
  CHECK(sampler_options(cfg).init_noise == NoiseSpec::arcsine());
  cfg.reverse_noise = ReverseNoise::kGaussian;
  CHECK(sampler_options(cfg).reverse_noise == NoiseSpec::gaussian());
  CHECK(sampler_options(cfg).init_noise == NoiseSpec::gaussian());
}

TEST_CASE("run_experiment: ordering, worker independence, stream isolation") {
  ExperimentConfig cfg = quick(3, 1);
  const auto single = run_experiment(cfg);
  REQUIRE(single.size() == 1);
  CHECK(single[0].trial_index == 0);

  cfg.trials = 5;
  const auto serial = run_experiment(cfg, 1);
  const auto parallel = run_experiment(cfg, 4);
  REQUIRE(serial.size() == 5);
  for (long i = 0; i < 5; ++i) CHECK(serial[i].trial_index == i);
  CHECK(serial == parallel);
  CHECK(serial[0] == single[0]);

  long calls = 0;
  run_experiment(cfg, 3, [&](std::string_view dist, const TrialResult&) {
    CHECK(dist == "gaussian");
    ++calls;
  });
  CHECK(calls == 5);
}

TEST_CASE("config errors surface before any trial runs") {
  ExperimentConfig cfg = quick();
  cfg.batch_size = 0;
  long calls = 0;
  CHECK_THROWS_AS(run_experiment(cfg, 1, [&](std::string_view, const TrialResult&) { ++calls; }),
                  ConfigError);
  CHECK(calls == 0);
}

TEST_CASE("summarize") {
  auto result = [](long i, double err, bool diverged = false) {
    TrialResult r;
    r.trial_index = i;
    r.gen_error = err;
    r.diverged = diverged;
    return r;
  };
  SummaryRow a = summarize({result(0, 0.04), result(1, 0.06)}, "x");
  CHECK(a.mean_error == doctest::Approx(0.05));
  CHECK(a.std_error == doctest::Approx(std::sqrt(2.0) * 0.01));
  CHECK(a.label == "x");

  SummaryRow b = summarize({result(0, 0.1), result(1, NAN, true), result(2, 0.3)}, "y");
  CHECK(b.n_trials == 3);
  CHECK(b.n_diverged == 1);
  CHECK(b.mean_error == doctest::Approx(0.2));

  std::vector<TrialResult> same;
  for (long i = 0; i < 100; ++i) same.push_back(result(i, 0.125));
  SummaryRow c = summarize(same, "z");
  CHECK(c.mean_error == 0.125);
  CHECK(c.std_error == 0.0);

  SummaryRow d = summarize({result(0, NAN, true), result(1, NAN, true)}, "w");
  CHECK(d.all_diverged());
  CHECK(std::isnan(d.mean_error));

  CHECK_THROWS_AS(summarize({}, "empty"), std::invalid_argument);
}

TEST_CASE("table smoke runs") {
  ExperimentConfig cfg = quick(1, 1);
  const ExperimentRun t1 = run_table1(cfg);
  REQUIRE(t1.rows.size() == 3);
  CHECK(t1.experiment == "table1");
  CHECK(t1.rows[0].label == "gaussian");
  CHECK(t1.rows[1].label == "uniform");
  CHECK(t1.rows[2].label == "arcsine");

  const ExperimentRun t2 = run_table2(cfg);
  REQUIRE(t2.rows.size() == 3);
  CHECK(t2.rows[0].label == "gaussian");
  CHECK(t2.rows[1].label == "mix0.9");
  CHECK(t2.rows[2].label == "mix0.5");
  CHECK(t2.rows[1].noise == NoiseSpec::mixture(0.9, 100.0, false));
  // Matched seeds: the gaussian rows of both tables are identical.
  CHECK(t1.rows[0].trials == t2.rows[0].trials);

  cfg.noise.normalize_to_unit = true;
  CHECK(run_table2(cfg).rows[2].label == "mix0.5_norm");

  CHECK(run_named("single", cfg).rows.size() == 1);
  CHECK_THROWS_AS(run_named("table3", cfg), ConfigError);
}

TEST_CASE("a mixture with mix_prob 1 behaves like the gaussian row") {
  ExperimentConfig cfg = quick(300, 4);
  const SummaryRow gauss = run_single(cfg).rows[0].summary;
  cfg.noise = NoiseSpec::mixture(1.0);
  const SummaryRow mix = run_single(cfg).rows[0].summary;
  CHECK(mix.n_diverged == 0);
  CHECK(mix.mean_error < 2.0 * gauss.mean_error);
  CHECK(gauss.mean_error < 2.0 * mix.mean_error);
}

TEST_CASE("enum names round-trip") {
  CHECK(parse_metric(metric_name(ErrorMetric::kAbsMean)) == ErrorMetric::kAbsMean);
  CHECK(parse_optimizer("sgd") == OptimizerKind::kSgd);
  CHECK(parse_reverse_noise("gaussian") == ReverseNoise::kGaussian);
  CHECK_THROWS_AS(parse_metric("rmse"), ConfigError);
}

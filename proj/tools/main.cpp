// noisediff command-line entry point.
//
//   noisediff run --experiment table1|table2|single [options]
//   noisediff check [--config file]
//   noisediff selftest [--seed n]
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "noisediff/config.hpp"
#include "noisediff/errors.hpp"
#include "noisediff/experiment.hpp"
#include "noisediff/report.hpp"
#include "noisediff/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunArgs {
  std::string config_path;
  std::string experiment = "table1";
  std::string out_dir = "results";
  std::string dump_weights;
  unsigned workers = 0;
  noisediff::ConfigOverrides overrides;
};

std::optional<std::filesystem::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

int do_run(const RunArgs& args) {
  using namespace noisediff;
  const ExperimentConfig cfg = parse_config(optional_path(args.config_path), args.overrides);
  if (args.experiment != "table1" && args.experiment != "table2" && args.experiment != "single") {
    throw ConfigError("experiment", "unknown experiment '" + args.experiment + "' (table1|table2|single)");
  }
  const unsigned workers = args.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                             : args.workers;

  const auto start = std::chrono::steady_clock::now();
  auto log_trial = [](std::string_view distribution, const TrialResult& r) {
    std::fprintf(stderr, "[%.*s] trial %ld loss %s error %s%s\n",
                 static_cast<int>(distribution.size()), distribution.data(), r.trial_index,
                 format_real(r.final_epoch_loss).c_str(), format_real(r.gen_error).c_str(),
                 r.diverged ? " DIVERGED" : "");
  };
  std::vector<ExperimentRun> runs{run_named(args.experiment, cfg, workers, log_trial)};
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunManifest manifest;
  manifest.experiment = args.experiment;
  manifest.config = cfg;
  manifest.wall_time_seconds = elapsed;
  manifest.worker_count = workers;
  write_outputs(args.out_dir, runs, manifest);

  write_summary_csv(std::cout, runs);

  if (!args.dump_weights.empty()) {
    // Training is deterministic, so retraining trial 0 of the first row
    // reproduces the weights behind the first CSV row.
    ExperimentConfig first = cfg;
    first.noise = runs.front().rows.front().noise;
    const TrainOutcome trained = train_trial(first, 0);
    write_text_file(args.dump_weights, weights_to_json(trained.params).dump() + "\n");
  }
  return kExitOk;
}

int do_check(const std::string& config_path) {
  using namespace noisediff;
  const ExperimentConfig cfg = parse_config(optional_path(config_path));
  const Schedule s = make_schedule(cfg);
  const int T = s.steps();
  std::printf("steps %d\n", T);
  std::printf("beta[1] %s\n", format_real(s.beta(1)).c_str());
  std::printf("beta[%d] %s\n", T, format_real(s.beta(T)).c_str());
  std::printf("alpha_bar[%d] %s\n", T, format_real(s.alpha_bar(T)).c_str());
  std::printf("sqrt_alpha_bar[%d] %s\n", T, format_real(s.retention(T)).c_str());
  return kExitOk;
}

int do_selftest(std::uint64_t seed) {
  bool all = true;
  for (const noisediff::CheckResult& c : noisediff::run_selftest(seed)) {
    std::printf("%-32s %s  %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
    all = all && c.passed;
  }
  return all ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-mass diffusion experiments under non-Gaussian noise", "noisediff"};
  app.set_version_flag("--version", std::string(noisediff::kVersion));

  RunArgs run_args;
  long trials = 0, epochs = 0, gens = 0;
  std::uint64_t seed = 0;
  std::string metric, reverse_noise, sigma_mode;
  bool normalize_mixture = false;

  CLI::App* run = app.add_subcommand("run", "Train and evaluate trials, write CSV results");
  run->add_option("--config", run_args.config_path, "JSON config file");
  run->add_option("--experiment", run_args.experiment, "table1 | table2 | single")
      ->capture_default_str();
  auto* trials_opt = run->add_option("--trials", trials, "Trials per distribution");
  auto* seed_opt = run->add_option("--seed", seed, "Base seed");
  auto* epochs_opt = run->add_option("--epochs", epochs, "Training epochs");
  run->add_option("--workers", run_args.workers, "Worker threads (0 = all cores)");
  run->add_option("--out", run_args.out_dir, "Output directory")->capture_default_str();
  auto* gens_opt = run->add_option("--gens-per-trial", gens, "Generated samples per trial");
  auto* metric_opt = run->add_option("--metric", metric, "mean_abs | abs_mean");
  run->add_flag("--normalize-mixture", normalize_mixture, "Rescale mixtures to unit variance");
  auto* reverse_opt = run->add_option("--reverse-noise", reverse_noise, "same | gaussian");
  auto* sigma_opt = run->add_option("--sigma-mode", sigma_mode, "beta | beta_tilde");
  run->add_option("--dump-weights", run_args.dump_weights, "Write trial-0 weights as JSON");

  std::string check_config;
  CLI::App* check = app.add_subcommand("check", "Print schedule constants");
  check->add_option("--config", check_config, "JSON config file");

  std::uint64_t selftest_seed = 12345;
  CLI::App* selftest = app.add_subcommand("selftest", "Run sampler, gradient and oracle checks");
  selftest->add_option("--seed", selftest_seed, "Seed for the checks")->capture_default_str();

  app.require_subcommand(0, 1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      auto& o = run_args.overrides;
      if (*trials_opt) o.trials = trials;
      if (*seed_opt) o.seed = seed;
      if (*epochs_opt) o.epochs = epochs;
      if (*gens_opt) o.gens_per_trial = gens;
      if (*metric_opt) o.metric = metric;
      if (*reverse_opt) o.reverse_noise = reverse_noise;
      if (*sigma_opt) o.sigma_mode = sigma_mode;
      o.normalize_mixture = normalize_mixture;
      return do_run(run_args);
    }
    if (*check) return do_check(check_config);
    if (*selftest) return do_selftest(selftest_seed);
  } catch (const noisediff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  std::cerr << app.help();
  return kExitConfig;
}

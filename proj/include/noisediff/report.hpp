#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "noisediff/experiment.hpp"
#include "noisediff/config.hpp"
#include "noisediff/mlp.hpp"

namespace noisediff {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::string_view kTrialsHeader =
    "experiment,distribution,trial,seed,final_loss,gen_error,diverged";
inline constexpr std::string_view kSummaryHeader =
    "experiment,distribution,n_trials,n_diverged,mean_error,std_error";

// %.9g; non-finite values print as nan / inf / -inf.
std::string format_real(double x);

// Rows follow run order: distributions as listed in the table, then trial.
void write_trials_csv(std::ostream& out, const std::vector<ExperimentRun>& runs);
void write_summary_csv(std::ostream& out, const std::vector<ExperimentRun>& runs);

struct RunManifest {
  std::string experiment;
  ExperimentConfig config;
  std::string artifact_version{kVersion};
  double wall_time_seconds = 0.0;
  unsigned worker_count = 1;
};

nlohmann::json manifest_to_json(const RunManifest& m);

// Flat array: W1 rows, b1, W2, b2.
nlohmann::json weights_to_json(const MlpParams& p);

// File writers; throw std::runtime_error naming the path on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
void write_outputs(const std::filesystem::path& dir, const std::vector<ExperimentRun>& runs,
                   const RunManifest& manifest);

}  // namespace noisediff

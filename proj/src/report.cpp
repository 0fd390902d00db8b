#include "noisediff/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "noisediff/config.hpp"

namespace noisediff {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void write_trials_csv(std::ostream& out, const std::vector<ExperimentRun>& runs) {
  out << kTrialsHeader << '\n';
  for (const ExperimentRun& run : runs) {
    for (const DistributionRun& row : run.rows) {
      for (const TrialResult& r : row.trials) {
        out << run.experiment << ',' << row.label << ',' << r.trial_index << ',' << r.seed_used
            << ',' << format_real(r.final_epoch_loss) << ',' << format_real(r.gen_error) << ','
            << (r.diverged ? "true" : "false") << '\n';
      }
    }
  }
}

void write_summary_csv(std::ostream& out, const std::vector<ExperimentRun>& runs) {
  out << kSummaryHeader << '\n';
  for (const ExperimentRun& run : runs) {
    for (const DistributionRun& row : run.rows) {
      const SummaryRow& s = row.summary;
      out << run.experiment << ',' << s.label << ',' << s.n_trials << ',' << s.n_diverged << ','
          << format_real(s.mean_error) << ',' << format_real(s.std_error) << '\n';
    }
  }
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  return nlohmann::json{
      {"experiment", m.experiment},
      {"config_echo", config_to_json(m.config)},
      {"artifact_version", m.artifact_version},
      {"wall_time_seconds", m.wall_time_seconds},
      {"worker_count", m.worker_count},
  };
}

nlohmann::json weights_to_json(const MlpParams& p) {
  return nlohmann::json(std::vector<double>(p.values.begin(), p.values.end()));
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_outputs(const std::filesystem::path& dir, const std::vector<ExperimentRun>& runs,
                   const RunManifest& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream trials;
  write_trials_csv(trials, runs);
  write_text_file(dir / "trials.csv", trials.str());

  std::ostringstream summary;
  write_summary_csv(summary, runs);
  write_text_file(dir / "summary.csv", summary.str());

  write_text_file(dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
}

}  // namespace noisediff

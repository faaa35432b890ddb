#pragma once

#include "osga/bench/experiment.hpp"
#include "osga/bench/verification.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace osga::bench {

inline constexpr const char* kTrialsHeader = "method,s,dictionary,target,trial,rmse,sparsity,train_seconds,hyperparam";
inline constexpr const char* kSummaryHeader =
    "method,s,dictionary,target,trials,rmse_mean,rmse_std,sparsity_mean,sparsity_std,train_seconds_mean,"
    "train_seconds_std,hyperparam_mean";

/// %.17g formatting used by every CSV writer.
std::string format_number(double value);

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_paths_csv(std::ostream& out, const std::vector<PathSummary>& paths);
void write_verification_csv(std::ostream& out, const VerificationReport& report);

/// Parses a trials.csv produced by write_trials_csv.
std::vector<TrialResult> read_trials_csv(std::istream& in);

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> spread;  // drawn as +/- error bars; may be empty
};

/// Minimal standalone SVG line chart.
std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<ChartSeries>& series);

/// Writes trials.csv, summary.csv, and the OSGA figures (rmse_vs_s.svg,
/// sparsity_vs_s.svg, time_vs_s.svg; plus rmse_vs_sparsity.{csv,svg} when
/// paths are present). Returns the written paths. Throws IoError.
std::vector<std::filesystem::path> emit_outputs(const SweepTable& table, const std::filesystem::path& directory);

std::vector<std::filesystem::path> emit_verification(const VerificationReport& report,
                                                     const std::filesystem::path& directory);

}  // namespace osga::bench

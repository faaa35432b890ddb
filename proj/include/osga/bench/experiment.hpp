#pragma once

#include "osga/baselines.hpp"
#include "osga/bench/config.hpp"
#include "osga/datagen.hpp"
#include "osga/dictionary.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace osga::bench {

struct TrialResult {
  std::string method;
  std::size_t s = 0;  // OSGA step size, 0 for baselines
  std::string dictionary;
  std::string target;
  std::size_t trial = 0;
  double rmse = 0.0;
  std::size_t sparsity = 0;
  double train_seconds = 0.0;
  double hyperparam = 0.0;  // m*, lambda*, or boosting iterations
};

/// Test RMSE of an OSGA run after each iteration, keyed by atom count.
struct RmsePath {
  std::string method;
  std::size_t s = 0;
  std::string dictionary;
  std::size_t trial = 0;
  std::vector<std::size_t> atoms;
  std::vector<double> rmse;
};

/// Everything a trial's methods share for one dictionary: samples, the
/// training design and the test-point atom values scaled by training norms.
struct TrialData {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string dictionary;
  std::string target;
  Dataset train;
  Dataset test;
  std::optional<Dataset> validation;
  DesignMatrix design;
  Eigen::MatrixXd test_atoms;
  Eigen::MatrixXd validation_atoms;
  /// Built only when the config lists a baseline; its construction time is
  /// charged to every baseline fit.
  std::optional<GramSystem> gram;
  double gram_seconds = 0.0;
};

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial_id);

struct TrialSamples {
  Dataset train;
  Dataset test;
};

/// Train and test samples of one trial; identical for every dictionary and
/// method of that trial.
TrialSamples sample_trial(const ExperimentConfig& config, std::size_t trial_id);

TrialData prepare_trial(const ExperimentConfig& config, const DictionarySpec& dictionary, std::size_t trial_id);

/// Fits one method and selects its hyperparameter per config.selector.
TrialResult run_method(const ExperimentConfig& config, const TrialData& data, const MethodSpec& method,
                       RmsePath* path = nullptr);

TrialResult run_trial(const ExperimentConfig& config, const MethodSpec& method, const DictionarySpec& dictionary,
                      std::size_t trial_id);

struct SummaryRow {
  std::string method;
  std::size_t s = 0;
  std::string dictionary;
  std::string target;
  std::size_t trials = 0;
  double rmse_mean = 0.0, rmse_std = 0.0;
  double sparsity_mean = 0.0, sparsity_std = 0.0;
  double seconds_mean = 0.0, seconds_std = 0.0;
  double hyperparam_mean = 0.0;
};

struct PathSummary {
  std::string method;
  std::size_t s = 0;
  std::string dictionary;
  std::vector<std::size_t> atoms;
  std::vector<double> rmse_mean;
};

struct SweepTable {
  std::vector<TrialResult> trials;
  std::vector<SummaryRow> summary;
  std::vector<PathSummary> paths;  // sweep mode only
};

/// Orders trial rows by method (OSGA, ridge, lasso, half, l2boost), step
/// size, dictionary, target, trial.
void sort_trials(std::vector<TrialResult>& trials);

/// Mean and sample standard deviation per (method, s, dictionary, target).
/// Input order does not affect the output.
std::vector<SummaryRow> aggregate(std::vector<TrialResult> trials);

SweepTable run_sweep(const ExperimentConfig& config);

}  // namespace osga::bench

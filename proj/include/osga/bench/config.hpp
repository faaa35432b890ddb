#pragma once

#include "osga/datagen.hpp"
#include "osga/dictionary.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace osga::bench {

enum class Mode { Benchmark, Sweep, Verify };

/// How the iteration count (or lambda) is chosen per trial.
///   TestSet   - minimize RMSE on the noiseless test sample (the reference protocol)
///   Holdout   - minimize RMSE on a separate noisy validation sample
///   L0Penalty - penalized empirical risk (OSGA only; baselines fall back to TestSet)
///   Fixed     - use every iteration (OSGA, L2Boost); lambda methods fall back to TestSet
enum class Selector { TestSet, Holdout, L0Penalty, Fixed };

struct DictionarySpec {
  AtomFamily family = AtomFamily::GaussianRBF;
  std::size_t size = 500;
  double sigma = 200.0;
  /// Fixed seed for GRD centers; unset means centers are redrawn per trial.
  std::optional<std::uint64_t> center_seed;

  std::string label() const;  // "GRD" or "TPD"
};

enum class MethodKind { Osga, Ridge, Lasso, Half, L2Boost };

struct MethodSpec {
  MethodKind kind = MethodKind::Osga;
  std::size_t step_size = 1;  // OSGA only

  std::string label() const;  // "OSGA-5", "ridge", ...
  static MethodSpec osga(std::size_t s) { return {MethodKind::Osga, s}; }
  static MethodSpec parse(const std::string& text);
};

struct ExperimentConfig {
  Mode mode = Mode::Benchmark;
  TargetFunction target = TargetFunction::f1();
  std::vector<DictionarySpec> dictionaries;
  std::vector<MethodSpec> methods;

  Selector selector = Selector::TestSet;
  double kappa = 0.1;
  std::size_t validation_n = 5000;
  bool truncate = false;
  /// Atom budget for OSGA; an OSGA-s run uses ceil(max_atoms / s) iterations.
  std::size_t max_atoms = 300;

  std::size_t trial_count = 10;
  std::size_t train_n = 5000;
  std::size_t test_n = 5000;
  double noise = 0.1;
  NoiseScale noise_scale = NoiseScale::StdDev;
  std::uint64_t base_seed = 20131;

  int lambda_min_exponent = -10;
  int lambda_max_exponent = 10;
  std::size_t ista_max_iterations = 2000;
  double ista_tol = 1e-8;
  double l2boost_nu = 0.0005;
  std::size_t l2boost_max_iterations = 200000;
  double sparsity_tol = 1e-10;

  std::size_t threads = 1;
  std::filesystem::path output_dir = "results";

  std::vector<double> lambda_grid() const;
  /// Throws ConfigError on the first invalid field.
  void validate() const;
};

/// Parses the JSON config schema (see README). Unknown keys are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies OSGA_OUTPUT_DIR from the environment when set.
void apply_environment(ExperimentConfig& config);

/// Built-in presets: "f1" and "f2" (all methods on GRD and TPD), "timing" (fixed 40-atom budget).
ExperimentConfig preset(const std::string& name);

std::string to_string(Mode mode);
std::string to_string(Selector selector);

}  // namespace osga::bench

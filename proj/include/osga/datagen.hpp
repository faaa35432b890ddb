#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

namespace osga {

enum class TargetKind { F1, F2, Custom };

/// Regression function on [0, 1].
///   F1: sinc(40x - 10) + sinc(60x - 30) + sinc(20x - 1) + cos(10x)
///   F2: 1/3 - x on [0, 1/3), x^2 on [1/3, 2/3], -1 on (2/3, 1]
struct TargetFunction {
  TargetKind kind = TargetKind::F1;
  std::function<double(double)> custom;

  static TargetFunction f1() { return {TargetKind::F1, {}}; }
  static TargetFunction f2() { return {TargetKind::F2, {}}; }
  static TargetFunction from_function(std::function<double(double)> fn) {
    return {TargetKind::Custom, std::move(fn)};
  }

  std::string name() const;
};

TargetFunction parse_target(const std::string& name);

/// sin(t) / t, continuously extended with sinc(0) = 1.
double sinc(double t);

/// Throws DomainError outside [0, 1] for the built-in targets.
double eval_target(const TargetFunction& target, double x);

struct Dataset {
  Eigen::VectorXd inputs;
  Eigen::VectorXd targets;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  bool is_test = false;

  Eigen::Index size() const noexcept { return inputs.size(); }
};

enum class NoiseScale { StdDev, Variance };

/// x_i ~ U(0, 1), y_i = f(x_i) + sigma * N(0, 1). With NoiseScale::Variance
/// the `noise` argument is read as a variance and its square root is used.
/// Inputs come from stream 1 and noise from stream 2 of CounterRng(seed).
Dataset sample_train(const TargetFunction& target, Eigen::Index n, double noise, std::uint64_t seed,
                     NoiseScale scale = NoiseScale::StdDev);

/// Noiseless sample; inputs from stream 3 of CounterRng(seed).
Dataset sample_test(const TargetFunction& target, Eigen::Index n, std::uint64_t seed);

/// n centers drawn i.i.d. from U(0, 1), stream 4 of CounterRng(seed).
Eigen::VectorXd sample_centers(Eigen::Index n, std::uint64_t seed);

/// Two-column "x,y" CSV with 17 significant digits.
void write_dataset_csv(std::ostream& out, const Dataset& data);

}  // namespace osga

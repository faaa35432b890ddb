#include "osga/datagen.hpp"

#include "osga/errors.hpp"
#include "osga/random.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace osga {
namespace {

constexpr std::uint64_t kTrainInputStream = 1;
constexpr std::uint64_t kTrainNoiseStream = 2;
constexpr std::uint64_t kTestInputStream = 3;
constexpr std::uint64_t kCenterStream = 4;

Eigen::VectorXd uniform_inputs(Eigen::Index n, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.uniform();
  return x;
}

void check_domain(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("target evaluated outside [0, 1]: " + std::to_string(x));
  }
}

}  // namespace

std::string TargetFunction::name() const {
  switch (kind) {
    case TargetKind::F1: return "f1";
    case TargetKind::F2: return "f2";
    case TargetKind::Custom: return "custom";
  }
  return "custom";
}

TargetFunction parse_target(const std::string& name) {
  if (name == "f1") return TargetFunction::f1();
  if (name == "f2") return TargetFunction::f2();
  throw ConfigError("unknown target '" + name + "' (expected f1 or f2)");
}

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

double eval_target(const TargetFunction& target, double x) {
  switch (target.kind) {
    case TargetKind::F1:
      check_domain(x);
      return sinc(40.0 * x - 10.0) + sinc(60.0 * x - 30.0) + sinc(20.0 * x - 1.0) + std::cos(10.0 * x);
    case TargetKind::F2:
      check_domain(x);
      if (x < 1.0 / 3.0) return 1.0 / 3.0 - x;
      if (x <= 2.0 / 3.0) return x * x;
      return -1.0;
    case TargetKind::Custom:
      if (!target.custom) throw DomainError("custom target has no evaluator");
      return target.custom(x);
  }
  return 0.0;
}

Dataset sample_train(const TargetFunction& target, Eigen::Index n, double noise, std::uint64_t seed,
                     NoiseScale scale) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  if (!(noise >= 0.0)) throw DomainError("noise level must be nonnegative");
  const double sigma = scale == NoiseScale::Variance ? std::sqrt(noise) : noise;
  Dataset data;
  data.inputs = uniform_inputs(n, seed, kTrainInputStream);
  data.targets.resize(n);
  CounterRng noise_rng(seed, kTrainNoiseStream);
  for (Eigen::Index i = 0; i < n; ++i) {
    data.targets(i) = eval_target(target, data.inputs(i));
    if (sigma > 0.0) data.targets(i) += sigma * noise_rng.normal();
  }
  data.noise_sigma = sigma;
  data.seed = seed;
  return data;
}

Dataset sample_test(const TargetFunction& target, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  Dataset data;
  data.inputs = uniform_inputs(n, seed, kTestInputStream);
  data.targets = data.inputs.unaryExpr([&](double x) { return eval_target(target, x); });
  data.seed = seed;
  data.is_test = true;
  return data;
}

Eigen::VectorXd sample_centers(Eigen::Index n, std::uint64_t seed) {
  return uniform_inputs(n, seed, kCenterStream);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "x,y\n";
  char line[64];
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", data.inputs(i), data.targets(i));
    out << line;
  }
}

}  // namespace osga

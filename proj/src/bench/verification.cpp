#include "osga/bench/verification.hpp"

#include "osga/errors.hpp"
#include "osga/greedy.hpp"
#include "osga/orthls.hpp"
#include "osga/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace osga::bench {
namespace {

constexpr std::uint64_t kAtomStream = 11;
constexpr std::uint64_t kCoefficientStream = 12;
constexpr std::uint64_t kRemainderStream = 13;
constexpr std::uint64_t kPropertyStream = 14;

/// k distinct indices from [0, count) via a partial Fisher-Yates shuffle.
std::vector<std::size_t> distinct_indices(std::size_t count, std::size_t k, CounterRng& rng) {
  std::vector<std::size_t> all(count);
  std::iota(all.begin(), all.end(), std::size_t{0});
  k = std::min(k, count);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform() * static_cast<double>(count - i));
    std::swap(all[i], all[std::min(j, count - 1)]);
  }
  all.resize(k);
  return all;
}

SyntheticBoundInstance base_instance(BoundKind kind, const InstanceParams& params, std::uint64_t seed) {
  SyntheticBoundInstance instance;
  instance.kind = kind;
  instance.seed = seed;
  instance.design = random_unit_dictionary(params.dimension, params.atom_count, seed);
  const CoherenceReport report = coherence(instance.design);
  instance.coherence = report.coherence;
  instance.step_size = params.step_size == 0 ? report.s_max : params.step_size;
  const auto atoms = static_cast<std::size_t>(params.atom_count);
  instance.iterations =
      params.iterations == 0 ? (atoms + instance.step_size - 1) / instance.step_size : params.iterations;
  instance.coefficients = Eigen::VectorXd::Zero(params.atom_count);
  return instance;
}

InstanceResult make_result(const std::string& check, std::size_t id, std::size_t s, double m) {
  InstanceResult result;
  result.check = check;
  result.id = id;
  result.step_size = s;
  result.coherence = m;
  result.min_slack = std::numeric_limits<double>::infinity();
  return result;
}

/// Random dictionary for the property checks: small dimensions so that the
/// coherence is large enough to make the inequalities bite.
struct PropertyDraw {
  DesignMatrix design;
  double coherence = 0.0;
  std::vector<std::size_t> atoms;
  CounterRng rng;
};

PropertyDraw property_draw(std::uint64_t seed) {
  CounterRng rng(seed, kPropertyStream);
  const auto dimension = static_cast<Eigen::Index>(20 + rng.uniform() * 60);
  const auto atom_count = static_cast<Eigen::Index>(4 + rng.uniform() * 16);
  DesignMatrix design = random_unit_dictionary(dimension, atom_count, derive_seed(seed, 1));
  const double m = coherence(design).coherence;
  // largest s with M (s - 1) < 1
  std::size_t s_limit = static_cast<std::size_t>(atom_count);
  if (m > 0.0) {
    s_limit = std::min<std::size_t>(s_limit, static_cast<std::size_t>(std::ceil(1.0 / m)));
    while (s_limit > 1 && m * static_cast<double>(s_limit - 1) >= 1.0) --s_limit;
  }
  const auto s = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(s_limit));
  auto atoms = distinct_indices(static_cast<std::size_t>(atom_count), std::min(s, s_limit), rng);
  return {std::move(design), m, std::move(atoms), rng};
}

void record_slack(InstanceResult& result, double lower, double value, double upper, double rel_tol) {
  const double scale = std::max({std::abs(lower), std::abs(upper), std::abs(value), 1e-300});
  const double slack = std::min(value - lower, upper - value) / scale;
  result.min_slack = std::min(result.min_slack, slack);
  if (slack < -rel_tol) result.passed = false;
}

}  // namespace

std::string to_string(BoundKind kind) {
  return kind == BoundKind::Incoherent ? "incoherent" : "convex";
}

double SyntheticBoundInstance::bound(std::size_t k) const {
  const double sk = static_cast<double>(step_size * k);
  const double l1 = l1_bound();
  if (kind == BoundKind::Incoherent) return remainder_energy + 13.5 * l1 * l1 / sk;
  return 40.5 * l1 / sk;
}

DesignMatrix random_unit_dictionary(Eigen::Index dimension, Eigen::Index atom_count, std::uint64_t seed) {
  CounterRng rng(seed, kAtomStream);
  Eigen::MatrixXd raw(dimension, atom_count);
  for (Eigen::Index j = 0; j < atom_count; ++j) {
    for (Eigen::Index i = 0; i < dimension; ++i) raw(i, j) = rng.normal();
  }
  return normalize_columns(std::move(raw));
}

SyntheticBoundInstance make_incoherent_instance(const InstanceParams& params, std::uint64_t seed) {
  SyntheticBoundInstance instance = base_instance(BoundKind::Incoherent, params, seed);
  CounterRng rng(seed, kCoefficientStream);
  for (std::size_t j : distinct_indices(static_cast<std::size_t>(params.atom_count), params.term_count, rng)) {
    instance.coefficients(static_cast<Eigen::Index>(j)) = rng.uniform(-1.0, 1.0);
  }
  const Eigen::VectorXd h = instance.design.columns * instance.coefficients;

  // Remainder orthogonal to every atom: project a Gaussian vector off the span.
  CounterRng noise(seed, kRemainderStream);
  Eigen::VectorXd e(params.dimension);
  for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = noise.normal();
  OrthoFactor span(params.dimension);
  for (Eigen::Index j = 0; j < params.atom_count; ++j) {
    span.append(instance.design.columns.col(j), static_cast<std::size_t>(j));
  }
  e = span.project(e).residual;
  const double norm = empirical_norm(e);
  if (norm > 0.0) e *= params.remainder_norm / norm;
  instance.target = h + e;
  instance.remainder_energy = empirical_norm(e) * empirical_norm(e);
  return instance;
}

SyntheticBoundInstance make_convex_instance(const InstanceParams& params, std::uint64_t seed) {
  SyntheticBoundInstance instance = base_instance(BoundKind::ConvexHull, params, seed);
  CounterRng rng(seed, kCoefficientStream);
  double total = 0.0;
  for (std::size_t j : distinct_indices(static_cast<std::size_t>(params.atom_count), params.term_count, rng)) {
    const double w = -std::log(rng.uniform());  // exponential weights give a uniform simplex point
    instance.coefficients(static_cast<Eigen::Index>(j)) = w;
    total += w;
  }
  instance.coefficients /= total;
  instance.target = instance.design.columns * instance.coefficients;
  return instance;
}

std::size_t VerificationReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const InstanceResult& r) { return !r.passed; }));
}

InstanceResult verify_instance(const SyntheticBoundInstance& instance, std::size_t id) {
  GreedyConfig config;
  config.step_size = instance.step_size;
  config.max_iterations = instance.iterations;
  config.enforce_coherence_gate = true;
  config.residual_stop_tol = 0.0;
  const GreedyFit fit = osga_fit(instance.target, instance.design, config);

  InstanceResult result = make_result(to_string(instance.kind), id, instance.step_size, instance.coherence);
  result.iterations = fit.iterations();
  for (std::size_t k = 1; k <= fit.iterations(); ++k) {
    const double r = fit.history[k - 1].residual_norm;
    const double slack = instance.bound(k) - r * r;
    result.min_slack = std::min(result.min_slack, slack);
    if (slack < 0.0) result.passed = false;
  }
  return result;
}

InstanceResult check_block_energy(std::uint64_t seed, std::size_t id, double rel_tol) {
  PropertyDraw draw = property_draw(seed);
  const std::size_t s = draw.atoms.size();
  InstanceResult result = make_result("block_energy", id, s, draw.coherence);
  Eigen::VectorXd a(static_cast<Eigen::Index>(s));
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = draw.rng.normal();
  Eigen::VectorXd combo = Eigen::VectorXd::Zero(draw.design.sample_count());
  for (std::size_t i = 0; i < s; ++i) {
    combo += a(static_cast<Eigen::Index>(i)) * draw.design.columns.col(static_cast<Eigen::Index>(draw.atoms[i]));
  }
  const double energy = a.squaredNorm();
  const double spread = draw.coherence * static_cast<double>(s - 1);
  const double value = empirical_norm(combo) * empirical_norm(combo);
  record_slack(result, (1.0 - spread) * energy, value, (1.0 + spread) * energy, rel_tol);
  return result;
}

InstanceResult check_projection_energy(std::uint64_t seed, std::size_t id, double rel_tol) {
  PropertyDraw draw = property_draw(seed);
  const std::size_t s = draw.atoms.size();
  InstanceResult result = make_result("projection_energy", id, s, draw.coherence);
  Eigen::VectorXd f(draw.design.sample_count());
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = draw.rng.normal();

  OrthoFactor factor(draw.design.sample_count());
  double correlation_energy = 0.0;
  for (std::size_t idx : draw.atoms) {
    const auto column = draw.design.columns.col(static_cast<Eigen::Index>(idx));
    factor.append(column, idx);
    const double c = empirical_dot(f, column);
    correlation_energy += c * c;
  }
  const double projected = empirical_norm(factor.project(f).fitted);
  const double spread = draw.coherence * static_cast<double>(s - 1);
  record_slack(result, correlation_energy / (1.0 + spread), projected * projected,
               correlation_energy / (1.0 - spread), rel_tol);
  return result;
}

std::vector<SyntheticBoundInstance> default_instances(const SuiteSizes& sizes, std::uint64_t seed) {
  std::vector<SyntheticBoundInstance> instances;
  const InstanceParams params;
  for (std::size_t i = 0; i < sizes.incoherent; ++i) {
    instances.push_back(make_incoherent_instance(params, derive_seed(seed, 1000 + i)));
  }
  for (std::size_t i = 0; i < sizes.convex; ++i) {
    instances.push_back(make_convex_instance(params, derive_seed(seed, 2000 + i)));
  }
  return instances;
}

VerificationReport run_verification(const std::vector<SyntheticBoundInstance>& instances) {
  VerificationReport report;
  for (std::size_t i = 0; i < instances.size(); ++i) report.results.push_back(verify_instance(instances[i], i));
  return report;
}

VerificationReport run_default_suite(const SuiteSizes& sizes, std::uint64_t seed) {
  VerificationReport report = run_verification(default_instances(sizes, seed));
  for (std::size_t i = 0; i < sizes.block_energy; ++i) {
    report.results.push_back(check_block_energy(derive_seed(seed, 3'000'000 + i), i));
  }
  for (std::size_t i = 0; i < sizes.projection_energy; ++i) {
    report.results.push_back(check_projection_energy(derive_seed(seed, 4'000'000 + i), i));
  }
  return report;
}

}  // namespace osga::bench

#include "osga/greedy.hpp"

#include "osga/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace osga {

Eigen::Index GreedyFit::atom_count(std::size_t m) const {
  if (m == 0) return 0;
  if (m > history.size()) throw IterationOutOfRange("iteration " + std::to_string(m) + " not recorded");
  return history[m - 1].atom_coefficients.size();
}

double truncate(double value, double level) {
  if (!(level > 0.0)) throw DomainError("truncation level must be positive");
  return std::copysign(std::min(level, std::abs(value)), value);
}

std::vector<std::size_t> rank_candidates(const Eigen::Ref<const Eigen::VectorXd>& correlations,
                                         const std::vector<bool>& excluded) {
  const auto count = static_cast<std::size_t>(correlations.size());
  std::vector<std::size_t> order;
  order.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (excluded.empty() || !excluded[j]) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(correlations(static_cast<Eigen::Index>(a))) >
           std::abs(correlations(static_cast<Eigen::Index>(b)));
  });
  return order;
}

namespace {

Eigen::VectorXd correlations_with(const DesignMatrix& design,
                                  const Eigen::Ref<const Eigen::VectorXd>& residual) {
  return design.columns.transpose() * residual / static_cast<double>(design.sample_count());
}

double truncated_risk(const Eigen::Ref<const Eigen::VectorXd>& y,
                      const Eigen::Ref<const Eigen::VectorXd>& fitted, double level) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double e = y(i) - truncate(fitted(i), level);
    sum += e * e;
  }
  return sum / static_cast<double>(y.size());
}

}  // namespace

std::vector<std::size_t> select_super_atoms(const Eigen::Ref<const Eigen::VectorXd>& residual,
                                            const DesignMatrix& design,
                                            const std::vector<bool>& excluded, std::size_t s) {
  if (s < 1) throw DomainError("step size must be >= 1");
  if (residual.size() != design.sample_count()) {
    throw DimensionMismatch("select_super_atoms residual", static_cast<std::size_t>(design.sample_count()),
                            static_cast<std::size_t>(residual.size()));
  }
  if (!excluded.empty() && excluded.size() != static_cast<std::size_t>(design.atom_count())) {
    throw DimensionMismatch("select_super_atoms exclusion mask",
                            static_cast<std::size_t>(design.atom_count()), excluded.size());
  }
  auto order = rank_candidates(correlations_with(design, residual), excluded);
  if (order.empty()) throw EmptyCandidateSet("every atom is excluded");
  order.resize(std::min(s, order.size()));
  return order;
}

GreedyFit osga_fit(const Eigen::Ref<const Eigen::VectorXd>& y, const DesignMatrix& design,
                   const GreedyConfig& config) {
  if (config.step_size < 1) throw DomainError("step size must be >= 1");
  if (config.max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  if (y.size() != design.sample_count()) {
    throw DimensionMismatch("osga_fit targets", static_cast<std::size_t>(design.sample_count()),
                            static_cast<std::size_t>(y.size()));
  }
  if (config.enforce_coherence_gate) {
    const CoherenceReport report = coherence(design);
    if (config.step_size > report.s_max) {
      throw CoherenceGateViolation("step size " + std::to_string(config.step_size) +
                                   " exceeds (2M)^-1 + 1 bound " + std::to_string(report.s_max) +
                                   " for coherence " + std::to_string(report.coherence));
    }
  }

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  const Eigen::Index n = design.sample_count();
  const auto atom_total = static_cast<std::size_t>(design.atom_count());

  GreedyFit fit;
  fit.factor = OrthoFactor(n);
  fit.step_size = config.step_size;
  fit.sample_count = n;
  if (config.truncation_level) {
    if (!(*config.truncation_level > 0.0)) throw DomainError("truncation level must be positive");
    fit.truncation_level = *config.truncation_level;
  } else {
    const double peak = y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
    fit.truncation_level = peak > 0.0 ? peak : 1.0;
  }

  std::vector<bool> excluded(atom_total, false);
  std::size_t remaining = atom_total;
  Eigen::VectorXd residual = y;

  for (std::size_t k = 1; k <= config.max_iterations && remaining > 0; ++k) {
    const auto order = rank_candidates(correlations_with(design, residual), excluded);
    std::vector<std::size_t> block;
    for (std::size_t idx : order) {
      if (block.size() == config.step_size) break;
      excluded[idx] = true;
      --remaining;
      if (fit.factor.append(design.columns.col(static_cast<Eigen::Index>(idx)), idx)) {
        block.push_back(idx);
      }
    }
    if (block.empty()) break;

    const auto projection = fit.factor.project(y);
    residual = projection.residual;

    IterateRecord record;
    record.atom_coefficients = fit.factor.atom_coefficients(projection.q_coefficients);
    record.residual_norm = empirical_norm(residual);
    record.empirical_risk = truncated_risk(y, projection.fitted, fit.truncation_level);
    record.cumulative_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    fit.history.push_back(std::move(record));
    fit.selected_blocks.push_back(std::move(block));

    if (fit.history.back().residual_norm <= config.residual_stop_tol) break;
  }

  for (std::size_t idx : fit.factor.source_index()) fit.atoms.push_back(design.atoms[idx]);
  fit.scales.resize(static_cast<Eigen::Index>(fit.factor.source_index().size()));
  for (std::size_t j = 0; j < fit.factor.source_index().size(); ++j) {
    fit.scales(static_cast<Eigen::Index>(j)) =
        design.scales(static_cast<Eigen::Index>(fit.factor.source_index()[j]));
  }
  return fit;
}

GreedyFit osga_fit(const Dataset& data, const DesignMatrix& design, const GreedyConfig& config) {
  return osga_fit(data.targets, design, config);
}

std::size_t argmin_iteration(std::span<const double> scores) {
  if (scores.empty()) throw IterationOutOfRange("no iterations recorded");
  std::size_t best = 0;
  for (std::size_t m = 1; m < scores.size(); ++m) {
    if (scores[m] < scores[best]) best = m;
  }
  return best + 1;
}

std::size_t choose_m_l0(std::span<const double> risks, double kappa, std::size_t s, Eigen::Index n) {
  if (!(kappa >= 0.0)) throw DomainError("kappa must be nonnegative");
  if (n < 1) throw DomainError("sample size must be >= 1");
  const double unit = static_cast<double>(s) * std::log(static_cast<double>(n)) / static_cast<double>(n);
  std::vector<double> penalized(risks.size());
  for (std::size_t m = 0; m < risks.size(); ++m) {
    penalized[m] = risks[m] + kappa * static_cast<double>(m + 1) * unit;
  }
  return argmin_iteration(penalized);
}

std::size_t choose_m_l0(const GreedyFit& fit, double kappa) {
  std::vector<double> risks;
  risks.reserve(fit.history.size());
  for (const auto& record : fit.history) risks.push_back(record.empirical_risk);
  return choose_m_l0(risks, kappa, fit.step_size, fit.sample_count);
}

Eigen::MatrixXd evaluate_fit_atoms(const GreedyFit& fit, const Eigen::Ref<const Eigen::VectorXd>& points) {
  Eigen::MatrixXd values(points.size(), static_cast<Eigen::Index>(fit.atoms.size()));
  for (std::size_t j = 0; j < fit.atoms.size(); ++j) {
    const AtomSpec& atom = fit.atoms[j];
    if (!atom.evaluable()) throw DomainError("fitted atom cannot be evaluated at new points");
    const double scale = fit.scales(static_cast<Eigen::Index>(j));
    for (Eigen::Index i = 0; i < points.size(); ++i) {
      values(i, static_cast<Eigen::Index>(j)) = atom(points(i)) / scale;
    }
  }
  return values;
}

std::vector<double> iterate_rmse_path(const GreedyFit& fit,
                                      const Eigen::Ref<const Eigen::MatrixXd>& atom_values,
                                      const Eigen::Ref<const Eigen::VectorXd>& truth, bool truncated) {
  if (atom_values.rows() != truth.size()) {
    throw DimensionMismatch("iterate_rmse_path", static_cast<std::size_t>(truth.size()),
                            static_cast<std::size_t>(atom_values.rows()));
  }
  std::vector<double> path;
  path.reserve(fit.history.size());
  Eigen::VectorXd prediction(truth.size());
  for (const auto& record : fit.history) {
    const Eigen::Index k = record.atom_coefficients.size();
    prediction.noalias() = atom_values.leftCols(k) * record.atom_coefficients;
    if (truncated) {
      for (Eigen::Index i = 0; i < prediction.size(); ++i) {
        prediction(i) = truncate(prediction(i), fit.truncation_level);
      }
    }
    path.push_back(std::sqrt((prediction - truth).squaredNorm() / static_cast<double>(truth.size())));
  }
  return path;
}

std::size_t choose_m_holdout(const GreedyFit& fit, const Dataset& validation, bool truncated) {
  const Eigen::MatrixXd values = evaluate_fit_atoms(fit, validation.inputs);
  const auto path = iterate_rmse_path(fit, values, validation.targets, truncated);
  return argmin_iteration(path);
}

Eigen::VectorXd predict(const GreedyFit& fit, std::size_t m, const Eigen::Ref<const Eigen::VectorXd>& points,
                        bool truncated) {
  if (m > fit.history.size()) {
    throw IterationOutOfRange("iteration " + std::to_string(m) + " requested, " +
                              std::to_string(fit.history.size()) + " recorded");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(points.size());
  if (m == 0) return out;
  const auto& coefficients = fit.history[m - 1].atom_coefficients;
  for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
    const AtomSpec& atom = fit.atoms[static_cast<std::size_t>(j)];
    if (!atom.evaluable()) throw DomainError("fitted atom cannot be evaluated at new points");
    const double weight = coefficients(j) / fit.scales(j);
    for (Eigen::Index i = 0; i < points.size(); ++i) out(i) += weight * atom(points(i));
  }
  if (truncated) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = truncate(out(i), fit.truncation_level);
  }
  return out;
}

}  // namespace osga

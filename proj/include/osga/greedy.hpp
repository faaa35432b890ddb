#pragma once

#include "osga/datagen.hpp"
#include "osga/dictionary.hpp"
#include "osga/orthls.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace osga {

struct GreedyConfig {
  std::size_t step_size = 1;
  std::size_t max_iterations = 1;
  double residual_stop_tol = 1e-12;
  bool enforce_coherence_gate = false;
  /// Truncation level L; defaults to max_i |y_i| of the training targets.
  std::optional<double> truncation_level;
};

struct IterateRecord {
  /// Coefficients on the normalized atoms, in selection order; the first
  /// atom_count entries of GreedyFit::selected_atoms() they refer to.
  Eigen::VectorXd atom_coefficients;
  double residual_norm = 0.0;  // ||y - f_k||_n
  double cumulative_seconds = 0.0;
  double empirical_risk = 0.0;  // ||y - Pi_L f_k||_n^2
};

struct GreedyFit {
  std::vector<std::vector<std::size_t>> selected_blocks;
  OrthoFactor factor;
  std::vector<IterateRecord> history;
  double truncation_level = 1.0;
  /// Spec and training scale of every factor column, in selection order.
  std::vector<AtomSpec> atoms;
  Eigen::VectorXd scales;
  std::size_t step_size = 1;
  Eigen::Index sample_count = 0;

  std::size_t iterations() const noexcept { return history.size(); }
  const std::vector<std::size_t>& selected_atoms() const noexcept { return factor.source_index(); }
  /// Number of atoms in the iterate after `m` iterations (m >= 1).
  Eigen::Index atom_count(std::size_t m) const;
};

/// Pi_L(u) = sign(u) min(L, |u|).
double truncate(double value, double level);

/// Candidates (non-excluded atoms) ordered by |correlation| descending, ties
/// by ascending index.
std::vector<std::size_t> rank_candidates(const Eigen::Ref<const Eigen::VectorXd>& correlations,
                                         const std::vector<bool>& excluded);

/// The min(s, #candidates) atoms most correlated with `residual` in the
/// empirical inner product. `excluded` may be empty (nothing excluded) or
/// have one flag per atom.
std::vector<std::size_t> select_super_atoms(const Eigen::Ref<const Eigen::VectorXd>& residual,
                                            const DesignMatrix& design,
                                            const std::vector<bool>& excluded, std::size_t s);

/// Orthogonal super greedy algorithm. Each iteration adds the s atoms most
/// correlated with the current residual and re-projects y onto the span of
/// every atom selected so far. Atoms rejected as numerically dependent are
/// replaced by the next-ranked candidate within the same iteration.
GreedyFit osga_fit(const Eigen::Ref<const Eigen::VectorXd>& y, const DesignMatrix& design,
                   const GreedyConfig& config);
GreedyFit osga_fit(const Dataset& data, const DesignMatrix& design, const GreedyConfig& config);

/// argmin_m risk[m-1] + kappa * m * s * log(n) / n, smallest m on ties.
std::size_t choose_m_l0(std::span<const double> risks, double kappa, std::size_t s, Eigen::Index n);
std::size_t choose_m_l0(const GreedyFit& fit, double kappa);

/// 1-based argmin of a score sequence, smallest index on ties.
std::size_t argmin_iteration(std::span<const double> scores);

/// Atom values at new points for every factor column, divided by the
/// training scales: result(i, j) = atom_j(points_i) / scale_j.
Eigen::MatrixXd evaluate_fit_atoms(const GreedyFit& fit, const Eigen::Ref<const Eigen::VectorXd>& points);

/// RMSE of each recorded iterate against `truth`, given atom values from
/// evaluate_fit_atoms (or gathered from a precomputed design).
std::vector<double> iterate_rmse_path(const GreedyFit& fit,
                                      const Eigen::Ref<const Eigen::MatrixXd>& atom_values,
                                      const Eigen::Ref<const Eigen::VectorXd>& truth, bool truncated);

/// Iteration minimizing the validation RMSE of the (truncated) iterate.
std::size_t choose_m_holdout(const GreedyFit& fit, const Dataset& validation, bool truncated = true);

/// f_m evaluated at `points`; m == 0 is the zero estimator.
Eigen::VectorXd predict(const GreedyFit& fit, std::size_t m,
                        const Eigen::Ref<const Eigen::VectorXd>& points, bool truncated);

}  // namespace osga

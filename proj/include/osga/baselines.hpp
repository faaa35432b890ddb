#pragma once

#include "osga/dictionary.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace osga {

enum class BaselineMethod { Ridge, LassoISTA, HalfIST, L2Boost };

std::string to_string(BaselineMethod method);

inline constexpr double kL2BoostDefaultStep = 0.0005;

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::Ridge;
  double lambda = 0.0;
  /// Boosting shrinkage, or the ISTA step (auto: 0.99 / ||Gram||_2 when unset).
  std::optional<double> step_nu;
  std::size_t max_iterations = 1000;
  double convergence_tol = 1e-10;
};

struct BaselineModel {
  Eigen::VectorXd coefficients;
  /// Objective per iteration; training risk ||y - f_k||_n^2 for L2Boost,
  /// empty for ridge.
  std::vector<double> objective_history;
  BaselineConfig config;
  std::size_t iterations = 0;
};

/// Normal-equation quantities in the empirical metric: Gram = n^-1 X^T X,
/// rhs = n^-1 X^T y, energy = ||y||_n^2. Shared by every baseline so a
/// lambda sweep builds them once.
struct GramSystem {
  Eigen::MatrixXd gram;
  Eigen::VectorXd rhs;
  double energy = 0.0;
  Eigen::Index sample_count = 0;
};

GramSystem make_gram_system(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y);

/// sign(x) max(|x| - t, 0).
double soft_threshold(double x, double t);

/// |x| at or below which the half-threshold operator returns 0: 1.5 t^(2/3).
double half_threshold_radius(double t);

/// Proximal map of t |u|^(1/2): argmin_u (u - x)^2 / 2 + t |u|^(1/2), the
/// smaller-magnitude minimizer on ties.
double half_threshold(double x, double t);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double spectral_norm(const Eigen::MatrixXd& symmetric, double rel_tol = 1e-6, std::size_t max_iterations = 10000);

/// Proximal gradient with soft (LassoISTA) or half (HalfIST) thresholding on
/// ||y - X a||_n^2 / 2 + lambda * penalty(a), started from a = 0.
BaselineModel ista_fit(const GramSystem& system, const BaselineConfig& config);
BaselineModel ista_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                       const BaselineConfig& config);

/// Penalty term of the ISTA objectives (sum |a| or sum |a|^(1/2)).
double penalty_value(BaselineMethod method, const Eigen::Ref<const Eigen::VectorXd>& coefficients);

/// (Gram + lambda I) a = rhs.
BaselineModel ridge_fit(const GramSystem& system, double lambda);
BaselineModel ridge_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y, double lambda);

/// Called after every boosting step with (1-based iteration, atom, increment).
using BoostObserver = std::function<void(std::size_t, std::size_t, double)>;

/// Componentwise L2 boosting: each step moves the most correlated atom's
/// coefficient by nu * <r, g>_n.
BaselineModel l2boost_fit(const GramSystem& system, const BaselineConfig& config,
                          const BoostObserver& observer = {});
BaselineModel l2boost_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                          const BaselineConfig& config, const BoostObserver& observer = {});

}  // namespace osga

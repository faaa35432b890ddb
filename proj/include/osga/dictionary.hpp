#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace osga {

enum class AtomFamily { TrigCosine, GaussianRBF, Custom };

/// One parameterized dictionary element on the real line.
struct AtomSpec {
  AtomFamily family = AtomFamily::TrigCosine;
  double parameter = 1.0;  // frequency k for TrigCosine, center for GaussianRBF
  double shape = 0.0;      // sigma for GaussianRBF
  std::function<double(double)> custom;

  static AtomSpec cosine(int frequency);
  static AtomSpec gaussian(double center, double sigma);
  static AtomSpec from_function(std::function<double(double)> fn);

  bool evaluable() const noexcept { return family != AtomFamily::Custom || static_cast<bool>(custom); }
  /// Raw (unnormalized) value at x.
  double operator()(double x) const;
};

/// cos(k t) for k = 1..max_frequency.
std::vector<AtomSpec> build_tpd(int max_frequency);

/// exp(-sigma |x - t_i|^2), one atom per center, order preserved.
std::vector<AtomSpec> build_grd(std::span<const double> centers, double sigma);

/// Atoms evaluated on a sample and scaled to unit empirical norm.
struct DesignMatrix {
  Eigen::MatrixXd columns;  // n x N
  Eigen::VectorXd scales;   // pre-normalization empirical norms
  std::vector<AtomSpec> atoms;

  Eigen::Index sample_count() const noexcept { return columns.rows(); }
  Eigen::Index atom_count() const noexcept { return columns.cols(); }
};

inline constexpr double kZeroNormThreshold = 1e-14;

DesignMatrix eval_normalized_design(const std::vector<AtomSpec>& atoms,
                                    std::span<const double> points);

/// Normalizes precomputed raw columns (one atom per column). The atoms are
/// recorded as non-evaluable Custom specs, so the design can be fitted but
/// not re-evaluated at new points. Used for abstract Hilbert-space runs.
DesignMatrix normalize_columns(Eigen::MatrixXd raw);

/// Empirical Gram matrix n^-1 X^T X.
Eigen::MatrixXd empirical_gram(const DesignMatrix& design);

inline constexpr std::size_t kUnboundedStep = std::numeric_limits<std::size_t>::max();

/// Largest step size s with s <= (2M)^-1 + 1. M == 0 maps to `cap`.
std::size_t max_step_size(double coherence, std::size_t cap = kUnboundedStep);

struct CoherenceReport {
  double coherence = 0.0;
  std::pair<std::size_t, std::size_t> argmax_pair{0, 1};
  std::size_t s_max = 1;
};

/// Maximum absolute off-diagonal entry of the empirical Gram matrix. The
/// first attaining pair in row-major order (i < j) is reported.
CoherenceReport coherence(const DesignMatrix& design);

}  // namespace osga

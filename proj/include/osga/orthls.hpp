#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace osga {

/// Empirical inner product <u, v>_n = n^-1 sum u_i v_i.
inline double empirical_dot(const Eigen::Ref<const Eigen::VectorXd>& u,
                            const Eigen::Ref<const Eigen::VectorXd>& v) {
  return u.dot(v) / static_cast<double>(u.size());
}

inline double empirical_norm(const Eigen::Ref<const Eigen::VectorXd>& u) {
  return u.norm() / std::sqrt(static_cast<double>(u.size()));
}

/// Incrementally built thin QR factor of a column set, orthonormal in the
/// empirical inner product: columns[:, j] = Q * R[:, j] for accepted columns.
///
/// Columns are orthogonalized by modified Gram-Schmidt with one
/// re-orthogonalization pass. A column whose remaining norm falls below
/// 1e-10 times the largest column norm seen so far is rejected as dependent.
class OrthoFactor {
 public:
  static constexpr double kRelativeRankTol = 1e-10;

  OrthoFactor() = default;
  explicit OrthoFactor(Eigen::Index sample_count);

  struct AppendResult {
    std::vector<std::size_t> accepted;
    std::vector<std::size_t> rejected;
  };

  /// Appends one column; returns false (and leaves the factor unchanged) when
  /// it is numerically dependent on the current basis.
  bool append(const Eigen::Ref<const Eigen::VectorXd>& column, std::size_t source_index);

  /// Appends every column of `columns` in order. source_indices[j] labels
  /// columns[:, j].
  AppendResult append(const Eigen::Ref<const Eigen::MatrixXd>& columns,
                      const std::vector<std::size_t>& source_indices);

  struct Projection {
    Eigen::VectorXd q_coefficients;
    Eigen::VectorXd fitted;
    Eigen::VectorXd residual;
  };

  /// Orthogonal projection of y onto span(Q) in the empirical metric.
  Projection project(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  /// Solves R a = q_coefficients so that columns * a = Q * q_coefficients.
  /// Uses the leading q_coefficients.size() block, which lets callers
  /// recover coefficients of earlier prefixes of the basis.
  Eigen::VectorXd atom_coefficients(const Eigen::Ref<const Eigen::VectorXd>& q_coefficients) const;

  Eigen::Index sample_count() const noexcept { return n_; }
  Eigen::Index rank() const noexcept { return rank_; }
  auto q_basis() const { return q_.leftCols(rank_); }
  auto r_upper() const { return r_.topLeftCorner(rank_, rank_); }
  const std::vector<std::size_t>& source_index() const noexcept { return source_; }
  double rank_tolerance() const noexcept { return kRelativeRankTol * max_norm_seen_; }

 private:
  void reserve(Eigen::Index columns);

  Eigen::Index n_ = 0;
  Eigen::Index rank_ = 0;
  Eigen::MatrixXd q_;  // n x capacity, first rank_ columns live
  Eigen::MatrixXd r_;  // capacity x capacity, upper-left rank_ block live
  std::vector<std::size_t> source_;
  double max_norm_seen_ = 0.0;
};

}  // namespace osga

#include "osga/orthls.hpp"

#include "osga/errors.hpp"

#include <algorithm>

namespace osga {

OrthoFactor::OrthoFactor(Eigen::Index sample_count) : n_(sample_count), q_(sample_count, 0) {}

void OrthoFactor::reserve(Eigen::Index columns) {
  if (columns <= q_.cols()) return;
  const Eigen::Index capacity = std::max<Eigen::Index>(columns, 2 * q_.cols());
  Eigen::MatrixXd q(n_, capacity);
  q.leftCols(rank_) = q_.leftCols(rank_);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(capacity, capacity);
  r.topLeftCorner(rank_, rank_) = r_.topLeftCorner(rank_, rank_);
  q_ = std::move(q);
  r_ = std::move(r);
}

bool OrthoFactor::append(const Eigen::Ref<const Eigen::VectorXd>& column,
                         std::size_t source_index) {
  if (column.size() != n_) {
    throw DimensionMismatch("OrthoFactor::append", static_cast<std::size_t>(n_),
                            static_cast<std::size_t>(column.size()));
  }
  const double input_norm = empirical_norm(column);
  max_norm_seen_ = std::max(max_norm_seen_, input_norm);

  Eigen::VectorXd v = column;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(rank_);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < rank_; ++i) {
      const double c = empirical_dot(q_.col(i), v);
      v.noalias() -= c * q_.col(i);
      coeffs(i) += c;
    }
    if (pass == 0 && rank_ > 0 && !(empirical_norm(v) >= rank_tolerance())) return false;
  }
  const double remaining = empirical_norm(v);
  if (!(remaining >= rank_tolerance()) || remaining == 0.0) return false;

  reserve(rank_ + 1);
  q_.col(rank_) = v / remaining;
  r_.col(rank_).head(rank_) = coeffs;
  r_(rank_, rank_) = remaining;
  ++rank_;
  source_.push_back(source_index);
  return true;
}

OrthoFactor::AppendResult OrthoFactor::append(const Eigen::Ref<const Eigen::MatrixXd>& columns,
                                              const std::vector<std::size_t>& source_indices) {
  if (static_cast<std::size_t>(columns.cols()) != source_indices.size()) {
    throw DimensionMismatch("OrthoFactor::append source indices", static_cast<std::size_t>(columns.cols()),
                            source_indices.size());
  }
  if (columns.rows() != n_) {
    throw DimensionMismatch("OrthoFactor::append", static_cast<std::size_t>(n_),
                            static_cast<std::size_t>(columns.rows()));
  }
  AppendResult result;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    const std::size_t label = source_indices[static_cast<std::size_t>(j)];
    (append(columns.col(j), label) ? result.accepted : result.rejected).push_back(label);
  }
  return result;
}

OrthoFactor::Projection OrthoFactor::project(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (y.size() != n_) {
    throw DimensionMismatch("OrthoFactor::project", static_cast<std::size_t>(n_),
                            static_cast<std::size_t>(y.size()));
  }
  Projection p;
  const auto q = q_basis();
  p.q_coefficients = q.transpose() * y / static_cast<double>(n_);
  p.fitted = q * p.q_coefficients;
  p.residual = y - p.fitted;
  return p;
}

Eigen::VectorXd OrthoFactor::atom_coefficients(
    const Eigen::Ref<const Eigen::VectorXd>& q_coefficients) const {
  const Eigen::Index k = q_coefficients.size();
  if (k > rank_) {
    throw DimensionMismatch("OrthoFactor::atom_coefficients", static_cast<std::size_t>(rank_),
                            static_cast<std::size_t>(k));
  }
  if (k == 0) return {};
  const auto r = r_.topLeftCorner(k, k);
  const double tol = rank_tolerance();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(r(i, i) >= tol) || r(i, i) == 0.0) {
      throw SingularFactor("R diagonal " + std::to_string(i) + " below rank tolerance");
    }
  }
  return r.triangularView<Eigen::Upper>().solve(q_coefficients);
}

}  // namespace osga

#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace osga::bench {

inline constexpr double kDefaultSparsityTol = 1e-10;

/// sqrt(mean((predicted - truth)^2)).
double rmse(const Eigen::Ref<const Eigen::VectorXd>& predicted, const Eigen::Ref<const Eigen::VectorXd>& truth);

/// Count of entries with |a_i| > tol.
std::size_t sparsity(const Eigen::Ref<const Eigen::VectorXd>& coefficients, double tol = kDefaultSparsityTol);

}  // namespace osga::bench

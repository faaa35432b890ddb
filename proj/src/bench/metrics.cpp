#include "osga/bench/metrics.hpp"

#include "osga/errors.hpp"

#include <cmath>

namespace osga::bench {

double rmse(const Eigen::Ref<const Eigen::VectorXd>& predicted, const Eigen::Ref<const Eigen::VectorXd>& truth) {
  if (predicted.size() != truth.size()) {
    throw DimensionMismatch("rmse", static_cast<std::size_t>(truth.size()),
                            static_cast<std::size_t>(predicted.size()));
  }
  if (truth.size() == 0) throw DomainError("rmse of empty vectors");
  return std::sqrt((predicted - truth).squaredNorm() / static_cast<double>(truth.size()));
}

std::size_t sparsity(const Eigen::Ref<const Eigen::VectorXd>& coefficients, double tol) {
  if (!(tol >= 0.0)) throw DomainError("sparsity tolerance must be nonnegative");
  return static_cast<std::size_t>((coefficients.array().abs() > tol).count());
}

}  // namespace osga::bench

// Independent reference computations used only by the tests. None of these
// call into the library's numerical routines.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng); }

/// Columns scaled to unit empirical norm (n^-1 sum x^2 = 1).
inline Eigen::MatrixXd unit_empirical_columns(Eigen::MatrixXd m) {
  const double root_n = std::sqrt(static_cast<double>(m.rows()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) *= root_n / m.col(j).norm();
  return m;
}

/// Classical dense Gram-Schmidt in the plain Euclidean metric, returning
/// unit vectors; the empirical-metric basis is this times sqrt(n).
inline Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd q(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Eigen::VectorXd v = a.col(j);
    for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(a.col(j)) * q.col(i);
    q.col(j) = v / v.norm();
  }
  return q;
}

/// Least-squares fitted values via the normal equations.
inline Eigen::VectorXd normal_equations_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd gram = x.transpose() * x;
  const Eigen::VectorXd coef = gram.ldlt().solve(x.transpose() * y);
  return x * coef;
}

/// Least-squares fitted values via column-pivoted Householder QR.
inline Eigen::VectorXd qr_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return x * x.colPivHouseholderQr().solve(y);
}

struct OgaTrace {
  std::vector<std::size_t> indices;
  std::vector<double> residual_norms;  // empirical norms
};

/// Textbook OGA: pick argmax |<r, g>| (lowest index on ties, previously
/// chosen excluded), refit the full least-squares problem from scratch.
inline OgaTrace naive_oga(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, std::size_t steps) {
  OgaTrace trace;
  Eigen::VectorXd residual = y;
  std::vector<bool> used(static_cast<std::size_t>(design.cols()), false);
  const double n = static_cast<double>(design.rows());
  for (std::size_t k = 0; k < steps && k < used.size(); ++k) {
    std::size_t best = 0;
    double best_value = -1.0;
    for (Eigen::Index j = 0; j < design.cols(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double value = std::abs(design.col(j).dot(residual)) / n;
      if (value > best_value) {
        best_value = value;
        best = static_cast<std::size_t>(j);
      }
    }
    used[best] = true;
    trace.indices.push_back(best);
    Eigen::MatrixXd sub(design.rows(), static_cast<Eigen::Index>(trace.indices.size()));
    for (std::size_t i = 0; i < trace.indices.size(); ++i) {
      sub.col(static_cast<Eigen::Index>(i)) = design.col(static_cast<Eigen::Index>(trace.indices[i]));
    }
    residual = y - qr_fit(sub, y);
    trace.residual_norms.push_back(residual.norm() / std::sqrt(n));
  }
  return trace;
}

/// Cyclic coordinate descent for min ||y - X a||_n^2 / 2 + lambda ||a||_1,
/// with unit-empirical-norm columns.
inline Eigen::VectorXd lasso_coordinate_descent(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                                                int sweeps = 20000) {
  const double n = static_cast<double>(x.rows());
  Eigen::VectorXd a = Eigen::VectorXd::Zero(x.cols());
  Eigen::VectorXd residual = y;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double biggest = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double norm_sq = x.col(j).squaredNorm() / n;
      const double rho = x.col(j).dot(residual) / n + norm_sq * a(j);
      const double updated = (rho > lambda ? rho - lambda : rho < -lambda ? rho + lambda : 0.0) / norm_sq;
      const double delta = updated - a(j);
      if (delta != 0.0) {
        residual -= delta * x.col(j);
        a(j) = updated;
        biggest = std::max(biggest, std::abs(delta));
      }
    }
    if (biggest < 1e-15) break;
  }
  return a;
}

inline double lasso_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& a,
                              double lambda) {
  return 0.5 * (y - x * a).squaredNorm() / static_cast<double>(x.rows()) + lambda * a.cwiseAbs().sum();
}

/// argmin_u (u - x)^2 / 2 + t sqrt|u| by dense grid search followed by
/// golden-section refinement around the best grid point.
inline double half_prox_grid(double x, double t) {
  auto objective = [&](double u) { return 0.5 * (u - x) * (u - x) + t * std::sqrt(std::abs(u)); };
  const double span = std::abs(x) + 1.0;
  const int points = 200001;
  double best_u = 0.0, best_value = objective(0.0);
  const double step = 2.0 * span / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double u = -span + step * i;
    const double v = objective(u);
    if (v < best_value) {
      best_value = v;
      best_u = u;
    }
  }
  if (best_u == 0.0) return 0.0;
  double lo = best_u - step, hi = best_u + step;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - ratio * (hi - lo), b = lo + ratio * (hi - lo);
    if (objective(a) < objective(b)) hi = b; else lo = a;
  }
  const double u = 0.5 * (lo + hi);
  return objective(u) < objective(0.0) ? u : 0.0;
}

}  // namespace oracle

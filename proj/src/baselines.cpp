#include "osga/baselines.hpp"

#include "osga/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace osga {

std::string to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::Ridge: return "ridge";
    case BaselineMethod::LassoISTA: return "lasso";
    case BaselineMethod::HalfIST: return "half";
    case BaselineMethod::L2Boost: return "l2boost";
  }
  return "unknown";
}

GramSystem make_gram_system(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (y.size() != design.sample_count()) {
    throw DimensionMismatch("make_gram_system targets", static_cast<std::size_t>(design.sample_count()),
                            static_cast<std::size_t>(y.size()));
  }
  const double inv_n = 1.0 / static_cast<double>(design.sample_count());
  GramSystem system;
  system.gram = empirical_gram(design);
  system.rhs = design.columns.transpose() * y * inv_n;
  system.energy = y.squaredNorm() * inv_n;
  system.sample_count = design.sample_count();
  return system;
}

double soft_threshold(double x, double t) {
  const double magnitude = std::abs(x) - t;
  return magnitude > 0.0 ? std::copysign(magnitude, x) : 0.0;
}

double half_threshold_radius(double t) { return 1.5 * std::cbrt(t * t); }

double half_threshold(double x, double t) {
  if (!(t >= 0.0)) throw DomainError("threshold must be nonnegative");
  if (t == 0.0) return x;
  const double ax = std::abs(x);
  if (ax <= half_threshold_radius(t)) return 0.0;

  // Closed trigonometric form for the positive stationary point of
  // (u - |x|)^2 / 2 + t sqrt(u), then a Newton polish on
  // u - |x| + t / (2 sqrt(u)) = 0.
  const double lam = 2.0 * t;
  const double phi = std::acos(std::clamp(lam / 8.0 * std::pow(ax / 3.0, -1.5), -1.0, 1.0));
  double u = 2.0 / 3.0 * ax * (1.0 + std::cos(2.0 * std::numbers::pi / 3.0 - 2.0 / 3.0 * phi));
  for (int step = 0; step < 3 && u > 0.0; ++step) {
    const double root = std::sqrt(u);
    const double g = u - ax + t / (2.0 * root);
    const double dg = 1.0 - t / (4.0 * u * root);
    if (dg <= 0.0) break;
    const double next = u - g / dg;
    if (!(next > 0.0)) break;
    u = next;
  }
  const double at_u = 0.5 * (u - ax) * (u - ax) + t * std::sqrt(u);
  const double at_zero = 0.5 * ax * ax;
  return at_u < at_zero ? std::copysign(u, x) : 0.0;
}

double spectral_norm(const Eigen::MatrixXd& symmetric, double rel_tol, std::size_t max_iterations) {
  if (symmetric.rows() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(symmetric.rows()).normalized();
  double estimate = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd w = symmetric * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(norm - estimate) <= rel_tol * norm) return norm;
    estimate = norm;
  }
  return estimate;
}

double penalty_value(BaselineMethod method, const Eigen::Ref<const Eigen::VectorXd>& coefficients) {
  switch (method) {
    case BaselineMethod::LassoISTA: return coefficients.cwiseAbs().sum();
    case BaselineMethod::HalfIST: return coefficients.cwiseAbs().cwiseSqrt().sum();
    case BaselineMethod::Ridge: return 0.5 * coefficients.squaredNorm();
    case BaselineMethod::L2Boost: return 0.0;
  }
  return 0.0;
}

namespace {

double quadratic_loss(const GramSystem& system, const Eigen::VectorXd& a, const Eigen::VectorXd& gram_a) {
  return 0.5 * (system.energy - 2.0 * system.rhs.dot(a) + a.dot(gram_a));
}

}  // namespace

BaselineModel ista_fit(const GramSystem& system, const BaselineConfig& config) {
  if (config.method != BaselineMethod::LassoISTA && config.method != BaselineMethod::HalfIST) {
    throw DomainError("ista_fit handles the lasso and half methods only");
  }
  if (!(config.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  const Eigen::Index count = system.gram.rows();
  if (system.rhs.size() != count) {
    throw DimensionMismatch("ista_fit rhs", static_cast<std::size_t>(count),
                            static_cast<std::size_t>(system.rhs.size()));
  }

  BaselineModel model;
  model.config = config;
  if (!config.step_nu) model.config.step_nu = 0.99 / spectral_norm(system.gram);
  const double nu = *model.config.step_nu;
  if (!(nu > 0.0)) throw DomainError("ISTA step must be positive");
  const double threshold = nu * config.lambda;
  const bool half = config.method == BaselineMethod::HalfIST;

  Eigen::VectorXd a = Eigen::VectorXd::Zero(count);
  Eigen::VectorXd gram_a = Eigen::VectorXd::Zero(count);
  Eigen::VectorXd next(count);
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    const Eigen::VectorXd gradient_step = a + nu * (system.rhs - gram_a);
    for (Eigen::Index j = 0; j < count; ++j) {
      next(j) = half ? half_threshold(gradient_step(j), threshold) : soft_threshold(gradient_step(j), threshold);
    }
    const double change = (next - a).cwiseAbs().maxCoeff();
    a.swap(next);
    gram_a.noalias() = system.gram * a;
    model.objective_history.push_back(quadratic_loss(system, a, gram_a) +
                                      config.lambda * penalty_value(config.method, a));
    ++model.iterations;
    if (change < config.convergence_tol) break;
  }
  model.coefficients = std::move(a);
  return model;
}

BaselineModel ista_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                       const BaselineConfig& config) {
  return ista_fit(make_gram_system(design, y), config);
}

BaselineModel ridge_fit(const GramSystem& system, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  const Eigen::Index count = system.gram.rows();
  Eigen::MatrixXd lhs = system.gram;
  lhs.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
  const auto pivots = ldlt.vectorD().cwiseAbs();
  const double largest = count > 0 ? pivots.maxCoeff() : 0.0;
  if (ldlt.info() != Eigen::Success ||
      (count > 0 && !(pivots.minCoeff() > 1e-12 * std::max(largest, 1.0)))) {
    throw SingularSystem("ridge normal equations are singular (lambda = " + std::to_string(lambda) + ")");
  }
  BaselineModel model;
  model.config.method = BaselineMethod::Ridge;
  model.config.lambda = lambda;
  model.coefficients = ldlt.solve(system.rhs);
  return model;
}

BaselineModel ridge_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y, double lambda) {
  return ridge_fit(make_gram_system(design, y), lambda);
}

BaselineModel l2boost_fit(const GramSystem& system, const BaselineConfig& config, const BoostObserver& observer) {
  if (config.method != BaselineMethod::L2Boost) throw DomainError("l2boost_fit needs the L2Boost method");
  BaselineModel model;
  model.config = config;
  if (!config.step_nu) model.config.step_nu = kL2BoostDefaultStep;
  const double nu = *model.config.step_nu;
  if (!(nu > 0.0)) throw DomainError("boosting step must be positive");

  const Eigen::Index count = system.gram.rows();
  model.coefficients = Eigen::VectorXd::Zero(count);
  if (count == 0) return model;
  // correlations = <r, g_j>_n = rhs - Gram a
  Eigen::VectorXd correlations = system.rhs;
  double risk = system.energy;
  model.objective_history.reserve(config.max_iterations);
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    Eigen::Index best = 0;
    correlations.cwiseAbs().maxCoeff(&best);  // first maximum, i.e. lowest index on ties
    const double c = correlations(best);
    const double delta = nu * c;
    model.coefficients(best) += delta;
    correlations.noalias() -= delta * system.gram.col(best);
    risk += -2.0 * delta * c + delta * delta * system.gram(best, best);
    model.objective_history.push_back(std::max(risk, 0.0));
    ++model.iterations;
    if (observer) observer(it, static_cast<std::size_t>(best), delta);
  }
  return model;
}

BaselineModel l2boost_fit(const DesignMatrix& design, const Eigen::Ref<const Eigen::VectorXd>& y,
                          const BaselineConfig& config, const BoostObserver& observer) {
  return l2boost_fit(make_gram_system(design, y), config, observer);
}

}  // namespace osga

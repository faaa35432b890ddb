#include "oracles.hpp"
#include "osga/datagen.hpp"
#include "osga/dictionary.hpp"
#include "osga/errors.hpp"
#include "osga/greedy.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace osga;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

DesignMatrix orthonormal_design(Eigen::Index n, Eigen::Index count) {
  return normalize_columns(MatrixXd::Identity(n, count));
}

DesignMatrix random_design(Eigen::Index n, Eigen::Index count, std::mt19937_64& rng) {
  return normalize_columns(oracle::random_matrix(n, count, rng));
}

GreedyConfig config_for(std::size_t s, std::size_t m) {
  GreedyConfig config;
  config.step_size = s;
  config.max_iterations = m;
  return config;
}

}  // namespace

TEST_CASE("select_super_atoms: examples") {
  const auto design = orthonormal_design(8, 6);
  CHECK(select_super_atoms(design.columns.col(3), design, {}, 1) == std::vector<std::size_t>{3});

  const VectorXd tied = design.columns.col(2) - design.columns.col(5);
  CHECK(select_super_atoms(tied, design, {}, 1) == std::vector<std::size_t>{2});
  CHECK(select_super_atoms(tied, design, {}, 2) == std::vector<std::size_t>{2, 5});

  std::vector<bool> excluded(6, false);
  excluded[2] = true;
  CHECK(select_super_atoms(tied, design, excluded, 1) == std::vector<std::size_t>{5});
  // more requested than available
  excluded.assign(6, true);
  excluded[4] = false;
  CHECK(select_super_atoms(tied, design, excluded, 3) == std::vector<std::size_t>{4});
  excluded[4] = true;
  CHECK_THROWS_AS(select_super_atoms(tied, design, excluded, 1), EmptyCandidateSet);
}

TEST_CASE("select_super_atoms: 12 atoms, s = 3, against a full sort") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto design = random_design(15, 12, rng);
    const VectorXd r = oracle::random_vector(15, rng);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t j = 0; j < 12; ++j)
      scored.emplace_back(-std::abs(design.columns.col(static_cast<Eigen::Index>(j)).dot(r) / 15.0), j);
    std::sort(scored.begin(), scored.end());
    const auto chosen = select_super_atoms(r, design, {}, 3);
    REQUIRE(chosen.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(chosen[i] == scored[i].second);
  }
}

TEST_CASE("osga_fit: zero target") {
  std::mt19937_64 rng(1);
  const auto design = random_design(20, 10, rng);
  const auto fit = osga_fit(VectorXd::Zero(20), design, config_for(2, 5));
  REQUIRE(fit.iterations() == 1);
  CHECK(fit.history[0].residual_norm == 0.0);
  CHECK(fit.history[0].atom_coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.truncation_level == 1.0);
}

TEST_CASE("osga_fit: s = 1 reproduces naive OGA") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto design = random_design(30, 20, rng);
    const VectorXd y = oracle::random_vector(30, rng);
    const auto fit = osga_fit(y, design, config_for(1, 15));
    const auto naive = oracle::naive_oga(design.columns, y, 15);
    REQUIRE(fit.selected_atoms() == naive.indices);
    for (std::size_t k = 0; k < 15; ++k) REQUIRE(std::abs(fit.history[k].residual_norm - naive.residual_norms[k]) <= 1e-8);
  }
}

TEST_CASE("osga_fit: orthonormal design, s = 2, one iteration") {
  std::mt19937_64 rng(8);
  const auto design = orthonormal_design(10, 7);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd y = oracle::random_vector(10, rng);
    const auto fit = osga_fit(y, design, config_for(2, 1));
    double best = -1.0;
    VectorXd best_fit;
    for (Eigen::Index i = 0; i < 7; ++i) {
      for (Eigen::Index j = i + 1; j < 7; ++j) {
        MatrixXd pair(10, 2);
        pair << design.columns.col(i), design.columns.col(j);
        const VectorXd fitted = oracle::qr_fit(pair, y);
        if (fitted.squaredNorm() > best) {
          best = fitted.squaredNorm();
          best_fit = fitted;
        }
      }
    }
    const VectorXd fitted = y - fit.factor.project(y).residual;
    CHECK((fitted - best_fit).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("truncate") {
  CHECK(truncate(7, 5) == 5);
  CHECK(truncate(-7, 5) == -5);
  CHECK(truncate(3, 5) == 3);
  CHECK_THROWS_AS(truncate(1, 0), DomainError);
}

TEST_CASE("choose_m_l0") {
  const std::vector<double> decreasing{0.9, 0.5, 0.45, 0.44};
  CHECK(choose_m_l0(decreasing, 0.0, 2, 100) == 4);
  CHECK(choose_m_l0(decreasing, 1e9, 2, 100) == 1);
  // enumeration: risk + m * 2 log(100) / 100 -> 0.9921, 0.6842, 0.7263, 0.8084
  CHECK(choose_m_l0(decreasing, 1.0, 2, 100) == 2);
  const std::vector<double> flat{0.3, 0.3, 0.3};
  CHECK(choose_m_l0(flat, 0.0, 1, 10) == 1);
}

TEST_CASE("argmin_iteration") {
  CHECK(argmin_iteration(std::vector<double>{0.5, 0.4, 0.1, 0.2}) == 3);
  CHECK(argmin_iteration(std::vector<double>{2.0, 2.0, 2.0}) == 1);
  CHECK_THROWS_AS(argmin_iteration(std::vector<double>{}), IterationOutOfRange);
}

TEST_CASE("choose_m_holdout: f1 on TPD, 30 iterations") {
  const auto train = sample_train(TargetFunction::f1(), 400, 0.1, 5);
  const auto validation = sample_train(TargetFunction::f1(), 300, 0.1, 6);
  const auto design = eval_normalized_design(build_tpd(60), std::span(train.inputs.data(), train.inputs.size()));
  const auto fit = osga_fit(train, design, config_for(1, 30));
  REQUIRE(fit.iterations() == 30);
  // re-evaluate every iterate from raw cosines
  std::vector<double> scores;
  for (std::size_t m = 1; m <= 30; ++m) {
    const VectorXd& coef = fit.history[m - 1].atom_coefficients;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < validation.size(); ++i) {
      double value = 0.0;
      for (Eigen::Index j = 0; j < coef.size(); ++j) {
        const double k = static_cast<double>(fit.selected_atoms()[static_cast<std::size_t>(j)] + 1);
        value += coef(j) * std::cos(k * validation.inputs(i)) / design.scales(static_cast<Eigen::Index>(k - 1));
      }
      value = std::clamp(value, -fit.truncation_level, fit.truncation_level);
      sum += (value - validation.targets(i)) * (value - validation.targets(i));
    }
    scores.push_back(std::sqrt(sum / static_cast<double>(validation.size())));
  }
  const auto expected = static_cast<std::size_t>(std::min_element(scores.begin(), scores.end()) - scores.begin()) + 1;
  CHECK(choose_m_holdout(fit, validation, true) == expected);
}

TEST_CASE("predict") {
  const std::vector<double> centers{0.2, 0.5, 0.8, 0.35, 0.65};
  const auto train = sample_train(TargetFunction::f2(), 50, 0.05, 9);
  const auto design = eval_normalized_design(build_grd(centers, 30.0), std::span(train.inputs.data(), 50));
  const auto fit = osga_fit(train, design, config_for(2, 2));

  SUBCASE("m = 0 is the zero estimator") {
    CHECK(predict(fit, 0, train.inputs, false).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(predict(fit, 3, train.inputs, false), IterationOutOfRange);
  }
  SUBCASE("matches design times coefficients at training inputs") {
    for (std::size_t m = 1; m <= 2; ++m) {
      const VectorXd& coef = fit.history[m - 1].atom_coefficients;
      VectorXd expected = VectorXd::Zero(50);
      for (Eigen::Index j = 0; j < coef.size(); ++j)
        expected += coef(j) * design.columns.col(static_cast<Eigen::Index>(fit.selected_atoms()[static_cast<std::size_t>(j)]));
      CHECK((predict(fit, m, train.inputs, false) - expected).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("single atom with unit coefficient") {
    const VectorXd y = design.columns.col(3);
    const auto one = osga_fit(y, design, config_for(1, 1));
    REQUIRE(one.selected_atoms() == std::vector<std::size_t>{3});
    CHECK(one.history[0].atom_coefficients(0) == doctest::Approx(1.0));
    const VectorXd points = VectorXd::LinSpaced(7, 0, 1);
    const VectorXd values = predict(one, 1, points, false);
    for (Eigen::Index i = 0; i < 7; ++i)
      CHECK(values(i) == doctest::Approx(std::exp(-30.0 * std::pow(points(i) - 0.35, 2)) / design.scales(3)));
  }
}

TEST_CASE("property: orthogonality, monotonicity, block condition, truncation") {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<int> n_dist(20, 60), count_dist(10, 40), s_dist(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = n_dist(rng), count = count_dist(rng);
    const std::size_t s = static_cast<std::size_t>(s_dist(rng));
    const auto design = random_design(n, count, rng);
    const VectorXd y = oracle::random_vector(n, rng);
    const auto fit = osga_fit(y, design, config_for(s, 50));

    std::vector<bool> seen(static_cast<std::size_t>(count), false);
    double last = empirical_norm(y);
    VectorXd residual = y;
    for (std::size_t k = 0; k < fit.iterations(); ++k) {
      const auto& block = fit.selected_blocks[k];
      // Stage 2 condition against the previous residual, over unseen atoms
      double chosen_min = 1e300, other_max = 0.0;
      for (std::size_t j : block) chosen_min = std::min(chosen_min, std::abs(empirical_dot(residual, design.columns.col(static_cast<Eigen::Index>(j)))));
      std::vector<bool> in_block(static_cast<std::size_t>(count), false);
      for (std::size_t j : block) in_block[j] = true;
      for (int j = 0; j < count; ++j) {
        if (seen[static_cast<std::size_t>(j)] || in_block[static_cast<std::size_t>(j)]) continue;
        other_max = std::max(other_max, std::abs(empirical_dot(residual, design.columns.col(j))));
      }
      // with more atoms than samples some candidates are rejected as dependent
      if (count <= n) REQUIRE(chosen_min >= other_max - 1e-12);
      for (std::size_t j : block) {
        REQUIRE_FALSE(seen[j]);
        seen[j] = true;
      }

      const VectorXd& coef = fit.history[k].atom_coefficients;
      VectorXd fitted = VectorXd::Zero(n);
      for (Eigen::Index j = 0; j < coef.size(); ++j)
        fitted += coef(j) * design.columns.col(static_cast<Eigen::Index>(fit.selected_atoms()[static_cast<std::size_t>(j)]));
      residual = y - fitted;
      for (Eigen::Index j = 0; j < coef.size(); ++j)
        REQUIRE(std::abs(empirical_dot(residual, design.columns.col(static_cast<Eigen::Index>(fit.selected_atoms()[static_cast<std::size_t>(j)])))) <= 1e-8);
      REQUIRE(fit.history[k].residual_norm <= last + 1e-12);
      last = fit.history[k].residual_norm;

      double truncated = 0.0;
      for (int i = 0; i < n; ++i) truncated += std::pow(y(i) - truncate(fitted(i), fit.truncation_level), 2);
      REQUIRE(std::sqrt(truncated / n) <= empirical_norm(residual) + 1e-12);
    }
  }
}

TEST_CASE("coherence gate") {
  std::mt19937_64 rng(9);
  const auto design = random_design(10, 30, rng);  // far from incoherent
  GreedyConfig config = config_for(5, 2);
  config.enforce_coherence_gate = true;
  CHECK_THROWS_AS(osga_fit(VectorXd::Ones(10), design, config), CoherenceGateViolation);
  config.step_size = coherence(design).s_max;
  CHECK_NOTHROW(osga_fit(VectorXd::Ones(10), design, config));
}

TEST_CASE("osga_fit: dependent atoms are replaced within the block") {
  MatrixXd raw(6, 4);
  raw.setZero();
  raw(0, 0) = 1;
  raw(0, 1) = 2;  // parallel to atom 0
  raw(1, 2) = 1;
  raw(2, 3) = 1;
  const auto design = normalize_columns(raw);
  VectorXd y(6);
  y << 3, 0, 1, 0.5, 0, 0;
  const auto fit = osga_fit(y, design, config_for(2, 1));
  CHECK(fit.selected_blocks[0] == std::vector<std::size_t>{0, 3});
  CHECK(fit.factor.rank() == 2);
}

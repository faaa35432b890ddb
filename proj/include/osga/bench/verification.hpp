#pragma once

#include "osga/dictionary.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace osga::bench {

enum class BoundKind {
  /// ||r_k||^2 <= ||f - h||^2 + 13.5 (sum |c_j|)^2 / (s k)
  Incoherent,
  /// ||r_k||^2 <= 40.5 (sum |c_j|) / (s k) for f in the L1 ball of the dictionary
  ConvexHull,
};

std::string to_string(BoundKind kind);

/// A target f = sum_j c_j g_j + e with e orthogonal to every atom, over a
/// random unit-norm dictionary in R^d with the normalized inner product
/// <u, v> = d^-1 u.v. h = sum_j c_j g_j, so sum |c_j| bounds ||h||_L1 and
/// ||f - h||^2 = ||e||^2.
struct SyntheticBoundInstance {
  BoundKind kind = BoundKind::Incoherent;
  std::uint64_t seed = 0;
  DesignMatrix design;
  Eigen::VectorXd target;
  Eigen::VectorXd coefficients;  // c_j, one per atom (mostly zero)
  double remainder_energy = 0.0;  // ||f - h||^2
  double coherence = 0.0;
  std::size_t step_size = 1;
  std::size_t iterations = 1;

  Eigen::Index dimension() const noexcept { return design.sample_count(); }
  Eigen::Index atom_count() const noexcept { return design.atom_count(); }
  double l1_bound() const { return coefficients.cwiseAbs().sum(); }
  /// Right-hand side of the checked inequality after k iterations.
  double bound(std::size_t k) const;
};

struct InstanceParams {
  Eigen::Index dimension = 400;
  Eigen::Index atom_count = 50;
  std::size_t term_count = 10;
  double remainder_norm = 0.3;  // ||e||, Incoherent only
  /// 0 picks s = s_max of the measured coherence.
  std::size_t step_size = 0;
  /// 0 runs until the dictionary is exhausted.
  std::size_t iterations = 0;
};

SyntheticBoundInstance make_incoherent_instance(const InstanceParams& params, std::uint64_t seed);
/// Convex combination target: c_j >= 0 with sum c_j = 1.
SyntheticBoundInstance make_convex_instance(const InstanceParams& params, std::uint64_t seed);

/// Random dictionary of unit-norm Gaussian atoms in the normalized metric.
DesignMatrix random_unit_dictionary(Eigen::Index dimension, Eigen::Index atom_count, std::uint64_t seed);

struct InstanceResult {
  std::string check;
  std::size_t id = 0;
  std::size_t step_size = 0;
  double coherence = 0.0;
  std::size_t iterations = 0;
  double min_slack = 0.0;  // min over checked quantities of (bound - achieved)
  bool passed = true;
};

struct VerificationReport {
  std::vector<InstanceResult> results;
  std::size_t violations() const;
  bool passed() const { return violations() == 0; }
};

/// Runs OSGA with the coherence gate on and checks the instance's bound at
/// every iteration.
InstanceResult verify_instance(const SyntheticBoundInstance& instance, std::size_t id);

/// Block energy: (1 - M(s-1)) sum a^2 <= ||sum a_i g_i||^2 <= (1 + M(s-1)) sum a^2
/// for random s distinct atoms with M(s-1) < 1. Slack is relative to the
/// bound magnitude; passes when slack >= -rel_tol.
InstanceResult check_block_energy(std::uint64_t seed, std::size_t id, double rel_tol = 1e-9);

/// Projection energy: (1 + M(s-1))^-1 sum <f,g_i>^2 <= ||P f||^2 <= (1 - M(s-1))^-1 sum <f,g_i>^2,
/// with P computed by OrthoFactor.
InstanceResult check_projection_energy(std::uint64_t seed, std::size_t id, double rel_tol = 1e-9);

struct SuiteSizes {
  std::size_t incoherent = 50;
  std::size_t convex = 50;
  std::size_t block_energy = 1000;
  std::size_t projection_energy = 1000;
};

std::vector<SyntheticBoundInstance> default_instances(const SuiteSizes& sizes, std::uint64_t seed);

VerificationReport run_verification(const std::vector<SyntheticBoundInstance>& instances);

/// Bound instances plus the block and projection energy checks.
VerificationReport run_default_suite(const SuiteSizes& sizes = {}, std::uint64_t seed = 20131);

}  // namespace osga::bench

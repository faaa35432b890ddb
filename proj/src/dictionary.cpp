#include "osga/dictionary.hpp"

#include "osga/errors.hpp"
#include "osga/orthls.hpp"

#include <cmath>
#include <string>

namespace osga {

AtomSpec AtomSpec::cosine(int frequency) {
  if (frequency < 1) throw DomainError("cosine atom frequency must be a positive integer");
  return AtomSpec{AtomFamily::TrigCosine, static_cast<double>(frequency), 0.0, {}};
}

AtomSpec AtomSpec::gaussian(double center, double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("gaussian atom shape must be nonnegative");
  return AtomSpec{AtomFamily::GaussianRBF, center, sigma, {}};
}

AtomSpec AtomSpec::from_function(std::function<double(double)> fn) {
  return AtomSpec{AtomFamily::Custom, 0.0, 0.0, std::move(fn)};
}

double AtomSpec::operator()(double x) const {
  switch (family) {
    case AtomFamily::TrigCosine:
      return std::cos(parameter * x);
    case AtomFamily::GaussianRBF: {
      const double d = x - parameter;
      return std::exp(-shape * d * d);
    }
    case AtomFamily::Custom:
      if (!custom) throw DomainError("custom atom has no evaluator");
      return custom(x);
  }
  return 0.0;
}

std::vector<AtomSpec> build_tpd(int max_frequency) {
  if (max_frequency < 1) throw DomainError("max_frequency must be >= 1");
  std::vector<AtomSpec> atoms;
  atoms.reserve(static_cast<std::size_t>(max_frequency));
  for (int k = 1; k <= max_frequency; ++k) atoms.push_back(AtomSpec::cosine(k));
  return atoms;
}

std::vector<AtomSpec> build_grd(std::span<const double> centers, double sigma) {
  if (centers.empty()) throw DomainError("GRD needs at least one center");
  std::vector<AtomSpec> atoms;
  atoms.reserve(centers.size());
  for (double t : centers) atoms.push_back(AtomSpec::gaussian(t, sigma));
  return atoms;
}

DesignMatrix eval_normalized_design(const std::vector<AtomSpec>& atoms,
                                    std::span<const double> points) {
  if (points.empty()) throw DomainError("design needs at least one sample point");
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto count = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXd raw(n, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const AtomSpec& atom = atoms[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) raw(i, j) = atom(points[static_cast<std::size_t>(i)]);
  }
  DesignMatrix design = normalize_columns(std::move(raw));
  design.atoms = atoms;
  return design;
}

DesignMatrix normalize_columns(Eigen::MatrixXd raw) {
  DesignMatrix design;
  design.scales.resize(raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double norm = empirical_norm(raw.col(j));
    if (!(norm >= kZeroNormThreshold)) throw ZeroNormAtom(static_cast<std::size_t>(j));
    raw.col(j) /= norm;
    design.scales(j) = norm;
  }
  design.columns = std::move(raw);
  design.atoms.assign(static_cast<std::size_t>(design.columns.cols()), AtomSpec::from_function({}));
  return design;
}

Eigen::MatrixXd empirical_gram(const DesignMatrix& design) {
  Eigen::MatrixXd gram(design.atom_count(), design.atom_count());
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(design.columns.transpose(),
                                                  1.0 / static_cast<double>(design.sample_count()));
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return gram;
}

std::size_t max_step_size(double coherence, std::size_t cap) {
  if (!(coherence >= 0.0 && coherence <= 1.0)) throw DomainError("coherence must lie in [0, 1]");
  if (coherence == 0.0) return cap;
  // Relative slack so that e.g. M = 0.1 yields exactly 6 despite rounding.
  const double bound = 1.0 / (2.0 * coherence) + 1.0;
  const auto s = static_cast<std::size_t>(std::floor(bound * (1.0 + 1e-12)));
  return std::min(std::max<std::size_t>(s, 1), cap);
}

CoherenceReport coherence(const DesignMatrix& design) {
  const Eigen::Index count = design.atom_count();
  if (count < 2) throw TooFewAtoms("coherence needs at least two atoms");
  const Eigen::MatrixXd gram = empirical_gram(design);
  CoherenceReport report;
  report.coherence = -1.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = i + 1; j < count; ++j) {
      const double value = std::abs(gram(i, j));
      if (value > report.coherence) {
        report.coherence = value;
        report.argmax_pair = {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
    }
  }
  // Rounding can push |<g, g>| of a duplicate slightly past 1.
  report.coherence = std::min(report.coherence, 1.0);
  report.s_max = max_step_size(report.coherence, static_cast<std::size_t>(count));
  return report;
}

}  // namespace osga

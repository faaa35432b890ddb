#include "osga/bench/experiment.hpp"

#include "osga/bench/metrics.hpp"
#include "osga/errors.hpp"
#include "osga/greedy.hpp"
#include "osga/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <span>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace osga::bench {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr std::uint64_t kTestSeedLabel = 0x7e57;
constexpr std::uint64_t kValidationSeedLabel = 0x7a11d;
constexpr std::uint64_t kCenterSeedLabel = 0xce47e5;

bool has_baseline(const ExperimentConfig& config) {
  return std::any_of(config.methods.begin(), config.methods.end(),
                     [](const MethodSpec& m) { return m.kind != MethodKind::Osga; });
}

std::vector<AtomSpec> build_atoms(const DictionarySpec& spec, std::uint64_t seed) {
  if (spec.family == AtomFamily::TrigCosine) return build_tpd(static_cast<int>(spec.size));
  const std::uint64_t center_seed = spec.center_seed ? *spec.center_seed : derive_seed(seed, kCenterSeedLabel);
  const Eigen::VectorXd centers = sample_centers(static_cast<Eigen::Index>(spec.size), center_seed);
  return build_grd(std::span<const double>(centers.data(), static_cast<std::size_t>(centers.size())), spec.sigma);
}

Eigen::MatrixXd scaled_atom_values(const DesignMatrix& design, const Eigen::VectorXd& points) {
  Eigen::MatrixXd values(points.size(), design.atom_count());
  for (Eigen::Index j = 0; j < design.atom_count(); ++j) {
    const AtomSpec& atom = design.atoms[static_cast<std::size_t>(j)];
    const double scale = design.scales(j);
    for (Eigen::Index i = 0; i < points.size(); ++i) values(i, j) = atom(points(i)) / scale;
  }
  return values;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& source, const std::vector<std::size_t>& indices) {
  Eigen::MatrixXd out(source.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = source.col(static_cast<Eigen::Index>(indices[j]));
  }
  return out;
}

std::size_t method_rank(const std::string& label) {
  if (label.rfind("OSGA-", 0) == 0) return 0;
  if (label == "ridge") return 1;
  if (label == "lasso") return 2;
  if (label == "half") return 3;
  if (label == "l2boost") return 4;
  return 5;
}

auto row_key(const TrialResult& r) {
  return std::make_tuple(method_rank(r.method), r.s, r.method, r.dictionary, r.target);
}

TrialResult base_result(const TrialData& data, const MethodSpec& method) {
  TrialResult result;
  result.method = method.label();
  result.s = method.kind == MethodKind::Osga ? method.step_size : 0;
  result.dictionary = data.dictionary;
  result.target = data.target;
  result.trial = data.trial;
  return result;
}

TrialResult run_osga(const ExperimentConfig& config, const TrialData& data, const MethodSpec& method,
                     RmsePath* path) {
  GreedyConfig greedy;
  greedy.step_size = method.step_size;
  greedy.max_iterations = (config.max_atoms + method.step_size - 1) / method.step_size;
  const GreedyFit fit = osga_fit(data.train, data.design, greedy);

  const auto test_path = iterate_rmse_path(fit, gather_columns(data.test_atoms, fit.selected_atoms()),
                                           data.test.targets, config.truncate);
  std::size_t chosen = 0;
  switch (config.selector) {
    case Selector::TestSet:
      chosen = argmin_iteration(test_path);
      break;
    case Selector::Holdout:
      chosen = argmin_iteration(iterate_rmse_path(fit, gather_columns(data.validation_atoms, fit.selected_atoms()),
                                                  data.validation->targets, config.truncate));
      break;
    case Selector::L0Penalty:
      chosen = choose_m_l0(fit, config.kappa);
      break;
    case Selector::Fixed:
      chosen = fit.iterations();
      break;
  }

  TrialResult result = base_result(data, method);
  const IterateRecord& record = fit.history[chosen - 1];
  result.rmse = test_path[chosen - 1];
  result.sparsity = sparsity(record.atom_coefficients, config.sparsity_tol);
  result.train_seconds = record.cumulative_seconds;
  result.hyperparam = static_cast<double>(chosen);

  if (path != nullptr) {
    path->method = result.method;
    path->s = result.s;
    path->dictionary = data.dictionary;
    path->trial = data.trial;
    path->rmse = test_path;
    path->atoms.clear();
    for (std::size_t m = 1; m <= fit.iterations(); ++m) {
      path->atoms.push_back(static_cast<std::size_t>(fit.atom_count(m)));
    }
  }
  return result;
}

TrialResult run_lambda_method(const ExperimentConfig& config, const TrialData& data, const MethodSpec& method) {
  const GramSystem& system = *data.gram;
  const bool holdout = config.selector == Selector::Holdout;
  const Eigen::MatrixXd& select_atoms = holdout ? data.validation_atoms : data.test_atoms;
  const Eigen::VectorXd& select_truth = holdout ? data.validation->targets : data.test.targets;

  double step_seconds = 0.0;
  BaselineConfig baseline;
  if (method.kind != MethodKind::Ridge) {
    const auto start = Clock::now();
    baseline.method = method.kind == MethodKind::Lasso ? BaselineMethod::LassoISTA : BaselineMethod::HalfIST;
    baseline.step_nu = 0.99 / spectral_norm(system.gram);
    baseline.max_iterations = config.ista_max_iterations;
    baseline.convergence_tol = config.ista_tol;
    step_seconds = seconds_since(start);
  }

  double best_score = std::numeric_limits<double>::infinity();
  TrialResult result = base_result(data, method);
  for (double lambda : config.lambda_grid()) {
    const auto start = Clock::now();
    BaselineModel model;
    if (method.kind == MethodKind::Ridge) {
      model = ridge_fit(system, lambda);
    } else {
      baseline.lambda = lambda;
      model = ista_fit(system, baseline);
    }
    const double fit_seconds = seconds_since(start);
    const double score = rmse(select_atoms * model.coefficients, select_truth);
    if (score < best_score) {
      best_score = score;
      result.rmse = holdout ? rmse(data.test_atoms * model.coefficients, data.test.targets) : score;
      result.sparsity = sparsity(model.coefficients, config.sparsity_tol);
      result.train_seconds = data.gram_seconds + step_seconds + fit_seconds;
      result.hyperparam = lambda;
    }
  }
  return result;
}

TrialResult run_l2boost(const ExperimentConfig& config, const TrialData& data, const MethodSpec& method) {
  const GramSystem& system = *data.gram;
  const bool holdout = config.selector == Selector::Holdout;
  const Eigen::MatrixXd& select_atoms = holdout ? data.validation_atoms : data.test_atoms;
  const Eigen::VectorXd& select_truth = holdout ? data.validation->targets : data.test.targets;

  BaselineConfig baseline;
  baseline.method = BaselineMethod::L2Boost;
  baseline.step_nu = config.l2boost_nu;
  baseline.max_iterations = config.l2boost_max_iterations;

  // Track the selection-set error of every boosting iterate.
  Eigen::VectorXd select_error = select_truth;
  Eigen::VectorXd test_error = data.test.targets;
  std::vector<double> select_sq(baseline.max_iterations);
  std::vector<double> test_sq(holdout ? baseline.max_iterations : 0);
  l2boost_fit(system, baseline, [&](std::size_t it, std::size_t atom, double delta) {
    const auto j = static_cast<Eigen::Index>(atom);
    select_error.noalias() -= delta * select_atoms.col(j);
    select_sq[it - 1] = select_error.squaredNorm();
    if (holdout) {
      test_error.noalias() -= delta * data.test_atoms.col(j);
      test_sq[it - 1] = test_error.squaredNorm();
    }
  });

  std::size_t chosen = baseline.max_iterations;
  if (config.selector != Selector::Fixed && !select_sq.empty()) chosen = argmin_iteration(select_sq);

  TrialResult result = base_result(data, method);
  if (chosen == 0) {
    result.rmse = rmse(Eigen::VectorXd::Zero(data.test.size()), data.test.targets);
    result.train_seconds = data.gram_seconds;
    return result;
  }
  baseline.max_iterations = chosen;
  const auto start = Clock::now();
  const BaselineModel model = l2boost_fit(system, baseline);
  result.train_seconds = data.gram_seconds + seconds_since(start);
  const double sq = holdout ? test_sq[chosen - 1] : select_sq[chosen - 1];
  result.rmse = std::sqrt(sq / static_cast<double>(data.test.size()));
  result.sparsity = sparsity(model.coefficients, config.sparsity_tol);
  result.hyperparam = static_cast<double>(chosen);
  return result;
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial_id) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(trial_id));
}

TrialSamples sample_trial(const ExperimentConfig& config, std::size_t trial_id) {
  const std::uint64_t seed = trial_seed(config.base_seed, trial_id);
  TrialSamples samples;
  samples.train =
      sample_train(config.target, static_cast<Eigen::Index>(config.train_n), config.noise, seed, config.noise_scale);
  samples.test = sample_test(config.target, static_cast<Eigen::Index>(config.test_n), derive_seed(seed, kTestSeedLabel));
  return samples;
}

TrialData prepare_trial(const ExperimentConfig& config, const DictionarySpec& dictionary, std::size_t trial_id) {
  TrialData data;
  data.trial = trial_id;
  data.seed = trial_seed(config.base_seed, trial_id);
  data.dictionary = dictionary.label();
  data.target = config.target.name();
  auto samples = sample_trial(config, trial_id);
  data.train = std::move(samples.train);
  data.test = std::move(samples.test);

  const auto atoms = build_atoms(dictionary, data.seed);
  data.design = eval_normalized_design(
      atoms, std::span<const double>(data.train.inputs.data(), static_cast<std::size_t>(data.train.size())));
  data.test_atoms = scaled_atom_values(data.design, data.test.inputs);

  if (config.selector == Selector::Holdout) {
    data.validation = sample_train(config.target, static_cast<Eigen::Index>(config.validation_n), config.noise,
                                   derive_seed(data.seed, kValidationSeedLabel), config.noise_scale);
    data.validation_atoms = scaled_atom_values(data.design, data.validation->inputs);
  }
  if (has_baseline(config)) {
    const auto start = Clock::now();
    data.gram = make_gram_system(data.design, data.train.targets);
    data.gram_seconds = seconds_since(start);
  }
  return data;
}

TrialResult run_method(const ExperimentConfig& config, const TrialData& data, const MethodSpec& method,
                       RmsePath* path) {
  if (method.kind == MethodKind::Osga) return run_osga(config, data, method, path);
  if (!data.gram) throw Error("baseline requested but the trial has no Gram system");
  if (method.kind == MethodKind::L2Boost) return run_l2boost(config, data, method);
  return run_lambda_method(config, data, method);
}

TrialResult run_trial(const ExperimentConfig& config, const MethodSpec& method, const DictionarySpec& dictionary,
                      std::size_t trial_id) {
  ExperimentConfig single = config;
  single.methods = {method};
  return run_method(single, prepare_trial(single, dictionary, trial_id), method);
}

void sort_trials(std::vector<TrialResult>& trials) {
  std::sort(trials.begin(), trials.end(), [](const TrialResult& a, const TrialResult& b) {
    return std::tuple_cat(row_key(a), std::make_tuple(a.trial)) < std::tuple_cat(row_key(b), std::make_tuple(b.trial));
  });
}

std::vector<SummaryRow> aggregate(std::vector<TrialResult> trials) {
  sort_trials(trials);
  std::vector<SummaryRow> rows;
  std::size_t begin = 0;
  while (begin < trials.size()) {
    std::size_t end = begin;
    while (end < trials.size() && row_key(trials[end]) == row_key(trials[begin])) ++end;
    std::vector<double> rmse_values, sparsity_values, seconds_values, hyper_values;
    for (std::size_t i = begin; i < end; ++i) {
      rmse_values.push_back(trials[i].rmse);
      sparsity_values.push_back(static_cast<double>(trials[i].sparsity));
      seconds_values.push_back(trials[i].train_seconds);
      hyper_values.push_back(trials[i].hyperparam);
    }
    SummaryRow row;
    row.method = trials[begin].method;
    row.s = trials[begin].s;
    row.dictionary = trials[begin].dictionary;
    row.target = trials[begin].target;
    row.trials = end - begin;
    row.rmse_mean = mean_of(rmse_values);
    row.rmse_std = sample_std(rmse_values, row.rmse_mean);
    row.sparsity_mean = mean_of(sparsity_values);
    row.sparsity_std = sample_std(sparsity_values, row.sparsity_mean);
    row.seconds_mean = mean_of(seconds_values);
    row.seconds_std = sample_std(seconds_values, row.seconds_mean);
    row.hyperparam_mean = mean_of(hyper_values);
    rows.push_back(std::move(row));
    begin = end;
  }
  return rows;
}

SweepTable run_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.mode == Mode::Verify) throw ConfigError("run_sweep needs benchmark or sweep mode");
  const bool record_paths = config.mode == Mode::Sweep;

  struct JobOutput {
    std::vector<TrialResult> results;
    std::vector<RmsePath> paths;
  };
  std::vector<JobOutput> outputs(config.trial_count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::string failure_label;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= config.trial_count) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      std::string label = "trial " + std::to_string(trial);
      try {
        for (const auto& dictionary : config.dictionaries) {
          label = "trial " + std::to_string(trial) + ", dictionary " + dictionary.label();
          const TrialData data = prepare_trial(config, dictionary, trial);
          for (const auto& method : config.methods) {
            label = "trial " + std::to_string(trial) + ", dictionary " + dictionary.label() + ", method " +
                    method.label();
            RmsePath path;
            const bool want_path = record_paths && method.kind == MethodKind::Osga;
            outputs[trial].results.push_back(run_method(config, data, method, want_path ? &path : nullptr));
            if (want_path) outputs[trial].paths.push_back(std::move(path));
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
          failure_label = label;
        }
        return;
      }
    }
  };

  const std::size_t thread_count = std::min(config.threads, config.trial_count);
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      throw Error(failure_label + ": " + e.what());
    }
  }

  SweepTable table;
  for (auto& out : outputs) {
    table.trials.insert(table.trials.end(), out.results.begin(), out.results.end());
  }
  sort_trials(table.trials);
  table.summary = aggregate(table.trials);

  if (record_paths) {
    std::map<std::tuple<std::size_t, std::string>, std::vector<const RmsePath*>> groups;
    for (const auto& out : outputs) {
      for (const auto& p : out.paths) groups[{p.s, p.dictionary}].push_back(&p);
    }
    for (const auto& [key, members] : groups) {
      PathSummary summary;
      summary.method = members.front()->method;
      summary.s = std::get<0>(key);
      summary.dictionary = std::get<1>(key);
      std::size_t length = members.front()->rmse.size();
      for (const RmsePath* p : members) length = std::min(length, p->rmse.size());
      summary.atoms.assign(members.front()->atoms.begin(), members.front()->atoms.begin() + length);
      summary.rmse_mean.assign(length, 0.0);
      // members arrive in trial order: outputs is indexed by trial id
      for (const RmsePath* p : members) {
        for (std::size_t i = 0; i < length; ++i) summary.rmse_mean[i] += p->rmse[i];
      }
      for (double& v : summary.rmse_mean) v /= static_cast<double>(members.size());
      table.paths.push_back(std::move(summary));
    }
  }
  return table;
}

}  // namespace osga::bench

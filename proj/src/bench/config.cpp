#include "osga/bench/config.hpp"

#include "osga/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace osga::bench {

using nlohmann::json;

std::string DictionarySpec::label() const {
  switch (family) {
    case AtomFamily::TrigCosine: return "TPD";
    case AtomFamily::GaussianRBF: return "GRD";
    case AtomFamily::Custom: return "custom";
  }
  return "custom";
}

std::string MethodSpec::label() const {
  switch (kind) {
    case MethodKind::Osga: return "OSGA-" + std::to_string(step_size);
    case MethodKind::Ridge: return "ridge";
    case MethodKind::Lasso: return "lasso";
    case MethodKind::Half: return "half";
    case MethodKind::L2Boost: return "l2boost";
  }
  return "unknown";
}

MethodSpec MethodSpec::parse(const std::string& text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "ridge") return {MethodKind::Ridge, 0};
  if (lower == "lasso") return {MethodKind::Lasso, 0};
  if (lower == "half") return {MethodKind::Half, 0};
  if (lower == "l2boost") return {MethodKind::L2Boost, 0};
  if (lower == "oga") return osga(1);
  if (lower.rfind("osga-", 0) == 0) {
    const std::string digits = lower.substr(5);
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != digits.size() || digits.empty() || value < 1) {
      throw ConfigError("bad OSGA step size in method '" + text + "'");
    }
    return osga(static_cast<std::size_t>(value));
  }
  throw ConfigError("unknown method '" + text + "' (expected OSGA-<s>, OGA, ridge, lasso, half, l2boost)");
}

std::vector<double> ExperimentConfig::lambda_grid() const {
  std::vector<double> grid;
  for (int e = lambda_min_exponent; e <= lambda_max_exponent; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

void ExperimentConfig::validate() const {
  if (trial_count < 1) throw ConfigError("trial_count must be >= 1");
  if (train_n < 1 || test_n < 1) throw ConfigError("sample sizes must be >= 1");
  if (!(noise >= 0.0)) throw ConfigError("noise must be nonnegative");
  if (mode != Mode::Verify) {
    if (dictionaries.empty()) throw ConfigError("at least one dictionary is required");
    if (methods.empty()) throw ConfigError("at least one method is required");
  }
  for (const auto& d : dictionaries) {
    if (d.size < 1) throw ConfigError("dictionary size must be >= 1");
    if (d.family == AtomFamily::GaussianRBF && !(d.sigma >= 0.0)) throw ConfigError("GRD sigma must be >= 0");
    if (d.family == AtomFamily::Custom) throw ConfigError("custom dictionaries are not configurable");
  }
  for (const auto& m : methods) {
    if (m.kind == MethodKind::Osga && m.step_size < 1) throw ConfigError("OSGA step size must be >= 1");
  }
  if (max_atoms < 1) throw ConfigError("max_atoms must be >= 1");
  if (lambda_min_exponent > lambda_max_exponent) throw ConfigError("empty lambda grid");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be nonnegative");
  if (!(l2boost_nu > 0.0)) throw ConfigError("l2boost_nu must be positive");
  if (selector == Selector::Holdout && validation_n < 1) throw ConfigError("validation_n must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (target.kind == TargetKind::Custom) throw ConfigError("custom targets are not configurable");
}

namespace {

template <typename T>
T get(const json& node, const char* key, T fallback) {
  if (!node.contains(key)) return fallback;
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& node, const std::set<std::string>& known, const std::string& where) {
  for (const auto& item : node.items()) {
    if (!known.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

Mode parse_mode(const std::string& text) {
  if (text == "benchmark") return Mode::Benchmark;
  if (text == "sweep") return Mode::Sweep;
  if (text == "verify") return Mode::Verify;
  throw ConfigError("unknown mode '" + text + "'");
}

Selector parse_selector(const std::string& text) {
  if (text == "test") return Selector::TestSet;
  if (text == "holdout") return Selector::Holdout;
  if (text == "l0_penalty") return Selector::L0Penalty;
  if (text == "fixed") return Selector::Fixed;
  throw ConfigError("unknown selector '" + text + "' (expected test, holdout, l0_penalty, fixed)");
}

DictionarySpec parse_dictionary(const json& node) {
  if (!node.is_object()) throw ConfigError("dictionary entries must be objects");
  reject_unknown(node, {"family", "size", "sigma", "center_seed"}, "dictionary");
  DictionarySpec spec;
  const auto family = get<std::string>(node, "family", "");
  if (family == "grd" || family == "GRD") {
    spec.family = AtomFamily::GaussianRBF;
  } else if (family == "tpd" || family == "TPD") {
    spec.family = AtomFamily::TrigCosine;
  } else {
    throw ConfigError("unknown dictionary family '" + family + "' (expected grd or tpd)");
  }
  spec.size = get<std::size_t>(node, "size", spec.size);
  spec.sigma = get<double>(node, "sigma", spec.sigma);
  if (node.contains("center_seed")) spec.center_seed = get<std::uint64_t>(node, "center_seed", 0);
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root,
                 {"mode", "target", "dictionaries", "methods", "selector", "trial_count", "train_n", "test_n",
                  "noise", "noise_scale", "base_seed", "output_dir", "max_atoms", "truncate", "baselines",
                  "threads", "sparsity_tol"},
                 "config");

  ExperimentConfig config;
  config.mode = parse_mode(get<std::string>(root, "mode", "benchmark"));
  config.target = parse_target(get<std::string>(root, "target", "f1"));
  if (root.contains("dictionaries")) {
    if (!root["dictionaries"].is_array()) throw ConfigError("dictionaries must be an array");
    for (const auto& d : root["dictionaries"]) config.dictionaries.push_back(parse_dictionary(d));
  }
  if (root.contains("methods")) {
    for (const auto& m : get<std::vector<std::string>>(root, "methods", {})) {
      config.methods.push_back(MethodSpec::parse(m));
    }
  }
  if (root.contains("selector")) {
    const json& sel = root["selector"];
    if (sel.is_string()) {
      config.selector = parse_selector(sel.get<std::string>());
    } else if (sel.is_object()) {
      reject_unknown(sel, {"kind", "kappa", "validation_n"}, "selector");
      config.selector = parse_selector(get<std::string>(sel, "kind", "test"));
      config.kappa = get<double>(sel, "kappa", config.kappa);
      config.validation_n = get<std::size_t>(sel, "validation_n", config.validation_n);
    } else {
      throw ConfigError("selector must be a string or object");
    }
  }
  config.trial_count = get<std::size_t>(root, "trial_count", config.trial_count);
  config.train_n = get<std::size_t>(root, "train_n", config.train_n);
  config.test_n = get<std::size_t>(root, "test_n", config.test_n);
  config.noise = get<double>(root, "noise", config.noise);
  const auto scale = get<std::string>(root, "noise_scale", "std");
  if (scale == "std") {
    config.noise_scale = NoiseScale::StdDev;
  } else if (scale == "variance") {
    config.noise_scale = NoiseScale::Variance;
  } else {
    throw ConfigError("noise_scale must be 'std' or 'variance'");
  }
  config.base_seed = get<std::uint64_t>(root, "base_seed", config.base_seed);
  config.output_dir = get<std::string>(root, "output_dir", config.output_dir.string());
  config.max_atoms = get<std::size_t>(root, "max_atoms", config.max_atoms);
  config.truncate = get<bool>(root, "truncate", config.truncate);
  config.threads = get<std::size_t>(root, "threads", config.threads);
  config.sparsity_tol = get<double>(root, "sparsity_tol", config.sparsity_tol);
  if (root.contains("baselines")) {
    const json& b = root["baselines"];
    reject_unknown(b,
                   {"lambda_min_exponent", "lambda_max_exponent", "ista_max_iterations", "ista_tol",
                    "l2boost_nu", "l2boost_max_iterations"},
                   "baselines");
    config.lambda_min_exponent = get<int>(b, "lambda_min_exponent", config.lambda_min_exponent);
    config.lambda_max_exponent = get<int>(b, "lambda_max_exponent", config.lambda_max_exponent);
    config.ista_max_iterations = get<std::size_t>(b, "ista_max_iterations", config.ista_max_iterations);
    config.ista_tol = get<double>(b, "ista_tol", config.ista_tol);
    config.l2boost_nu = get<double>(b, "l2boost_nu", config.l2boost_nu);
    config.l2boost_max_iterations = get<std::size_t>(b, "l2boost_max_iterations", config.l2boost_max_iterations);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_environment(ExperimentConfig& config) {
  if (const char* dir = std::getenv("OSGA_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    config.output_dir = dir;
  }
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig config;
  const std::vector<MethodSpec> all_methods = {
      MethodSpec::osga(1), MethodSpec::osga(2), MethodSpec::osga(5), MethodSpec::osga(10),
      {MethodKind::Ridge, 0}, {MethodKind::Lasso, 0}, {MethodKind::Half, 0}, {MethodKind::L2Boost, 0}};
  if (name == "f1") {
    config.target = TargetFunction::f1();
    config.dictionaries = {{AtomFamily::GaussianRBF, 500, 200.0, {}}, {AtomFamily::TrigCosine, 500, 0.0, {}}};
    config.methods = all_methods;
  } else if (name == "f2") {
    config.target = TargetFunction::f2();
    config.dictionaries = {{AtomFamily::GaussianRBF, 500, 1000.0, {}}, {AtomFamily::TrigCosine, 500, 0.0, {}}};
    config.methods = all_methods;
  } else if (name == "timing") {
    config.target = TargetFunction::f1();
    config.dictionaries = {{AtomFamily::GaussianRBF, 500, 200.0, {}}, {AtomFamily::TrigCosine, 500, 0.0, {}}};
    config.methods = {MethodSpec::osga(1), MethodSpec::osga(2), MethodSpec::osga(5), MethodSpec::osga(10)};
    config.selector = Selector::Fixed;
    config.max_atoms = 40;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected f1, f2, timing)");
  }
  config.output_dir = "results/" + name;
  return config;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Benchmark: return "benchmark";
    case Mode::Sweep: return "sweep";
    case Mode::Verify: return "verify";
  }
  return "benchmark";
}

std::string to_string(Selector selector) {
  switch (selector) {
    case Selector::TestSet: return "test";
    case Selector::Holdout: return "holdout";
    case Selector::L0Penalty: return "l0_penalty";
    case Selector::Fixed: return "fixed";
  }
  return "test";
}

}  // namespace osga::bench

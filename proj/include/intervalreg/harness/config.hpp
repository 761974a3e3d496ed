#pragma once

/// \file
/// JSON experiment configs. Keys mirror ExperimentConfig field names; unknown
/// keys are rejected so typos never pass silently. `"rescale_std": null` keeps
/// targets in their original units.
///
///   {
///     "dataset": "abalone.csv",
///     "split": {"train_frac": 0.7, "val_frac": 0.15, "test_frac": 0.15, "seed": 0},
///     "intervals": {"q_min": 0, "q_max": 30, "location": {"law": "uniform"}},
///     "objectives": [{"kind": "projection"}, {"kind": "pl_mean", "k": 5}],
///     "train": {"epochs": 1000, "batch_size": 512, "lr": 0.001, "hidden": [10, 20, 30]},
///     "seeds": [0, 1, 2],
///     "output_dir": "results/abalone"
///   }

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include <json.hpp>

#include "intervalreg/harness/experiment.hpp"

namespace intervalreg::harness {

namespace detail {

using Json = nlohmann::json;

inline void expect_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

inline LocationLaw parse_location(const Json& j) {
  const std::string where = "intervals.location";
  expect_keys(j, where, {"law", "p_min", "p_max", "c"});
  const auto law = get_or<std::string>(j, "law", "uniform", where);
  if (law == "uniform") {
    if (j.contains("c")) throw ConfigError(where + ": 'c' does not apply to the uniform law");
    return UniformRange{get_or(j, "p_min", 0.0, where), get_or(j, "p_max", 1.0, where)};
  }
  if (j.contains("p_min") || j.contains("p_max")) throw ConfigError(where + ": p_min/p_max apply only to 'uniform'");
  if (law == "mid") return MidCentered{get_or(j, "c", 0.5, where)};
  if (law == "boundary") return BoundaryFavoring{get_or(j, "c", 0.0, where)};
  throw ConfigError(where + ": unknown law '" + law + "' (uniform, mid, boundary)");
}

inline IntervalGenConfig parse_intervals(const Json& j) {
  expect_keys(j, "intervals", {"q_min", "q_max", "location", "pad_scale", "seed"});
  IntervalGenConfig g;
  g.q_min = get_or(j, "q_min", 0.0, "intervals");
  g.q_max = get_or(j, "q_max", 0.0, "intervals");
  g.pad_scale = get_or(j, "pad_scale", 0.0, "intervals");
  g.seed = get_or<std::uint64_t>(j, "seed", 0, "intervals");
  if (j.contains("location")) g.location = parse_location(j.at("location"));
  return g;
}

inline ObjectiveSpec parse_objective(const Json& j, std::size_t index) {
  const std::string where = "objectives[" + std::to_string(index) + "]";
  ObjectiveSpec s;
  if (j.is_string()) {
    s.kind = parse_objective_kind(j.get<std::string>());
    return s;
  }
  expect_keys(j, where, {"kind", "loss_exponent", "lambda", "adversary_lr", "k"});
  if (!j.contains("kind")) throw ConfigError(where + ": missing 'kind'");
  s.kind = parse_objective_kind(get_or<std::string>(j, "kind", "", where));
  s.loss_exponent = get_or(j, "loss_exponent", 1.0, where);
  s.lambda = get_or(j, "lambda", 1.0, where);
  if (j.contains("adversary_lr")) s.adversary_lr = get_or(j, "adversary_lr", 0.0, where);
  s.k = get_or<std::size_t>(j, "k", 5, where);
  return s;
}

inline TrainConfig parse_train(const Json& j) {
  expect_keys(j, "train", {"epochs", "batch_size", "lr", "hidden", "power_iterations"});
  TrainConfig tc;
  tc.epochs = get_or<std::size_t>(j, "epochs", 1000, "train");
  tc.batch_size = get_or<std::size_t>(j, "batch_size", 512, "train");
  tc.lr = get_or(j, "lr", 1e-3, "train");
  const auto hidden = get_or<std::vector<std::size_t>>(j, "hidden", {10, 20, 30}, "train");
  // The input width is filled in once the data is loaded.
  tc.model = MlpConfig::with_hidden(1, hidden);
  tc.model.power_iterations = get_or<std::size_t>(j, "power_iterations", 5, "train");
  return tc;
}

inline SplitSpec parse_split(const Json& j) {
  expect_keys(j, "split", {"train_frac", "val_frac", "test_frac", "seed"});
  SplitSpec s;
  s.train_frac = get_or(j, "train_frac", s.train_frac, "split");
  s.val_frac = get_or(j, "val_frac", s.val_frac, "split");
  s.test_frac = get_or(j, "test_frac", s.test_frac, "split");
  s.seed = get_or<std::uint64_t>(j, "seed", 0, "split");
  return s;
}

}  // namespace detail

[[nodiscard]] inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  using detail::get_or;
  detail::expect_keys(j, "config",
                      {"dataset", "dataset_name", "target_column", "split", "intervals", "objectives", "train",
                       "seeds", "lipschitz_grid", "selection", "rescale_std", "reseed_intervals", "ensemble",
                       "record_runtime", "threads", "output_dir"});
  ExperimentConfig cfg;
  if (!j.contains("dataset")) throw ConfigError("config: missing 'dataset'");
  cfg.dataset = get_or<std::string>(j, "dataset", "", "config");
  cfg.dataset_name = get_or<std::string>(j, "dataset_name", "", "config");
  cfg.target_column = get_or<std::string>(j, "target_column", "y", "config");
  if (j.contains("split")) cfg.split = detail::parse_split(j.at("split"));
  if (j.contains("intervals")) cfg.intervals = detail::parse_intervals(j.at("intervals"));
  if (!j.contains("objectives") || !j.at("objectives").is_array()) {
    throw ConfigError("config: 'objectives' must be a list");
  }
  for (std::size_t i = 0; i < j.at("objectives").size(); ++i) {
    cfg.objectives.push_back(detail::parse_objective(j.at("objectives")[i], i));
  }
  cfg.train = j.contains("train") ? detail::parse_train(j.at("train")) : detail::parse_train(nlohmann::json::object());
  cfg.seeds = get_or<std::vector<std::uint64_t>>(j, "seeds", {}, "config");
  if (j.contains("lipschitz_grid")) cfg.lipschitz_grid = get_or<std::vector<double>>(j, "lipschitz_grid", {}, "config");
  if (j.contains("selection")) {
    const auto& s = j.at("selection");
    detail::expect_keys(s, "selection", {"lr_grid", "lipschitz_grid"});
    cfg.selection = SelectionGrid{get_or<std::vector<double>>(s, "lr_grid", {}, "selection"),
                                  get_or<std::vector<double>>(s, "lipschitz_grid", {}, "selection")};
  }
  if (j.contains("rescale_std") && j.at("rescale_std").is_null()) {
    cfg.rescale_std.reset();
  } else {
    cfg.rescale_std = get_or(j, "rescale_std", 100.0, "config");
  }
  cfg.reseed_intervals = get_or(j, "reseed_intervals", true, "config");
  cfg.ensemble = get_or(j, "ensemble", false, "config");
  cfg.record_runtime = get_or(j, "record_runtime", true, "config");
  cfg.threads = get_or<std::size_t>(j, "threads", 0, "config");
  cfg.output_dir = get_or<std::string>(j, "output_dir", "results", "config");
  cfg.validate();
  return cfg;
}

[[nodiscard]] inline ExperimentConfig parse_experiment_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return experiment_config_from_json(j);
}

[[nodiscard]] inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_experiment_config(text);
}

}  // namespace intervalreg::harness

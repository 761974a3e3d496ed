#pragma once

/// \file
/// Experiment orchestration: one cell is (objective, Lipschitz constant, seed).
/// Each cell generates intervals on the train and validation splits, trains a
/// model and reports MAE against the true targets on every split.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "intervalreg/core.hpp"
#include "intervalreg/harness/data.hpp"
#include "intervalreg/intervalgen.hpp"
#include "intervalreg/objectives.hpp"

namespace intervalreg::harness {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

[[nodiscard]] inline double mean_absolute_error(std::span<const double> predictions, std::span<const double> truth) {
  if (predictions.size() != truth.size()) throw DataError("prediction and target counts differ");
  if (truth.empty()) throw DataError("MAE of an empty set");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) acc += std::fabs(predictions[i] - truth[i]);
  return acc / static_cast<double>(truth.size());
}

[[nodiscard]] inline double evaluate_mae(const TrainedModel& model, const LabeledData& data) {
  return mean_absolute_error(model.predict(data.xs), data.ys);
}

[[nodiscard]] inline double evaluate_mae(const TrainedModel& model, const IntervalDataset& ds) {
  if (!ds.has_true_targets()) throw DataError("MAE needs true targets on every row");
  std::vector<double> truth;
  truth.reserve(ds.size());
  for (const auto& s : ds) truth.push_back(*s.true_y);
  return mean_absolute_error(model.predict(FeatureMatrix::from_dataset(ds)), truth);
}

struct EnsembleIntervals {
  std::vector<Interval> intervals;
  double mean_width = 0.0;
};

/// Per row, [min_i f_i(x), max_i f_i(x)] over the ensemble.
[[nodiscard]] inline EnsembleIntervals ensemble_reduced_intervals(std::span<const TrainedModel> models,
                                                                  const FeatureMatrix& xs) {
  if (models.size() < 2) throw DataError("an ensemble needs at least two models");
  std::vector<double> lo(xs.rows(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(xs.rows(), -std::numeric_limits<double>::infinity());
  for (const auto& m : models) {
    if (m.config.input_dim() != xs.cols()) throw DataError("ensemble member expects a different feature count");
    const auto preds = m.predict(xs);
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      lo[r] = std::min(lo[r], preds[r]);
      hi[r] = std::max(hi[r], preds[r]);
    }
  }
  EnsembleIntervals out;
  out.intervals.reserve(xs.rows());
  double total = 0.0;
  for (std::size_t r = 0; r < xs.rows(); ++r) {
    out.intervals.emplace_back(lo[r], hi[r]);
    total += hi[r] - lo[r];
  }
  out.mean_width = xs.rows() ? total / static_cast<double>(xs.rows()) : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Configuration and results
// ---------------------------------------------------------------------------

/// Validation-based grid search (lr and, optionally, m) per objective and seed.
struct SelectionGrid {
  std::vector<double> lr_grid;
  std::vector<double> lipschitz_grid;
};

struct ExperimentConfig {
  std::string dataset;        ///< labeled CSV path
  std::string dataset_name;   ///< label in result tables; defaults to the file stem
  std::string target_column = "y";
  SplitSpec split;
  IntervalGenConfig intervals;
  std::vector<ObjectiveSpec> objectives;
  TrainConfig train;
  std::vector<std::uint64_t> seeds;
  std::optional<std::vector<double>> lipschitz_grid;
  std::optional<SelectionGrid> selection;
  /// Target standard deviation after rescaling (train statistics only);
  /// nullopt keeps the targets in their original units.
  std::optional<double> rescale_std = 100.0;
  /// Draw new intervals for every seed; when false the config's interval
  /// seed is used for all cells.
  bool reseed_intervals = true;
  /// Also report [min, max] ensemble widths over the seeds of each
  /// (objective, m), on the test features.
  bool ensemble = false;
  bool record_runtime = true;
  std::size_t threads = 0;  ///< 0: hardware concurrency
  std::string output_dir = "results";

  void validate() const {
    split.validate();
    intervals.validate();
    train.validate();
    if (objectives.empty()) throw ConfigError("no objectives configured");
    for (const auto& o : objectives) o.validate();
    if (seeds.empty()) throw ConfigError("no seeds configured");
    if (lipschitz_grid) {
      if (lipschitz_grid->empty()) throw ConfigError("lipschitz_grid is empty");
      for (double m : *lipschitz_grid) {
        if (!(m > 0.0)) throw ConfigError("lipschitz_grid entries must be positive");
      }
    }
    if (selection) {
      if (selection->lr_grid.empty()) throw ConfigError("selection.lr_grid is empty");
      if (lipschitz_grid && !selection->lipschitz_grid.empty()) {
        throw ConfigError("set either lipschitz_grid or selection.lipschitz_grid, not both");
      }
    }
    if (ensemble && seeds.size() < 2) throw ConfigError("ensemble widths need at least two seeds");
    if (rescale_std && !(*rescale_std > 0.0)) throw ConfigError("rescale_std must be positive");
  }
};

inline constexpr int kResultsFormatVersion = 1;

struct ResultsRow {
  std::string dataset;
  std::string objective;
  std::string setting;
  std::optional<double> m;
  std::uint64_t seed = 0;
  std::string split;  ///< train, val or test
  double mae = 0.0;
  double runtime_seconds = 0.0;
};

struct AggregateRow {
  std::string dataset;
  std::string objective;
  std::string setting;
  std::optional<double> m;
  std::string split;
  std::size_t n = 0;
  double mean = 0.0;
  double ste = 0.0;  ///< sample standard deviation / sqrt(n); 0 when n = 1
};

struct EnsembleRow {
  std::string objective;
  std::optional<double> m;
  std::size_t models = 0;
  double mean_width = 0.0;
};

struct CellFailure {
  std::string objective;
  std::optional<double> m;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<ResultsRow> rows;
  std::vector<AggregateRow> aggregates;
  std::vector<EnsembleRow> ensembles;
  std::vector<CellFailure> failures;
  RescaleParams rescale;
};

[[nodiscard]] inline std::vector<AggregateRow> aggregate(const std::vector<ResultsRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::string, double, std::string>;
  std::map<Key, std::vector<double>> groups;
  std::map<Key, AggregateRow> proto;
  for (const auto& r : rows) {
    const Key key{r.dataset, r.objective, r.setting, r.m.value_or(-1.0), r.split};
    groups[key].push_back(r.mae);
    proto.try_emplace(key, AggregateRow{r.dataset, r.objective, r.setting, r.m, r.split, 0, 0.0, 0.0});
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, values] : groups) {
    AggregateRow a = proto.at(key);
    a.n = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(a.n);
    a.mean = mean;
    if (a.n > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      a.ste = std::sqrt(ss / static_cast<double>(a.n - 1)) / std::sqrt(static_cast<double>(a.n));
    }
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

namespace detail {

struct Cell {
  std::size_t objective = 0;
  std::optional<double> m;
  std::uint64_t seed = 0;
};

struct CellOutcome {
  std::vector<ResultsRow> rows;
  std::optional<TrainedModel> model;
  std::optional<std::string> error;
};

/// Intervals for the train and validation splits. They are drawn jointly
/// (train rows first) so the two never share random draws.
inline std::pair<IntervalDataset, IntervalDataset> make_interval_splits(const Splits& s, IntervalGenConfig gen,
                                                                        std::uint64_t seed) {
  gen.seed = seed;
  FeatureMatrix xs(s.train.size() + s.val.size(), s.train.xs.cols());
  std::vector<double> ys;
  ys.reserve(xs.rows());
  for (std::size_t r = 0; r < s.train.size(); ++r) {
    std::copy(s.train.xs.row(r).begin(), s.train.xs.row(r).end(), xs.row(r).begin());
    ys.push_back(s.train.ys[r]);
  }
  for (std::size_t r = 0; r < s.val.size(); ++r) {
    std::copy(s.val.xs.row(r).begin(), s.val.xs.row(r).end(), xs.row(s.train.size() + r).begin());
    ys.push_back(s.val.ys[r]);
  }
  const auto all = generate_intervals(xs, ys, gen);
  std::vector<IntervalSample> train(all.samples().begin(),
                                    all.samples().begin() + static_cast<std::ptrdiff_t>(s.train.size()));
  std::vector<IntervalSample> val(all.samples().begin() + static_cast<std::ptrdiff_t>(s.train.size()),
                                  all.samples().end());
  return {IntervalDataset(std::move(train)), IntervalDataset(std::move(val))};
}

inline TrainConfig cell_train_config(const ExperimentConfig& cfg, const Splits& s, std::optional<double> m,
                                     std::uint64_t seed, double lr) {
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  tc.lr = lr;
  if (tc.model.layer_sizes.empty()) tc.model = MlpConfig::with_hidden(s.train.xs.cols());
  tc.model.layer_sizes.front() = s.train.xs.cols();
  tc.model.lipschitz = m;
  return tc;
}

inline CellOutcome run_cell(const ExperimentConfig& cfg, const Splits& s, const Cell& cell, bool keep_model) {
  CellOutcome out;
  const auto start = std::chrono::steady_clock::now();
  const ObjectiveSpec& spec = cfg.objectives[cell.objective];
  const auto [train_iv, val_iv] =
      make_interval_splits(s, cfg.intervals, cfg.reseed_intervals ? cell.seed : cfg.intervals.seed);

  std::optional<double> chosen_m = cell.m;
  TrainedModel model;
  if (cfg.selection) {
    std::vector<std::optional<double>> ms;
    if (cfg.selection->lipschitz_grid.empty()) {
      ms.push_back(cell.m);
    } else {
      for (double m : cfg.selection->lipschitz_grid) ms.emplace_back(m);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : ms) {
      for (double lr : cfg.selection->lr_grid) {
        auto candidate = train(spec, cell_train_config(cfg, s, m, cell.seed, lr), train_iv);
        const double val_mae = evaluate_mae(candidate, s.val);
        if (val_mae < best) {
          best = val_mae;
          model = std::move(candidate);
          chosen_m = m;
        }
      }
    }
  } else {
    model = train(spec, cell_train_config(cfg, s, cell.m, cell.seed, cfg.train.lr), train_iv);
  }
  const double seconds =
      cfg.record_runtime ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;
  const std::string dataset = cfg.dataset_name;
  const std::string setting = cfg.intervals.describe();
  const std::pair<const char*, const LabeledData*> parts[] = {{"train", &s.train}, {"val", &s.val}, {"test", &s.test}};
  for (const auto& [name, data] : parts) {
    out.rows.push_back({dataset, spec.label(), setting, chosen_m, cell.seed, name, evaluate_mae(model, *data), seconds});
  }
  if (keep_model) out.model = std::move(model);
  return out;
}

}  // namespace detail

/// Runs every (objective x m x seed) cell on already-loaded data. Cells run
/// on a worker pool; output order is fixed by sorting, so it does not depend
/// on scheduling.
[[nodiscard]] inline ExperimentResult run_experiment(ExperimentConfig cfg, const LabeledData& data) {
  cfg.validate();
  if (cfg.dataset_name.empty()) cfg.dataset_name = "data";
  ExperimentResult result;
  Splits splits = split(data, cfg.split);
  if (cfg.rescale_std) result.rescale = rescale_targets(splits, *cfg.rescale_std);

  std::vector<std::optional<double>> ms;
  if (cfg.lipschitz_grid) {
    for (double m : *cfg.lipschitz_grid) ms.emplace_back(m);
  } else {
    ms.emplace_back(std::nullopt);
  }
  std::vector<detail::Cell> cells;
  for (std::size_t o = 0; o < cfg.objectives.size(); ++o) {
    for (const auto& m : ms) {
      for (auto seed : cfg.seeds) cells.push_back({o, m, seed});
    }
  }

  std::vector<detail::CellOutcome> outcomes(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        outcomes[i] = detail::run_cell(cfg, splits, cells[i], cfg.ensemble);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cells.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& o = outcomes[i];
    if (o.error) {
      result.failures.push_back({cfg.objectives[cells[i].objective].label(), cells[i].m, cells[i].seed, *o.error});
      continue;
    }
    result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
  }
  auto m_key = [](const std::optional<double>& m) { return m.value_or(-1.0); };
  auto split_rank = [](const std::string& s) { return s == "train" ? 0 : s == "val" ? 1 : 2; };
  std::stable_sort(result.rows.begin(), result.rows.end(), [&](const ResultsRow& a, const ResultsRow& b) {
    return std::tuple(a.objective, m_key(a.m), a.seed, split_rank(a.split)) <
           std::tuple(b.objective, m_key(b.m), b.seed, split_rank(b.split));
  });
  result.aggregates = aggregate(result.rows);

  if (cfg.ensemble) {
    std::map<std::pair<std::string, double>, std::vector<TrainedModel>> groups;
    std::map<std::pair<std::string, double>, std::optional<double>> group_m;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!outcomes[i].model) continue;
      const auto key = std::pair(cfg.objectives[cells[i].objective].label(), m_key(cells[i].m));
      groups[key].push_back(std::move(*outcomes[i].model));
      group_m[key] = cells[i].m;
    }
    for (const auto& [key, models] : groups) {
      if (models.size() < 2) continue;
      const auto ens = ensemble_reduced_intervals(models, splits.test.xs);
      result.ensembles.push_back({key.first, group_m[key], models.size(), ens.mean_width});
    }
  }
  return result;
}

[[nodiscard]] inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentConfig named = cfg;
  if (named.dataset_name.empty()) named.dataset_name = std::filesystem::path(cfg.dataset).stem().string();
  return run_experiment(named, load_labeled_csv(cfg.dataset, cfg.target_column));
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

namespace detail {
inline std::string format_m(const std::optional<double>& m) { return m ? format_double(*m) : ""; }

inline std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace detail

inline void write_results_csv(std::ostream& os, const std::vector<ResultsRow>& rows) {
  os << "# intervalreg results v" << kResultsFormatVersion << '\n';
  os << "dataset,objective,setting,m,seed,split,mae,runtime_seconds\n";
  for (const auto& r : rows) {
    os << detail::csv_text(r.dataset) << ',' << detail::csv_text(r.objective) << ',' << detail::csv_text(r.setting)
       << ',' << detail::format_m(r.m) << ',' << r.seed << ',' << r.split << ',' << format_double(r.mae) << ','
       << format_double(r.runtime_seconds) << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "# intervalreg aggregate v" << kResultsFormatVersion << '\n';
  os << "dataset,objective,setting,m,split,n,mean_mae,ste_mae\n";
  for (const auto& a : rows) {
    os << detail::csv_text(a.dataset) << ',' << detail::csv_text(a.objective) << ',' << detail::csv_text(a.setting)
       << ',' << detail::format_m(a.m) << ',' << a.split << ',' << a.n << ',' << format_double(a.mean) << ','
       << format_double(a.ste) << '\n';
  }
}

inline void write_ensemble_csv(std::ostream& os, const std::vector<EnsembleRow>& rows) {
  os << "objective,m,models,mean_width\n";
  for (const auto& e : rows) {
    os << detail::csv_text(e.objective) << ',' << detail::format_m(e.m) << ',' << e.models << ','
       << format_double(e.mean_width) << '\n';
  }
}

inline void write_failures_csv(std::ostream& os, const std::vector<CellFailure>& failures) {
  os << "objective,m,seed,error\n";
  for (const auto& f : failures) {
    os << detail::csv_text(f.objective) << ',' << detail::format_m(f.m) << ',' << f.seed << ','
       << detail::csv_text(f.message) << '\n';
  }
}

/// results.csv, aggregate.csv, and when present ensemble_widths.csv and
/// failures.csv, under `dir`.
inline void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw DataError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_results_csv(f, result.rows);
  }
  {
    auto f = open("aggregate.csv");
    write_aggregate_csv(f, result.aggregates);
  }
  if (!result.ensembles.empty()) {
    auto f = open("ensemble_widths.csv");
    write_ensemble_csv(f, result.ensembles);
  }
  if (!result.failures.empty()) {
    auto f = open("failures.csv");
    write_failures_csv(f, result.failures);
  }
}

/// epoch, train_objective_loss[, train_mae]
inline void write_trace_csv(std::ostream& os, const TrainedModel& model) {
  const bool mae = !model.mae_trace.empty();
  os << "epoch,train_objective_loss" << (mae ? ",train_mae" : "") << '\n';
  for (std::size_t e = 0; e < model.loss_trace.size(); ++e) {
    os << e << ',' << format_double(model.loss_trace[e]);
    if (mae) os << ',' << format_double(model.mae_trace[e]);
    os << '\n';
  }
}

}  // namespace intervalreg::harness

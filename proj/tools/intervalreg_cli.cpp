// intervalreg: command-line front end.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 one or more experiment cells failed.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "intervalreg/denoise.hpp"
#include "intervalreg/harness/config.hpp"
#include "intervalreg/harness/data.hpp"
#include "intervalreg/harness/experiment.hpp"
#include "intervalreg/harness/plot.hpp"
#include "intervalreg/intervalgen.hpp"
#include "intervalreg/model.hpp"
#include "intervalreg/objectives.hpp"

namespace ir = intervalreg;
namespace hn = intervalreg::harness;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitCellsFailed = 3;

std::ofstream open_output(const std::string& path) {
  if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream out(path);
  if (!out) throw ir::DataError("cannot write '" + path + "'");
  return out;
}

ir::Norm parse_norm(const std::string& name) {
  if (name == "l2") return ir::Norm::kEuclidean;
  if (name == "linf") return ir::Norm::kLInf;
  throw ir::ConfigError("unknown norm '" + name + "' (l2, linf)");
}

struct GenOptions {
  std::string input, output, target = "y";
  double q_min = 0.0, q_max = 30.0, p_min = 0.0, p_max = 1.0, c = 0.5, pad = 0.0;
  std::string law = "uniform";
  std::uint64_t seed = 0;
};

int run_gen(const GenOptions& o) {
  ir::IntervalGenConfig cfg;
  cfg.q_min = o.q_min;
  cfg.q_max = o.q_max;
  cfg.pad_scale = o.pad;
  cfg.seed = o.seed;
  if (o.law == "uniform") {
    cfg.location = ir::UniformRange{o.p_min, o.p_max};
  } else if (o.law == "mid") {
    cfg.location = ir::MidCentered{o.c};
  } else if (o.law == "boundary") {
    cfg.location = ir::BoundaryFavoring{o.c};
  } else {
    throw ir::ConfigError("unknown law '" + o.law + "' (uniform, mid, boundary)");
  }
  cfg.validate();
  const auto data = hn::load_labeled_csv(o.input, o.target);
  const auto ds = ir::generate_intervals(data.xs, data.ys, cfg);
  auto out = open_output(o.output);
  hn::write_interval_csv(out, ds, data.feature_names);
  std::cerr << "wrote " << ds.size() << " rows (" << cfg.describe() << ") to " << o.output << '\n';
  return 0;
}

struct TrainOptions {
  std::string data, checkpoint, trace, objective = "projection";
  double loss_exponent = 1.0, lambda = 1.0, lr = 1e-3;
  std::optional<double> adversary_lr, lipschitz;
  std::size_t k = 5, epochs = 1000, batch_size = 512, power_iterations = 5;
  std::vector<std::size_t> hidden{10, 20, 30};
  std::uint64_t seed = 0;
};

int run_train(const TrainOptions& o) {
  ir::ObjectiveSpec spec;
  spec.kind = ir::parse_objective_kind(o.objective);
  spec.loss_exponent = o.loss_exponent;
  spec.lambda = o.lambda;
  spec.adversary_lr = o.adversary_lr;
  spec.k = o.k;
  spec.validate();
  const auto ds = hn::load_interval_csv(o.data);
  ir::TrainConfig tc;
  tc.epochs = o.epochs;
  tc.batch_size = o.batch_size;
  tc.lr = o.lr;
  tc.seed = o.seed;
  tc.model = ir::MlpConfig::with_hidden(ds.feature_dim(), o.hidden);
  tc.model.lipschitz = o.lipschitz;
  tc.model.power_iterations = o.power_iterations;
  const auto model = ir::train(spec, tc, ds);
  {
    auto out = open_output(o.checkpoint);
    ir::write_checkpoint(out, model.config, model.params);
  }
  if (!o.trace.empty()) {
    auto out = open_output(o.trace);
    hn::write_trace_csv(out, model);
  }
  std::cout << "final_objective " << hn::format_double(model.loss_trace.back()) << '\n';
  if (!model.mae_trace.empty()) std::cout << "final_train_mae " << hn::format_double(model.mae_trace.back()) << '\n';
  return 0;
}

int run_eval(const std::string& checkpoint_path, const std::string& data_path, const std::string& target) {
  std::ifstream in(checkpoint_path);
  if (!in) throw ir::DataError("cannot open '" + checkpoint_path + "'");
  const auto ck = ir::read_checkpoint(in);
  ir::TrainedModel model;
  model.config = ck.config;
  model.params = ck.params;
  const auto header = hn::read_header(data_path);
  const bool interval_file = std::count(header.begin(), header.end(), "l") && std::count(header.begin(), header.end(), "u");
  const double mae = interval_file ? hn::evaluate_mae(model, hn::load_interval_csv(data_path))
                                   : hn::evaluate_mae(model, hn::load_labeled_csv(data_path, target));
  std::cout << "mae " << hn::format_double(mae) << '\n';
  return 0;
}

struct DenoiseOptions {
  std::string data, queries, output, norm = "l2";
  double m = 1.0, eta = 0.0, exponent = 1.0;
};

int run_denoise(const DenoiseOptions& o) {
  const auto ds = hn::load_interval_csv(o.data);
  const auto queries = o.queries.empty() ? ir::FeatureMatrix::from_dataset(ds) : hn::load_feature_csv(o.queries);
  if (queries.cols() != ds.feature_dim()) throw ir::DataError("query points and data differ in feature count");
  std::ostringstream text;
  text << "query_index,base_lower,base_upper,r,s,empty_flag\n";
  std::size_t empty = 0;
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto row = queries.row(q);
    ir::DenoiseQuery query{std::vector<double>(row.begin(), row.end()), o.m, o.eta, o.exponent, parse_norm(o.norm)};
    const auto r = ir::denoise(ds, query);
    empty += r.empty();
    text << q << ',' << hn::format_double(r.base_lower) << ',' << hn::format_double(r.base_upper) << ','
         << hn::format_double(r.r_buffer) << ',' << hn::format_double(r.s_buffer) << ',' << (r.empty() ? 1 : 0)
         << '\n';
  }
  if (o.output.empty()) {
    std::cout << text.str();
  } else {
    auto out = open_output(o.output);
    out << text.str();
  }
  std::cerr << queries.rows() << " queries, " << empty << " empty\n";
  return 0;
}

int run_lipschitz(const std::string& data, const std::string& target, double percentile, std::size_t max_pairs,
                  std::uint64_t seed, const std::string& norm) {
  const auto labeled = hn::load_labeled_csv(data, target);
  const double m = ir::estimate_lipschitz_constant(labeled.xs, labeled.ys, percentile, max_pairs, seed, parse_norm(norm));
  std::cout << hn::format_double(m) << '\n';
  return 0;
}

int run_bench(const std::string& config_path, const std::string& output_dir, std::optional<std::size_t> threads) {
  auto cfg = hn::load_experiment_config(config_path);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (threads) cfg.threads = *threads;
  if (const auto base = std::filesystem::path(config_path).parent_path();
      !base.empty() && std::filesystem::path(cfg.dataset).is_relative() && !std::filesystem::exists(cfg.dataset)) {
    cfg.dataset = (base / cfg.dataset).string();
  }
  const auto result = hn::run_experiment(cfg);
  hn::write_outputs(result, cfg.output_dir);
  for (const auto& a : result.aggregates) {
    if (a.split != "test") continue;
    std::cout << a.objective << ' ' << a.setting << (a.m ? " m=" + hn::format_double(*a.m) : "") << "  test MAE "
              << hn::format_double(a.mean) << " +- " << hn::format_double(a.ste) << " (n=" << a.n << ")\n";
  }
  for (const auto& e : result.ensembles) {
    std::cout << "ensemble " << e.objective << (e.m ? " m=" + hn::format_double(*e.m) : "") << "  mean width "
              << hn::format_double(e.mean_width) << '\n';
  }
  if (!result.failures.empty()) {
    for (const auto& f : result.failures) {
      std::cerr << "cell failed: " << f.objective << " seed " << f.seed << ": " << f.message << '\n';
    }
    return kExitCellsFailed;
  }
  return 0;
}

int run_plot(const std::string& input, const std::string& output, const std::string& split) {
  const auto header = hn::read_header(input);
  std::ifstream in(input);
  if (!in) throw ir::DataError("cannot open '" + input + "'");
  const bool widths = std::count(header.begin(), header.end(), "mean_width") > 0;
  const std::string svg = widths ? hn::plot_ensemble_widths(in) : hn::plot_aggregate(hn::read_aggregate_csv(in), split);
  auto out = open_output(output);
  out << svg;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regression from interval targets"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Turn a labeled CSV into an interval CSV");
  gen_cmd->add_option("-i,--input", gen.input, "labeled CSV (f1..fd, y)")->required();
  gen_cmd->add_option("-o,--output", gen.output, "interval CSV to write")->required();
  gen_cmd->add_option("--target", gen.target, "target column")->capture_default_str();
  gen_cmd->add_option("--q-min", gen.q_min)->capture_default_str();
  gen_cmd->add_option("--q-max", gen.q_max)->capture_default_str();
  gen_cmd->add_option("--law", gen.law, "uniform, mid or boundary")->capture_default_str();
  gen_cmd->add_option("--p-min", gen.p_min)->capture_default_str();
  gen_cmd->add_option("--p-max", gen.p_max)->capture_default_str();
  gen_cmd->add_option("--c", gen.c, "location parameter of the mid and boundary laws")->capture_default_str();
  gen_cmd->add_option("--pad", gen.pad, "widen each interval by this multiple of its width")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train one model on an interval CSV");
  train_cmd->add_option("-d,--data", tr.data, "interval CSV")->required();
  train_cmd->add_option("-c,--checkpoint", tr.checkpoint, "checkpoint to write")->required();
  train_cmd->add_option("--trace", tr.trace, "per-epoch loss CSV to write");
  train_cmd->add_option("--objective", tr.objective,
                        "projection, minmax, minmax_reg, pl_max, pl_mean, pl_ensemble, supervised_midpoint, "
                        "supervised_true")
      ->capture_default_str();
  train_cmd->add_option("--loss-exponent", tr.loss_exponent)->capture_default_str();
  train_cmd->add_option("--lambda", tr.lambda)->capture_default_str();
  train_cmd->add_option("--adversary-lr", tr.adversary_lr);
  train_cmd->add_option("--k", tr.k, "teachers for pseudo-labeling")->capture_default_str();
  train_cmd->add_option("--epochs", tr.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", tr.batch_size)->capture_default_str();
  train_cmd->add_option("--lr", tr.lr)->capture_default_str();
  train_cmd->add_option("--hidden", tr.hidden, "hidden layer widths")->delimiter(',')->capture_default_str();
  train_cmd->add_option("--lipschitz", tr.lipschitz, "enforce this Lipschitz constant");
  train_cmd->add_option("--power-iterations", tr.power_iterations)->capture_default_str();
  train_cmd->add_option("--seed", tr.seed)->capture_default_str();

  std::string eval_ck, eval_data, eval_target = "y";
  auto* eval_cmd = app.add_subcommand("eval", "Mean absolute error of a checkpoint");
  eval_cmd->add_option("-c,--checkpoint", eval_ck)->required();
  eval_cmd->add_option("-d,--data", eval_data, "labeled CSV, or interval CSV with a y column")->required();
  eval_cmd->add_option("--target", eval_target)->capture_default_str();

  DenoiseOptions dn;
  auto* denoise_cmd = app.add_subcommand("denoise", "Reduced intervals under a Lipschitz constraint");
  denoise_cmd->add_option("-d,--data", dn.data, "interval CSV")->required();
  denoise_cmd->add_option("--queries", dn.queries, "feature-only CSV of query points (default: the data rows)");
  denoise_cmd->add_option("-m,--lipschitz", dn.m)->required();
  denoise_cmd->add_option("--eta", dn.eta)->capture_default_str();
  denoise_cmd->add_option("--exponent", dn.exponent)->capture_default_str();
  denoise_cmd->add_option("--norm", dn.norm, "l2 or linf")->capture_default_str();
  denoise_cmd->add_option("-o,--output", dn.output, "CSV to write (default: stdout)");

  std::string lip_data, lip_target = "y", lip_norm = "l2";
  double lip_percentile = 95.0;
  std::size_t lip_pairs = 1'000'000;
  std::uint64_t lip_seed = 0;
  auto* lip_cmd = app.add_subcommand("lipschitz", "Estimate a Lipschitz constant from labeled data");
  lip_cmd->add_option("-d,--data", lip_data)->required();
  lip_cmd->add_option("--target", lip_target)->capture_default_str();
  lip_cmd->add_option("--percentile", lip_percentile)->capture_default_str();
  lip_cmd->add_option("--max-pairs", lip_pairs)->capture_default_str();
  lip_cmd->add_option("--seed", lip_seed)->capture_default_str();
  lip_cmd->add_option("--norm", lip_norm)->capture_default_str();

  std::string bench_config, bench_out;
  std::optional<std::size_t> bench_threads;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment config");
  bench_cmd->add_option("config", bench_config, "JSON experiment config")->required();
  bench_cmd->add_option("-o,--output-dir", bench_out, "override the config's output_dir");
  bench_cmd->add_option("--threads", bench_threads);

  std::string plot_in, plot_out, plot_split = "test";
  auto* plot_cmd = app.add_subcommand("plot", "SVG chart of aggregate.csv or ensemble_widths.csv");
  plot_cmd->add_option("-i,--input", plot_in)->required();
  plot_cmd->add_option("-o,--output", plot_out)->required();
  plot_cmd->add_option("--split", plot_split)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*train_cmd) return run_train(tr);
    if (*eval_cmd) return run_eval(eval_ck, eval_data, eval_target);
    if (*denoise_cmd) return run_denoise(dn);
    if (*lip_cmd) return run_lipschitz(lip_data, lip_target, lip_percentile, lip_pairs, lip_seed, lip_norm);
    if (*bench_cmd) return run_bench(bench_config, bench_out, bench_threads);
    if (*plot_cmd) return run_plot(plot_in, plot_out, plot_split);
  } catch (const ir::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "intervalreg/harness/config.hpp"
#include "intervalreg/harness/data.hpp"
#include "intervalreg/harness/experiment.hpp"
#include "intervalreg/harness/plot.hpp"

using namespace intervalreg;
using namespace intervalreg::harness;

namespace {

template <typename Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

// f(x) = 2x + 1 with no hidden layer.
TrainedModel affine_model() {
  TrainedModel m;
  m.config.layer_sizes = {1, 1};
  DenseLayer layer;
  layer.inputs = 1;
  layer.outputs = 1;
  layer.weight = {2.0};
  layer.bias = {1.0};
  layer.left = {1.0};
  layer.right = {1.0};
  m.params.layers.push_back(layer);
  return m;
}

TrainedModel constant_model(double c) {
  auto m = affine_model();
  m.params.layers[0].weight = {0.0};
  m.params.layers[0].bias = {c};
  return m;
}

LabeledData synthetic(std::size_t n, std::uint64_t seed = 3) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> rows;
  LabeledData d;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u(gen), b = u(gen);
    rows.push_back({a, b});
    d.ys.push_back(5.0 + 2.0 * a - b * b);
  }
  d.xs = FeatureMatrix::from_rows(rows);
  d.feature_names = {"f1", "f2"};
  return d;
}

ExperimentConfig small_experiment() {
  ExperimentConfig cfg;
  cfg.dataset_name = "synthetic";
  cfg.intervals.q_max = 20.0;
  cfg.objectives = {ObjectiveSpec{}};
  cfg.train.epochs = 3;
  cfg.train.batch_size = 16;
  cfg.train.lr = 1e-2;
  cfg.train.model = MlpConfig::with_hidden(1, {6});
  cfg.seeds = {0};
  cfg.threads = 1;
  cfg.record_runtime = false;
  return cfg;
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV input
// ---------------------------------------------------------------------------

TEST(Csv, ReadsLabeledFile) {
  std::istringstream in("f1,f2,y\n1,2,3\n4, 5 ,6\n");
  const auto d = read_labeled_csv(in);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"f1", "f2"}));
  EXPECT_EQ(d.xs(1, 1), 5.0);
  EXPECT_EQ(d.ys[1], 6.0);
}

TEST(Csv, MissingTargetColumnIsNamed) {
  std::istringstream in("f1,f2,target\n1,2,3\n");
  EXPECT_NE(error_of([&] { (void)read_labeled_csv(in); }).find("missing column 'y'"), std::string::npos);
}

TEST(Csv, NonNumericCellNamesRow) {
  std::istringstream in("f1,y\n1,2\nabc,3\n");
  const auto msg = error_of([&] { (void)read_labeled_csv(in); });
  EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("f1"), std::string::npos) << msg;
}

TEST(Csv, EmptyDatasetRejected) {
  std::istringstream in("f1,y\n");
  EXPECT_NE(error_of([&] { (void)read_labeled_csv(in); }).find("empty dataset"), std::string::npos);
}

TEST(Csv, IntervalFileWithTruth) {
  std::istringstream in("f1,l,u,y\n0.5,1,3,2\n1.5,-1,-1,-1\n");
  const auto ds = read_interval_csv(in);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].features, std::vector<double>{0.5});
  EXPECT_EQ(ds[0].interval.lower(), 1.0);
  EXPECT_EQ(ds[0].interval.upper(), 3.0);
  EXPECT_EQ(ds[1].true_y, -1.0);
}

TEST(Csv, InvertedIntervalRejected) {
  std::istringstream in("f1,l,u\n0,2,1\n");
  EXPECT_NE(error_of([&] { (void)read_interval_csv(in); }).find("row 0"), std::string::npos);
}

TEST(Csv, TruthOutsideIntervalRejected) {
  std::istringstream in("f1,l,u,y\n0,1,2,5\n");
  EXPECT_FALSE(error_of([&] { (void)read_interval_csv(in); }).empty());
}

TEST(Csv, IntervalRoundTripIsExact) {
  std::vector<IntervalSample> samples{{{0.1, 1.0 / 3.0}, Interval(-0.7, 2.0 / 7.0), 0.2},
                                      {{1e-300, -5.0}, Interval(4.0, 4.0), 4.0}};
  const IntervalDataset ds(samples);
  std::stringstream io;
  write_interval_csv(io, ds, {"a", "b"});
  const auto back = read_interval_csv(io);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].features, ds[i].features);
    EXPECT_EQ(back[i].interval.lower(), ds[i].interval.lower());
    EXPECT_EQ(back[i].interval.upper(), ds[i].interval.upper());
    EXPECT_EQ(back[i].true_y, ds[i].true_y);
  }
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.125, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

// ---------------------------------------------------------------------------
// Splits and rescaling
// ---------------------------------------------------------------------------

TEST(Split, TenRowsGiveSevenOneTwo) {
  const auto idx = split_indices(10, SplitSpec{});
  EXPECT_EQ(idx.train.size(), 7u);
  EXPECT_EQ(idx.val.size(), 1u);
  EXPECT_EQ(idx.test.size(), 2u);
}

TEST(Split, IsAPartitionAndDeterministic) {
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    SplitSpec spec;
    spec.seed = seed;
    const auto a = split_indices(101, spec);
    const auto b = split_indices(101, spec);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.val, b.val);
    EXPECT_EQ(a.test, b.test);
    std::vector<std::size_t> all;
    for (const auto* part : {&a.train, &a.val, &a.test}) all.insert(all.end(), part->begin(), part->end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(101);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
  }
}

TEST(Split, SeedChangesAssignment) {
  SplitSpec s0, s1;
  s1.seed = 1;
  EXPECT_NE(split_indices(50, s0).train, split_indices(50, s1).train);
}

TEST(Split, EmptyPartRejected) {
  SplitSpec spec{0.5, 0.5, 0.0, 0};
  EXPECT_THROW((void)split_indices(10, spec), DataError);
  SplitSpec bad{0.5, 0.3, 0.3, 0};
  EXPECT_THROW((void)split_indices(10, bad), ConfigError);
}

TEST(Rescale, UsesTrainStatisticsOnly) {
  Splits s;
  s.train.ys = {1.0, 3.0};  // population sd 1
  s.val.ys = {10.0};
  s.test.ys = {-2.0};
  const auto p = rescale_targets(s, 100.0);
  EXPECT_DOUBLE_EQ(p.scale, 100.0);
  EXPECT_EQ(s.train.ys, (std::vector<double>{100.0, 300.0}));
  EXPECT_EQ(s.val.ys, std::vector<double>{1000.0});
  EXPECT_EQ(s.test.ys, std::vector<double>{-200.0});
  EXPECT_NEAR(standard_deviation(s.train.ys), 100.0, 1e-12);
}

TEST(Rescale, ConstantTargetsRejected) {
  Splits s;
  s.train.ys = {2.0, 2.0};
  EXPECT_THROW((void)rescale_targets(s), DataError);
}

TEST(Rescale, InverseRecoversMae) {
  // MAE is positively homogeneous: rescaling by c and dividing the MAE by c
  // recovers the original.
  const std::vector<double> y{1.0, 2.5, -3.0}, pred{0.5, 2.0, -1.0};
  const double c = 37.0;
  std::vector<double> yc, pc;
  for (std::size_t i = 0; i < y.size(); ++i) {
    yc.push_back(y[i] * c);
    pc.push_back(pred[i] * c);
  }
  EXPECT_NEAR(mean_absolute_error(pc, yc) / c, mean_absolute_error(pred, y), 1e-12);
}

TEST(Rescale, IntervalsScaleWithTruth) {
  const IntervalDataset ds(std::vector<IntervalSample>{{{1.0}, Interval(-1.0, 2.0), 0.5}});
  const auto r = rescale_intervals(ds, 4.0);
  EXPECT_EQ(r[0].interval.lower(), -4.0);
  EXPECT_EQ(r[0].interval.upper(), 8.0);
  EXPECT_EQ(r[0].true_y, 2.0);
  EXPECT_EQ(r[0].features, std::vector<double>{1.0});
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

TEST(Metrics, MaeExample) {
  EXPECT_DOUBLE_EQ(mean_absolute_error(std::vector<double>{1, 2, 3}, std::vector<double>{2, 2, 5}), 1.0);
  EXPECT_THROW((void)mean_absolute_error(std::vector<double>{1}, std::vector<double>{1, 2}), std::exception);
}

TEST(Metrics, EvaluateOnLabeledAndIntervalData) {
  const auto model = affine_model();
  LabeledData d;
  d.xs = FeatureMatrix::from_rows({{0.0}, {1.0}, {2.0}});
  d.ys = {1.0, 4.0, 5.0};  // predictions 1, 3, 5
  EXPECT_DOUBLE_EQ(evaluate_mae(model, d), 1.0 / 3.0);

  const IntervalDataset ds(std::vector<IntervalSample>{{{0.0}, Interval(0.0, 2.0), 2.0}, {{1.0}, Interval(3.0, 3.0), 3.0}});
  EXPECT_DOUBLE_EQ(evaluate_mae(model, ds), 0.5);
  const IntervalDataset unlabeled(std::vector<IntervalSample>{{{0.0}, Interval(0.0, 2.0), std::nullopt}});
  EXPECT_THROW((void)evaluate_mae(model, unlabeled), DataError);
}

TEST(Metrics, EnsembleWidthExample) {
  const std::vector<TrainedModel> models{constant_model(1.0), constant_model(4.0), affine_model()};
  const auto xs = FeatureMatrix::from_rows({{0.0}, {2.0}});
  // Row 0: {1, 4, 1} -> [1, 4]; row 1: {1, 4, 5} -> [1, 5].
  const auto e = ensemble_reduced_intervals(models, xs);
  ASSERT_EQ(e.intervals.size(), 2u);
  EXPECT_EQ(e.intervals[0].lower(), 1.0);
  EXPECT_EQ(e.intervals[0].upper(), 4.0);
  EXPECT_EQ(e.intervals[1].upper(), 5.0);
  EXPECT_DOUBLE_EQ(e.mean_width, 3.5);
  EXPECT_THROW((void)ensemble_reduced_intervals(std::span(models).first(1), xs), DataError);
}

TEST(Metrics, AggregateRecomputesMeanAndStandardError) {
  std::vector<ResultsRow> rows;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    ResultsRow r;
    r.dataset = "d";
    r.objective = "projection";
    r.setting = "s";
    r.seed = seed;
    r.split = "test";
    r.mae = static_cast<double>(seed + 1);  // 1, 2, 3, 4
    rows.push_back(r);
  }
  const auto agg = aggregate(rows);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].n, 4u);
  EXPECT_DOUBLE_EQ(agg[0].mean, 2.5);
  // Sample sd sqrt(5/3), divided by sqrt(4).
  EXPECT_NEAR(agg[0].ste, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

TEST(Experiment, OneObjectiveOneSeedGivesThreeRows) {
  const auto result = run_experiment(small_experiment(), synthetic(60));
  ASSERT_TRUE(result.failures.empty());
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_EQ(result.rows[0].split, "train");
  EXPECT_EQ(result.rows[1].split, "val");
  EXPECT_EQ(result.rows[2].split, "test");
  for (const auto& r : result.rows) {
    EXPECT_TRUE(std::isfinite(r.mae));
    EXPECT_EQ(r.objective, "projection");
    EXPECT_EQ(r.runtime_seconds, 0.0);
  }
  EXPECT_GT(result.rescale.scale, 0.0);
}

TEST(Experiment, TwoSeedsGivePositiveStandardError) {
  auto cfg = small_experiment();
  cfg.seeds = {0, 1};
  const auto result = run_experiment(cfg, synthetic(60));
  ASSERT_EQ(result.rows.size(), 6u);
  const auto test = std::find_if(result.aggregates.begin(), result.aggregates.end(),
                                 [](const AggregateRow& a) { return a.split == "test"; });
  ASSERT_NE(test, result.aggregates.end());
  EXPECT_EQ(test->n, 2u);
  EXPECT_GT(test->ste, 0.0);
}

TEST(Experiment, RerunIsBitIdentical) {
  auto cfg = small_experiment();
  cfg.seeds = {0, 1};
  ObjectiveSpec minmax;
  minmax.kind = ObjectiveKind::kMinmax;
  cfg.objectives = {ObjectiveSpec{}, minmax};
  cfg.threads = 2;
  const auto data = synthetic(60);
  std::ostringstream a, b;
  write_results_csv(a, run_experiment(cfg, data).rows);
  write_results_csv(b, run_experiment(cfg, data).rows);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, LipschitzGridAddsCells) {
  auto cfg = small_experiment();
  cfg.lipschitz_grid = std::vector<double>{1.0, 100.0};
  const auto result = run_experiment(cfg, synthetic(60));
  EXPECT_EQ(result.rows.size(), 6u);
  std::set<double> ms;
  for (const auto& r : result.rows) ms.insert(r.m.value());
  EXPECT_EQ(ms, (std::set<double>{1.0, 100.0}));
}

TEST(Experiment, EnsembleWidthsReported) {
  auto cfg = small_experiment();
  cfg.seeds = {0, 1, 2};
  cfg.ensemble = true;
  const auto result = run_experiment(cfg, synthetic(60));
  ASSERT_EQ(result.ensembles.size(), 1u);
  EXPECT_EQ(result.ensembles[0].models, 3u);
  EXPECT_GT(result.ensembles[0].mean_width, 0.0);
}

TEST(Experiment, WritesOutputFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "intervalreg_test_outputs";
  std::filesystem::remove_all(dir);
  write_outputs(run_experiment(small_experiment(), synthetic(40)), dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "results.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "aggregate.csv"));
  EXPECT_FALSE(std::filesystem::exists(dir / "failures.csv"));
  std::ifstream in(dir / "aggregate.csv");
  const auto back = read_aggregate_csv(in);
  EXPECT_EQ(back.size(), 3u);
  std::filesystem::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Configs and plots
// ---------------------------------------------------------------------------

TEST(Config, ParsesFullExample) {
  const auto cfg = parse_experiment_config(R"({
    "dataset": "data.csv",
    "intervals": {"q_min": 0, "q_max": 30, "location": {"law": "mid", "c": 0.2}},
    "objectives": ["projection", {"kind": "pl_mean", "k": 3}],
    "train": {"epochs": 10, "hidden": [4, 4]},
    "seeds": [0, 1],
    "lipschitz_grid": [1, 2]
  })");
  EXPECT_EQ(cfg.objectives.size(), 2u);
  EXPECT_EQ(cfg.objectives[1].k, 3u);
  EXPECT_EQ(cfg.train.epochs, 10u);
  EXPECT_EQ(cfg.train.model.layer_sizes, (std::vector<std::size_t>{1, 4, 4, 1}));
  EXPECT_EQ(cfg.intervals.q_max, 30.0);
  EXPECT_TRUE(std::holds_alternative<MidCentered>(cfg.intervals.location));
}

TEST(Config, UnknownKeyRejected) {
  const auto msg = error_of([] {
    (void)parse_experiment_config(R"({"dataset": "d.csv", "objectives": ["projection"], "seeds": [0], "epoch": 3})");
  });
  EXPECT_NE(msg.find("unknown key 'epoch'"), std::string::npos) << msg;
}

TEST(Config, BadValuesRejected) {
  EXPECT_THROW((void)parse_experiment_config("{not json"), ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"dataset": "d.csv", "objectives": ["nope"], "seeds": [0]})"),
               ConfigError);
  EXPECT_THROW((void)parse_experiment_config(R"({"dataset": "d.csv", "objectives": ["projection"], "seeds": []})"),
               ConfigError);
  EXPECT_THROW(
      (void)parse_experiment_config(R"({"dataset": "d.csv", "objectives": ["projection"], "seeds": "zero"})"),
      ConfigError);
}

TEST(Plot, AggregateLineAndBarCharts) {
  std::vector<AggregateRow> rows(2);
  rows[0] = {"d", "projection", "s", 1.0, "test", 3, 2.0, 0.1};
  rows[1] = {"d", "projection", "s", 4.0, "test", 3, 1.5, 0.1};
  const auto line = plot_aggregate(rows);
  EXPECT_NE(line.find("<polyline"), std::string::npos);
  rows[1].m.reset();
  const auto bars = plot_aggregate(rows);
  EXPECT_NE(bars.find("<rect x="), std::string::npos);
  EXPECT_EQ(bars.rfind("</svg>\n"), bars.size() - 7);
  EXPECT_THROW((void)plot_aggregate(rows, "val"), DataError);
}

TEST(Csv, QuotedFieldsSplit) {
  using intervalreg::harness::detail::split_fields;
  EXPECT_EQ(split_fields(R"(a,"q[0,20]",,"say ""hi""", 2 )"),
            (std::vector<std::string>{"a", "q[0,20]", "", R"(say "hi")", "2"}));
  EXPECT_EQ(split_fields("x,"), (std::vector<std::string>{"x", ""}));
}

TEST(Experiment, RescalingCanBeDisabled) {
  auto cfg = small_experiment();
  cfg.rescale_std.reset();
  const auto data = synthetic(60);
  const auto result = run_experiment(cfg, data);
  EXPECT_EQ(result.rescale.scale, 1.0);
  // Raw targets have sd well below 100, so errors stay on that scale.
  for (const auto& r : result.rows) EXPECT_LT(r.mae, 50.0);

  const auto parsed =
      parse_experiment_config(R"({"dataset": "d.csv", "objectives": ["projection"], "seeds": [0], "rescale_std": null})");
  EXPECT_FALSE(parsed.rescale_std.has_value());
  EXPECT_EQ(parse_experiment_config(R"({"dataset": "d.csv", "objectives": ["projection"], "seeds": [0]})").rescale_std,
            100.0);
}

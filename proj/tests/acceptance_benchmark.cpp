// Slow acceptance criteria on the Abalone dataset. Needs a labeled CSV (see
// tools/prepare_uci.py) named by INTERVALREG_ABALONE_CSV; without it every
// criterion is reported as skipped and the exit code is 77.
//
// INTERVALREG_BENCH_OUT   output directory (default: benchmark_results)
// INTERVALREG_BENCH_EPOCHS override the epoch count, for plumbing checks only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "intervalreg/harness/experiment.hpp"

using namespace intervalreg;
using namespace intervalreg::harness;

namespace {

constexpr int kSkip = 77;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ExperimentConfig table_recipe(const std::string& csv, std::size_t epochs) {
  ExperimentConfig cfg;
  cfg.dataset = csv;
  cfg.dataset_name = "abalone";
  // Table-1 runs keep the targets in their original units.
  cfg.rescale_std.reset();
  cfg.train.epochs = epochs;
  cfg.train.batch_size = 512;
  cfg.train.lr = 1e-3;
  cfg.train.model = MlpConfig::with_hidden(1, {10, 20, 30});
  for (std::uint64_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
  cfg.record_runtime = false;
  return cfg;
}

const AggregateRow* find_test(const ExperimentResult& r, const std::string& label) {
  for (const auto& a : r.aggregates) {
    if (a.split == "test" && a.objective == label) return &a;
  }
  return nullptr;
}

Outcome table_one(const std::string& csv, std::size_t epochs, const std::filesystem::path& out) {
  auto cfg = table_recipe(csv, epochs);
  cfg.intervals.q_max = 30.0;
  ObjectiveSpec projection, minmax, minmax_reg, pl_max, pl_mean;
  minmax.kind = ObjectiveKind::kMinmax;
  minmax_reg.kind = ObjectiveKind::kMinmaxReg;
  pl_max.kind = ObjectiveKind::kPLMax;
  pl_mean.kind = ObjectiveKind::kPLMean;
  cfg.objectives = {projection, minmax, minmax_reg, pl_max, pl_mean};
  const auto result = run_experiment(cfg);
  write_outputs(result, out / "table1");

  std::string detail;
  for (const auto& a : result.aggregates) {
    if (a.split == "test") detail += a.objective + " " + fmt(a.mean) + "+-" + fmt(a.ste) + "; ";
  }
  const auto* proj = find_test(result, projection.label());
  const auto* mean = find_test(result, pl_mean.label());
  const bool proj_ok = proj && std::fabs(proj->mean - 1.56) <= 0.15;
  const bool mean_ok = mean && std::fabs(mean->mean - 1.52) <= 0.15;
  detail += "gated: projection 1.56+-0.15 " + std::string(proj_ok ? "ok" : "missed") + ", pl_mean 1.52+-0.15 " +
            (mean_ok ? "ok" : "missed");
  if (!result.failures.empty()) detail += "; " + std::to_string(result.failures.size()) + " failed cells";
  return {proj_ok && mean_ok && result.failures.empty(), detail};
}

Outcome shrinkage_trend(const std::string& csv, std::size_t epochs, const std::filesystem::path& out) {
  auto cfg = table_recipe(csv, epochs);
  cfg.intervals.q_max = 90.0;
  cfg.objectives = {ObjectiveSpec{}};
  std::vector<double> grid;
  for (int k = 0; k <= 13; ++k) grid.push_back(0.1 * std::ldexp(1.0, k));
  cfg.lipschitz_grid = grid;
  cfg.ensemble = true;
  // The ensemble varies only the initialization.
  cfg.reseed_intervals = false;
  const auto result = run_experiment(cfg);
  write_outputs(result, out / "shrinkage");

  std::vector<std::pair<double, double>> widths;
  for (const auto& e : result.ensembles) {
    if (e.m) widths.emplace_back(*e.m, e.mean_width);
  }
  std::sort(widths.begin(), widths.end());
  std::size_t dips = 0;
  bool below_half_width = widths.size() == grid.size();
  std::string detail = "widths:";
  for (std::size_t i = 0; i < widths.size(); ++i) {
    detail += " " + fmt(widths[i].second);
    if (!(widths[i].second < 45.0)) below_half_width = false;
    // A local violation larger than 5% of the previous width counts.
    if (i > 0 && widths[i].second < 0.95 * widths[i - 1].second) ++dips;
  }
  detail += "; violations beyond 5%: " + std::to_string(dips) + ", all below 45: " + (below_half_width ? "yes" : "no");
  if (!result.failures.empty()) detail += "; " + std::to_string(result.failures.size()) + " failed cells";
  return {dips == 0 && below_half_width && result.failures.empty(), detail};
}

}  // namespace

int main() {
  const char* csv = std::getenv("INTERVALREG_ABALONE_CSV");
  if (csv == nullptr || *csv == '\0') {
    std::printf("SKIP [8] Table-1 reproduction on Abalone: INTERVALREG_ABALONE_CSV is not set\n");
    std::printf("SKIP [9] interval-shrinkage trend on Abalone: INTERVALREG_ABALONE_CSV is not set\n");
    return kSkip;
  }
  std::size_t epochs = 1000;
  if (const char* e = std::getenv("INTERVALREG_BENCH_EPOCHS")) epochs = std::strtoul(e, nullptr, 10);
  const char* out_env = std::getenv("INTERVALREG_BENCH_OUT");
  const std::filesystem::path out = out_env ? out_env : "benchmark_results";

  struct Entry {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*run)(const std::string&, std::size_t, const std::filesystem::path&);
  };
  const Entry entries[] = {{8, "Table-1 reproduction on Abalone", 1800.0, table_one},
                           {9, "interval-shrinkage trend on Abalone", 3600.0, shrinkage_trend}};
  int failed = 0;
  for (const auto& e : entries) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = e.run(csv, epochs, out);
    } catch (const std::exception& ex) {
      outcome = {false, std::string("exception: ") + ex.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // The runtime budgets describe a desktop CPU and are reported, not gated.
    const bool pass = outcome.pass && epochs == 1000;
    failed += !pass;
    std::printf("%s [%d] %s: %s (%.1f s, desktop budget %.0f s%s)\n", pass ? "PASS" : "FAIL", e.id, e.name,
                outcome.detail.c_str(), seconds, e.budget_seconds,
                epochs == 1000 ? "" : ", epoch override active");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}

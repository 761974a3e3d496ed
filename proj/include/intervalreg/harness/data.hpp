#pragma once

/// \file
/// CSV ingestion, train/val/test splitting and target rescaling.
///
/// Labeled files have a header and columns f1..fd, y; interval files have
/// f1..fd, l, u and optionally y. Lines starting with '#' are ignored.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "intervalreg/core.hpp"
#include "intervalreg/rng.hpp"

namespace intervalreg::harness {

/// Exact regression data: features and real targets.
struct LabeledData {
  std::vector<std::string> feature_names;
  FeatureMatrix xs;
  std::vector<double> ys;

  [[nodiscard]] std::size_t size() const { return ys.size(); }

  [[nodiscard]] LabeledData subset(std::span<const std::size_t> rows) const {
    LabeledData out;
    out.feature_names = feature_names;
    out.xs = FeatureMatrix(rows.size(), xs.cols());
    out.ys.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto src = xs.row(rows[i]);
      std::copy(src.begin(), src.end(), out.xs.row(i).begin());
      out.ys.push_back(ys[rows[i]]);
    }
    return out;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string field;
    if (i < line.size() && line[i] == '"') {
      for (++i; i < line.size(); ++i) {
        if (line[i] != '"') {
          field += line[i];
        } else if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          ++i;
          break;
        }
      }
      const std::size_t comma = line.find(',', i);
      i = comma == std::string_view::npos ? line.size() : comma;
    } else {
      const std::size_t comma = line.find(',', i);
      field = trim(line.substr(i, comma == std::string_view::npos ? std::string_view::npos : comma - i));
      i = comma == std::string_view::npos ? line.size() : comma;
    }
    out.push_back(std::move(field));
    if (i >= line.size()) break;
    ++i;
  }
  return out;
}

inline double parse_cell(std::string_view cell, std::size_t row, std::string_view column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw DataError("row " + std::to_string(row) + ", column '" + std::string(column) + "': not a number: '" +
                    std::string(cell) + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError("row " + std::to_string(row) + ", column '" + std::string(column) + "': non-finite value");
  }
  return value;
}

/// Header plus numeric body. Row indices in errors count data rows from 0.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
  [[nodiscard]] bool has(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
  }
};

inline Table read_table(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split_fields(view);
    if (!have_header) {
      for (auto f : fields) t.header.emplace_back(f);
      have_header = true;
      continue;
    }
    const std::size_t row = t.rows.size();
    if (fields.size() != t.header.size()) {
      throw DataError("row " + std::to_string(row) + ": expected " + std::to_string(t.header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> values(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) values[c] = parse_cell(fields[c], row, t.header[c]);
    t.rows.push_back(std::move(values));
  }
  if (!have_header) throw DataError("missing header row");
  if (t.rows.empty()) throw DataError("empty dataset");
  return t;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

/// Reads a labeled CSV. Features are `feature_columns`, or every column other
/// than the target when that list is empty.
[[nodiscard]] inline LabeledData read_labeled_csv(std::istream& in, const std::string& target_column = "y",
                                                  const std::vector<std::string>& feature_columns = {}) {
  const auto table = detail::read_table(in);
  const std::size_t target = table.column(target_column);
  std::vector<std::size_t> features;
  LabeledData out;
  if (feature_columns.empty()) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c != target) features.push_back(c);
    }
  } else {
    for (const auto& name : feature_columns) features.push_back(table.column(name));
  }
  if (features.empty()) throw DataError("no feature columns");
  for (auto c : features) out.feature_names.push_back(table.header[c]);
  out.xs = FeatureMatrix(table.rows.size(), features.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t k = 0; k < features.size(); ++k) out.xs(r, k) = table.rows[r][features[k]];
    out.ys.push_back(table.rows[r][target]);
  }
  return out;
}

[[nodiscard]] inline LabeledData load_labeled_csv(const std::string& path, const std::string& target_column = "y",
                                                  const std::vector<std::string>& feature_columns = {}) {
  auto in = detail::open_input(path);
  return read_labeled_csv(in, target_column, feature_columns);
}

/// Reads an interval CSV: columns `l` and `u`, optional `y`, everything else
/// is a feature.
[[nodiscard]] inline IntervalDataset read_interval_csv(std::istream& in) {
  const auto table = detail::read_table(in);
  const std::size_t lo = table.column("l");
  const std::size_t hi = table.column("u");
  const bool has_truth = table.has("y");
  const std::size_t truth = has_truth ? table.column("y") : table.header.size();
  std::vector<IntervalSample> samples;
  samples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[lo] > row[hi]) throw DataError("row " + std::to_string(r) + ": lower bound exceeds upper bound");
    IntervalSample s{{}, Interval(row[lo], row[hi]), std::nullopt};
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != lo && c != hi && c != truth) s.features.push_back(row[c]);
    }
    if (has_truth) {
      if (!contains(s.interval, row[truth])) {
        throw DataError("row " + std::to_string(r) + ": y lies outside [l, u]");
      }
      s.true_y = row[truth];
    }
    samples.push_back(std::move(s));
  }
  return IntervalDataset(std::move(samples));
}

[[nodiscard]] inline IntervalDataset load_interval_csv(const std::string& path) {
  auto in = detail::open_input(path);
  return read_interval_csv(in);
}

/// Reads a CSV in which every column is a feature (query points).
[[nodiscard]] inline FeatureMatrix load_feature_csv(const std::string& path) {
  auto in = detail::open_input(path);
  const auto table = detail::read_table(in);
  return FeatureMatrix::from_rows(table.rows);
}

/// Column names of a CSV file's header row.
[[nodiscard]] inline std::vector<std::string> read_header(const std::string& path) {
  auto in = detail::open_input(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> out;
    for (auto f : detail::split_fields(view)) out.emplace_back(f);
    return out;
  }
  throw DataError("missing header row");
}

/// Shortest decimal that reads back to the same double.
[[nodiscard]] inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

inline void write_interval_csv(std::ostream& os, const IntervalDataset& ds,
                               const std::vector<std::string>& feature_names = {}) {
  for (std::size_t c = 0; c < ds.feature_dim(); ++c) {
    os << (c < feature_names.size() ? feature_names[c] : "f" + std::to_string(c + 1)) << ',';
  }
  os << "l,u";
  const bool truth = ds.has_true_targets();
  if (truth) os << ",y";
  os << '\n';
  for (const auto& s : ds) {
    for (double v : s.features) os << format_double(v) << ',';
    os << format_double(s.interval.lower()) << ',' << format_double(s.interval.upper());
    if (truth) os << ',' << format_double(*s.true_y);
    os << '\n';
  }
}

inline void write_labeled_csv(std::ostream& os, const LabeledData& data) {
  for (std::size_t c = 0; c < data.xs.cols(); ++c) {
    os << (c < data.feature_names.size() ? data.feature_names[c] : "f" + std::to_string(c + 1)) << ',';
  }
  os << "y\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.xs.row(r)) os << format_double(v) << ',';
    os << format_double(data.ys[r]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

struct SplitSpec {
  double train_frac = 0.7;
  double val_frac = 0.15;
  double test_frac = 0.15;
  std::uint64_t seed = 0;

  void validate() const {
    for (double f : {train_frac, val_frac, test_frac}) {
      if (!(f >= 0.0 && f < 1.0)) throw ConfigError("split fractions must lie in [0, 1)");
    }
    if (std::fabs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
      throw ConfigError("split fractions must sum to 1");
    }
  }
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

/// Seeded permutation, then contiguous slices: floor(n * train_frac) rows to
/// train, floor(n * val_frac) to val, the remainder to test.
[[nodiscard]] inline SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  if (n < 3) throw DataError("need at least 3 rows to split");
  CounterRng rng(spec.seed, streams::kSplit);
  const auto order = permutation(n, rng);
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train_frac));
  const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.val_frac));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                 order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  if (out.train.empty() || out.val.empty() || out.test.empty()) {
    throw DataError("split of " + std::to_string(n) + " rows leaves a part empty");
  }
  return out;
}

struct Splits {
  LabeledData train;
  LabeledData val;
  LabeledData test;
};

[[nodiscard]] inline Splits split(const LabeledData& data, const SplitSpec& spec) {
  const auto idx = split_indices(data.size(), spec);
  return {data.subset(idx.train), data.subset(idx.val), data.subset(idx.test)};
}

// ---------------------------------------------------------------------------
// Rescaling
// ---------------------------------------------------------------------------

struct RescaleParams {
  double scale = 1.0;
  std::string applied_to = "y";
};

/// Population standard deviation.
[[nodiscard]] inline double standard_deviation(std::span<const double> v) {
  if (v.empty()) throw DataError("standard deviation of an empty sample");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

/// Multiplies the targets of every split by target_std / std(train targets).
[[nodiscard]] inline RescaleParams rescale_targets(Splits& splits, double target_std = 100.0) {
  if (!(target_std > 0.0)) throw ConfigError("target_std must be positive");
  const double sd = standard_deviation(splits.train.ys);
  if (!(sd > 0.0)) throw DataError("training targets have zero standard deviation");
  RescaleParams params{target_std / sd, "y"};
  for (auto* part : {&splits.train, &splits.val, &splits.test}) {
    for (double& y : part->ys) y *= params.scale;
  }
  return params;
}

/// Multiplies interval bounds (and true targets) by `scale`.
[[nodiscard]] inline IntervalDataset rescale_intervals(const IntervalDataset& ds, double scale) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  std::vector<IntervalSample> out;
  out.reserve(ds.size());
  for (const auto& s : ds) {
    std::optional<double> y;
    if (s.true_y) y = *s.true_y * scale;
    out.push_back({s.features, Interval(s.interval.lower() * scale, s.interval.upper() * scale), y});
  }
  return IntervalDataset(std::move(out));
}

}  // namespace intervalreg::harness

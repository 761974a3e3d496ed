#pragma once

/// \file
/// Interval targets and the closed-form losses defined on them.
///
/// Everything here is a pure function on values; the rest of the library
/// (interval generation, denoising, training objectives) is built on top of
/// these primitives.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace intervalreg {

/// Raised for malformed inputs: mismatched dimensions, invalid intervals,
/// non-finite values.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid configuration values (bad exponent, negative width...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The L_p loss family l(y, y') = |y - y'|^p.
///
/// Only the L_p family is built; the exponent must be at least 1 so that the
/// loss is a nondecreasing function of |y - y'|.
class LossFamily {
 public:
  constexpr LossFamily() = default;
  explicit LossFamily(double exponent) : exponent_(exponent) {
    if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
      throw ConfigError("loss exponent must be a finite value >= 1, got " +
                        std::to_string(exponent));
    }
  }

  [[nodiscard]] constexpr double exponent() const noexcept { return exponent_; }
  [[nodiscard]] constexpr bool is_l1() const noexcept { return exponent_ == 1.0; }

  friend constexpr bool operator==(const LossFamily&, const LossFamily&) = default;

 private:
  double exponent_ = 1.0;
};

/// A closed interval [lower, upper]. Degenerate intervals (lower == upper)
/// represent exact labels.
class Interval {
 public:
  constexpr Interval() = default;
  Interval(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper)) {
      throw DataError("interval bounds must be finite");
    }
    if (lower > upper) {
      throw DataError("interval lower bound " + std::to_string(lower) +
                      " exceeds upper bound " + std::to_string(upper));
    }
  }

  static Interval point(double y) { return Interval(y, y); }

  [[nodiscard]] constexpr double lower() const noexcept { return lower_; }
  [[nodiscard]] constexpr double upper() const noexcept { return upper_; }
  [[nodiscard]] constexpr double width() const noexcept { return upper_ - lower_; }
  [[nodiscard]] constexpr double midpoint() const noexcept { return (lower_ + upper_) / 2.0; }
  [[nodiscard]] constexpr double half_width() const noexcept { return (upper_ - lower_) / 2.0; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;

 private:
  double lower_ = 0.0;
  double upper_ = 0.0;
};

[[nodiscard]] constexpr bool contains(const Interval& iv, double y) noexcept {
  return iv.lower() <= y && y <= iv.upper();
}

/// One row of interval-supervised data.
struct IntervalSample {
  std::vector<double> features;
  Interval interval;
  std::optional<double> true_y;
};

/// A nonempty, dimension-consistent collection of interval samples.
class IntervalDataset {
 public:
  IntervalDataset() = default;

  explicit IntervalDataset(std::vector<IntervalSample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw DataError("empty dataset");
    feature_dim_ = samples_.front().features.size();
    if (feature_dim_ == 0) throw DataError("samples must have at least one feature");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto& s = samples_[i];
      if (s.features.size() != feature_dim_) {
        throw DataError("row " + std::to_string(i) + ": expected " +
                        std::to_string(feature_dim_) + " features, got " +
                        std::to_string(s.features.size()));
      }
      for (double v : s.features) {
        if (!std::isfinite(v)) throw DataError("row " + std::to_string(i) + ": non-finite feature");
      }
      if (s.true_y && !contains(s.interval, *s.true_y)) {
        throw DataError("row " + std::to_string(i) + ": true target lies outside its interval");
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
  [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
  [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_dim_; }
  [[nodiscard]] const IntervalSample& operator[](std::size_t i) const { return samples_[i]; }
  [[nodiscard]] const std::vector<IntervalSample>& samples() const noexcept { return samples_; }
  [[nodiscard]] auto begin() const noexcept { return samples_.begin(); }
  [[nodiscard]] auto end() const noexcept { return samples_.end(); }

  [[nodiscard]] bool has_true_targets() const noexcept {
    for (const auto& s : samples_) {
      if (!s.true_y) return false;
    }
    return !samples_.empty();
  }

 private:
  std::vector<IntervalSample> samples_;
  std::size_t feature_dim_ = 0;
};

/// Dense row-major matrix of feature vectors.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    FeatureMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw DataError("ragged feature rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.cols_));
    }
    return m;
  }

  static FeatureMatrix from_dataset(const IntervalDataset& ds) {
    FeatureMatrix m(ds.size(), ds.feature_dim());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      std::copy(ds[i].features.begin(), ds[i].features.end(),
                m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.cols_));
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  [[nodiscard]] std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

/// |a - b|^p.
[[nodiscard]] inline double psi_loss(const LossFamily& family, double a, double b) noexcept {
  const double d = std::fabs(a - b);
  return family.is_l1() ? d : std::pow(d, family.exponent());
}

/// d/da of |a - b|^p, with subgradient 0 at a == b.
[[nodiscard]] inline double psi_loss_grad(const LossFamily& family, double a, double b) noexcept {
  const double diff = a - b;
  if (diff == 0.0) return 0.0;
  const double sign = diff > 0.0 ? 1.0 : -1.0;
  if (family.is_l1()) return sign;
  return family.exponent() * std::pow(std::fabs(diff), family.exponent() - 1.0) * sign;
}

/// Distance from the prediction to the nearest point of the interval, measured
/// with the loss. Zero exactly when the prediction lies inside the interval.
[[nodiscard]] inline double projection_loss(const LossFamily& family, double yhat,
                                            const Interval& iv) noexcept {
  if (yhat < iv.lower()) return psi_loss(family, yhat, iv.lower());
  if (yhat > iv.upper()) return psi_loss(family, yhat, iv.upper());
  return 0.0;
}

[[nodiscard]] inline double projection_loss_grad(const LossFamily& family, double yhat,
                                                 const Interval& iv) noexcept {
  if (yhat < iv.lower()) return psi_loss_grad(family, yhat, iv.lower());
  if (yhat > iv.upper()) return psi_loss_grad(family, yhat, iv.upper());
  return 0.0;
}

/// Loss against the farthest point of the interval. Predictions at or below
/// the midpoint are measured against the upper bound.
[[nodiscard]] inline double worstcase_loss(const LossFamily& family, double yhat,
                                           const Interval& iv) noexcept {
  return yhat <= iv.midpoint() ? psi_loss(family, yhat, iv.upper())
                               : psi_loss(family, yhat, iv.lower());
}

[[nodiscard]] inline double worstcase_loss_grad(const LossFamily& family, double yhat,
                                                const Interval& iv) noexcept {
  return yhat <= iv.midpoint() ? psi_loss_grad(family, yhat, iv.upper())
                               : psi_loss_grad(family, yhat, iv.lower());
}

struct MidpointDecomposition {
  double center_term = 0.0;
  double halfwidth = 0.0;
};

/// For the L1 loss the worst-case loss splits into |yhat - mid| + (u - l)/2.
[[nodiscard]] inline MidpointDecomposition worstcase_loss_l1_decomposed(double yhat,
                                                                        const Interval& iv) noexcept {
  return {std::fabs(yhat - iv.midpoint()), iv.half_width()};
}

/// max(l(a.lower, b.upper), l(a.upper, b.lower)): the largest loss between a
/// point of one interval and a point of the other.
[[nodiscard]] inline double interval_distance(const LossFamily& family, const Interval& a,
                                              const Interval& b) noexcept {
  return std::max(psi_loss(family, a.lower(), b.upper()), psi_loss(family, a.upper(), b.lower()));
}

/// Intersection of closed intervals; nullopt when empty.
[[nodiscard]] inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lower(), b.lower());
  const double hi = std::min(a.upper(), b.upper());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

}  // namespace intervalreg

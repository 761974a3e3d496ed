#pragma once

/// \file
/// Interval reduction under a Lipschitz constraint.
///
/// If every admissible hypothesis is m-Lipschitz and lies inside the training
/// intervals, then each training point x' bounds f(x) from both sides:
///
///     l_{x'} - m |x - x'|  <=  f(x)  <=  u_{x'} + m |x - x'|.
///
/// Intersecting these induced bounds over the dataset gives a reduced interval
/// that is never wider than the point's own interval. When hypotheses are only
/// known to have mean projection loss <= eta, the reduced interval is widened
/// by buffers r and s solving mean_i (r - lg_i)_+^p = eta, where lg_i is how
/// far sample i's induced lower bound falls short of the best one (and
/// likewise for s with the upper gaps).
///
/// Population expectations are replaced by empirical means over the dataset
/// throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intervalreg/core.hpp"
#include "intervalreg/roots.hpp"

namespace intervalreg {

enum class Norm { kEuclidean, kLInf };

[[nodiscard]] inline double distance(std::span<const double> a, std::span<const double> b,
                                     Norm norm = Norm::kEuclidean) {
  if (a.size() != b.size()) {
    throw DataError("feature dimension mismatch: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  double acc = 0.0;
  if (norm == Norm::kLInf) {
    for (std::size_t i = 0; i < a.size(); ++i) acc = std::max(acc, std::fabs(a[i] - b[i]));
    return acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Bounds on f(query_x) implied by one sample: its interval widened by
/// m times the distance.
[[nodiscard]] inline Interval induced_bounds(const IntervalSample& sample, double m,
                                             std::span<const double> query_x,
                                             Norm norm = Norm::kEuclidean) {
  if (!(m > 0.0)) throw ConfigError("Lipschitz constant must be positive");
  const double reach = m * distance(query_x, sample.features, norm);
  return {sample.interval.lower() - reach, sample.interval.upper() + reach};
}

/// [base_lower - r, base_upper + s] together with the samples that realise
/// the base bounds. `empty()` is a legitimate outcome: it means no m-Lipschitz
/// function fits inside every training interval.
struct ReducedInterval {
  double base_lower = 0.0;
  double base_upper = 0.0;
  double r_buffer = 0.0;
  double s_buffer = 0.0;
  std::size_t arg_lower = 0;
  std::size_t arg_upper = 0;

  [[nodiscard]] bool empty() const noexcept { return base_lower > base_upper; }
  [[nodiscard]] double lower() const noexcept { return base_lower - r_buffer; }
  [[nodiscard]] double upper() const noexcept { return base_upper + s_buffer; }
  [[nodiscard]] std::optional<Interval> base() const {
    if (empty()) return std::nullopt;
    return Interval(base_lower, base_upper);
  }
  [[nodiscard]] std::optional<Interval> effective() const {
    if (empty()) return std::nullopt;
    return Interval(lower(), upper());
  }
};

/// Intersection of the induced bounds of every sample. O(n) per query.
[[nodiscard]] inline ReducedInterval reduced_interval(const IntervalDataset& ds, double m,
                                                     std::span<const double> query_x,
                                                     Norm norm = Norm::kEuclidean) {
  if (ds.empty()) throw DataError("empty dataset");
  ReducedInterval out;
  out.base_lower = -std::numeric_limits<double>::infinity();
  out.base_upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Interval b = induced_bounds(ds[i], m, query_x, norm);
    if (b.lower() > out.base_lower) {
      out.base_lower = b.lower();
      out.arg_lower = i;
    }
    if (b.upper() < out.base_upper) {
      out.base_upper = b.upper();
      out.arg_upper = i;
    }
  }
  return out;
}

struct BoundGaps {
  double lower_gap = 0.0;
  double upper_gap = 0.0;
};

/// Gaps of every sample's induced bounds relative to the best bounds at `query_x`.
struct GapProfile {
  ReducedInterval reduced;
  std::vector<double> lower_gaps;
  std::vector<double> upper_gaps;
};

[[nodiscard]] inline GapProfile gap_profile(const IntervalDataset& ds, double m,
                                            std::span<const double> query_x,
                                            Norm norm = Norm::kEuclidean) {
  GapProfile out;
  out.reduced = reduced_interval(ds, m, query_x, norm);
  if (out.reduced.empty()) {
    throw DataError("reduced interval is empty; bound gaps are undefined");
  }
  out.lower_gaps.reserve(ds.size());
  out.upper_gaps.reserve(ds.size());
  for (const auto& sample : ds) {
    const Interval b = induced_bounds(sample, m, query_x, norm);
    out.lower_gaps.push_back(out.reduced.base_lower - b.lower());
    out.upper_gaps.push_back(b.upper() - out.reduced.base_upper);
  }
  return out;
}

[[nodiscard]] inline BoundGaps bound_gaps(const IntervalDataset& ds, double m,
                                          std::span<const double> query_x, std::size_t sample_index,
                                          Norm norm = Norm::kEuclidean) {
  if (sample_index >= ds.size()) throw DataError("sample index out of range");
  const ReducedInterval reduced = reduced_interval(ds, m, query_x, norm);
  if (reduced.empty()) throw DataError("reduced interval is empty; bound gaps are undefined");
  const Interval b = induced_bounds(ds[sample_index], m, query_x, norm);
  return {reduced.base_lower - b.lower(), b.upper() - reduced.base_upper};
}

struct DenoiseQuery {
  std::vector<double> query_x;
  double m = 1.0;
  double eta = 0.0;
  double exponent = 1.0;
  Norm norm = Norm::kEuclidean;

  void validate() const {
    if (!(m > 0.0)) throw ConfigError("Lipschitz constant must be positive");
    if (!(eta >= 0.0)) throw ConfigError("eta must be >= 0");
    (void)LossFamily(exponent);
  }
};

struct BufferRadii {
  double r = 0.0;
  double s = 0.0;
};

/// mean_i (radius - gap_i)_+^p - eta.
[[nodiscard]] inline double buffer_residual(std::span<const double> gaps, double radius, double eta,
                                            double p) {
  double acc = 0.0;
  for (double g : gaps) {
    const double excess = radius - g;
    if (excess > 0.0) acc += p == 1.0 ? excess : std::pow(excess, p);
  }
  return acc / static_cast<double>(gaps.size()) - eta;
}

/// Root of mean_i (radius - gap_i)_+^p = eta for nonnegative gaps, one of
/// which is zero. The residual is continuous and nondecreasing, vanishes at 0
/// and is >= 0 at max(gap) + eta^(1/p), so that bracket always works.
/// Returns the lower end of the final bracket (never above the true root).
[[nodiscard]] inline double solve_buffer(std::span<const double> gaps, double eta, double p) {
  if (!(eta >= 0.0)) throw ConfigError("eta must be >= 0");
  if (gaps.empty()) throw DataError("no gaps to solve over");
  if (eta == 0.0) return 0.0;
  const double max_gap = *std::max_element(gaps.begin(), gaps.end());
  const double hi = max_gap + std::pow(eta, 1.0 / p);
  const auto bracket = bisect_nondecreasing(
      [&](double r) { return buffer_residual(gaps, r, eta, p); }, 0.0, hi, 1e-10, 1e-10);
  return bracket.lower;
}

[[nodiscard]] inline BufferRadii buffer_radius(const IntervalDataset& ds, const DenoiseQuery& q) {
  q.validate();
  const GapProfile gaps = gap_profile(ds, q.m, q.query_x, q.norm);
  return {solve_buffer(gaps.lower_gaps, q.eta, q.exponent),
          solve_buffer(gaps.upper_gaps, q.eta, q.exponent)};
}

/// min over delta of delta + (eta / P(gap <= delta))^(1/p), with P the
/// empirical fraction. Deltas with zero empirical mass are skipped.
[[nodiscard]] inline double buffer_bound_from_gaps(std::span<const double> gaps, double eta,
                                                   double p, std::span<const double> delta_grid) {
  if (delta_grid.empty()) throw ConfigError("delta grid is empty");
  double best = std::numeric_limits<double>::infinity();
  for (double delta : delta_grid) {
    if (!(delta >= 0.0)) throw ConfigError("delta grid entries must be >= 0");
    const auto hits = std::count_if(gaps.begin(), gaps.end(), [delta](double g) { return g <= delta; });
    if (hits == 0) continue;
    const double prob = static_cast<double>(hits) / static_cast<double>(gaps.size());
    best = std::min(best, delta + std::pow(eta / prob, 1.0 / p));
  }
  if (!std::isfinite(best)) {
    throw DataError("every delta in the grid has zero empirical probability");
  }
  return best;
}

[[nodiscard]] inline BufferRadii buffer_upper_bound(const IntervalDataset& ds, const DenoiseQuery& q,
                                                    std::span<const double> delta_grid) {
  q.validate();
  const GapProfile gaps = gap_profile(ds, q.m, q.query_x, q.norm);
  return {buffer_bound_from_gaps(gaps.lower_gaps, q.eta, q.exponent, delta_grid),
          buffer_bound_from_gaps(gaps.upper_gaps, q.eta, q.exponent, delta_grid)};
}

/// Reduced interval with eta-buffers attached. Empty reductions come back
/// with zero buffers and the empty flag set.
[[nodiscard]] inline ReducedInterval denoise(const IntervalDataset& ds, const DenoiseQuery& q) {
  q.validate();
  ReducedInterval out = reduced_interval(ds, q.m, q.query_x, q.norm);
  if (out.empty() || q.eta == 0.0) return out;
  const GapProfile gaps = gap_profile(ds, q.m, q.query_x, q.norm);
  out.r_buffer = solve_buffer(gaps.lower_gaps, q.eta, q.exponent);
  out.s_buffer = solve_buffer(gaps.upper_gaps, q.eta, q.exponent);
  return out;
}

/// Empirical Gamma(tau): mean over query points of
/// 1 / min(P(lg <= tau), P(ug <= tau)).
[[nodiscard]] inline double gamma_estimate(const IntervalDataset& ds, double m, double tau,
                                           const FeatureMatrix& query_points,
                                           Norm norm = Norm::kEuclidean) {
  if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0");
  if (query_points.rows() == 0) throw DataError("no query points");
  const double n = static_cast<double>(ds.size());
  double acc = 0.0;
  for (std::size_t qi = 0; qi < query_points.rows(); ++qi) {
    const GapProfile gaps = gap_profile(ds, m, query_points.row(qi), norm);
    const auto below = [tau](double g) { return g <= tau; };
    const double lower_frac =
        static_cast<double>(std::count_if(gaps.lower_gaps.begin(), gaps.lower_gaps.end(), below)) / n;
    const double upper_frac =
        static_cast<double>(std::count_if(gaps.upper_gaps.begin(), gaps.upper_gaps.end(), below)) / n;
    const double denom = std::min(lower_frac, upper_frac);
    if (denom == 0.0) {
      throw DataError("query " + std::to_string(qi) + " has no gaps within tau");
    }
    acc += 1.0 / denom;
  }
  return acc / static_cast<double>(query_points.rows());
}

/// Several intervals observed for the same feature vector.
struct IntervalGroup {
  std::vector<double> features;
  std::vector<Interval> intervals;
};

struct GroupIntersection {
  std::vector<double> features;
  std::optional<Interval> intersection;  ///< nullopt when the intervals are disjoint
};

[[nodiscard]] inline std::vector<GroupIntersection> intersect_groups(
    const std::vector<IntervalGroup>& groups) {
  std::vector<GroupIntersection> out;
  out.reserve(groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    if (g.intervals.empty()) throw DataError("group " + std::to_string(gi) + " has no intervals");
    double lo = g.intervals.front().lower();
    double hi = g.intervals.front().upper();
    for (const auto& iv : g.intervals) {
      lo = std::max(lo, iv.lower());
      hi = std::min(hi, iv.upper());
    }
    out.push_back({g.features, lo <= hi ? std::optional<Interval>(Interval(lo, hi)) : std::nullopt});
  }
  return out;
}

struct LabeledIntervalGroup {
  std::vector<double> features;
  double true_y = 0.0;
  std::vector<Interval> intervals;
};

/// Smallest r such that every group's intersection lies in [y - r, y + r].
[[nodiscard]] inline double ambiguity_radius(const std::vector<LabeledIntervalGroup>& groups) {
  double radius = 0.0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    for (const auto& iv : g.intervals) {
      if (!contains(iv, g.true_y)) {
        throw DataError("group " + std::to_string(gi) + ": an interval excludes the true target");
      }
    }
    const auto meet = intersect_groups({IntervalGroup{g.features, g.intervals}}).front().intersection;
    // Every interval contains y, so the intersection does too.
    radius = std::max({radius, g.true_y - meet->lower(), meet->upper() - g.true_y});
  }
  return radius;
}

}  // namespace intervalreg

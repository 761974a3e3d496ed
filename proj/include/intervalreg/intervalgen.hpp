#pragma once

/// \file
/// Turns exact regression targets into interval targets.
///
/// Each row draws a width q and a location p in [0, 1] and becomes
/// [y - p q, y + (1 - p) q], so p = 0 puts y on the lower bound and p = 1 on
/// the upper bound. An optional padding pass widens every interval by a
/// multiple of its own width on both sides.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "intervalreg/core.hpp"
#include "intervalreg/rng.hpp"

namespace intervalreg {

/// p ~ U[p_min, p_max].
struct UniformRange {
  double p_min = 0.0;
  double p_max = 1.0;
};

/// p ~ U[0.5 - c, 0.5 + c]: y concentrates around the middle as c shrinks.
struct MidCentered {
  double c = 0.5;
};

/// p uniform on [0, 0.5 - c] U [0.5 + c, 1]: y pushed toward either bound.
/// At c = 0.5 the two pieces collapse to {0} and {1}, each with probability 1/2.
struct BoundaryFavoring {
  double c = 0.0;
};

using LocationLaw = std::variant<UniformRange, MidCentered, BoundaryFavoring>;

inline void validate(const LocationLaw& law) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformRange>) {
          if (!(0.0 <= v.p_min && v.p_min <= v.p_max && v.p_max <= 1.0)) {
            throw ConfigError("uniform location law needs 0 <= p_min <= p_max <= 1");
          }
        } else {
          if (!(0.0 <= v.c && v.c <= 0.5)) throw ConfigError("location parameter c must lie in [0, 0.5]");
        }
      },
      law);
}

/// Maps a unit uniform draw to a location under `law`.
[[nodiscard]] inline double location_from_unit(const LocationLaw& law, double unit) {
  return std::visit(
      [unit](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformRange>) {
          return v.p_min + (v.p_max - v.p_min) * unit;
        } else if constexpr (std::is_same_v<T, MidCentered>) {
          return (0.5 - v.c) + 2.0 * v.c * unit;
        } else {
          const double piece = 0.5 - v.c;
          if (piece <= 0.0) return unit < 0.5 ? 0.0 : 1.0;
          const double t = unit * 2.0 * piece;
          return t < piece ? t : (0.5 + v.c) + (t - piece);
        }
      },
      law);
}

namespace detail {
/// Fixed-point with trailing zeros stripped: 0.500000 -> "0.5", 30.000000 -> "30".
[[nodiscard]] inline std::string short_number(double x) {
  std::string s = std::to_string(x);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}
}  // namespace detail

/// Short human-readable tag, used in result tables.
[[nodiscard]] inline std::string describe(const LocationLaw& law) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformRange>) {
          return "p[" + detail::short_number(v.p_min) + "," + detail::short_number(v.p_max) + "]";
        } else if constexpr (std::is_same_v<T, MidCentered>) {
          return "mid" + detail::short_number(v.c);
        } else {
          return "boundary" + detail::short_number(v.c);
        }
      },
      law);
}

struct IntervalGenConfig {
  double q_min = 0.0;
  double q_max = 0.0;
  LocationLaw location = UniformRange{};
  double pad_scale = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(0.0 <= q_min && q_min <= q_max) || !std::isfinite(q_max)) {
      throw ConfigError("interval widths need 0 <= q_min <= q_max < inf");
    }
    if (!(pad_scale >= 0.0) || !std::isfinite(pad_scale)) throw ConfigError("pad_scale must be >= 0");
    intervalreg::validate(location);
  }

  [[nodiscard]] std::string describe() const {
    std::string out = "q[" + detail::short_number(q_min) + "," + detail::short_number(q_max) + "]-" + intervalreg::describe(location);
    if (pad_scale > 0.0) out += "-pad" + detail::short_number(pad_scale);
    return out;
  }
};

/// [y - p q, y + (1 - p) q].
[[nodiscard]] inline Interval make_interval(double y, double q, double p) {
  return {y - p * q, y + (1.0 - p) * q};
}

[[nodiscard]] inline Interval pad_interval(const Interval& iv, double s) {
  const double q = iv.width();
  return {iv.lower() - s * q, iv.upper() + s * q};
}

[[nodiscard]] inline IntervalDataset pad_intervals(const IntervalDataset& ds, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("padding scale must be >= 0");
  std::vector<IntervalSample> out;
  out.reserve(ds.size());
  for (const auto& sample : ds) {
    out.push_back({sample.features, pad_interval(sample.interval, s), sample.true_y});
  }
  return IntervalDataset(std::move(out));
}

/// Draws per-row widths and locations and builds the interval dataset. Row i
/// uses draw i of the width stream and draw i of the location stream, so the
/// output does not depend on the order rows are processed in.
[[nodiscard]] inline IntervalDataset generate_intervals(const FeatureMatrix& xs,
                                                       std::span<const double> ys,
                                                       const IntervalGenConfig& cfg) {
  cfg.validate();
  if (xs.rows() != ys.size()) {
    throw DataError("feature rows (" + std::to_string(xs.rows()) + ") and targets (" +
                    std::to_string(ys.size()) + ") differ in length");
  }
  const CounterRng width_rng(cfg.seed, streams::kIntervalWidth);
  const CounterRng location_rng(cfg.seed, streams::kIntervalLocation);

  std::vector<IntervalSample> samples;
  samples.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double y = ys[i];
    if (!std::isfinite(y)) throw DataError("row " + std::to_string(i) + ": non-finite target");
    const double q = cfg.q_min + (cfg.q_max - cfg.q_min) * width_rng.uniform_at(i);
    const double p = location_from_unit(cfg.location, location_rng.uniform_at(i));
    Interval iv = make_interval(y, q, p);
    if (cfg.pad_scale > 0.0) iv = pad_interval(iv, cfg.pad_scale);
    const auto row = xs.row(i);
    samples.push_back({std::vector<double>(row.begin(), row.end()), iv, y});
  }
  return IntervalDataset(std::move(samples));
}

}  // namespace intervalreg

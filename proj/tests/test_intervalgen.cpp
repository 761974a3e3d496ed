#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "intervalreg/intervalgen.hpp"

using namespace intervalreg;

namespace {

struct Labeled {
  FeatureMatrix xs;
  std::vector<double> ys;
};

Labeled toy(std::size_t n) {
  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({static_cast<double>(i), 1.0});
    ys.push_back(std::sin(static_cast<double>(i)) * 10.0);
  }
  return {FeatureMatrix::from_rows(rows), ys};
}

}  // namespace

TEST(IntervalGen, ContainsTargetAndRespectsWidthRange) {
  const auto data = toy(2000);
  IntervalGenConfig cfg;
  cfg.q_min = 1.0;
  cfg.q_max = 30.0;
  cfg.seed = 4;
  const auto ds = generate_intervals(data.xs, data.ys, cfg);
  ASSERT_EQ(ds.size(), 2000u);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& s = ds[i];
    EXPECT_TRUE(contains(s.interval, data.ys[i]));
    EXPECT_EQ(*s.true_y, data.ys[i]);
    EXPECT_GE(s.interval.width(), 1.0 - 1e-9);
    EXPECT_LE(s.interval.width(), 30.0 + 1e-9);
  }
}

TEST(IntervalGen, ZeroWidthGivesPointIntervals) {
  const auto data = toy(50);
  IntervalGenConfig cfg;
  const auto ds = generate_intervals(data.xs, data.ys, cfg);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(ds[i].interval, Interval::point(data.ys[i]));
}

TEST(IntervalGen, LocationExtremes) {
  const auto data = toy(100);
  IntervalGenConfig cfg;
  cfg.q_min = cfg.q_max = 2.0;
  cfg.location = UniformRange{0.0, 0.0};
  auto ds = generate_intervals(data.xs, data.ys, cfg);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(ds[i].interval.lower(), data.ys[i]);
  cfg.location = UniformRange{1.0, 1.0};
  ds = generate_intervals(data.xs, data.ys, cfg);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(ds[i].interval.upper(), data.ys[i]);
}

TEST(IntervalGen, BoundaryFavoringAtHalfPutsTargetOnABound) {
  const auto data = toy(400);
  IntervalGenConfig cfg;
  cfg.q_min = 1.0;
  cfg.q_max = 5.0;
  cfg.location = BoundaryFavoring{0.5};
  const auto ds = generate_intervals(data.xs, data.ys, cfg);
  int at_lower = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const bool lo = ds[i].interval.lower() == data.ys[i];
    const bool hi = ds[i].interval.upper() == data.ys[i];
    EXPECT_TRUE(lo || hi);
    at_lower += lo;
  }
  // Fair coin over 400 draws; 5 sigma is 50.
  EXPECT_NEAR(at_lower, 200, 50);
}

TEST(IntervalGen, LocationLawsStayInRange) {
  for (double c : {0.0, 0.1, 0.25, 0.49}) {
    for (int i = 0; i <= 1000; ++i) {
      const double unit = i / 1000.0 * (1.0 - 1e-12);
      const double mid = location_from_unit(MidCentered{c}, unit);
      EXPECT_GE(mid, 0.5 - c - 1e-15);
      EXPECT_LE(mid, 0.5 + c + 1e-15);
      const double edge = location_from_unit(BoundaryFavoring{c}, unit);
      EXPECT_TRUE((edge >= 0.0 && edge <= 0.5 - c + 1e-15) || (edge >= 0.5 + c - 1e-15 && edge <= 1.0));
    }
  }
}

TEST(IntervalGen, MidCenteredMeanIsHalf) {
  double acc = 0.0;
  const CounterRng rng(2, 9);
  for (int i = 0; i < 20000; ++i) acc += location_from_unit(MidCentered{0.3}, rng.uniform_at(i));
  EXPECT_NEAR(acc / 20000.0, 0.5, 0.01);
}

TEST(IntervalGen, Padding) {
  const Interval iv(1.0, 3.0);
  EXPECT_EQ(pad_interval(iv, 0.5), Interval(0.0, 4.0));
  EXPECT_EQ(pad_interval(iv, 0.0), iv);
  EXPECT_THROW((void)pad_intervals(IntervalDataset({{{1.0}, iv, std::nullopt}}), -1.0), ConfigError);
}

TEST(IntervalGen, DeterministicAndSeedSensitive) {
  const auto data = toy(64);
  IntervalGenConfig cfg;
  cfg.q_max = 10.0;
  cfg.seed = 17;
  const auto a = generate_intervals(data.xs, data.ys, cfg);
  const auto b = generate_intervals(data.xs, data.ys, cfg);
  cfg.seed = 18;
  const auto c = generate_intervals(data.xs, data.ys, cfg);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].interval, b[i].interval);
    any_diff |= !(a[i].interval == c[i].interval);
  }
  EXPECT_TRUE(any_diff);
}

TEST(IntervalGen, RowPrefixIsStable) {
  const auto big = toy(100);
  const auto small = toy(10);
  IntervalGenConfig cfg;
  cfg.q_max = 10.0;
  const auto a = generate_intervals(big.xs, big.ys, cfg);
  const auto b = generate_intervals(small.xs, small.ys, cfg);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(a[i].interval, b[i].interval);
}

TEST(IntervalGen, Errors) {
  const auto data = toy(5);
  IntervalGenConfig cfg;
  cfg.q_min = 2.0;
  cfg.q_max = 1.0;
  EXPECT_THROW((void)generate_intervals(data.xs, data.ys, cfg), ConfigError);
  cfg = {};
  cfg.location = MidCentered{0.7};
  EXPECT_THROW((void)generate_intervals(data.xs, data.ys, cfg), ConfigError);
  cfg = {};
  std::vector<double> short_ys(data.ys.begin(), data.ys.begin() + 3);
  EXPECT_THROW((void)generate_intervals(data.xs, short_ys, cfg), DataError);
  auto bad = data.ys;
  bad[2] = NAN;
  EXPECT_THROW((void)generate_intervals(data.xs, bad, cfg), DataError);
}

TEST(IntervalGen, Describe) {
  IntervalGenConfig cfg;
  cfg.q_max = 30.0;
  EXPECT_EQ(cfg.describe(), "q[0,30]-p[0,1]");
  cfg.pad_scale = 0.5;
  cfg.location = MidCentered{0.25};
  EXPECT_EQ(cfg.describe(), "q[0,30]-mid0.25-pad0.5");
}

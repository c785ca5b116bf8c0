#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "slicebench/defaults.hpp"
#include "slicebench/features.hpp"
#include "slicebench/rng.hpp"
#include "slicebench/sim.hpp"

using namespace slicebench;

namespace {

// Two-pass textbook moments: population variance, g1 skewness, excess g2
// kurtosis; zero variance gives skew = kurtosis = 0.
std::array<double, 6> naive_moments(const std::vector<double>& x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) return {*lo, 0, 0, 0, *lo, *hi};
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double skew = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
  const double kurt = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  return {mean, m2, skew, kurt, *std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end())};
}

std::vector<double> random_series(Stream& rng) {
  const std::size_t n = 2 + rng.below(300);
  const double scale = std::pow(10.0, rng.uniform(-3.0, 4.0));
  const double offset = rng.uniform(-1.0, 1.0) * scale * 10.0;
  std::vector<double> x(n);
  const int shape = static_cast<int>(rng.below(3));
  for (auto& v : x) {
    if (shape == 0) v = offset + scale * rng.normal();
    if (shape == 1) v = offset + scale * rng.uniform();
    if (shape == 2) v = rng.bernoulli(0.1) ? offset + scale * 20.0 : offset;
  }
  return x;
}

bool close_rel(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

FeatureMatrix toy_matrix(std::size_t rows) {
  FeatureMatrix fm;
  fm.active.assign(feature_columns().size(), true);
  for (std::size_t r = 0; r < rows; ++r) {
    fm.rows.push_back({static_cast<int>(r), r < 3 ? 0 : 1, std::vector<double>(feature_columns().size(), 1.0)});
  }
  return fm;
}

}  // namespace

TEST(Moments, ConstantSeries) {
  auto m = moments({1, 1, 1, 1});
  EXPECT_EQ(m, (std::array<double, 6>{1, 0, 0, 0, 1, 1}));
}

TEST(Moments, ZeroToThree) {
  auto m = moments({0, 1, 2, 3});
  EXPECT_DOUBLE_EQ(m[0], 1.5);
  EXPECT_DOUBLE_EQ(m[1], 1.25);
  EXPECT_NEAR(m[2], 0.0, 1e-15);
  EXPECT_NEAR(m[3], -1.36, 1e-12);
  EXPECT_EQ(m[4], 0.0);
  EXPECT_EQ(m[5], 3.0);
}

TEST(Moments, SymmetricSeriesHasZeroSkew) {
  Stream rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x;
    const double c = rng.uniform(-50, 50);
    for (int i = 0; i < 20; ++i) {
      const double d = rng.uniform(0, 10);
      x.push_back(c + d);
      x.push_back(c - d);
    }
    EXPECT_NEAR(moments(x)[2], 0.0, 1e-9);
  }
}

TEST(Moments, MatchesNaiveReference) {
  Stream rng(2024);
  for (int t = 0; t < 2000; ++t) {
    auto x = random_series(rng);
    auto got = moments(x);
    auto want = naive_moments(x);
    for (int s = 0; s < 6; ++s) EXPECT_TRUE(close_rel(got[s], want[s], 1e-9)) << t << " stat " << s;
  }
}

TEST(Moments, PermutationInvariant) {
  Stream rng(9);
  for (int t = 0; t < 300; ++t) {
    auto x = random_series(rng);
    auto y = x;
    for (std::size_t i = y.size() - 1; i > 0; --i) std::swap(y[i], y[rng.below(i + 1)]);
    auto a = moments(x), b = moments(y);
    for (int s = 0; s < 6; ++s) EXPECT_TRUE(close_rel(a[s], b[s], 1e-9));
  }
}

TEST(Extraction, ThreeHundredTwelveColumns) {
  EXPECT_EQ(feature_columns().size(), 312u);
  auto cfg = default_sim_config();
  auto fv = extract(generate_run(cfg, 4, 0));
  EXPECT_EQ(fv.values.size(), 312u);
  EXPECT_EQ(column_name(feature_columns()[0]), name_of(catalog()[0]) + ".mean");
  for (std::size_t c = 0; c < feature_columns().size(); ++c) {
    EXPECT_EQ(parse_column(column_name(feature_columns()[c])), c);
  }
}

TEST(Reduce, InfiniteThresholdKeepsNothing) {
  auto fm = toy_matrix(6);
  auto r = reduce(fm, {0, 1, 2}, std::numeric_limits<double>::infinity());
  EXPECT_TRUE(r.active_columns().empty());
  EXPECT_EQ(r.active_measurements().size(), 0u);
}

TEST(Reduce, SingleDeviatingMeasurementKeepsSixColumns) {
  auto fm = toy_matrix(6);
  const std::size_t m = 17;  // any catalog entry
  fm.rows[4].values[m * kStatsPerMeasurement + 1] = 50.0;
  auto r = reduce(fm, {0, 1, 2}, 4.0);
  EXPECT_EQ(r.active_columns().size(), 6u);
  ASSERT_EQ(r.active_measurements().size(), 1u);
  EXPECT_EQ(*r.active_measurements().begin(), catalog()[m]);
}

TEST(Reduce, ControlPlaneDroppedAndColumnsAreWholeMeasurements) {
  auto ds = generate_dataset(default_sim_config());
  auto full = build_matrix(ds);
  auto r = reduce(full, baseline_row_indices(full), 4.0);
  EXPECT_EQ(r.active_columns().size(), 6 * r.active_measurements().size());
  EXPECT_LT(r.active_measurements().size(), 52u);
  for (const auto& m : r.active_measurements()) {
    EXPECT_NE(m.location, Location::HSS);
    EXPECT_NE(m.location, Location::MME);
  }
}

TEST(Reduce, RejectsMissingBaseline) {
  auto fm = toy_matrix(4);
  EXPECT_THROW(reduce(fm, {}, 4.0), ConfigError);
}

TEST(Normalize, Examples) {
  auto fm = toy_matrix(3);
  const double col[] = {2, 4, 6};
  for (int r = 0; r < 3; ++r) {
    fm.rows[r].values[0] = col[r];
    fm.rows[r].values[1] = 5.0;
    fm.rows[r].values[2] = r == 1 ? 1.0 : r == 0 ? 0.0 : 0.5;
  }
  auto n = normalize(fm);
  EXPECT_DOUBLE_EQ(n.rows[0].values[0], 0.0);
  EXPECT_DOUBLE_EQ(n.rows[1].values[0], 0.5);
  EXPECT_DOUBLE_EQ(n.rows[2].values[0], 1.0);
  for (int r = 0; r < 3; ++r) EXPECT_EQ(n.rows[r].values[1], 0.0);
  for (int r = 0; r < 3; ++r) EXPECT_EQ(n.rows[r].values[2], fm.rows[r].values[2]);
}

TEST(Normalize, IdempotentOnRandomMatrices) {
  Stream rng(77);
  for (int t = 0; t < 50; ++t) {
    auto fm = toy_matrix(2 + rng.below(10));
    for (auto& r : fm.rows) {
      for (auto& v : r.values) v = rng.uniform(-100, 100);
    }
    auto once = normalize(fm);
    auto twice = normalize(once);
    for (std::size_t r = 0; r < fm.rows.size(); ++r) {
      for (std::size_t c = 0; c < fm.cols(); ++c) {
        EXPECT_NEAR(once.rows[r].values[c], twice.rows[r].values[c], 1e-12);
        EXPECT_GE(once.rows[r].values[c], 0.0);
        EXPECT_LE(once.rows[r].values[c], 1.0);
      }
    }
  }
}

TEST(FeatureSets, LayerPartition) {
  for (const auto& m : catalog()) {
    int n = 0;
    for (auto f : {FeatureSet::Service, FeatureSet::NF, FeatureSet::Infra}) n += in_feature_set(f, m);
    EXPECT_EQ(n, 1) << name_of(m);
    EXPECT_EQ(in_feature_set(FeatureSet::Combined, m), !in_feature_set(FeatureSet::Service, m));
  }
  EXPECT_TRUE(in_feature_set(FeatureSet::Service, {KpiKind::RTT, Location::UE}));
  EXPECT_TRUE(in_feature_set(FeatureSet::NF, {KpiKind::TcpRTX, Location::SPGW}));
  EXPECT_TRUE(in_feature_set(FeatureSet::Infra, {KpiKind::LinkDelay, Location::S1U}));
}

TEST(FeatureMatrixIo, RoundTrip) {
  auto cfg = default_sim_config();
  cfg.profiles = {2, 9};
  auto ds = generate_dataset(cfg);
  auto full = build_matrix(ds);
  auto r = normalize(reduce(full, baseline_row_indices(full), 4.0));
  auto path = std::filesystem::temp_directory_path() / "slicebench_fm_roundtrip" / "features.csv";
  write_matrix(r, path);
  auto back = read_matrix(path);
  EXPECT_EQ(back.active, r.active);
  EXPECT_EQ(matrix_to_csv(back), matrix_to_csv(r));
  std::filesystem::remove_all(path.parent_path());
}

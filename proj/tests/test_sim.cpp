#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "slicebench/defaults.hpp"
#include "slicebench/io.hpp"
#include "slicebench/sim.hpp"

using namespace slicebench;

namespace {

double series_mean(const RunRecord& r, Measurement m) {
  const auto& s = r.series.at(*catalog_index(m)).samples;
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

double profile_mean(const SimConfig& cfg, int pid, Measurement m, int runs = 5) {
  double sum = 0.0;
  for (int i = 0; i < runs; ++i) sum += series_mean(generate_run(cfg, pid, i), m);
  return sum / runs;
}

}  // namespace

// ---- catalog and effect matrix

TEST(Catalog, HasFiftyTwoMeasurements) { EXPECT_EQ(catalog().size(), 52u); }

TEST(Catalog, ThreeLinkDelays) {
  auto n = std::count_if(catalog().begin(), catalog().end(),
                         [](const Measurement& m) { return m.kind == KpiKind::LinkDelay; });
  EXPECT_EQ(n, 3);
}

TEST(Catalog, SixAtHss) {
  auto n = std::count_if(catalog().begin(), catalog().end(),
                         [](const Measurement& m) { return m.location == Location::HSS; });
  EXPECT_EQ(n, 6);
}

TEST(Catalog, OrderStableAndNamesRoundTrip) {
  const auto a = catalog();
  const auto b = catalog();
  EXPECT_EQ(a, b);
  std::set<std::string> names;
  for (const auto& m : a) {
    EXPECT_EQ(parse_measurement(name_of(m)), m);
    names.insert(name_of(m));
  }
  EXPECT_EQ(names.size(), a.size());
}

TEST(EffectMatrix, TableExamples) {
  EXPECT_EQ(effect_of(BottleneckType::Interference, KpiKind::CQI), Effect::Always);
  EXPECT_EQ(effect_of(BottleneckType::Delay, KpiKind::LinkDelay), Effect::Always);
  EXPECT_EQ(effect_of(BottleneckType::Interference, KpiKind::CPU), Effect::None);
}

TEST(Profiles, ComponentsUseValidLocations) {
  ASSERT_EQ(profiles().size(), 20u);
  for (const auto& p : profiles()) {
    for (const auto& c : p.components) EXPECT_TRUE(location_valid_for(c.type, c.location)) << p.id;
  }
  EXPECT_FALSE(profile(17).composite());
  EXPECT_TRUE(profile(18).composite());
}

// ---- generator examples

TEST(Simulator, BaselineThroughputNearConfiguredMean) {
  const auto cfg = default_sim_config();
  const Measurement m{KpiKind::Throughput, Location::UE};
  const auto& g = cfg.baseline.at(m);
  const double mean = series_mean(generate_run(cfg, 0, 0), m);
  EXPECT_NEAR(mean, g.mean, 2.0 * g.stddev / std::sqrt(120.0));
}

TEST(Simulator, InterferenceLowersCqi) {
  const auto cfg = default_sim_config();
  const Measurement m{KpiKind::CQI, Location::Controller};
  EXPECT_LT(series_mean(generate_run(cfg, 2, 0), m), cfg.baseline.at(m).mean);
}

TEST(Simulator, SpgwDelayAddsThirtyMs) {
  const auto cfg = default_sim_config();
  const Measurement m{KpiKind::LinkDelay, Location::S1U};
  const double base = cfg.baseline.at(m).mean;
  EXPECT_NEAR(series_mean(generate_run(cfg, 14, 0), m), base + 30.0, 3.0);
}

TEST(Simulator, CompositeTwentyRaisesBothComponents) {
  const auto cfg = default_sim_config();
  const Measurement rtx{KpiKind::TcpRTX, Location::UE};
  const Measurement ce{KpiKind::LinkDelay, Location::ControllerENB};
  auto run = generate_run(cfg, 20, 0);
  EXPECT_GT(series_mean(run, rtx), profile_mean(cfg, 0, rtx));
  EXPECT_GT(series_mean(run, ce), profile_mean(cfg, 0, ce));
}

TEST(Simulator, DatasetSizes) {
  auto cfg = default_sim_config();
  auto ds = generate_dataset(cfg);
  EXPECT_EQ(ds.runs.size(), 90u);
  EXPECT_EQ(ds.manifest().at(0), 5);
  cfg.profiles.clear();
  for (int p = 1; p <= 20; ++p) cfg.profiles.push_back(p);
  EXPECT_EQ(generate_dataset(cfg).runs.size(), 105u);
  cfg.runs_per_profile = 0;
  auto base_only = generate_dataset(cfg);
  EXPECT_EQ(base_only.runs.size(), 5u);
  for (const auto& r : base_only.runs) EXPECT_EQ(r.profile_id, 0);
}

TEST(Simulator, RunsHave120SamplesPerMeasurement) {
  auto run = generate_run(default_sim_config(), 7, 1);
  ASSERT_EQ(run.series.size(), 52u);
  for (const auto& s : run.series) EXPECT_EQ(s.samples.size(), 120u);
}

TEST(Simulator, DeterministicBytes) {
  const auto cfg = default_sim_config();
  for (int pid : {0, 5, 19}) {
    EXPECT_EQ(run_to_csv(generate_run(cfg, pid, 2)), run_to_csv(generate_run(cfg, pid, 2)));
  }
  auto other = cfg;
  other.seed = 43;
  EXPECT_NE(run_to_csv(generate_run(cfg, 3, 0)), run_to_csv(generate_run(other, 3, 0)));
}

TEST(Simulator, LossSeverityMonotoneOnUeRetransmissions) {
  const Measurement m{KpiKind::TcpRTX, Location::UE};
  for (std::uint64_t seed : {42u, 1u, 7u, 100u, 2024u}) {
    auto cfg = default_sim_config();
    cfg.seed = seed;
    const double a = profile_mean(cfg, 3, m), b = profile_mean(cfg, 4, m), c = profile_mean(cfg, 5, m);
    EXPECT_LT(a, b) << seed;
    EXPECT_LT(b, c) << seed;
  }
}

TEST(Simulator, CompositeScopeIsUnionOfComponents) {
  const auto cfg = default_sim_config();
  for (int id : {18, 19, 20}) {
    std::set<Measurement> expect;
    for (const auto& c : profile(id).components) {
      auto s = perturbed_measurements(cfg, c.source_profile);
      expect.insert(s.begin(), s.end());
    }
    EXPECT_EQ(perturbed_measurements(cfg, id), expect) << id;
  }
}

// KPIs whose kind has effect None for every component type must stay at
// baseline: Welch test on per-run means at alpha 0.01 rejects in at most 5% of
// seeds. 100 seeds keep chance failures over ~500 pairs unlikely.
TEST(Simulator, NoneEffectKpisStayAtBaseline) {
  const int seeds = 100;
  std::map<std::pair<int, std::size_t>, int> rejections;
  for (int s = 0; s < seeds; ++s) {
    auto cfg = default_sim_config();
    cfg.seed = 1000 + s;
    std::vector<RunRecord> base;
    for (int r = 0; r < 5; ++r) base.push_back(generate_run(cfg, 0, r));
    for (int pid = 1; pid <= kAllProfiles; ++pid) {
      std::vector<RunRecord> runs;
      for (int r = 0; r < 5; ++r) runs.push_back(generate_run(cfg, pid, r));
      for (std::size_t i = 0; i < catalog().size(); ++i) {
        const auto& m = catalog()[i];
        bool none = true;
        for (const auto& c : profile(pid).components) none = none && effect_of(c.type, m.kind) == Effect::None;
        if (!none) continue;
        auto stats = [&](const std::vector<RunRecord>& rs) {
          std::vector<double> v;
          for (const auto& r : rs) v.push_back(series_mean(r, m));
          double mu = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
          double var = 0.0;
          for (double x : v) var += (x - mu) * (x - mu);
          return std::pair{mu, var / (v.size() - 1)};
        };
        auto [ma, va] = stats(runs);
        auto [mb, vb] = stats(base);
        const double se2 = va / 5 + vb / 5;
        if (se2 <= 0.0) {
          if (ma != mb) ++rejections[{pid, i}];
          continue;
        }
        const double t = (ma - mb) / std::sqrt(se2);
        const double df = se2 * se2 / ((va / 5) * (va / 5) / 4 + (vb / 5) * (vb / 5) / 4);
        boost::math::students_t dist(df);
        const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
        if (p < 0.01) ++rejections[{pid, i}];
      }
    }
  }
  for (const auto& [key, n] : rejections) {
    EXPECT_LE(n, seeds / 20) << "profile " << key.first << " " << name_of(catalog()[key.second]);
  }
}

// ---- validation

TEST(SimValidation, RejectsSpikeRateOutsideUnitInterval) {
  for (double rate : {0.0, -0.1, 1.5}) {
    auto cfg = default_sim_config();
    const auto target = cfg.profile_rules.at(1).front().target;
    cfg.profile_rules[1].push_back({target, PerturbMode::SpikeTrain, 5.0, rate});
    EXPECT_THROW(validate(cfg), ConfigError) << rate;
  }
  auto ok = default_sim_config();
  ok.profile_rules[1].push_back({ok.profile_rules.at(1).front().target, PerturbMode::SpikeTrain, 5.0, 1.0});
  EXPECT_NO_THROW(validate(ok));
}

TEST(SimValidation, RejectsUnknownProfileAndNegativeRuns) {
  auto cfg = default_sim_config();
  cfg.profiles = {21};
  EXPECT_THROW(generate_dataset(cfg), ConfigError);
  cfg = default_sim_config();
  cfg.runs_per_profile = -1;
  EXPECT_THROW(generate_dataset(cfg), ConfigError);
}

TEST(SimConfigJson, RoundTrips) {
  const auto cfg = default_sim_config();
  auto back = sim_config_from_json(to_json(cfg), SimConfig{});
  EXPECT_EQ(to_json(back).dump(), to_json(cfg).dump());
  EXPECT_EQ(run_to_csv(generate_run(back, 11, 0)), run_to_csv(generate_run(cfg, 11, 0)));
}

TEST(DatasetIo, WriteReadRoundTrip) {
  auto cfg = default_sim_config();
  cfg.profiles = {1, 20};
  cfg.runs_per_profile = 1;
  cfg.baseline_runs = 1;
  auto ds = generate_dataset(cfg);
  auto dir = std::filesystem::temp_directory_path() / "slicebench_ds_roundtrip";
  std::filesystem::remove_all(dir);
  write_dataset(ds, dir);
  auto back = read_dataset(dir);
  ASSERT_EQ(back.runs.size(), ds.runs.size());
  for (std::size_t i = 0; i < ds.runs.size(); ++i) EXPECT_EQ(run_to_csv(back.runs[i]), run_to_csv(ds.runs[i]));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_dataset(dir), IoError);
}

#include <gtest/gtest.h>

#include <set>

#include "slicebench/pipeline.hpp"

using namespace slicebench;

namespace {

SimConfig config_with(std::uint64_t seed, int last_profile) {
  auto cfg = default_sim_config();
  cfg.seed = seed;
  cfg.profiles.clear();
  for (int p = 1; p <= last_profile; ++p) cfg.profiles.push_back(p);
  return cfg;
}

const FeatureMatrix& default17() {
  static const auto fm = screened_matrix(generate_dataset(config_with(42, 17)), 4.0);
  return fm;
}

const FeatureMatrix& default20() {
  static const auto fm = screened_matrix(generate_dataset(config_with(42, 20)), 4.0);
  return fm;
}

}  // namespace

TEST(Granularity, ClassCounts) {
  for (auto [g, want] : {std::pair{Granularity::ByProfile, 17}, {Granularity::ByType, 5}, {Granularity::ByTypeAndLocation, 9}}) {
    std::set<int> classes;
    for (int p = 1; p <= kSingularProfiles; ++p) classes.insert(class_of(p, g));
    EXPECT_EQ(static_cast<int>(classes.size()), want);
    EXPECT_EQ(cluster_count(g), want);
  }
  std::set<int> ran, cn;
  for (int p = 1; p <= kSingularProfiles; ++p) {
    (ground_truth(p)[0].domain == Domain::RAN ? ran : cn).insert(class_of(p, Granularity::ByTypeAndLocation));
  }
  EXPECT_EQ(ran.size(), 5u);
  EXPECT_EQ(cn.size(), 4u);
}

TEST(Centralized, CombinedFeaturesByProfile) {
  auto rows = singular_rows(restrict_to(default17(), FeatureSet::Combined));
  auto res = centralized(rows, Granularity::ByProfile);
  EXPECT_EQ(res.assignment.k, 17);
  EXPECT_GE(res.purity, 0.9);
}

TEST(Centralized, CoarsenedScoringIsNoWorse) {
  for (auto f : {FeatureSet::Service, FeatureSet::NF, FeatureSet::Infra, FeatureSet::Combined}) {
    auto rows = singular_rows(restrict_to(default17(), f));
    auto res = centralized(rows, Granularity::ByProfile);
    std::vector<int> by_profile, by_type;
    for (int pid : res.profile_ids) {
      by_profile.push_back(class_of(pid, Granularity::ByProfile));
      by_type.push_back(class_of(pid, Granularity::ByType));
    }
    EXPECT_GE(purity(res.assignment, by_type), purity(res.assignment, by_profile)) << to_string(f);
  }
}

TEST(Centralized, VerdictsDeterministic) {
  auto rows = select_rows(restrict_to(default20(), FeatureSet::Combined), [](const FeatureVector& r) { return r.profile_id; });
  auto a = centralized(rows, Granularity::ByTypeAndLocation);
  auto b = centralized(rows, Granularity::ByTypeAndLocation);
  EXPECT_EQ(profile_verdicts(a.verdicts), profile_verdicts(b.verdicts));
  EXPECT_EQ(a.assignment.cluster, b.assignment.cluster);
}

TEST(Distributed, PerfectOnDefaultDataset) {
  auto res = distributed(restrict_to(default17(), FeatureSet::Combined));
  for (const auto& v : res.views) {
    EXPECT_EQ(v.step1_purity, 1.0) << to_string(v.view);
    EXPECT_EQ(v.step2_purity, 1.0) << to_string(v.view);
  }
  EXPECT_EQ(res.views[1].step2.k, 4);
  EXPECT_EQ(res.views[0].step2.k, 5);
}

TEST(Distributed, BaselineNeverFlaggedAcrossSeeds) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    auto fm = restrict_to(screened_matrix(generate_dataset(config_with(seed, 17)), 4.0), FeatureSet::Combined);
    auto res = distributed(fm);
    for (const auto& v : res.views) {
      for (std::size_t i = 0; i < fm.rows.size(); ++i) {
        if (fm.rows[i].profile_id == 0) EXPECT_FALSE(v.affected[i]) << "seed " << seed << " " << to_string(v.view);
      }
    }
  }
}

TEST(Attribution, ExactVerdictScoresOne) {
  for (int id = 1; id <= kAllProfiles; ++id) {
    auto gt = ground_truth(id);
    EXPECT_EQ(score_attribution(std::set<Finding>(gt.begin(), gt.end()), id), 1.0) << id;
    EXPECT_EQ(score_attribution(std::set<Finding>{}, id), 0.0);
  }
  auto gt = ground_truth(18);
  EXPECT_EQ(score_attribution(std::set<Finding>{gt[0]}, 18), 0.5);
}

TEST(Attribution, CompositePattern) {
  auto tab = attribution_table(default20(), PipelineOptions{});
  EXPECT_EQ(tab["18"]["distributed_final"].get<double>(), 1.0);
  EXPECT_EQ(tab["19"]["distributed_final"].get<double>(), 0.5);
  EXPECT_EQ(tab["19"]["distributed_cn"].get<double>(), 0.0);
  EXPECT_EQ(tab["20"]["distributed_final"].get<double>(), 1.0);
  for (const char* id : {"18", "19", "20"}) EXPECT_EQ(tab[id]["centralized"].get<double>(), 0.5) << id;
}

TEST(Fuzzy, CompositeRunsAreShared) {
  auto fm = select_rows(restrict_to(default20(), FeatureSet::Combined), [](const FeatureVector& r) { return r.profile_id; });
  auto fz = fuzzy_composite(fm);
  int singular = 0, own = 0;
  for (std::size_t i = 0; i < fz.runs.size(); ++i) {
    const auto& r = fz.runs[i];
    const auto& u = fz.assignment.memberships[i];
    double s = 0.0;
    for (double v : u) s += v;
    EXPECT_NEAR(s, 1.0, 1e-9);
    if (r.profile_id == 20) {
      EXPECT_LE(r.top[0].second, 0.9) << r.run_id;
      EXPECT_GT(r.top[1].second, 0.0) << r.run_id;
    }
    if (is_singular(r.profile_id)) {
      ++singular;
      own += r.top[0].first == ground_truth(r.profile_id)[0] && r.top[0].second >= 0.6;
    }
  }
  EXPECT_GT(2 * own, singular);
}

#pragma once

// The full reproduction: 17-profile experiments over every feature set and
// granularity, feature selection, the distributed two-step pipeline,
// composite attribution, fuzzy composite memberships and overhead.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicebench/clustering.hpp"
#include "slicebench/defaults.hpp"
#include "slicebench/features.hpp"
#include "slicebench/identify.hpp"
#include "slicebench/mars.hpp"
#include "slicebench/overhead.hpp"
#include "slicebench/sim.hpp"

namespace slicebench {

using ojson = nlohmann::ordered_json;

struct PipelineOptions {
  double deviation_threshold = 4.0;
  ClusteringOptions clustering;
  int selected_n = 19;
  MarsOptions mars;
  CMeansOptions cmeans = composite_cmeans_options();
};

inline constexpr std::array<FeatureSet, 4> kLayerSets = {FeatureSet::Service, FeatureSet::NF, FeatureSet::Infra,
                                                         FeatureSet::Combined};
inline constexpr std::array<int, 3> kCompositeIds = {18, 19, 20};

inline bool is_singular(int pid) { return pid >= 1 && pid <= kSingularProfiles; }
inline bool is_composite(int pid) { return pid > kSingularProfiles; }

// Screened feature matrix: extraction over every run, then baseline screening.
inline FeatureMatrix screened_matrix(const Dataset& ds, double threshold) {
  auto full = build_matrix(ds);
  const auto base = baseline_row_indices(full);
  if (base.empty()) throw ConfigError("dataset has no baseline runs");
  return reduce(full, base, threshold);
}

inline FeatureMatrix singular_rows(const FeatureMatrix& fm) {
  return select_rows(fm, [](const FeatureVector& r) { return is_singular(r.profile_id); });
}

// Top-n MARS columns over the combined layers, ranked against profile labels
// on the singular runs.
inline FeatureRanking select_features(const FeatureMatrix& screened, const PipelineOptions& opt) {
  auto fm = normalize(singular_rows(restrict_to(screened, FeatureSet::Combined)));
  std::vector<int> labels = fm.labels();
  return rank_features(fm, labels, opt.selected_n, opt.mars);
}

inline std::vector<Measurement> measurement_list(const FeatureMatrix& fm) {
  auto s = fm.active_measurements();
  return {s.begin(), s.end()};
}

struct FeatureSetView {
  std::string name;
  FeatureMatrix matrix;  // screened rows, columns restricted to the set
};

inline std::vector<FeatureSetView> feature_set_views(const FeatureMatrix& screened, const FeatureRanking& ranking) {
  std::vector<FeatureSetView> out;
  for (auto f : kLayerSets) out.push_back({std::string(to_string(f)), restrict_to(screened, f)});
  out.push_back({"selected", restrict_to(screened, ranked_columns(ranking))});
  return out;
}

inline ojson finding_list(const std::set<Finding>& s) {
  ojson a = ojson::array();
  for (const auto& f : s) a.push_back(to_string(f));
  return a;
}

inline ojson features_json(const FeatureMatrix& screened) {
  return {{"extracted_columns", screened.cols()},
          {"retained_columns", screened.active_columns().size()},
          {"retained_measurements", screened.active_measurements().size()}};
}

inline ojson selected_json(const FeatureRanking& ranking) {
  ojson sel = ojson::array();
  for (const auto& r : ranking) sel.push_back(column_name(feature_columns()[r.column]));
  return sel;
}

struct PurityTables {
  ojson json;
  std::map<std::string, double> by_location;  // centralized, ByTypeAndLocation
  std::map<std::string, double> distributed;  // distributed, 9 classes
};

// Centralized (17 profiles, every granularity) and distributed (17 profiles
// plus baseline) purity for each feature-set view.
inline PurityTables purity_tables(const FeatureMatrix& screened, const std::vector<FeatureSetView>& views,
                                  const PipelineOptions& opt) {
  PurityTables t;
  for (const auto& v : views) {
    const auto rows = singular_rows(v.matrix);
    for (auto g : kAllGranularities) {
      auto res = centralized(rows, g, opt.clustering);
      t.json["centralized"][std::string(to_string(g))][v.name] = res.purity;
      if (g == Granularity::ByTypeAndLocation) t.by_location[v.name] = res.purity;
    }
  }
  ojson linkage_tab;
  for (auto l : kAllLinkages) {
    auto copt = opt.clustering;
    copt.linkage = l;
    const auto rows = singular_rows(restrict_to(screened, FeatureSet::Combined));
    linkage_tab[std::string(to_string(l))] = centralized(rows, Granularity::ByProfile, copt).purity;
  }
  DistributedOptions dopt{opt.clustering, opt.deviation_threshold};
  for (const auto& v : views) {
    auto rows = select_rows(v.matrix, [](const FeatureVector& r) { return r.profile_id == 0 || is_singular(r.profile_id); });
    auto res = distributed(rows, dopt);
    ojson d;
    for (const auto& vr : res.views) {
      d[std::string(to_string(vr.view))] = {{"step1", vr.step1_purity},
                                            {"step2", vr.step2_purity},
                                            {"affected_runs", vr.step2_rows.size()}};
    }
    d["combined"] = res.combined_purity;
    t.distributed[v.name] = res.combined_purity;
    t.json["distributed"][v.name] = d;
  }
  t.json["linkage_by_profile_combined"] = linkage_tab;
  return t;
}

inline bool has_composites(const FeatureMatrix& fm) {
  return std::any_of(fm.rows.begin(), fm.rows.end(), [](const FeatureVector& r) { return is_composite(r.profile_id); });
}

// Composite attribution (centralized vs distributed) on the combined columns.
// Empty when the matrix holds no composite runs.
inline ojson attribution_table(const FeatureMatrix& screened, const PipelineOptions& opt) {
  ojson attribution = ojson::object();
  if (!has_composites(screened)) return attribution;
  const auto combined = restrict_to(screened, FeatureSet::Combined);
  std::vector<int> ids(kCompositeIds.begin(), kCompositeIds.end());
  auto cen = centralized(select_rows(combined, [](const FeatureVector& r) { return r.profile_id != 0; }),
                         Granularity::ByTypeAndLocation, opt.clustering);
  const auto cen_verdicts = profile_verdicts(cen.verdicts);
  auto cen_scores = score_attribution(cen_verdicts, ids);
  auto dist = distributed(combined, DistributedOptions{opt.clustering, opt.deviation_threshold});
  auto dist_verdicts = profile_verdicts(dist.verdicts);
  auto final_scores = score_attribution(dist_verdicts, ids);
  for (int id : ids) {
    std::set<Finding> ran, cn, gt;
    for (const auto& f : dist_verdicts[id]) (f.domain == Domain::RAN ? ran : cn).insert(f);
    for (const auto& f : ground_truth(id)) gt.insert(f);
    ojson row;
    row["components"] = finding_list(gt);
    row["centralized"] = cen_scores[id];
    row["distributed_ran"] = score_attribution(ran, id);
    row["distributed_cn"] = score_attribution(cn, id);
    row["distributed_final"] = final_scores[id];
    auto cv = cen_verdicts.find(id);
    row["centralized_verdict"] = finding_list(cv == cen_verdicts.end() ? std::set<Finding>{} : cv->second);
    row["distributed_verdict"] = finding_list(dist_verdicts[id]);
    attribution[std::to_string(id)] = row;
  }
  return attribution;
}

// Two strongest c-means memberships for every composite run.
inline ojson fuzzy_table(const FeatureMatrix& screened, const PipelineOptions& opt) {
  ojson fuzzy = ojson::object();
  if (!has_composites(screened)) return fuzzy;
  const auto combined = restrict_to(screened, FeatureSet::Combined);
  auto fz = fuzzy_composite(select_rows(combined, [](const FeatureVector& r) { return r.profile_id != 0; }),
                            opt.cmeans, opt.clustering);
  fuzzy["converged"] = fz.assignment.converged;
  fuzzy["iterations"] = fz.assignment.iterations;
  ojson runs = ojson::array();
  for (const auto& r : fz.runs) {
    if (!is_composite(r.profile_id)) continue;
    runs.push_back({{"run_id", r.run_id},
                    {"profile_id", r.profile_id},
                    {"first", to_string(r.top[0].first)},
                    {"first_membership", r.top[0].second},
                    {"second", to_string(r.top[1].first)},
                    {"second_membership", r.top[1].second}});
  }
  fuzzy["composite_runs"] = runs;
  return fuzzy;
}

inline std::optional<double> lookup(const std::map<std::string, double>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? std::nullopt : std::optional<double>(it->second);
}

// Overhead rows for every view under both approaches. Purity is attached when
// known (centralized at ByTypeAndLocation, distributed over 9 classes).
inline std::vector<TradeoffRow> overhead_rows(const std::vector<FeatureSetView>& views,
                                              const std::map<std::string, double>& by_location,
                                              const std::map<std::string, double>& dist) {
  std::vector<Experiment> exps;
  for (const auto& v : views) {
    exps.push_back({Approach::Centralized, v.name, measurement_list(v.matrix), lookup(by_location, v.name)});
    exps.push_back({Approach::Distributed, v.name, measurement_list(v.matrix), lookup(dist, v.name)});
  }
  return tradeoff_table(exps);
}

inline ojson overhead_json(const std::vector<TradeoffRow>& rows) {
  ojson over = ojson::array();
  for (const auto& row : rows) over.push_back(to_json(row));
  return over;
}

inline ojson run_pipeline(const Dataset& ds, const PipelineOptions& opt) {
  ojson summary;
  const auto screened = screened_matrix(ds, opt.deviation_threshold);
  summary["features"] = features_json(screened);
  const auto ranking = select_features(screened, opt);
  const auto views = feature_set_views(screened, ranking);
  auto purity = purity_tables(screened, views, opt);
  summary["purity"] = purity.json;
  summary["selected_features"] = selected_json(ranking);
  if (has_composites(screened)) summary["fuzzy"] = fuzzy_table(screened, opt);
  summary["attribution"] = attribution_table(screened, opt);
  summary["overhead"] = overhead_json(overhead_rows(views, purity.by_location, purity.distributed));
  return summary;
}

}  // namespace slicebench

#pragma once

// Centralized and distributed bottleneck identification, fuzzy composite
// analysis and composite attribution.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slicebench/clustering.hpp"
#include "slicebench/features.hpp"
#include "slicebench/telemetry.hpp"

namespace slicebench {

enum class Granularity { ByProfile, ByType, ByTypeAndLocation };

inline constexpr std::array<Granularity, 3> kAllGranularities = {Granularity::ByProfile, Granularity::ByType,
                                                                 Granularity::ByTypeAndLocation};

inline constexpr std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::ByProfile: return "by-profile";
    case Granularity::ByType: return "by-type";
    case Granularity::ByTypeAndLocation: return "by-type-location";
  }
  return "?";
}

inline constexpr int cluster_count(Granularity g) {
  switch (g) {
    case Granularity::ByProfile: return 17;
    case Granularity::ByType: return 5;
    case Granularity::ByTypeAndLocation: return 9;
  }
  return 0;
}

// Edge (UE) measurements belong to the RAN view.
inline constexpr Domain view_of(Location l) { return domain_of(l) == Domain::CN ? Domain::CN : Domain::RAN; }

inline constexpr std::array<Domain, 2> kViews = {Domain::RAN, Domain::CN};

// (type, domain) class; 9 of the 10 codes occur since interference is RAN-only.
struct Finding {
  BottleneckType type;
  Domain domain;

  int code() const { return static_cast<int>(type) * 2 + (domain == Domain::CN ? 1 : 0); }
  auto operator<=>(const Finding&) const = default;
};

inline std::string to_string(const Finding& f) {
  return std::string(to_string(f.type)) + "@" + std::string(to_string(f.domain));
}

inline std::vector<Finding> ground_truth(int profile_id) {
  std::vector<Finding> out;
  if (profile_id == 0) return out;
  for (const auto& c : profile(profile_id).components) out.push_back({c.type, view_of(c.location)});
  return out;
}

// Ground-truth class of a run at the given granularity. Composite runs get a
// class of their own above the singular range.
inline int class_of(int profile_id, Granularity g) {
  if (profile_id == 0) return -1;
  const auto& spec = profile(profile_id);
  if (g == Granularity::ByProfile || spec.composite()) return spec.composite() ? 100 + profile_id : profile_id;
  const auto f = ground_truth(profile_id).front();
  return g == Granularity::ByType ? static_cast<int>(f.type) : f.code();
}

// Name each cluster by the most frequent finding among its members. Members
// contribute every ground-truth component, optionally limited to one domain.
inline std::map<int, Finding> name_clusters(const std::vector<int>& cluster, const std::vector<int>& profile_ids,
                                            std::optional<Domain> only = std::nullopt) {
  std::map<int, std::map<Finding, int>> votes;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    for (const auto& f : ground_truth(profile_ids[i])) {
      if (!only || f.domain == *only) ++votes[cluster[i]][f];
    }
  }
  std::map<int, Finding> names;
  for (const auto& [c, counts] : votes) {
    const Finding* best = nullptr;
    int best_n = 0;
    for (const auto& [f, n] : counts) {  // map order = lowest class first on ties
      if (n > best_n) {
        best_n = n;
        best = &f;
      }
    }
    names.emplace(c, *best);
  }
  return names;
}

struct RunVerdict {
  int run_id;
  int profile_id;
  std::set<Finding> findings;
};

// Findings held by more than half of a profile's runs.
inline std::map<int, std::set<Finding>> profile_verdicts(const std::vector<RunVerdict>& runs) {
  std::map<int, std::map<Finding, int>> hits;
  std::map<int, int> totals;
  for (const auto& r : runs) {
    ++totals[r.profile_id];
    for (const auto& f : r.findings) ++hits[r.profile_id][f];
  }
  std::map<int, std::set<Finding>> out;
  for (const auto& [pid, n] : totals) {
    auto& s = out[pid];
    for (const auto& [f, h] : hits[pid]) {
      if (2 * h > n) s.insert(f);
    }
  }
  return out;
}

// Fraction of the profile's ground-truth components present in the verdict.
inline double score_attribution(const std::set<Finding>& verdict, int profile_id) {
  const auto truth = ground_truth(profile_id);
  if (truth.empty()) return 0.0;
  std::set<Finding> want(truth.begin(), truth.end());
  int hit = 0;
  for (const auto& f : want) hit += verdict.count(f) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(want.size());
}

inline std::map<int, double> score_attribution(const std::map<int, std::set<Finding>>& verdicts,
                                               const std::vector<int>& composite_ids) {
  std::map<int, double> out;
  for (int id : composite_ids) {
    auto it = verdicts.find(id);
    out[id] = it == verdicts.end() ? 0.0 : score_attribution(it->second, id);
  }
  return out;
}

struct ClusteringOptions {
  Metric metric = Metric::Soergel;
  Linkage linkage = Linkage::Average;
};

// ----------------------------------------------------------------------------
// centralized

struct CentralizedResult {
  ClusterAssignment assignment;
  double purity = 0.0;
  std::vector<int> run_ids, profile_ids;
  std::vector<RunVerdict> verdicts;  // ByTypeAndLocation only
};

// Clusters every row of fm (normalized over those rows) into k(granularity)
// groups on the active columns.
inline CentralizedResult centralized(const FeatureMatrix& fm, Granularity g, const ClusteringOptions& opt = {}) {
  const int k = cluster_count(g);
  if (static_cast<int>(fm.rows.size()) < k) throw ConfigError("centralized: fewer runs than clusters");
  auto norm = normalize(fm);
  CentralizedResult res;
  for (const auto& r : fm.rows) {
    res.run_ids.push_back(r.run_id);
    res.profile_ids.push_back(r.profile_id);
  }
  res.assignment = agglomerative(norm.dense(), k, opt.metric, opt.linkage);
  std::vector<int> labels;
  for (int pid : res.profile_ids) labels.push_back(class_of(pid, g));
  res.purity = purity(res.assignment, labels);
  if (g == Granularity::ByTypeAndLocation) {
    auto names = name_clusters(res.assignment.cluster, res.profile_ids);
    for (std::size_t i = 0; i < res.run_ids.size(); ++i) {
      RunVerdict v{res.run_ids[i], res.profile_ids[i], {}};
      auto it = names.find(res.assignment.cluster[i]);
      if (it != names.end()) v.findings.insert(it->second);
      res.verdicts.push_back(std::move(v));
    }
  }
  return res;
}

// ----------------------------------------------------------------------------
// distributed

struct DistributedOptions {
  ClusteringOptions clustering;
  double deviation_threshold = 4.0;  // step-1 scores are capped at 10x this
};

struct ViewResult {
  Domain view;
  std::vector<std::size_t> columns;     // active columns local to the view
  std::vector<double> score;            // step-1 score per input row
  std::vector<bool> affected;           // step-1 verdict per input row
  double step1_purity = 0.0;
  std::vector<std::size_t> step2_rows;  // input rows clustered in step 2
  ClusterAssignment step2;
  double step2_purity = 0.0;
  std::map<int, Finding> names;
};

struct DistributedResult {
  std::array<ViewResult, 2> views;  // RAN, CN
  std::vector<RunVerdict> verdicts;
  double combined_purity = 0.0;  // 9-class purity over singular profile runs
};

inline std::vector<std::size_t> view_columns(const FeatureMatrix& fm, Domain view) {
  const auto& cols = feature_columns();
  std::vector<std::size_t> out;
  for (auto c : fm.active_columns()) {
    if (view_of(cols[c].measurement.location) == view) out.push_back(c);
  }
  return out;
}

inline bool has_component_in(int profile_id, Domain view) {
  for (const auto& f : ground_truth(profile_id)) {
    if (f.domain == view) return true;
  }
  return false;
}

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Step 1 score: the largest robust deviation of any network-side local column
// from the baseline median, in units of the column's MAD-scale over all runs.
inline std::vector<double> step1_scores(const FeatureMatrix& norm, const std::vector<std::size_t>& columns,
                                        double cap) {
  const auto& cols = feature_columns();
  std::vector<double> score(norm.rows.size(), 0.0);
  for (auto c : columns) {
    if (cols[c].measurement.location == Location::UE) continue;  // end-to-end, not domain-local
    std::vector<double> all, base;
    for (const auto& r : norm.rows) {
      all.push_back(r.values[c]);
      if (r.profile_id == 0) base.push_back(r.values[c]);
    }
    const double centre = detail::median(base);
    const double mid = detail::median(all);
    std::vector<double> dev;
    for (double v : all) dev.push_back(std::abs(v - mid));
    // Discrete columns often have zero MAD; the mean absolute deviation
    // (scaled to match sigma under normality) takes over there.
    double scale = 1.4826 * detail::median(dev);
    if (scale <= 0.0) {
      double mad = 0.0;
      for (double d : dev) mad += d;
      scale = 1.2533 * mad / static_cast<double>(dev.size());
    }
    scale = std::max(scale, 1e-3);
    for (std::size_t i = 0; i < norm.rows.size(); ++i) {
      score[i] = std::max(score[i], std::min(cap, std::abs(norm.rows[i].values[c] - centre) / scale));
    }
  }
  return score;
}

inline DistributedResult distributed(const FeatureMatrix& fm, const DistributedOptions& opt = {}) {
  const auto base_rows = baseline_row_indices(fm);
  if (base_rows.empty()) throw ConfigError("distributed: baseline runs are required");
  if (fm.rows.size() < 2) throw ConfigError("distributed: needs at least two runs");
  const auto norm = normalize(fm);
  const std::size_t n = fm.rows.size();
  DistributedResult res;
  std::vector<std::vector<int>> cluster_of(2, std::vector<int>(n, -1));

  for (std::size_t vi = 0; vi < kViews.size(); ++vi) {
    auto& v = res.views[vi];
    v.view = kViews[vi];
    v.columns = view_columns(fm, v.view);
    v.score = step1_scores(norm, v.columns, 10.0 * opt.deviation_threshold);
    Points pts;
    for (double s : v.score) pts.push_back({s});
    auto split = agglomerative(pts, 2, Metric::Euclidean, opt.clustering.linkage);
    int base_votes[2] = {0, 0};
    for (auto r : base_rows) ++base_votes[split.cluster[r]];
    const int unaffected = base_votes[0] >= base_votes[1] ? 0 : 1;
    std::vector<int> truth;
    v.affected.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      v.affected[i] = split.cluster[i] != unaffected;
      truth.push_back(has_component_in(fm.rows[i].profile_id, v.view) ? 1 : 0);
      if (v.affected[i]) v.step2_rows.push_back(i);
    }
    v.step1_purity = purity(split, truth);

    if (v.step2_rows.empty()) continue;
    const FeatureMatrix local = restrict_to(fm, v.columns);
    FeatureMatrix sub;
    sub.active = local.active;
    for (auto r : v.step2_rows) sub.rows.push_back(local.rows[r]);
    const int k = std::min<int>(v.view == Domain::RAN ? 5 : 4, static_cast<int>(sub.rows.size()));
    if (sub.rows.size() >= 2) {
      v.step2 = agglomerative(normalize(sub).dense(), k, opt.clustering.metric, opt.clustering.linkage);
    } else {
      v.step2.k = 1;
      v.step2.cluster = {0};
    }
    std::vector<int> pids, types;
    for (const auto& r : sub.rows) {
      pids.push_back(r.profile_id);
      int t = -1;
      for (const auto& f : ground_truth(r.profile_id)) {
        if (f.domain == v.view) {
          t = static_cast<int>(f.type);
          break;
        }
      }
      types.push_back(t);
    }
    v.step2_purity = purity(v.step2, types);
    v.names = name_clusters(v.step2.cluster, pids, v.view);
    for (std::size_t j = 0; j < v.step2_rows.size(); ++j) cluster_of[vi][v.step2_rows[j]] = v.step2.cluster[j];
  }

  std::vector<int> combined, labels;
  std::map<std::pair<int, int>, int> tuple_ids;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = fm.rows[i];
    RunVerdict rv{row.run_id, row.profile_id, {}};
    for (std::size_t vi = 0; vi < 2; ++vi) {
      if (cluster_of[vi][i] < 0) continue;
      auto it = res.views[vi].names.find(cluster_of[vi][i]);
      if (it != res.views[vi].names.end()) rv.findings.insert(it->second);
    }
    res.verdicts.push_back(std::move(rv));
    if (row.profile_id == 0 || profile(row.profile_id).composite()) continue;
    auto key = std::make_pair(cluster_of[0][i], cluster_of[1][i]);
    combined.push_back(tuple_ids.try_emplace(key, static_cast<int>(tuple_ids.size())).first->second);
    labels.push_back(class_of(row.profile_id, Granularity::ByTypeAndLocation));
  }
  res.combined_purity = combined.empty() ? 0.0 : purity(combined, labels);
  return res;
}

// ----------------------------------------------------------------------------
// fuzzy composite analysis

struct FuzzyRun {
  int run_id;
  int profile_id;
  std::array<std::pair<Finding, double>, 2> top;  // two strongest memberships
};

struct FuzzyResult {
  ClusterAssignment assignment;
  std::map<int, Finding> names;
  std::vector<FuzzyRun> runs;
};

// m = 2 pushes memberships toward 1/k on the wide combined feature set;
// 1.8 keeps singular runs crisp while composite runs still split.
inline CMeansOptions composite_cmeans_options() {
  CMeansOptions o;
  o.m = 1.8;
  return o;
}

// c-means over all rows of fm, seeded with the centroids of a hard
// ByTypeAndLocation clustering of the singular runs.
inline FuzzyResult fuzzy_composite(const FeatureMatrix& fm, const CMeansOptions& base_opt = composite_cmeans_options(),
                                   const ClusteringOptions& copt = {}) {
  const auto norm = normalize(fm);
  const auto pts = norm.dense();
  std::vector<std::size_t> singular;
  for (std::size_t i = 0; i < fm.rows.size(); ++i) {
    const int pid = fm.rows[i].profile_id;
    if (pid != 0 && !profile(pid).composite()) singular.push_back(i);
  }
  const int k = cluster_count(Granularity::ByTypeAndLocation);
  if (static_cast<int>(singular.size()) < k) throw ConfigError("fuzzy_composite: too few singular runs");
  Points sp;
  std::vector<int> spid;
  for (auto i : singular) {
    sp.push_back(pts[i]);
    spid.push_back(fm.rows[i].profile_id);
  }
  auto hard = agglomerative(sp, k, copt.metric, copt.linkage);
  const auto dim = pts.front().size();
  Points centroids(k, std::vector<double>(dim, 0.0));
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    ++count[hard.cluster[i]];
    for (std::size_t j = 0; j < dim; ++j) centroids[hard.cluster[i]][j] += sp[i][j];
  }
  for (int c = 0; c < k; ++c) {
    for (auto& v : centroids[c]) v /= count[c];
  }
  FuzzyResult res;
  res.names = name_clusters(hard.cluster, spid);
  auto opt = base_opt;
  opt.initial_centroids = centroids;
  res.assignment = cmeans(pts, k, opt);
  for (std::size_t i = 0; i < fm.rows.size(); ++i) {
    const auto& u = res.assignment.memberships[i];
    std::vector<int> order(k);
    for (int c = 0; c < k; ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return u[a] > u[b]; });
    FuzzyRun fr{fm.rows[i].run_id, fm.rows[i].profile_id, {}};
    for (int t = 0; t < 2 && t < k; ++t) fr.top[t] = {res.names.at(order[t]), u[order[t]]};
    res.runs.push_back(fr);
  }
  return res;
}

}  // namespace slicebench

#pragma once

// Transfer/processing unit accounting for centralized and distributed
// identification.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicebench/error.hpp"
#include "slicebench/identify.hpp"
#include "slicebench/telemetry.hpp"

namespace slicebench {

enum class Approach { Centralized, Distributed };

inline constexpr std::array<Approach, 2> kAllApproaches = {Approach::Centralized, Approach::Distributed};

inline constexpr std::string_view to_string(Approach a) {
  return a == Approach::Centralized ? "centralized" : "distributed";
}

struct OverheadReport {
  Approach approach = Approach::Centralized;
  std::string feature_set;
  long transfer_units = 0;
  long processing_units = 0;
  long total = 0;
  std::optional<double> purity;
};

inline constexpr int default_steps(Approach a) { return a == Approach::Centralized ? 1 : 2; }

// Every measurement costs one transfer and one processing unit per clustering
// step. Centralized analysis sits at a single point; measurements from the
// other domain are shipped there and pay one more transfer. Distributed
// analysis runs at each domain's own point.
inline OverheadReport estimate(Approach approach, const std::vector<Measurement>& measurements,
                               const std::set<Domain>& analysis_points, int steps) {
  if (measurements.empty()) throw ConfigError("overhead: measurement list is empty");
  if (steps < 1) throw ConfigError("overhead: steps must be >= 1");
  if (analysis_points.empty()) throw ConfigError("overhead: no analysis point");
  if (approach == Approach::Centralized && analysis_points.size() != 1) {
    throw ConfigError("overhead: centralized analysis uses exactly one point");
  }
  OverheadReport r;
  r.approach = approach;
  for (const auto& m : measurements) {
    const Domain home = view_of(m.location);
    long transfer = 1;
    if (approach == Approach::Centralized) {
      if (!analysis_points.count(home)) ++transfer;
    } else if (!analysis_points.count(home)) {
      throw ConfigError("overhead: " + name_of(m) + " is not covered by any analysis point");
    }
    r.transfer_units += transfer;
    r.processing_units += steps;
  }
  r.total = r.transfer_units + r.processing_units;
  return r;
}

// Defaults: centralized point in the CN with one step; distributed points in
// both domains with two steps.
inline OverheadReport estimate(Approach approach, const std::vector<Measurement>& measurements) {
  const std::set<Domain> points =
      approach == Approach::Centralized ? std::set<Domain>{Domain::CN} : std::set<Domain>{Domain::RAN, Domain::CN};
  return estimate(approach, measurements, points, default_steps(approach));
}

struct Experiment {
  Approach approach;
  std::string feature_set;
  std::vector<Measurement> measurements;
  std::optional<double> purity;
};

struct TradeoffRow {
  OverheadReport report;
  // Total-unit reduction against the "combined" row of the same approach.
  std::optional<double> reduction_vs_combined;
};

inline std::vector<TradeoffRow> tradeoff_table(const std::vector<Experiment>& experiments) {
  std::vector<TradeoffRow> rows;
  for (const auto& e : experiments) {
    auto r = estimate(e.approach, e.measurements);
    r.feature_set = e.feature_set;
    r.purity = e.purity;
    rows.push_back({r, std::nullopt});
  }
  for (auto& row : rows) {
    for (const auto& other : rows) {
      if (other.report.approach == row.report.approach && other.report.feature_set == "combined" &&
          row.report.feature_set != "combined" && other.report.total > 0) {
        row.reduction_vs_combined = 1.0 - static_cast<double>(row.report.total) / static_cast<double>(other.report.total);
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TradeoffRow& a, const TradeoffRow& b) { return a.report.total < b.report.total; });
  return rows;
}

inline nlohmann::ordered_json to_json(const TradeoffRow& row) {
  nlohmann::ordered_json j;
  j["approach"] = to_string(row.report.approach);
  j["feature_set"] = row.report.feature_set;
  j["transfer_units"] = row.report.transfer_units;
  j["processing_units"] = row.report.processing_units;
  j["total"] = row.report.total;
  j["purity"] = row.report.purity ? nlohmann::ordered_json(*row.report.purity) : nlohmann::ordered_json();
  j["reduction_vs_combined"] =
      row.reduction_vs_combined ? nlohmann::ordered_json(*row.reduction_vs_combined) : nlohmann::ordered_json();
  return j;
}

inline std::string tradeoff_to_csv(const std::vector<TradeoffRow>& rows) {
  std::string out = "approach,feature_set,transfer_units,processing_units,total,purity,reduction_vs_combined\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.report.approach)) + "," + r.report.feature_set + "," +
           std::to_string(r.report.transfer_units) + "," + std::to_string(r.report.processing_units) + "," +
           std::to_string(r.report.total) + "," + (r.report.purity ? format_number(*r.report.purity) : "") + "," +
           (r.reduction_vs_combined ? format_number(*r.reduction_vs_combined) : "") + "\n";
  }
  return out;
}

}  // namespace slicebench

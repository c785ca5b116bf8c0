#pragma once

// Six distribution features per measurement, baseline-deviation screening and
// min-max normalization.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicebench/error.hpp"
#include "slicebench/io.hpp"
#include "slicebench/telemetry.hpp"

namespace slicebench {

enum class Statistic { Mean, Variance, Skewness, Kurtosis, Min, Max };

inline constexpr std::array<Statistic, 6> kAllStatistics = {Statistic::Mean,     Statistic::Variance,
                                                            Statistic::Skewness, Statistic::Kurtosis,
                                                            Statistic::Min,      Statistic::Max};
inline constexpr std::size_t kStatsPerMeasurement = kAllStatistics.size();

inline constexpr std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::Mean: return "mean";
    case Statistic::Variance: return "variance";
    case Statistic::Skewness: return "skewness";
    case Statistic::Kurtosis: return "kurtosis";
    case Statistic::Min: return "min";
    case Statistic::Max: return "max";
  }
  return "?";
}

struct Column {
  Measurement measurement;
  Statistic statistic;
};

inline std::string column_name(const Column& c) {
  return name_of(c.measurement) + "." + std::string(to_string(c.statistic));
}

inline const std::vector<Column>& feature_columns() {
  static const std::vector<Column> cols = [] {
    std::vector<Column> out;
    for (const auto& m : catalog()) {
      for (auto s : kAllStatistics) out.push_back({m, s});
    }
    return out;
  }();
  return cols;
}

inline std::size_t column_index(const Column& c) {
  return *catalog_index(c.measurement) * kStatsPerMeasurement + static_cast<std::size_t>(c.statistic);
}

inline std::size_t parse_column(std::string_view name) {
  auto dot = name.rfind('.');
  if (dot == std::string_view::npos) throw ConfigError("malformed column name '" + std::string(name) + "'");
  auto m = parse_measurement(name.substr(0, dot));
  auto s = parse_enum(name.substr(dot + 1), kAllStatistics, "statistic");
  return column_index({m, s});
}

// Population moments; a constant series has skewness and excess kurtosis 0.
inline std::array<double, 6> moments(const std::vector<double>& x) {
  if (x.empty()) throw ConfigError("cannot extract features from an empty series");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  // Series whose spread is pure rounding noise relative to the mean count as constant.
  const bool flat = m2 <= 1e-24 * std::max(1.0, mean * mean);
  const double skew = flat ? 0.0 : m3 / std::pow(m2, 1.5);
  const double kurt = flat ? 0.0 : m4 / (m2 * m2) - 3.0;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return {mean, flat ? 0.0 : m2, skew, kurt, *lo, *hi};
}

struct FeatureVector {
  int run_id = 0;
  int profile_id = 0;
  std::vector<double> values;  // feature_columns() order
};

inline FeatureVector extract(const RunRecord& run) {
  FeatureVector fv{run.run_id, run.profile_id, {}};
  fv.values.reserve(run.series.size() * kStatsPerMeasurement);
  for (const auto& s : run.series) {
    auto m = moments(s.samples);
    fv.values.insert(fv.values.end(), m.begin(), m.end());
  }
  return fv;
}

struct FeatureMatrix {
  std::vector<FeatureVector> rows;
  std::vector<bool> active;  // per column of feature_columns()
  // Per-column (min, max) applied by normalize(); empty when raw.
  std::vector<std::pair<double, double>> normalization;

  std::size_t cols() const { return active.size(); }
  std::vector<std::size_t> active_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < active.size(); ++c) {
      if (active[c]) out.push_back(c);
    }
    return out;
  }
  std::set<Measurement> active_measurements() const {
    std::set<Measurement> out;
    const auto& cols = feature_columns();
    for (auto c : active_columns()) out.insert(cols[c].measurement);
    return out;
  }
  std::vector<int> labels() const {
    std::vector<int> out;
    for (const auto& r : rows) out.push_back(r.profile_id);
    return out;
  }
  // Row-major dense copy of the active columns.
  std::vector<std::vector<double>> dense() const {
    auto cols = active_columns();
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
      std::vector<double> v;
      v.reserve(cols.size());
      for (auto c : cols) v.push_back(r.values[c]);
      out.push_back(std::move(v));
    }
    return out;
  }
};

inline FeatureMatrix build_matrix(const Dataset& ds) {
  FeatureMatrix fm;
  fm.active.assign(feature_columns().size(), true);
  for (const auto& r : ds.runs) fm.rows.push_back(extract(r));
  return fm;
}

inline FeatureMatrix select_rows(const FeatureMatrix& fm, const std::function<bool(const FeatureVector&)>& keep) {
  FeatureMatrix out;
  out.active = fm.active;
  out.normalization = fm.normalization;
  for (const auto& r : fm.rows) {
    if (keep(r)) out.rows.push_back(r);
  }
  return out;
}

// Keeps a measurement (all six columns) when any of its features leaves
// baseline mean +- threshold * baseline stddev in some non-baseline row.
inline FeatureMatrix reduce(const FeatureMatrix& fm, const std::vector<std::size_t>& baseline_rows,
                            double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("deviation threshold must be positive");
  if (baseline_rows.empty()) throw ConfigError("reduce needs baseline rows");
  std::set<std::size_t> base(baseline_rows.begin(), baseline_rows.end());
  for (auto r : base) {
    if (r >= fm.rows.size()) throw ConfigError("baseline row index out of range");
  }
  FeatureMatrix out = fm;
  const double nb = static_cast<double>(base.size());
  for (std::size_t m = 0; m < catalog().size(); ++m) {
    const std::size_t c0 = m * kStatsPerMeasurement;
    bool any_active = false, deviates = false;
    for (std::size_t c = c0; c < c0 + kStatsPerMeasurement; ++c) {
      if (!fm.active[c]) continue;
      any_active = true;
      double mean = 0.0;
      for (auto r : base) mean += fm.rows[r].values[c];
      mean /= nb;
      double var = 0.0;
      for (auto r : base) var += (fm.rows[r].values[c] - mean) * (fm.rows[r].values[c] - mean);
      // The floor absorbs summation error on constant baselines.
      const double floor = 1e-12 * std::max(1.0, std::abs(mean));
      const double band = std::isinf(threshold) ? threshold : std::max(threshold * std::sqrt(var / nb), floor);
      for (std::size_t r = 0; r < fm.rows.size() && !deviates; ++r) {
        if (base.count(r)) continue;
        deviates = std::abs(fm.rows[r].values[c] - mean) > band;
      }
      if (deviates) break;
    }
    if (any_active && !deviates) {
      for (std::size_t c = c0; c < c0 + kStatsPerMeasurement; ++c) out.active[c] = false;
    }
  }
  return out;
}

inline std::vector<std::size_t> baseline_row_indices(const FeatureMatrix& fm) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < fm.rows.size(); ++r) {
    if (fm.rows[r].profile_id == 0) out.push_back(r);
  }
  return out;
}

// Per-column min-max over the rows present; constant columns map to 0.
inline FeatureMatrix normalize(const FeatureMatrix& fm) {
  if (fm.rows.size() < 2) throw ConfigError("normalization needs at least two rows");
  FeatureMatrix out = fm;
  out.normalization.assign(fm.cols(), {0.0, 0.0});
  for (std::size_t c = 0; c < fm.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : fm.rows) {
      lo = std::min(lo, r.values[c]);
      hi = std::max(hi, r.values[c]);
    }
    out.normalization[c] = {lo, hi};
    const double span = hi - lo;
    for (auto& r : out.rows) r.values[c] = span > 0.0 ? std::clamp((r.values[c] - lo) / span, 0.0, 1.0) : 0.0;
  }
  return out;
}

// ----------------------------------------------------------------------------
// feature sets

enum class FeatureSet { Service, NF, Infra, Combined, All };

inline constexpr std::array<FeatureSet, 5> kAllFeatureSets = {FeatureSet::Service, FeatureSet::NF, FeatureSet::Infra,
                                                              FeatureSet::Combined, FeatureSet::All};

inline constexpr std::string_view to_string(FeatureSet f) {
  switch (f) {
    case FeatureSet::Service: return "service";
    case FeatureSet::NF: return "nf";
    case FeatureSet::Infra: return "infra";
    case FeatureSet::Combined: return "combined";
    case FeatureSet::All: return "all";
  }
  return "?";
}

inline bool in_feature_set(FeatureSet f, const Measurement& m) {
  const auto layer = layer_of(m);
  switch (f) {
    case FeatureSet::Service: return layer == Layer::Service;
    case FeatureSet::NF: return layer == Layer::NetworkFunction;
    case FeatureSet::Infra: return layer == Layer::Infrastructure;
    case FeatureSet::Combined: return layer != Layer::Service;
    case FeatureSet::All: return true;
  }
  return false;
}

inline FeatureMatrix mask_columns(const FeatureMatrix& fm, const std::function<bool(std::size_t)>& keep) {
  FeatureMatrix out = fm;
  for (std::size_t c = 0; c < out.cols(); ++c) out.active[c] = out.active[c] && keep(c);
  return out;
}

inline FeatureMatrix restrict_to(const FeatureMatrix& fm, FeatureSet f) {
  const auto& cols = feature_columns();
  return mask_columns(fm, [&](std::size_t c) { return in_feature_set(f, cols[c].measurement); });
}

inline FeatureMatrix restrict_to(const FeatureMatrix& fm, const std::vector<std::size_t>& columns) {
  std::set<std::size_t> keep(columns.begin(), columns.end());
  return mask_columns(fm, [&](std::size_t c) { return keep.count(c) > 0; });
}

// ----------------------------------------------------------------------------
// serialization

inline std::string matrix_to_csv(const FeatureMatrix& fm) {
  const auto& cols = feature_columns();
  std::string out = "run_id,profile_id";
  for (const auto& c : cols) out += "," + column_name(c);
  out += '\n';
  for (const auto& r : fm.rows) {
    out += std::to_string(r.run_id) + "," + std::to_string(r.profile_id);
    for (double v : r.values) out += "," + format_number(v);
    out += '\n';
  }
  return out;
}

inline nlohmann::json matrix_sidecar(const FeatureMatrix& fm) {
  const auto& cols = feature_columns();
  nlohmann::json active = nlohmann::json::array();
  for (auto c : fm.active_columns()) active.push_back(column_name(cols[c]));
  nlohmann::json norm = nlohmann::json::object();
  if (!fm.normalization.empty()) {
    for (std::size_t c = 0; c < fm.cols(); ++c) {
      norm[column_name(cols[c])] = {fm.normalization[c].first, fm.normalization[c].second};
    }
  }
  return {{"columns", cols.size()},
          {"active_columns", active},
          {"active_measurements", fm.active_measurements().size()},
          {"normalization", norm}};
}

inline void write_matrix(const FeatureMatrix& fm, const fs::path& csv_path) {
  write_text(csv_path, matrix_to_csv(fm));
  auto side = csv_path;
  side.replace_extension(".json");
  write_json(side, matrix_sidecar(fm));
}

inline FeatureMatrix read_matrix(const fs::path& csv_path) {
  auto text = read_text(csv_path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty feature CSV " + csv_path.string());
  auto header = split_csv_line(line);
  const auto& cols = feature_columns();
  if (header.size() != cols.size() + 2 || header[0] != "run_id" || header[1] != "profile_id") {
    throw IoError("unexpected feature CSV header in " + csv_path.string());
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (header[c + 2] != column_name(cols[c])) throw IoError("column out of canonical order: " + header[c + 2]);
  }
  FeatureMatrix fm;
  fm.active.assign(cols.size(), true);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw IoError("ragged row in " + csv_path.string());
    FeatureVector fv{static_cast<int>(parse_number(cells[0])), static_cast<int>(parse_number(cells[1])), {}};
    for (std::size_t c = 2; c < cells.size(); ++c) fv.values.push_back(parse_number(cells[c]));
    fm.rows.push_back(std::move(fv));
  }
  auto side = csv_path;
  side.replace_extension(".json");
  if (fs::exists(side)) {
    auto j = read_json(side);
    try {
      fm.active.assign(cols.size(), false);
      for (const auto& name : j.at("active_columns")) fm.active[parse_column(name.get<std::string>())] = true;
      const auto& norm = j.at("normalization");
      if (!norm.empty()) {
        fm.normalization.assign(cols.size(), {0.0, 0.0});
        for (const auto& [name, v] : norm.items()) {
          fm.normalization[parse_column(name)] = {v.at(0).get<double>(), v.at(1).get<double>()};
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed feature sidecar " + side.string() + ": " + e.what());
    } catch (const ConfigError& e) {
      throw IoError(e.what());
    }
  }
  return fm;
}

}  // namespace slicebench

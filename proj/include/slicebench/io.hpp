#pragma once

// Dataset serialization: one CSV per run plus a JSON manifest. UTF-8, LF,
// decimal point, six significant digits.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "slicebench/error.hpp"
#include "slicebench/telemetry.hpp"

namespace slicebench {

namespace fs = std::filesystem;

// Locale-independent %.6g.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Rounds to the precision the CSV carries, so in-memory data equals what a
// reader gets back.
inline double round_reported(double v) {
  auto s = format_number(v);
  return std::strtod(s.c_str(), nullptr);
}

inline double parse_number(std::string_view s) {
  std::string tmp(s);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || errno == ERANGE) {
    throw IoError("malformed number '" + tmp + "'");
  }
  return v;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json(const fs::path& path) {
  auto text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline std::string run_to_csv(const RunRecord& run) {
  std::string out = "timestamp_s";
  for (const auto& s : run.series) {
    out += ',';
    out += name_of(s.measurement);
  }
  out += '\n';
  const auto n = run.sample_count();
  for (std::size_t t = 0; t < n; ++t) {
    out += format_number(static_cast<double>(t) * run.sample_period_s);
    for (const auto& s : run.series) {
      out += ',';
      out += format_number(s.samples[t]);
    }
    out += '\n';
  }
  return out;
}

inline RunRecord run_from_csv(std::string_view text, int run_id, int profile_id,
                              double sample_period_s) {
  RunRecord run;
  run.run_id = run_id;
  run.profile_id = profile_id;
  run.sample_period_s = sample_period_s;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty run CSV for run " + std::to_string(run_id));
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "timestamp_s") throw IoError("run CSV missing timestamp_s column");
  for (std::size_t i = 1; i < header.size(); ++i) {
    try {
      run.series.push_back({parse_measurement(header[i]), {}});
    } catch (const ConfigError& e) {
      throw IoError(e.what());
    }
  }
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw IoError("ragged row in run " + std::to_string(run_id));
    }
    for (std::size_t i = 1; i < cells.size(); ++i) run.series[i - 1].samples.push_back(parse_number(cells[i]));
    ++rows;
  }
  run.duration_s = static_cast<double>(rows) * sample_period_s;
  try {
    validate_run(run);
  } catch (const ConfigError& e) {
    throw IoError(e.what());
  }
  return run;
}

inline std::string run_file_name(int run_id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%05d.csv", run_id);
  return buf;
}

inline nlohmann::json manifest_json(const Dataset& ds) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : ds.runs) {
    runs.push_back({{"run_id", r.run_id},
                    {"profile_id", r.profile_id},
                    {"file", run_file_name(r.run_id)},
                    {"duration_s", r.duration_s}});
  }
  nlohmann::json counts = nlohmann::json::object();
  for (auto [pid, n] : ds.manifest()) counts[std::to_string(pid)] = n;
  return {{"seed", ds.rng_seed},
          {"sample_period_s", ds.sample_period_s},
          {"profile_counts", counts},
          {"runs", runs}};
}

inline void write_dataset(const Dataset& ds, const fs::path& dir) {
  for (const auto& r : ds.runs) write_text(dir / run_file_name(r.run_id), run_to_csv(r));
  write_json(dir / "manifest.json", manifest_json(ds));
}

inline Dataset read_dataset(const fs::path& dir) {
  auto m = read_json(dir / "manifest.json");
  Dataset ds;
  try {
    ds.rng_seed = m.at("seed").get<std::uint64_t>();
    ds.sample_period_s = m.at("sample_period_s").get<double>();
    for (const auto& r : m.at("runs")) {
      auto text = read_text(dir / r.at("file").get<std::string>());
      ds.runs.push_back(run_from_csv(text, r.at("run_id").get<int>(), r.at("profile_id").get<int>(),
                                     ds.sample_period_s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  return ds;
}

}  // namespace slicebench

#pragma once

// Command-line front end. Every subcommand reads and writes artifacts in one
// output directory; see README for the layout.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slicebench/io.hpp"
#include "slicebench/pipeline.hpp"

namespace slicebench {

namespace fs = std::filesystem;

struct CliOptions {
  std::string out = "out";
  std::string dataset;     // run CSV directory; simulated in memory when empty
  std::string config;      // simulator config JSON
  std::string experiment;  // JSON file whose keys mirror these flags
  std::optional<std::uint64_t> seed;
  std::string profiles;  // "1-17", "1,3,18-20"; per-command default when empty
  std::optional<int> runs;           // config file value, else 5
  std::optional<int> baseline_runs;  // config file value, else 5
  std::optional<double> possible_probability;
  bool composites = true;
  double threshold = 4.0;
  std::string features = "combined";
  std::string k = "by-profile";
  std::string algorithm = "agglomerative";
  std::string metric = "soergel";
  std::string linkage = "average";
  double eps = 0.3;
  int min_pts = 3;
  int n = 19;
  std::string approach = "both";
  bool embed = false;
};

// Artifacts that summarize() requires, in reporting order.
inline const std::vector<std::string>& summary_artifacts() {
  static const std::vector<std::string> names = {"purity.json", "attribution.json", "overhead.json"};
  return names;
}

// ----------------------------------------------------------------------------
// parsing helpers

inline std::vector<int> parse_profiles(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad profile list '" + spec + "'");
    }
  };
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    auto dash = part.find('-', 1);
    int lo = num(part.substr(0, dash));
    int hi = dash == std::string::npos ? lo : num(part.substr(dash + 1));
    if (lo > hi) throw ConfigError("bad profile range '" + part + "'");
    for (int p = lo; p <= hi; ++p) {
      if (p < 1 || p > kAllProfiles) throw ConfigError("profile " + std::to_string(p) + " out of range 1-20");
      out.push_back(p);
    }
  }
  if (out.empty()) throw ConfigError("empty profile list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename E, std::size_t N>
E parse_choice(std::string s, const std::array<E, N>& all, const char* what) {
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "by-type-and-location") s = "by-type-location";
  for (auto e : all) {
    if (to_string(e) == s) return e;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

struct FeatureChoice {
  std::optional<FeatureSet> layer;  // nullopt: MARS-selected columns
  int n = 19;
  std::string name;
};

// service | nf | infra | combined | selected | selected:N
inline FeatureChoice parse_feature_choice(const std::string& s, int default_n) {
  if (s == "selected") return {std::nullopt, default_n, "selected"};
  if (s.rfind("selected:", 0) == 0 || s.rfind("selected(", 0) == 0) {
    auto digits = s.substr(9);
    if (!digits.empty() && digits.back() == ')') digits.pop_back();
    try {
      std::size_t used = 0;
      int n = std::stoi(digits, &used);
      if (used != digits.size() || n <= 0) throw std::invalid_argument(s);
      return {std::nullopt, n, "selected"};
    } catch (const std::exception&) {
      throw ConfigError("bad feature set '" + s + "'");
    }
  }
  auto f = parse_choice(s, kAllFeatureSets, "feature set");
  if (f == FeatureSet::All) throw ConfigError("feature set 'all' is not a layer set");
  return {f, default_n, std::string(to_string(f))};
}

// ----------------------------------------------------------------------------
// inputs

inline std::uint64_t resolve_seed(const CliOptions& o, const SimConfig& cfg, bool config_has_seed) {
  if (o.seed) return *o.seed;
  if (config_has_seed) return cfg.seed;
  if (const char* env = std::getenv("SLICEBENCH_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string("SLICEBENCH_SEED is not an unsigned integer: ") + env);
    }
  }
  return 42;
}

inline SimConfig sim_config(const CliOptions& o, const std::string& default_profiles) {
  SimConfig cfg = default_sim_config();
  bool has_seed = false;
  bool has_profiles = false;
  if (!o.config.empty()) {
    auto j = read_json(o.config);
    has_seed = j.contains("seed");
    has_profiles = j.contains("profiles");
    cfg = sim_config_from_json(j, cfg);
  }
  cfg.seed = resolve_seed(o, cfg, has_seed);
  if (!o.profiles.empty() || !has_profiles) cfg.profiles = parse_profiles(o.profiles.empty() ? default_profiles : o.profiles);
  if (!o.composites) std::erase_if(cfg.profiles, is_composite);
  if (o.runs) cfg.runs_per_profile = *o.runs;
  if (o.baseline_runs) cfg.baseline_runs = *o.baseline_runs;
  if (o.possible_probability) cfg.possible_probability = *o.possible_probability;
  return cfg;
}

inline Dataset load_dataset(const CliOptions& o, const std::string& default_profiles) {
  if (!o.dataset.empty()) return read_dataset(o.dataset);
  const fs::path cached = fs::path(o.out) / "dataset";
  if (fs::exists(cached / "manifest.json")) return read_dataset(cached);
  return generate_dataset(sim_config(o, default_profiles));
}

// Screened matrix from <out>/features.csv when present, else from the dataset.
inline FeatureMatrix load_screened(const CliOptions& o, const std::string& default_profiles) {
  const fs::path cached = fs::path(o.out) / "features.csv";
  FeatureMatrix fm = fs::exists(cached) ? read_matrix(cached) : screened_matrix(load_dataset(o, default_profiles), o.threshold);
  if (!o.composites) fm = select_rows(fm, [](const FeatureVector& r) { return !is_composite(r.profile_id); });
  return fm;
}

inline PipelineOptions pipeline_options(const CliOptions& o) {
  PipelineOptions p;
  p.deviation_threshold = o.threshold;
  p.clustering.metric = parse_choice(o.metric, kAllMetrics, "metric");
  p.clustering.linkage = parse_choice(o.linkage, kAllLinkages, "linkage");
  p.selected_n = o.n;
  return p;
}

inline FeatureMatrix feature_view(const FeatureMatrix& screened, const FeatureChoice& fc, const PipelineOptions& popt) {
  if (fc.layer) return restrict_to(screened, *fc.layer);
  auto p = popt;
  p.selected_n = fc.n;
  return restrict_to(screened, ranked_columns(select_features(screened, p)));
}

// ----------------------------------------------------------------------------
// summary

inline ojson load_ordered(const fs::path& p) {
  auto text = read_text(p);
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid JSON in " + p.string() + ": " + e.what());
  }
}

// Flat (approach, granularity, feature set) purity rows. Distributed purity
// is over type-and-location classes.
inline ojson purity_rows(const ojson& purity) {
  ojson rows = ojson::array();
  if (purity.contains("centralized")) {
    for (const auto& [g, sets] : purity.at("centralized").items()) {
      for (const auto& [set, v] : sets.items()) {
        rows.push_back({{"approach", "centralized"}, {"granularity", g}, {"feature_set", set}, {"purity", v}});
      }
    }
  }
  if (purity.contains("distributed")) {
    for (const auto& [set, d] : purity.at("distributed").items()) {
      if (!d.contains("combined")) continue;
      rows.push_back({{"approach", "distributed"},
                      {"granularity", to_string(Granularity::ByTypeAndLocation)},
                      {"feature_set", set},
                      {"purity", d.at("combined")}});
    }
  }
  return rows;
}

// Aggregates the experiment artifacts in dir. Strict mode throws IoError
// naming every missing artifact; partial mode lists them under "missing".
inline ojson summarize(const fs::path& dir, bool partial = false) {
  std::vector<std::string> missing;
  for (const auto& name : summary_artifacts()) {
    if (!fs::exists(dir / name)) missing.push_back(name);
  }
  if (!missing.empty() && !partial) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw IoError("missing artifacts in " + dir.string() + ": " + list);
  }
  ojson s;
  if (fs::exists(dir / "feature_counts.json")) s["features"] = load_ordered(dir / "feature_counts.json");
  if (fs::exists(dir / "purity.json")) {
    auto p = load_ordered(dir / "purity.json");
    s["purity_table"] = purity_rows(p);
    s["purity"] = p;
  }
  if (fs::exists(dir / "selected.json")) s["selected_features"] = load_ordered(dir / "selected.json");
  if (fs::exists(dir / "attribution.json")) s["attribution"] = load_ordered(dir / "attribution.json");
  if (fs::exists(dir / "fuzzy.json")) s["fuzzy"] = load_ordered(dir / "fuzzy.json");
  if (fs::exists(dir / "overhead.json")) s["overhead"] = load_ordered(dir / "overhead.json");
  if (partial) s["missing"] = missing;
  return s;
}

inline void write_ojson(const fs::path& p, const ojson& j) { write_text(p, j.dump(2) + "\n"); }

inline void refresh_summary(const fs::path& dir) { write_ojson(dir / "summary.json", summarize(dir, true)); }

// Merges value at purity.json[path...], keeping existing entries.
inline void merge_purity(const fs::path& dir, const std::vector<std::string>& path, const ojson& value) {
  const auto file = dir / "purity.json";
  ojson p = fs::exists(file) ? load_ordered(file) : ojson::object();
  ojson* node = &p;
  for (const auto& key : path) node = &(*node)[key];
  *node = value;
  write_ojson(file, p);
}

// ----------------------------------------------------------------------------
// subcommands

inline void cmd_simulate(const CliOptions& o) {
  auto cfg = sim_config(o, "1-17");
  auto ds = generate_dataset(cfg);
  const fs::path dir = o.dataset.empty() ? fs::path(o.out) / "dataset" : fs::path(o.dataset);
  write_dataset(ds, dir);
  write_json(dir / "config.json", to_json(cfg));
  std::cout << "wrote " << ds.runs.size() << " runs to " << dir.string() << "\n";
}

inline void cmd_features(const CliOptions& o) {
  auto fm = screened_matrix(load_dataset(o, "1-17"), o.threshold);
  const fs::path out(o.out);
  write_matrix(fm, out / "features.csv");
  write_ojson(out / "feature_counts.json", features_json(fm));
  std::cout << fm.active_columns().size() << " of " << fm.cols() << " columns retained ("
            << fm.active_measurements().size() << " measurements)\n";
}

inline ClusterAssignment run_algorithm(const CliOptions& o, const Points& pts, int k, const ClusteringOptions& copt,
                                       std::uint64_t seed) {
  if (o.algorithm == "agglomerative") return agglomerative(pts, k, copt.metric, copt.linkage);
  if (o.algorithm == "kmeans") return kmeans(pts, k, seed);
  if (o.algorithm == "dbscan") return dbscan(pts, o.eps, o.min_pts, copt.metric);
  if (o.algorithm == "cmeans") {
    CMeansOptions c;
    c.seed = seed;
    return cmeans(pts, k, c);
  }
  throw ConfigError("unknown algorithm '" + o.algorithm + "'");
}

inline void cmd_cluster(const CliOptions& o) {
  const auto popt = pipeline_options(o);
  const auto fc = parse_feature_choice(o.features, o.n);
  auto rows = select_rows(load_screened(o, "1-17"), [](const FeatureVector& r) { return r.profile_id != 0; });
  auto fm = normalize(feature_view(rows, fc, popt));

  std::optional<Granularity> g;
  int k = 0;
  if (!o.k.empty() && std::all_of(o.k.begin(), o.k.end(), ::isdigit)) {
    k = std::stoi(o.k);
  } else {
    g = parse_choice(o.k, kAllGranularities, "granularity");
    k = cluster_count(*g);
  }
  const auto label_g = g.value_or(Granularity::ByProfile);
  // Composite runs form one extra class each.
  if (g && has_composites(fm)) k += static_cast<int>(kCompositeIds.size());
  if (k < 1 || k > static_cast<int>(fm.rows.size())) throw ConfigError("k must be in 1..runs");

  auto a = run_algorithm(o, fm.dense(), k, popt.clustering, sim_config(o, "1-17").seed);
  std::vector<int> run_ids, pids, labels;
  for (const auto& r : fm.rows) {
    run_ids.push_back(r.run_id);
    pids.push_back(r.profile_id);
    labels.push_back(class_of(r.profile_id, label_g));
  }
  const double p = purity(a, labels);
  const fs::path out(o.out);
  const std::string gname = g ? std::string(to_string(*g)) : "k" + o.k;
  write_text(out / ("assignment_" + fc.name + "_" + gname + ".csv"), assignment_to_csv(a, run_ids, pids));
  if (o.algorithm == "agglomerative") {
    merge_purity(out, {"centralized", gname, fc.name}, p);
  } else {
    merge_purity(out, {"algorithms", o.algorithm, gname, fc.name}, p);
  }
  refresh_summary(out);
  std::cout << "purity " << format_number(p) << " (" << fc.name << ", " << gname << ", k=" << k << ")\n";
}

inline void cmd_select(const CliOptions& o) {
  auto popt = pipeline_options(o);
  const auto screened = load_screened(o, "1-17");
  const auto ranking = select_features(screened, popt);
  const fs::path out(o.out);
  write_text(out / "ranking.csv", ranking_to_csv(ranking));
  write_ojson(out / "selected.json", selected_json(ranking));
  std::set<Measurement> ms;
  for (auto c : ranked_columns(ranking)) ms.insert(feature_columns()[c].measurement);
  std::cout << ranking.size() << " columns selected over " << ms.size() << " measurements\n";
}

inline void cmd_identify(const CliOptions& o) {
  const auto popt = pipeline_options(o);
  const auto fc = parse_feature_choice(o.features, o.n);
  const auto screened = load_screened(o, "1-20");
  const auto view = feature_view(screened, fc, popt);
  const fs::path out(o.out);
  const bool cen = o.approach == "both" || o.approach == "centralized";
  const bool dist = o.approach == "both" || o.approach == "distributed";
  if (!cen && !dist) throw ConfigError("unknown approach '" + o.approach + "'");
  if (cen) {
    for (auto g : kAllGranularities) {
      auto res = centralized(singular_rows(view), g, popt.clustering);
      merge_purity(out, {"centralized", std::string(to_string(g)), fc.name}, res.purity);
    }
  }
  if (dist) {
    auto rows = select_rows(view, [](const FeatureVector& r) { return r.profile_id == 0 || is_singular(r.profile_id); });
    auto res = distributed(rows, DistributedOptions{popt.clustering, popt.deviation_threshold});
    ojson d;
    for (const auto& vr : res.views) {
      d[std::string(to_string(vr.view))] = {
          {"step1", vr.step1_purity}, {"step2", vr.step2_purity}, {"affected_runs", vr.step2_rows.size()}};
    }
    d["combined"] = res.combined_purity;
    merge_purity(out, {"distributed", fc.name}, d);
  }
  write_ojson(out / "attribution.json", attribution_table(screened, popt));
  if (has_composites(screened)) write_ojson(out / "fuzzy.json", fuzzy_table(screened, popt));
  refresh_summary(out);
  std::cout << "identification written to " << out.string() << "\n";
}

inline void cmd_overhead(const CliOptions& o) {
  const auto popt = pipeline_options(o);
  const auto screened = load_screened(o, "1-17");
  const auto views = feature_set_views(screened, select_features(screened, popt));
  const fs::path out(o.out);
  // Purity from earlier identification runs, when available.
  std::map<std::string, double> by_loc, dist;
  if (fs::exists(out / "purity.json")) {
    auto p = load_ordered(out / "purity.json");
    const auto loc = std::string(to_string(Granularity::ByTypeAndLocation));
    for (const auto& v : views) {
      if (p.contains("centralized") && p["centralized"].contains(loc) && p["centralized"][loc].contains(v.name)) {
        by_loc[v.name] = p["centralized"][loc][v.name].get<double>();
      }
      if (p.contains("distributed") && p["distributed"].contains(v.name)) {
        dist[v.name] = p["distributed"][v.name]["combined"].get<double>();
      }
    }
  }
  auto rows = overhead_rows(views, by_loc, dist);
  write_ojson(out / "overhead.json", overhead_json(rows));
  write_text(out / "overhead.csv", tradeoff_to_csv(rows));
  refresh_summary(out);
  std::cout << "overhead table written to " << out.string() << "\n";
}

inline void write_embedding(const CliOptions& o, const FeatureMatrix& screened) {
  const auto popt = pipeline_options(o);
  const auto fc = parse_feature_choice(o.features, o.n);
  auto rows = select_rows(screened, [](const FeatureVector& r) { return r.profile_id != 0; });
  auto fm = normalize(feature_view(rows, fc, popt));
  auto d = distance_matrix(fm.dense(), popt.clustering.metric);
  std::vector<int> run_ids, pids;
  for (const auto& r : fm.rows) {
    run_ids.push_back(r.run_id);
    pids.push_back(r.profile_id);
  }
  const fs::path out(o.out);
  write_text(out / "distances.csv", distance_matrix_to_csv(d, run_ids));
  write_text(out / "embedding.csv", embedding_to_csv(embed2d(d), run_ids, pids));
}

inline void cmd_report(const CliOptions& o) {
  const fs::path out(o.out);
  if (o.embed) {
    write_embedding(o, load_screened(o, "1-17"));
    std::cout << "embedding written to " << (out / "embedding.csv").string() << "\n";
    bool complete = true;
    for (const auto& name : summary_artifacts()) complete = complete && fs::exists(out / name);
    if (!complete) return;
  }
  write_ojson(out / "summary.json", summarize(out));
  std::cout << "summary written to " << (out / "summary.json").string() << "\n";
}

// Full reproduction into one directory.
inline void cmd_all(const CliOptions& o) {
  const fs::path out(o.out);
  auto cfg = sim_config(o, "1-20");
  Dataset ds;
  if (!o.dataset.empty()) {
    ds = read_dataset(o.dataset);
  } else {
    ds = generate_dataset(cfg);
    write_dataset(ds, out / "dataset");
    write_json(out / "dataset" / "config.json", to_json(cfg));
  }
  const auto popt = pipeline_options(o);
  auto screened = screened_matrix(ds, popt.deviation_threshold);
  if (!o.composites) screened = select_rows(screened, [](const FeatureVector& r) { return !is_composite(r.profile_id); });
  write_matrix(screened, out / "features.csv");
  write_ojson(out / "feature_counts.json", features_json(screened));

  const auto ranking = select_features(screened, popt);
  write_text(out / "ranking.csv", ranking_to_csv(ranking));
  write_ojson(out / "selected.json", selected_json(ranking));

  const auto views = feature_set_views(screened, ranking);
  auto purity = purity_tables(screened, views, popt);
  write_ojson(out / "purity.json", purity.json);
  write_ojson(out / "attribution.json", attribution_table(screened, popt));
  if (has_composites(screened)) write_ojson(out / "fuzzy.json", fuzzy_table(screened, popt));
  auto rows = overhead_rows(views, purity.by_location, purity.distributed);
  write_ojson(out / "overhead.json", overhead_json(rows));
  write_text(out / "overhead.csv", tradeoff_to_csv(rows));
  write_embedding(o, screened);
  write_ojson(out / "summary.json", summarize(out));
  std::cout << "summary written to " << (out / "summary.json").string() << "\n";
}

// ----------------------------------------------------------------------------
// entry point

inline void add_common_options(CLI::App& sub, CliOptions& o) {
  sub.add_option("--out", o.out, "output directory");
  sub.add_option("--dataset", o.dataset, "dataset directory (run CSVs + manifest.json)");
  sub.add_option("--config", o.config, "simulator config JSON");
  sub.add_option("--experiment", o.experiment, "experiment JSON; keys mirror the flags");
  sub.add_option("--seed", o.seed, "RNG seed (fallback: SLICEBENCH_SEED, then 42)");
  sub.add_option("--profiles", o.profiles, "profile list, e.g. 1-17 or 1,3,18-20");
  sub.add_option("--runs", o.runs, "runs per profile")->check(CLI::NonNegativeNumber);
  sub.add_option("--baseline-runs", o.baseline_runs, "baseline runs")->check(CLI::NonNegativeNumber);
  sub.add_option("--possible-probability", o.possible_probability, "probability of Possible effects")
      ->check(CLI::Range(0.0, 1.0));
  sub.add_flag("--composites,!--no-composites", o.composites, "include composite profiles 18-20");
  sub.add_option("--threshold", o.threshold, "baseline deviation threshold (band multiples)");
  sub.add_option("--features", o.features, "service|nf|infra|combined|selected[:n]");
  sub.add_option("--k", o.k, "by-profile|by-type|by-type-location|<int>");
  sub.add_option("--algorithm", o.algorithm, "agglomerative|kmeans|dbscan|cmeans");
  sub.add_option("--metric", o.metric, "soergel|euclidean|manhattan");
  sub.add_option("--linkage", o.linkage, "average|single|complete");
  sub.add_option("--eps", o.eps, "DBSCAN radius");
  sub.add_option("--min-pts", o.min_pts, "DBSCAN core size");
  sub.add_option("--n", o.n, "number of selected columns")->check(CLI::PositiveNumber);
  sub.add_option("--approach", o.approach, "centralized|distributed|both");
  sub.add_flag("--embed", o.embed, "export a 2-D embedding CSV");
}

// Experiment JSON becomes flags placed before the real ones; every option
// keeps its last value, so the command line wins.
inline std::vector<std::string> experiment_args(const fs::path& file) {
  auto j = read_json(file);
  if (!j.is_object()) throw ConfigError("experiment file must hold a JSON object: " + file.string());
  std::vector<std::string> args;
  for (const auto& [key, v] : j.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "--experiment") throw ConfigError("experiment files cannot nest");
    if (v.is_null()) continue;
    if (v.is_boolean()) {
      args.push_back(flag + "=" + (v.get<bool>() ? "true" : "false"));
    } else if (v.is_string()) {
      args.push_back(flag + "=" + v.get<std::string>());
    } else if (v.is_number_integer() || v.is_number_unsigned()) {
      args.push_back(flag + "=" + v.dump());
    } else if (v.is_number()) {
      args.push_back(flag + "=" + format_number(v.get<double>()));
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      args.push_back(flag + "=" + joined);
    } else {
      throw ConfigError("experiment key '" + key + "' must be a scalar or list");
    }
  }
  return args;
}

inline std::optional<std::string> find_experiment(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--experiment" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--experiment=", 0) == 0) return args[i].substr(13);
  }
  return std::nullopt;
}

inline std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

inline int run_command(const std::vector<std::string>& argv, std::ostream& err = std::cerr) {
  CliOptions o;
  CLI::App app{"slicebench: network-slice bottleneck identification benchmark", "slicebench"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    void (*fn)(const CliOptions&);
  };
  const Sub subs[] = {
      {"simulate", "generate a dataset of run CSVs", cmd_simulate},
      {"features", "extract and screen features", cmd_features},
      {"cluster", "cluster one feature set and report purity", cmd_cluster},
      {"select", "rank features with MARS and keep the top n", cmd_select},
      {"identify", "centralized and distributed identification", cmd_identify},
      {"overhead", "transfer/processing unit table", cmd_overhead},
      {"report", "write summary.json; --embed exports a 2-D embedding", cmd_report},
      {"all", "full reproduction into --out", cmd_all},
  };
  for (const auto& s : subs) add_common_options(*app.add_subcommand(s.name, s.help), o);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  try {
    if (auto exp = find_experiment(args); exp && !args.empty()) {
      auto extra = experiment_args(*exp);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
    // CLI11 consumes the vector from the back.
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    err << "slicebench: error: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const ConfigError& e) {
    err << "slicebench: error: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "slicebench: error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    for (const auto& s : subs) {
      if (app.got_subcommand(s.name)) s.fn(o);
    }
  } catch (const ConfigError& e) {
    err << "slicebench: error: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "slicebench: error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "slicebench: error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "slicebench: error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

inline int run_command(int argc, char** argv) { return run_command(std::vector<std::string>(argv, argv + argc)); }

}  // namespace slicebench

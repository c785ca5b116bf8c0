#pragma once

// Synthetic slice telemetry: per-measurement baseline generators plus
// per-profile perturbation rules constrained by the effect matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicebench/error.hpp"
#include "slicebench/io.hpp"
#include "slicebench/rng.hpp"
#include "slicebench/telemetry.hpp"

namespace slicebench {

enum class Family { TruncatedNormal, ConstantPlusNoise, PoissonCount };

inline constexpr std::array<Family, 3> kAllFamilies = {Family::TruncatedNormal, Family::ConstantPlusNoise,
                                                       Family::PoissonCount};

inline constexpr std::string_view to_string(Family f) {
  switch (f) {
    case Family::TruncatedNormal: return "truncated-normal";
    case Family::ConstantPlusNoise: return "constant-plus-noise";
    case Family::PoissonCount: return "poisson-count";
  }
  return "?";
}

struct GeneratorSpec {
  Family family = Family::TruncatedNormal;
  double mean = 0.0;  // rate for poisson-count
  double stddev = 0.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

using BaselineModel = std::map<Measurement, GeneratorSpec>;

enum class PerturbMode { Shift, Scale, VarianceInflate, SpikeTrain, Clamp };

inline constexpr std::array<PerturbMode, 5> kAllModes = {PerturbMode::Shift, PerturbMode::Scale,
                                                         PerturbMode::VarianceInflate, PerturbMode::SpikeTrain,
                                                         PerturbMode::Clamp};

inline constexpr std::string_view to_string(PerturbMode m) {
  switch (m) {
    case PerturbMode::Shift: return "shift";
    case PerturbMode::Scale: return "scale";
    case PerturbMode::VarianceInflate: return "variance-inflate";
    case PerturbMode::SpikeTrain: return "spike-train";
    case PerturbMode::Clamp: return "clamp";
  }
  return "?";
}

struct PerturbationRule {
  Measurement target;
  PerturbMode mode = PerturbMode::Shift;
  double magnitude = 0.0;
  double rate = 0.1;          // spikes per sample (spike-train only)
  bool per_severity = false;  // magnitude is multiplied by the component's severity value
  // Realization probability per run. Unset: 1 for Always effects, the
  // config's possible_probability for Possible effects.
  std::optional<double> probability;
};

struct SimConfig {
  BaselineModel baseline;
  std::map<int, std::vector<PerturbationRule>> profile_rules;  // singular profiles 1..17
  std::vector<int> profiles;                                   // profiles generated by generate_dataset
  int runs_per_profile = 5;
  int baseline_runs = 5;
  std::uint64_t seed = 42;
  double possible_probability = 0.5;
  double duration_s = 120.0;
  double sample_period_s = 1.0;
};

inline constexpr int kSingularProfiles = 17;
inline constexpr int kAllProfiles = 20;

// ----------------------------------------------------------------------------
// validation

inline double rule_probability(const SimConfig& cfg, const PerturbationRule& r, BottleneckType t) {
  if (r.probability) return *r.probability;
  return effect_of(t, r.target.kind) == Effect::Always ? 1.0 : cfg.possible_probability;
}

inline void validate(const SimConfig& cfg) {
  for (const auto& m : catalog()) {
    auto it = cfg.baseline.find(m);
    if (it == cfg.baseline.end()) throw ConfigError("baseline model missing " + name_of(m));
    const auto& g = it->second;
    if (!(g.stddev >= 0.0) || !std::isfinite(g.mean) || g.lo > g.hi) {
      throw ConfigError("invalid generator for " + name_of(m));
    }
    auto info = kind_info(m.kind);
    if (g.mean < info.lo || g.mean > info.hi) throw ConfigError("baseline mean out of range for " + name_of(m));
  }
  if (cfg.baseline.size() != catalog().size()) throw ConfigError("baseline model has entries outside the catalog");
  if (!(cfg.sample_period_s > 0.0) || !(cfg.duration_s >= cfg.sample_period_s)) {
    throw ConfigError("invalid duration/sample period");
  }
  if (cfg.runs_per_profile < 0 || cfg.baseline_runs < 0) throw ConfigError("negative run count");
  if (cfg.possible_probability < 0.0 || cfg.possible_probability > 1.0) {
    throw ConfigError("possible_probability outside [0,1]");
  }
  for (int id : cfg.profiles) {
    if (id < 1 || id > kAllProfiles) throw ConfigError("unknown profile id " + std::to_string(id));
  }
  for (const auto& [id, rules] : cfg.profile_rules) {
    if (id < 1 || id > kSingularProfiles) {
      throw ConfigError("perturbation rules given for profile " + std::to_string(id) +
                        "; composites derive rules from their components");
    }
  }
  for (int id = 1; id <= kSingularProfiles; ++id) {
    const auto& spec = profile(id);
    const auto t = spec.components.front().type;
    auto it = cfg.profile_rules.find(id);
    if (it == cfg.profile_rules.end()) throw ConfigError("no perturbation rules for profile " + std::to_string(id));
    std::set<KpiKind> covered;
    for (const auto& r : it->second) {
      if (!catalog_index(r.target)) throw ConfigError("rule target not in catalog: " + name_of(r.target));
      if (effect_of(t, r.target.kind) == Effect::None) {
        throw ConfigError("profile " + std::to_string(id) + ": " + std::string(to_string(t)) +
                          " cannot affect " + name_of(r.target));
      }
      if (!std::isfinite(r.magnitude) || (r.mode == PerturbMode::Scale && r.magnitude < 0.0) ||
          (r.mode == PerturbMode::VarianceInflate && r.magnitude < 0.0)) {
        throw ConfigError("invalid magnitude on " + name_of(r.target));
      }
      if (!(r.rate > 0.0 && r.rate <= 1.0)) throw ConfigError("spike rate outside (0,1] on " + name_of(r.target));
      if (r.probability && (*r.probability < 0.0 || *r.probability > 1.0)) {
        throw ConfigError("rule probability outside [0,1] on " + name_of(r.target));
      }
      if (r.per_severity && !spec.components.front().severity.value) {
        throw ConfigError("profile " + std::to_string(id) + " has no severity value for a per-severity rule");
      }
      covered.insert(r.target.kind);
    }
    for (auto k : kAllKinds) {
      if (effect_of(t, k) == Effect::Always && !covered.count(k)) {
        throw ConfigError("profile " + std::to_string(id) + " lacks a rule for always-affected " +
                          std::string(to_string(k)));
      }
    }
  }
}

// ----------------------------------------------------------------------------
// rule resolution

struct ResolvedRule {
  PerturbationRule rule;
  BottleneckType type;
  double magnitude;
  double probability;
};

// Composite profiles take the union of their components' source rules.
inline std::vector<ResolvedRule> rules_for(const SimConfig& cfg, int profile_id) {
  std::vector<ResolvedRule> out;
  if (profile_id == 0) return out;
  for (const auto& c : profile(profile_id).components) {
    auto it = cfg.profile_rules.find(c.source_profile);
    if (it == cfg.profile_rules.end()) continue;
    for (const auto& r : it->second) {
      double mag = r.magnitude;
      if (r.per_severity) mag *= c.severity.value.value_or(1.0);
      out.push_back({r, c.type, mag, rule_probability(cfg, r, c.type)});
    }
  }
  return out;
}

inline std::set<Measurement> perturbed_measurements(const SimConfig& cfg, int profile_id) {
  std::set<Measurement> s;
  for (const auto& r : rules_for(cfg, profile_id)) s.insert(r.rule.target);
  return s;
}

// ----------------------------------------------------------------------------
// generation

inline int run_id_for(int profile_id, int run_index) { return profile_id * 1000 + run_index; }

inline std::vector<double> baseline_samples(const GeneratorSpec& g, std::size_t n, Stream& rng) {
  std::vector<double> x(n);
  for (auto& v : x) {
    switch (g.family) {
      case Family::TruncatedNormal: {
        double s = g.mean;
        for (int attempt = 0; attempt < 64; ++attempt) {
          s = rng.normal(g.mean, g.stddev);
          if (s >= g.lo && s <= g.hi) break;
        }
        v = std::clamp(s, g.lo, g.hi);
        break;
      }
      case Family::ConstantPlusNoise:
        v = std::clamp(g.mean + (g.stddev > 0.0 ? g.stddev * rng.normal() : 0.0), g.lo, g.hi);
        break;
      case Family::PoissonCount:
        v = rng.poisson(g.mean);
        break;
    }
  }
  return x;
}

inline void apply_rule(std::vector<double>& x, const ResolvedRule& rr, bool counts, Stream& rng) {
  const double mag = rr.magnitude;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  // Spike trains are periodic with a random phase, so every run carries the
  // same number of spikes.
  const auto period = static_cast<std::uint64_t>(std::max(1.0, std::round(1.0 / rr.rule.rate)));
  const std::uint64_t phase = rr.rule.mode == PerturbMode::SpikeTrain ? rng.below(period) : 0;
  std::uint64_t i = 0;
  for (auto& v : x) {
    const bool spike = (i++ % period) == phase;
    switch (rr.rule.mode) {
      case PerturbMode::Shift:
        v += counts ? (mag >= 0 ? rng.poisson(mag) : -rng.poisson(-mag)) : mag;
        break;
      case PerturbMode::Scale:
        v *= mag;
        if (counts) v = std::round(v);
        break;
      case PerturbMode::VarianceInflate:
        v = mean + (v - mean) * mag;
        if (counts) v = std::round(v);
        break;
      case PerturbMode::SpikeTrain:
        if (spike) v += counts ? std::round(mag) : mag;
        break;
      case PerturbMode::Clamp:
        v = std::min(v, mag);
        break;
    }
  }
}

inline RunRecord generate_run(const SimConfig& cfg, int profile_id, int run_index) {
  if (profile_id < 0 || profile_id > kAllProfiles) {
    throw ConfigError("unknown profile id " + std::to_string(profile_id));
  }
  RunRecord run;
  run.profile_id = profile_id;
  run.run_id = run_id_for(profile_id, run_index);
  run.duration_s = cfg.duration_s;
  run.sample_period_s = cfg.sample_period_s;
  const auto n = static_cast<std::size_t>(cfg.duration_s / cfg.sample_period_s + 0.5);
  const auto pid = static_cast<std::uint64_t>(profile_id);
  const auto ridx = static_cast<std::uint64_t>(run_index);

  const auto& cat = catalog();
  run.series.reserve(cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    Stream rng(derive_seed({cfg.seed, pid, ridx, i}));
    run.series.push_back({cat[i], baseline_samples(cfg.baseline.at(cat[i]), n, rng)});
  }

  auto rules = rules_for(cfg, profile_id);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    Stream gate(derive_seed({cfg.seed, pid, ridx, 1000 + r}));
    if (!gate.bernoulli(rules[r].probability) && rules[r].probability < 1.0) continue;
    auto idx = *catalog_index(rules[r].rule.target);
    const bool counts = cfg.baseline.at(cat[idx]).family == Family::PoissonCount;
    Stream rng(derive_seed({cfg.seed, pid, ridx, 2000 + r}));
    apply_rule(run.series[idx].samples, rules[r], counts, rng);
  }

  for (auto& s : run.series) {
    auto info = kind_info(s.measurement.kind);
    for (auto& v : s.samples) v = round_reported(std::clamp(v, info.lo, info.hi));
  }
  return run;
}

inline Dataset generate_dataset(const SimConfig& cfg) {
  validate(cfg);
  Dataset ds;
  ds.rng_seed = cfg.seed;
  ds.sample_period_s = cfg.sample_period_s;
  for (int r = 0; r < cfg.baseline_runs; ++r) ds.runs.push_back(generate_run(cfg, 0, r));
  std::vector<int> ids = cfg.profiles;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int id : ids) {
    for (int r = 0; r < cfg.runs_per_profile; ++r) ds.runs.push_back(generate_run(cfg, id, r));
  }
  return ds;
}

// ----------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const SimConfig& cfg) {
  nlohmann::json base = nlohmann::json::object();
  for (const auto& [m, g] : cfg.baseline) {
    nlohmann::json j = {{"family", to_string(g.family)}, {"mean", g.mean}, {"stddev", g.stddev}, {"lo", g.lo}};
    if (std::isfinite(g.hi)) j["hi"] = g.hi;
    base[name_of(m)] = j;
  }
  nlohmann::json rules = nlohmann::json::object();
  for (const auto& [id, rs] : cfg.profile_rules) {
    auto& arr = rules[std::to_string(id)] = nlohmann::json::array();
    for (const auto& r : rs) {
      nlohmann::json j = {{"target", name_of(r.target)}, {"mode", to_string(r.mode)}, {"magnitude", r.magnitude}};
      if (r.mode == PerturbMode::SpikeTrain) j["rate"] = r.rate;
      if (r.per_severity) j["per_severity"] = true;
      if (r.probability) j["probability"] = *r.probability;
      arr.push_back(j);
    }
  }
  return {{"seed", cfg.seed},
          {"runs_per_profile", cfg.runs_per_profile},
          {"baseline_runs", cfg.baseline_runs},
          {"profiles", cfg.profiles},
          {"possible_probability", cfg.possible_probability},
          {"duration_s", cfg.duration_s},
          {"sample_period_s", cfg.sample_period_s},
          {"baseline", base},
          {"profile_rules", rules}};
}

inline SimConfig sim_config_from_json(const nlohmann::json& j, const SimConfig& defaults) {
  SimConfig cfg = defaults;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("runs_per_profile")) cfg.runs_per_profile = j.at("runs_per_profile").get<int>();
    if (j.contains("baseline_runs")) cfg.baseline_runs = j.at("baseline_runs").get<int>();
    if (j.contains("profiles")) cfg.profiles = j.at("profiles").get<std::vector<int>>();
    if (j.contains("possible_probability")) cfg.possible_probability = j.at("possible_probability").get<double>();
    if (j.contains("duration_s")) cfg.duration_s = j.at("duration_s").get<double>();
    if (j.contains("sample_period_s")) cfg.sample_period_s = j.at("sample_period_s").get<double>();
    if (j.contains("baseline")) {
      for (const auto& [name, g] : j.at("baseline").items()) {
        GeneratorSpec spec;
        spec.family = parse_enum(g.at("family").get<std::string>(), kAllFamilies, "generator family");
        spec.mean = g.at("mean").get<double>();
        spec.stddev = g.value("stddev", 0.0);
        spec.lo = g.value("lo", 0.0);
        spec.hi = g.contains("hi") ? g.at("hi").get<double>() : std::numeric_limits<double>::infinity();
        cfg.baseline[parse_measurement(name)] = spec;
      }
    }
    if (j.contains("profile_rules")) {
      for (const auto& [key, arr] : j.at("profile_rules").items()) {
        std::vector<PerturbationRule> rs;
        for (const auto& r : arr) {
          PerturbationRule rule;
          rule.target = parse_measurement(r.at("target").get<std::string>());
          rule.mode = parse_enum(r.at("mode").get<std::string>(), kAllModes, "perturbation mode");
          rule.magnitude = r.at("magnitude").get<double>();
          rule.rate = r.value("rate", 0.1);
          rule.per_severity = r.value("per_severity", false);
          if (r.contains("probability")) rule.probability = r.at("probability").get<double>();
          rs.push_back(rule);
        }
        cfg.profile_rules[std::stoi(key)] = std::move(rs);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed simulator config: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed profile id in simulator config");
  }
  validate(cfg);
  return cfg;
}

}  // namespace slicebench

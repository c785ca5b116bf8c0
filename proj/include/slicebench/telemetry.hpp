#pragma once

// Measurement catalog, network locations, bottleneck profiles and the run
// containers shared by the simulator and the analytics pipeline.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slicebench/error.hpp"

namespace slicebench {

enum class Layer { Service, NetworkFunction, Infrastructure };

enum class Domain { RAN, CN, Edge };

enum class Location {
  HSS,
  MME,
  SPGW,
  SPGWHost,
  ENB,
  Controller,
  UE,
  // links
  ControllerENB,
  S1U,
  SGi,
};

enum class KpiKind {
  Throughput,
  RTT,
  RadioTX,
  RadioRTX,
  CQI,
  MCS,
  MSD,
  TcpRTX,
  CPU,
  Memory,
  Storage,
  NetTX,
  NetRX,
  LinkDelay,
};

enum class BottleneckType { Interference, PacketLoss, Congestion, Resources, Delay };

enum class Effect { None, Possible, Always };

inline constexpr std::array<Location, 10> kAllLocations = {
    Location::HSS, Location::MME,        Location::SPGW,          Location::SPGWHost,
    Location::ENB, Location::Controller, Location::UE,            Location::ControllerENB,
    Location::S1U, Location::SGi};

inline constexpr std::array<Location, 7> kNodeLocations = {
    Location::HSS, Location::MME,        Location::SPGW, Location::SPGWHost,
    Location::ENB, Location::Controller, Location::UE};

inline constexpr std::array<Location, 3> kLinkLocations = {Location::ControllerENB, Location::S1U,
                                                           Location::SGi};

inline constexpr std::array<KpiKind, 14> kAllKinds = {
    KpiKind::Throughput, KpiKind::RTT,    KpiKind::RadioTX, KpiKind::RadioRTX, KpiKind::CQI,
    KpiKind::MCS,        KpiKind::MSD,    KpiKind::TcpRTX,  KpiKind::CPU,      KpiKind::Memory,
    KpiKind::Storage,    KpiKind::NetTX,  KpiKind::NetRX,   KpiKind::LinkDelay};

inline constexpr std::array<BottleneckType, 5> kAllTypes = {
    BottleneckType::Interference, BottleneckType::PacketLoss, BottleneckType::Congestion,
    BottleneckType::Resources, BottleneckType::Delay};

inline constexpr std::string_view to_string(Location l) {
  switch (l) {
    case Location::HSS: return "HSS";
    case Location::MME: return "MME";
    case Location::SPGW: return "SPGW";
    case Location::SPGWHost: return "SPGWHost";
    case Location::ENB: return "ENB";
    case Location::Controller: return "Controller";
    case Location::UE: return "UE";
    case Location::ControllerENB: return "ControllerENB";
    case Location::S1U: return "S1U";
    case Location::SGi: return "SGi";
  }
  return "?";
}

inline constexpr std::string_view to_string(KpiKind k) {
  switch (k) {
    case KpiKind::Throughput: return "Throughput";
    case KpiKind::RTT: return "RTT";
    case KpiKind::RadioTX: return "RadioTX";
    case KpiKind::RadioRTX: return "RadioRTX";
    case KpiKind::CQI: return "CQI";
    case KpiKind::MCS: return "MCS";
    case KpiKind::MSD: return "MSD";
    case KpiKind::TcpRTX: return "TcpRTX";
    case KpiKind::CPU: return "CPU";
    case KpiKind::Memory: return "Memory";
    case KpiKind::Storage: return "Storage";
    case KpiKind::NetTX: return "NetTX";
    case KpiKind::NetRX: return "NetRX";
    case KpiKind::LinkDelay: return "LinkDelay";
  }
  return "?";
}

inline constexpr std::string_view to_string(BottleneckType t) {
  switch (t) {
    case BottleneckType::Interference: return "Interference";
    case BottleneckType::PacketLoss: return "PacketLoss";
    case BottleneckType::Congestion: return "Congestion";
    case BottleneckType::Resources: return "Resources";
    case BottleneckType::Delay: return "Delay";
  }
  return "?";
}

inline constexpr std::string_view to_string(Layer l) {
  switch (l) {
    case Layer::Service: return "Service";
    case Layer::NetworkFunction: return "NetworkFunction";
    case Layer::Infrastructure: return "Infrastructure";
  }
  return "?";
}

inline constexpr std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::RAN: return "RAN";
    case Domain::CN: return "CN";
    case Domain::Edge: return "Edge";
  }
  return "?";
}

inline constexpr std::string_view to_string(Effect e) {
  switch (e) {
    case Effect::None: return "None";
    case Effect::Possible: return "Possible";
    case Effect::Always: return "Always";
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const std::array<Enum, N>& values, std::string_view what) {
  for (auto v : values) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

inline Location parse_location(std::string_view s) { return parse_enum(s, kAllLocations, "location"); }
inline KpiKind parse_kind(std::string_view s) { return parse_enum(s, kAllKinds, "KPI kind"); }
inline BottleneckType parse_type(std::string_view s) {
  return parse_enum(s, kAllTypes, "bottleneck type");
}

inline constexpr bool is_link(Location l) {
  return l == Location::ControllerENB || l == Location::S1U || l == Location::SGi;
}

// Node domains carry RAN/CN/Edge; links inherit the domain whose analysis
// point terminates them.
inline constexpr Domain domain_of(Location l) {
  switch (l) {
    case Location::HSS:
    case Location::MME:
    case Location::SPGW:
    case Location::SPGWHost:
    case Location::S1U:
    case Location::SGi:
      return Domain::CN;
    case Location::ENB:
    case Location::Controller:
    case Location::ControllerENB:
      return Domain::RAN;
    case Location::UE:
      return Domain::Edge;
  }
  return Domain::Edge;
}

inline constexpr Layer layer_of(KpiKind k) {
  switch (k) {
    case KpiKind::Throughput:
    case KpiKind::RTT:
      return Layer::Service;
    case KpiKind::RadioTX:
    case KpiKind::RadioRTX:
    case KpiKind::CQI:
    case KpiKind::MCS:
    case KpiKind::MSD:
    case KpiKind::TcpRTX:
      return Layer::NetworkFunction;
    default:
      return Layer::Infrastructure;
  }
}

struct KindInfo {
  std::string_view unit;
  double lo;
  double hi;
};

inline constexpr KindInfo kind_info(KpiKind k) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (k) {
    case KpiKind::Throughput: return {"Mbps", 0.0, inf};
    case KpiKind::RTT: return {"ms", 0.0, inf};
    case KpiKind::RadioTX: return {"count/s", 0.0, inf};
    case KpiKind::RadioRTX: return {"count/s", 0.0, inf};
    case KpiKind::CQI: return {"index", 0.0, 15.0};
    case KpiKind::MCS: return {"index", 0.0, 28.0};
    case KpiKind::MSD: return {"count/s", 0.0, inf};
    case KpiKind::TcpRTX: return {"count/s", 0.0, inf};
    case KpiKind::CPU: return {"%", 0.0, 100.0};
    case KpiKind::Memory: return {"%", 0.0, 100.0};
    case KpiKind::Storage: return {"%", 0.0, 100.0};
    case KpiKind::NetTX: return {"Mbps", 0.0, inf};
    case KpiKind::NetRX: return {"Mbps", 0.0, inf};
    case KpiKind::LinkDelay: return {"ms", 0.0, inf};
  }
  return {"", 0.0, inf};
}

struct Measurement {
  KpiKind kind;
  Location location;

  friend bool operator==(const Measurement&, const Measurement&) = default;
  friend auto operator<=>(const Measurement&, const Measurement&) = default;
};

inline std::string name_of(const Measurement& m) {
  return std::string(to_string(m.kind)) + "." + std::string(to_string(m.location));
}

inline Layer layer_of(const Measurement& m) { return layer_of(m.kind); }

// Locations at which each kind is measured.
inline std::vector<Location> valid_locations(KpiKind k) {
  switch (k) {
    case KpiKind::Throughput:
    case KpiKind::RTT:
      return {Location::UE};
    case KpiKind::RadioTX:
    case KpiKind::RadioRTX:
    case KpiKind::CQI:
    case KpiKind::MCS:
      return {Location::Controller};
    case KpiKind::MSD:
      return {Location::ENB};
    case KpiKind::LinkDelay:
      return {kLinkLocations.begin(), kLinkLocations.end()};
    default:
      return {kNodeLocations.begin(), kNodeLocations.end()};
  }
}

// Canonical measurement order: kinds in declaration order, locations in
// declaration order within each kind. 52 entries.
inline const std::vector<Measurement>& catalog() {
  static const std::vector<Measurement> c = [] {
    std::vector<Measurement> out;
    for (auto k : kAllKinds) {
      for (auto l : valid_locations(k)) out.push_back({k, l});
    }
    return out;
  }();
  return c;
}

inline std::optional<std::size_t> catalog_index(const Measurement& m) {
  const auto& c = catalog();
  auto it = std::find(c.begin(), c.end(), m);
  if (it == c.end()) return std::nullopt;
  return static_cast<std::size_t>(it - c.begin());
}

inline Measurement parse_measurement(std::string_view name) {
  auto dot = name.find('.');
  if (dot == std::string_view::npos) {
    throw ConfigError("malformed measurement name '" + std::string(name) + "'");
  }
  Measurement m{parse_kind(name.substr(0, dot)), parse_location(name.substr(dot + 1))};
  if (!catalog_index(m)) throw ConfigError("measurement not in catalog: " + std::string(name));
  return m;
}

// Which KPIs each bottleneck type moves.
inline constexpr Effect effect_of(BottleneckType t, KpiKind k) {
  using E = Effect;
  // columns: Interference, PacketLoss, Congestion, Resources, Delay
  constexpr E table[14][5] = {
      {E::Possible, E::Possible, E::Possible, E::Possible, E::Possible},  // Throughput
      {E::Possible, E::Possible, E::Possible, E::Possible, E::Possible},  // RTT
      {E::Possible, E::Possible, E::Possible, E::Possible, E::Possible},  // RadioTX
      {E::Always, E::None, E::None, E::Possible, E::Possible},            // RadioRTX
      {E::Always, E::None, E::None, E::None, E::None},                    // CQI
      {E::Possible, E::Possible, E::Possible, E::Possible, E::Possible},  // MCS
      {E::None, E::Possible, E::Possible, E::Possible, E::Possible},      // MSD
      {E::None, E::Always, E::Possible, E::None, E::None},                // TcpRTX
      {E::None, E::None, E::Possible, E::Always, E::None},                // CPU
      {E::None, E::None, E::Possible, E::Always, E::None},                // Memory
      {E::None, E::None, E::Possible, E::Always, E::None},                // Storage
      {E::None, E::None, E::Always, E::None, E::None},                    // NetTX
      {E::None, E::None, E::Always, E::None, E::None},                    // NetRX
      {E::None, E::None, E::None, E::None, E::Always},                    // LinkDelay
  };
  return table[static_cast<int>(k)][static_cast<int>(t)];
}

enum class SeverityLevel { Unspecified, Low, Moderate, High };

inline constexpr std::string_view to_string(SeverityLevel s) {
  switch (s) {
    case SeverityLevel::Unspecified: return "Unspecified";
    case SeverityLevel::Low: return "Low";
    case SeverityLevel::Moderate: return "Moderate";
    case SeverityLevel::High: return "High";
  }
  return "?";
}

struct Severity {
  SeverityLevel level = SeverityLevel::Unspecified;
  std::optional<double> value;  // e.g. 4 (%), 30 (ms)
  std::string unit;
};

struct ProfileComponent {
  BottleneckType type;
  Location location;
  Severity severity;
  int source_profile;  // singular profile whose perturbation rules realize this component

  Domain domain() const { return domain_of(location); }
};

struct ProfileSpec {
  int id;
  std::vector<ProfileComponent> components;

  bool composite() const { return components.size() > 1; }
};

// Interference is injected on the radio link (eNB side). Other types sit on
// network nodes or links, never on the UE.
inline bool location_valid_for(BottleneckType t, Location l) {
  switch (t) {
    case BottleneckType::Interference:
      return l == Location::ENB;
    case BottleneckType::Congestion:
      return is_link(l) || l == Location::SPGWHost || l == Location::SPGW;
    default:
      return l != Location::UE && !is_link(l);
  }
}

inline const std::vector<ProfileSpec>& profiles() {
  using B = BottleneckType;
  using L = Location;
  using S = SeverityLevel;
  static const std::vector<ProfileSpec> p = [] {
    auto one = [](int id, B t, L l, Severity s) {
      return ProfileSpec{id, {ProfileComponent{t, l, std::move(s), id}}};
    };
    auto pct = [](S lvl, double v) { return Severity{lvl, v, "%"}; };
    auto ms = [](S lvl, double v) { return Severity{lvl, v, "ms"}; };
    std::vector<ProfileSpec> v = {
        one(1, B::Interference, L::ENB, {S::Moderate, {}, ""}),
        one(2, B::Interference, L::ENB, {S::High, {}, ""}),
        one(3, B::PacketLoss, L::SPGW, pct(S::Low, 1)),
        one(4, B::PacketLoss, L::SPGW, pct(S::Moderate, 4)),
        one(5, B::PacketLoss, L::SPGW, pct(S::High, 6)),
        one(6, B::PacketLoss, L::Controller, pct(S::Moderate, 4)),
        one(7, B::PacketLoss, L::ENB, pct(S::Moderate, 4)),
        one(8, B::Congestion, L::SGi, {}),
        one(9, B::Congestion, L::SPGWHost, {}),
        one(10, B::Congestion, L::ControllerENB, {}),
        one(11, B::Resources, L::SPGW, {}),
        one(12, B::Resources, L::SPGWHost, {}),
        one(13, B::Resources, L::Controller, {}),
        one(14, B::Delay, L::SPGW, ms(S::Moderate, 30)),
        one(15, B::Delay, L::Controller, ms(S::Moderate, 0.9)),
        one(16, B::Delay, L::ENB, ms(S::Moderate, 0.9)),
        one(17, B::Delay, L::ENB, ms(S::High, 1.5)),
    };
    auto comp = [&](int id, int a, int b) {
      ProfileSpec s{id, {v[a - 1].components[0], v[b - 1].components[0]}};
      return s;
    };
    v.push_back(comp(18, 8, 10));
    v.push_back(comp(19, 13, 15));
    v.push_back(comp(20, 3, 15));
    return v;
  }();
  return p;
}

inline const ProfileSpec& profile(int id) {
  if (id < 1 || id > static_cast<int>(profiles().size())) {
    throw ConfigError("unknown profile id " + std::to_string(id));
  }
  return profiles()[static_cast<std::size_t>(id - 1)];
}

struct MeasurementSeries {
  Measurement measurement;
  std::vector<double> samples;
};

struct RunRecord {
  int run_id = 0;
  int profile_id = 0;  // 0 = baseline
  double duration_s = 120.0;
  double sample_period_s = 1.0;
  // Indexed by catalog order.
  std::vector<MeasurementSeries> series;

  std::size_t sample_count() const {
    return series.empty() ? 0 : series.front().samples.size();
  }
};

// Throws ConfigError when the record does not cover the catalog exactly once
// with equal-length series.
inline void validate_run(const RunRecord& run) {
  const auto& c = catalog();
  if (run.series.size() != c.size()) {
    throw ConfigError("run " + std::to_string(run.run_id) + " has " +
                      std::to_string(run.series.size()) + " series, expected " +
                      std::to_string(c.size()));
  }
  const auto expected = static_cast<std::size_t>(run.duration_s / run.sample_period_s + 0.5);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& s = run.series[i];
    if (!(s.measurement == c[i])) throw ConfigError("series out of canonical order: " + name_of(s.measurement));
    if (s.samples.empty() || s.samples.size() != expected) {
      throw ConfigError("series " + name_of(s.measurement) + " has " +
                        std::to_string(s.samples.size()) + " samples, expected " +
                        std::to_string(expected));
    }
  }
}

struct Dataset {
  std::vector<RunRecord> runs;
  std::uint64_t rng_seed = 0;
  double sample_period_s = 1.0;

  std::map<int, int> manifest() const {
    std::map<int, int> counts;
    for (const auto& r : runs) ++counts[r.profile_id];
    return counts;
  }
};

}  // namespace slicebench

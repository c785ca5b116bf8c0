#pragma once

// Shipped simulator defaults. None of these numbers come from a testbed: they
// are chosen so the profiles have distinct, effect-matrix-legal signatures.
// Measurements no profile touches are idle constants.

#include <limits>
#include <tuple>

#include "slicebench/sim.hpp"

namespace slicebench {

inline SimConfig default_sim_config() {
  using K = KpiKind;
  using L = Location;
  using F = Family;
  using P = PerturbMode;
  constexpr double inf = std::numeric_limits<double>::infinity();

  SimConfig cfg;
  auto& b = cfg.baseline;
  auto tn = [&](K k, L l, double mean, double sd) {
    auto info = kind_info(k);
    b[{k, l}] = {F::TruncatedNormal, mean, sd, info.lo, info.hi};
  };
  auto flat = [&](K k, L l, double v, double sd = 0.0) {
    auto info = kind_info(k);
    b[{k, l}] = {F::ConstantPlusNoise, v, sd, info.lo, info.hi};
  };
  auto counts = [&](K k, L l, double rate) { b[{k, l}] = {F::PoissonCount, rate, 0.0, 0.0, inf}; };

  tn(K::Throughput, L::UE, 20.0, 1.5);
  tn(K::RTT, L::UE, 40.0, 4.0);
  tn(K::RadioTX, L::Controller, 1000.0, 40.0);
  counts(K::RadioRTX, L::Controller, 5.0);
  tn(K::CQI, L::Controller, 12.0, 0.6);
  tn(K::MCS, L::Controller, 22.0, 1.2);
  counts(K::MSD, L::ENB, 0.5);

  for (auto l : kNodeLocations) flat(K::TcpRTX, l, 0.0);
  counts(K::TcpRTX, L::SPGW, 1.0);
  counts(K::TcpRTX, L::ENB, 0.5);
  counts(K::TcpRTX, L::UE, 1.0);

  // Control-plane VNFs and the end devices idle at fixed levels.
  for (auto l : {L::HSS, L::MME}) {
    flat(K::CPU, l, 5.0);
    flat(K::Memory, l, 20.0);
    flat(K::Storage, l, 10.0);
    flat(K::NetTX, l, 0.1);
    flat(K::NetRX, l, 0.1);
  }
  flat(K::CPU, L::ENB, 35.0);
  flat(K::Memory, L::ENB, 30.0);
  flat(K::Storage, L::ENB, 15.0);
  flat(K::CPU, L::UE, 12.0);
  flat(K::Memory, L::UE, 40.0);
  flat(K::Storage, L::UE, 25.0);
  flat(K::NetTX, L::UE, 2.0);
  flat(K::NetRX, L::UE, 20.0);

  tn(K::CPU, L::SPGW, 15.0, 2.0);
  tn(K::CPU, L::SPGWHost, 10.0, 1.5);
  tn(K::CPU, L::Controller, 20.0, 2.0);
  // Allocations hold steady over a two-minute run.
  flat(K::Memory, L::SPGW, 30.0);
  flat(K::Memory, L::SPGWHost, 40.0);
  flat(K::Memory, L::Controller, 25.0);
  flat(K::Storage, L::SPGW, 20.0);
  flat(K::Storage, L::SPGWHost, 30.0);
  flat(K::Storage, L::Controller, 15.0);
  for (auto l : {L::SPGW, L::SPGWHost, L::ENB}) {
    tn(K::NetTX, l, 21.0, 1.5);
    tn(K::NetRX, l, 21.0, 1.5);
  }
  tn(K::NetTX, L::Controller, 0.8, 0.08);
  tn(K::NetRX, L::Controller, 0.8, 0.08);

  tn(K::LinkDelay, L::ControllerENB, 0.2, 0.02);
  tn(K::LinkDelay, L::S1U, 1.0, 0.1);
  flat(K::LinkDelay, L::SGi, 2.0);

  auto rule = [](K k, L l, P mode, double mag) { return PerturbationRule{{k, l}, mode, mag}; };
  auto always = [](PerturbationRule r) {
    r.probability = 1.0;
    return r;
  };
  auto per_sev = [](PerturbationRule r) {
    r.per_severity = true;
    return r;
  };
  auto spikes = [](K k, L l, double mag, double rate) {
    return PerturbationRule{{k, l}, P::SpikeTrain, mag, rate};
  };
  auto& pr = cfg.profile_rules;

  // Interference: radio quality drops, retransmissions climb.
  for (auto [id, cqi, rtx, mcs, tput] : {std::tuple{1, -2.0, 30.0, -3.0, 0.8}, std::tuple{2, -4.0, 50.0, -6.0, 0.6}}) {
    pr[id] = {rule(K::CQI, L::Controller, P::Shift, cqi), rule(K::RadioRTX, L::Controller, P::Shift, rtx),
              rule(K::MCS, L::Controller, P::Shift, mcs), rule(K::Throughput, L::UE, P::Scale, tput),
              rule(K::RTT, L::UE, P::Shift, 5.0)};
  }
  // Loss at the SPGW: end hosts retransmit, plus the gateway's own sessions.
  for (int id : {3, 4, 5}) {
    pr[id] = {per_sev(rule(K::TcpRTX, L::UE, P::Shift, 2.0)), per_sev(rule(K::TcpRTX, L::SPGW, P::Shift, 4.0)),
              rule(K::Throughput, L::UE, P::Scale, 0.6), rule(K::RTT, L::UE, P::Shift, 5.0)};
  }
  // Loss in the RAN is only seen where TCP ends: the UE and the eNB.
  pr[6] = {per_sev(rule(K::TcpRTX, L::UE, P::Shift, 3.0)), per_sev(rule(K::TcpRTX, L::ENB, P::Shift, 1.5)),
           rule(K::RadioTX, L::Controller, P::Scale, 0.9), rule(K::Throughput, L::UE, P::Scale, 0.8)};
  pr[7] = {per_sev(rule(K::TcpRTX, L::UE, P::Shift, 1.5)), per_sev(rule(K::TcpRTX, L::ENB, P::Shift, 3.0)),
           rule(K::RadioTX, L::Controller, P::Scale, 1.1), rule(K::Throughput, L::UE, P::Scale, 0.8)};
  // Congestion: interface load on the nodes adjacent to the bottleneck.
  auto load = [&](std::vector<PerturbationRule>& rs, L l, double extra) {
    for (auto k : {K::NetTX, K::NetRX}) {
      rs.push_back(rule(k, l, P::Shift, extra));
      rs.push_back(spikes(k, l, 0.4 * extra, 0.05));
    }
  };
  load(pr[8], L::SPGW, 40.0);
  load(pr[8], L::SPGWHost, 40.0);
  pr[8].insert(pr[8].end(), {rule(K::CPU, L::SPGW, P::Shift, 10.0), rule(K::Throughput, L::UE, P::Scale, 0.7),
                             rule(K::RTT, L::UE, P::Shift, 10.0)});
  load(pr[9], L::SPGWHost, 60.0);
  pr[9].insert(pr[9].end(), {rule(K::CPU, L::SPGWHost, P::Shift, 10.0), rule(K::Throughput, L::UE, P::Scale, 0.7)});
  // Data-path congestion throttles the UE's own traffic.
  for (int id : {8, 9}) {
    pr[id].push_back(rule(K::NetTX, L::UE, P::Scale, 0.7));
    pr[id].push_back(rule(K::NetRX, L::UE, P::Scale, 0.7));
  }
  pr[10].push_back(rule(K::CPU, L::ENB, P::Shift, 10.0));
  load(pr[10], L::Controller, 30.0);
  load(pr[10], L::ENB, 30.0);
  pr[10].insert(pr[10].end(), {rule(K::MSD, L::ENB, P::Shift, 3.0), rule(K::Throughput, L::UE, P::Scale, 0.7)});
  // Resource stress inside a VNF also loads its host.
  pr[11] = {rule(K::CPU, L::SPGW, P::Shift, 40.0),     rule(K::Memory, L::SPGW, P::Shift, 40.0),
            rule(K::Storage, L::SPGW, P::Shift, 50.0), rule(K::CPU, L::SPGWHost, P::Shift, 40.0),
            rule(K::Memory, L::SPGWHost, P::Shift, 30.0), rule(K::Storage, L::SPGWHost, P::Shift, 50.0),
            rule(K::Throughput, L::UE, P::Scale, 0.8)};
  pr[12] = {rule(K::CPU, L::SPGWHost, P::Shift, 50.0), rule(K::Memory, L::SPGWHost, P::Shift, 40.0),
            rule(K::Storage, L::SPGWHost, P::Shift, 50.0), rule(K::Throughput, L::UE, P::Scale, 0.8)};
  pr[13] = {rule(K::CPU, L::Controller, P::Shift, 40.0), rule(K::Memory, L::Controller, P::Shift, 50.0),
            rule(K::Storage, L::Controller, P::Shift, 50.0), rule(K::Throughput, L::UE, P::Scale, 0.8)};
  // Delay: added latency with jitter on the link next to the node.
  pr[14] = {per_sev(rule(K::LinkDelay, L::S1U, P::Shift, 1.0)), rule(K::LinkDelay, L::S1U, P::VarianceInflate, 3.0),
            per_sev(rule(K::RTT, L::UE, P::Shift, 2.0))};
  pr[15] = {per_sev(rule(K::LinkDelay, L::ControllerENB, P::Shift, 1.0)),
            rule(K::LinkDelay, L::ControllerENB, P::VarianceInflate, 3.0),
            always(rule(K::MSD, L::ENB, P::Shift, 4.0)), per_sev(rule(K::RTT, L::UE, P::Shift, 2.0))};
  for (int id : {16, 17}) {
    pr[id] = {per_sev(rule(K::LinkDelay, L::ControllerENB, P::Shift, 1.0)),
              rule(K::LinkDelay, L::ControllerENB, P::VarianceInflate, 3.0),
              always(per_sev(rule(K::RadioRTX, L::Controller, P::Shift, 6.0))), per_sev(rule(K::RTT, L::UE, P::Shift, 2.0))};
  }

  // Bursts on the KPIs closest to each bottleneck.
  for (int id : {1, 2}) {
    pr[id].push_back(spikes(K::RadioRTX, L::Controller, 40.0, 0.05));
    pr[id].push_back(spikes(K::CQI, L::Controller, -3.0, 0.05));
  }
  for (int id : {3, 4, 5}) pr[id].push_back(per_sev(spikes(K::TcpRTX, L::SPGW, 8.0, 0.05)));
  for (int id : {6, 7}) {
    pr[id].push_back(spikes(K::TcpRTX, L::ENB, 20.0, 0.05));
  }
  pr[11].push_back(spikes(K::CPU, L::SPGW, 25.0, 0.05));
  pr[12].push_back(spikes(K::CPU, L::SPGWHost, 25.0, 0.05));
  pr[13].push_back(spikes(K::CPU, L::Controller, 25.0, 0.05));
  pr[14].push_back(spikes(K::LinkDelay, L::S1U, 30.0, 0.05));
  pr[15].push_back(always(spikes(K::MSD, L::ENB, 20.0, 0.05)));
  for (int id : {15, 16, 17}) pr[id].push_back(per_sev(spikes(K::LinkDelay, L::ControllerENB, 1.0, 0.05)));
  // Past a threshold the damage is qualitative: heavy loss collapses the flow
  // and a long eNB delay blows the scheduling budget.
  pr[5].push_back(always(rule(K::Throughput, L::UE, P::Scale, 0.5)));
  pr[5].push_back(always(rule(K::RTT, L::UE, P::Shift, 20.0)));
  pr[5].push_back(always(spikes(K::RTT, L::UE, 100.0, 0.05)));
  pr[5].push_back(always(spikes(K::Throughput, L::UE, -8.0, 0.05)));
  pr[17].push_back(always(rule(K::MSD, L::ENB, P::Shift, 6.0)));

  for (int id = 1; id <= kSingularProfiles; ++id) cfg.profiles.push_back(id);
  return cfg;
}

}  // namespace slicebench

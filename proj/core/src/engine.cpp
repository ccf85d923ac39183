#include "tpp/engine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tpp/errors.hpp"
#include "tpp/network.hpp"
#include "tpp/rng.hpp"

namespace tpp {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone:
      return "none";
    case AttackKind::kFraming:
      return "framing";
    case AttackKind::kFramingDestinationControl:
      return "framing-destination-control";
    case AttackKind::kMuting:
      return "muting";
  }
  return "unknown";
}

AttackKind parse_attack_kind(std::string_view text) {
  for (auto k : {AttackKind::kNone, AttackKind::kFraming,
                 AttackKind::kFramingDestinationControl, AttackKind::kMuting}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown attack kind '" + std::string(text) + "'");
}

void SimConfig::validate() const {
  params.validate();
  if (!graph) throw ConfigError("simulation needs an overlay graph");
  if (graph->node_count() != params.device_count) {
    throw ConfigError("graph node count differs from n");
  }
  const int apps = params.apps_per_month;
  for (AppId a : malicious_app_ids) {
    if (a < 0 || a >= apps) {
      throw ConfigError("malicious app id " + std::to_string(a) +
                        " outside [0, N)");
    }
  }
  if (downloads_per_device < 0 || downloads_per_device > apps) {
    throw ConfigError("downloads must be in [0, N]");
  }
  if (!initial_installs.empty()) {
    if (static_cast<int>(initial_installs.size()) != params.device_count) {
      throw ConfigError("initial_installs needs one list per device");
    }
    for (const auto& list : initial_installs) {
      for (AppId a : list) {
        if (a < 0 || a >= apps) throw ConfigError("initial install outside [0, N)");
      }
    }
  }
  if (arrival_rate < 0.0) throw ConfigError("arrival_rate must be >= 0");
  if (max_steps < 0) throw ConfigError("max_steps must be >= 0");

  const auto& adv = adversary;
  switch (adv.kind) {
    case AttackKind::kNone:
      break;
    case AttackKind::kFraming:
    case AttackKind::kFramingDestinationControl: {
      if (adv.k < 0 || adv.k > params.device_count) {
        throw ConfigError("attack_k must be in [0, n]");
      }
      if (adv.target_app < 0 || adv.target_app >= apps) {
        throw ConfigError("target_app outside [0, N)");
      }
      if (std::find(malicious_app_ids.begin(), malicious_app_ids.end(),
                    adv.target_app) != malicious_app_ids.end()) {
        throw ConfigError("target_app must be benign");
      }
      if (!(adv.deception_goal > 0.0 && adv.deception_goal < 1.0)) {
        throw ConfigError("deception_goal must be in (0, 1)");
      }
      break;
    }
    case AttackKind::kMuting:
      if (!(adv.p_mute >= 0.0 && adv.p_mute < 1.0)) {
        throw ConfigError("p_mute must be in [0, 1)");
      }
      break;
  }
}

namespace {

std::vector<int> partial_shuffle(int population, int count, Rng& rng) {
  std::vector<int> pool(population);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

void launch_framing(const SimConfig& cfg, ProtocolNetwork& net,
                    const std::vector<NodeId>& adversaries, Rng& rng) {
  const auto& p = cfg.params;
  const AlertMessage proto{cfg.adversary.target_app, 0, p.timeout};
  const int X = p.fanout();
  std::size_t first_uniform = 0;

  if (cfg.adversary.kind == AttackKind::kFramingDestinationControl) {
    // Teams of rho share X victims so each victim sees rho distinct origins
    // on the first hop.
    std::vector<char> is_adv(net.size(), 0);
    for (NodeId a : adversaries) is_adv[a] = 1;
    std::vector<NodeId> victims;
    for (NodeId v = 0; v < net.size(); ++v) {
      if (!is_adv[v]) victims.push_back(v);
    }
    for (std::size_t i = 0; i < victims.size(); ++i) {
      std::swap(victims[i], victims[i + rng.below(victims.size() - i)]);
    }
    const std::size_t teams = adversaries.size() / p.rho;
    std::size_t next_victim = 0;
    for (std::size_t t = 0; t < teams; ++t) {
      const std::size_t take = std::min<std::size_t>(X, victims.size() - next_victim);
      for (int m = 0; m < p.rho; ++m) {
        const NodeId a = adversaries[t * p.rho + m];
        AlertMessage msg = proto;
        msg.origin = a;
        for (std::size_t j = 0; j < take; ++j) net.send(victims[next_victim + j], msg);
      }
      next_victim += take;
    }
    first_uniform = teams * p.rho;
  }
  for (std::size_t i = first_uniform; i < adversaries.size(); ++i) {
    AlertMessage msg = proto;
    msg.origin = adversaries[i];
    net.emit(adversaries[i], std::vector<AlertMessage>(X, msg), rng);
  }
}

SimMetrics simulate(const SimConfig& cfg) {
  cfg.validate();
  const auto& p = cfg.params;
  const OverlayGraph& graph = *cfg.graph;
  const int n = p.device_count;

  ProtocolNetwork net(p, graph, Rng::derive(cfg.seed, stream::kDynamics));
  {
    std::vector<char> bad(p.apps_per_month, 0);
    for (AppId a : cfg.malicious_app_ids) bad[a] = 1;
    for (int a = 0; a < p.apps_per_month; ++a) net.add_app(bad[a] != 0);
  }

  Rng phase_rng(Rng::derive(cfg.seed, stream::kPhase));
  std::vector<int> phases(n);
  for (auto& ph : phases) ph = static_cast<int>(phase_rng.below(p.monitor_period));
  net.set_phases(phases);

  if (!cfg.initial_installs.empty()) {
    for (NodeId v = 0; v < n; ++v) {
      for (AppId a : cfg.initial_installs[v]) net.install(v, a);
    }
  } else {
    Rng install_rng(Rng::derive(cfg.seed, stream::kInstall));
    for (NodeId v = 0; v < n; ++v) {
      for (AppId a : partial_shuffle(p.apps_per_month, cfg.downloads_per_device,
                                     install_rng)) {
        net.install(v, a);
      }
    }
  }

  SimMetrics m;
  const auto kind = cfg.adversary.kind;
  const bool framing = kind == AttackKind::kFraming ||
                       kind == AttackKind::kFramingDestinationControl;
  std::vector<NodeId> adversaries;
  if (framing) {
    Rng attack_rng(Rng::derive(cfg.seed, stream::kAttack));
    adversaries = partial_shuffle(n, cfg.adversary.k, attack_rng);
    for (NodeId a : adversaries) net.device(a).role = Role::kFramer;
    launch_framing(cfg, net, adversaries, attack_rng);
    m.adversary_count = static_cast<int>(adversaries.size());
  } else if (kind == AttackKind::kMuting) {
    Rng mute_rng(Rng::derive(cfg.seed, stream::kMute));
    for (NodeId v = 0; v < n; ++v) {
      if (mute_rng.bernoulli(cfg.adversary.p_mute)) {
        net.device(v).role = Role::kMuter;
        ++m.muter_count;
      }
    }
  }

  m.malicious_apps = net.catalog().malicious_ids();

  std::size_t recorded = 0;
  auto record = [&]() {
    if (!cfg.record_series) return;
    // Apps released mid-run start with full penetration before release.
    m.penetration_by_step.resize(m.malicious_apps.size(),
                                 std::vector<double>(recorded, 1.0));
    for (std::size_t i = 0; i < m.malicious_apps.size(); ++i) {
      m.penetration_by_step[i].push_back(net.penetration(m.malicious_apps[i]));
    }
    m.messages_by_step.push_back(net.messages_sent());
    m.monitorings_by_step.push_back(net.monitorings());
    ++recorded;
  };
  auto complete = [&]() {
    for (AppId a : m.malicious_apps) {
      if (net.penetration(a) > p.penetration_threshold) return false;
    }
    return true;
  };
  auto finished = [&]() {
    if (!m.completion_step || cfg.arrival_rate > 0.0) return false;
    return !framing || net.in_flight_for(cfg.adversary.target_app) == 0;
  };

  const bool can_stall = cfg.arrival_rate == 0.0 && p.false_positive == 0.0;
  auto frozen = [&]() {
    for (NodeId v = 0; v < n; ++v) {
      for (AppId a : net.device(v).suspected) {
        if (net.catalog().is_malicious(a)) return false;
      }
    }
    return true;
  };

  record();
  if (complete()) m.completion_step = 0;

  Rng arrival_rng(Rng::derive(cfg.seed, stream::kCatalog));
  std::int64_t t = 0;
  while (t < cfg.max_steps && !finished()) {
    ++t;
    net.deliver_round();
    if (cfg.arrival_rate > 0.0) {
      const auto arrivals = arrival_rng.poisson(cfg.arrival_rate);
      for (std::uint64_t i = 0; i < arrivals; ++i) {
        const bool bad = arrival_rng.bernoulli(cfg.arrival_malicious_fraction);
        const AppId a = net.add_app(bad, t);
        if (bad) m.malicious_apps.push_back(a);
        for (NodeId v = 0; v < n; ++v) {
          if (arrival_rng.bernoulli(cfg.arrival_install_probability)) net.install(v, a);
        }
      }
    }
    net.monitor_round(t);
    record();
    if (!m.completion_step && complete()) m.completion_step = t;
    if (can_stall && !m.completion_step && t % p.monitor_period == 0 &&
        net.in_flight() == 0 && frozen()) {
      m.stalled = true;
      break;
    }
  }

  m.steps_run = t;
  for (AppId a : m.malicious_apps) m.final_penetration.push_back(net.penetration(a));
  m.messages_sent = net.messages_sent();
  m.monitorings = net.monitorings();
  m.alert_batches = net.alert_batches();
  m.detections = net.detections();
  m.hop_histogram = net.hop_histogram();
  m.in_flight_at_end = net.in_flight();
  m.total_cost = p.message_cost * static_cast<double>(m.messages_sent) +
                 p.monitor_cost * static_cast<double>(m.alert_batches);

  if (framing) {
    const AppId target = cfg.adversary.target_app;
    for (NodeId v = 0; v < n; ++v) {
      const auto& d = net.device(v);
      if (d.role != Role::kFramer && d.known_malicious.contains(target)) {
        ++m.deceived_count;
      }
    }
    m.attack_success = m.deceived_count >= cfg.adversary.deception_goal * n;
  }
  return m;
}

}  // namespace

SimMetrics run(const SimConfig& config) { return simulate(config); }

SimMetrics run_framing_attack(const SimConfig& config) {
  const auto kind = config.adversary.kind;
  if (kind != AttackKind::kFraming && kind != AttackKind::kFramingDestinationControl) {
    throw ConfigError("run_framing_attack needs a framing adversary");
  }
  return simulate(config);
}

SimMetrics run_muting(const SimConfig& config) {
  if (config.adversary.kind != AttackKind::kMuting) {
    throw ConfigError("run_muting needs a muting adversary");
  }
  return simulate(config);
}

std::optional<std::int64_t> run_coverage_experiment(const OverlayGraph& graph,
                                                    int k, int rho,
                                                    std::int64_t timeout_cap,
                                                    std::uint64_t seed) {
  if (k < 1) return std::nullopt;
  if (rho < 1) throw ParameterError("rho must be >= 1");
  const int n = graph.node_count();
  Rng rng(Rng::derive(seed, stream::kWalk));
  std::vector<int> visits(n, 0);
  int covered = 0;
  auto visit = [&](NodeId v) {
    if (++visits[v] == rho) ++covered;
  };
  std::vector<NodeId> pos(k);
  for (auto& w : pos) {
    w = static_cast<NodeId>(rng.below(n));
    visit(w);
  }
  if (covered == n) return 0;
  for (std::int64_t step = 1; step <= timeout_cap; ++step) {
    for (auto& w : pos) {
      w = sample_destination(graph, w, rng);
      visit(w);
    }
    if (covered == n) return step;
  }
  return std::nullopt;
}

std::optional<std::int64_t> run_coverage_experiment(int n, double p_N, int k,
                                                    int rho,
                                                    std::int64_t timeout_cap,
                                                    std::uint64_t seed) {
  if (k < 1) return std::nullopt;
  return run_coverage_experiment(generate_gnp(n, p_N, seed), k, rho, timeout_cap,
                                 seed);
}

}  // namespace tpp

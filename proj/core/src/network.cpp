#include "tpp/network.hpp"

#include <algorithm>

#include "tpp/errors.hpp"

namespace tpp {

ProtocolNetwork::ProtocolNetwork(const ProtocolParams& params,
                                 const OverlayGraph& graph,
                                 std::uint64_t dynamics_seed)
    : params_(params),
      graph_(graph),
      devices_(graph.node_count()),
      phase_buckets_(params.monitor_period),
      hop_histogram_(params.timeout + 1, 0),
      rng_(dynamics_seed) {
  if (graph.node_count() != params.device_count) {
    throw ConfigError("graph has " + std::to_string(graph.node_count()) +
                      " nodes but n = " + std::to_string(params.device_count));
  }
  for (NodeId v = 0; v < size(); ++v) {
    devices_[v].id = v;
    phase_buckets_[0].push_back(v);
  }
}

AppId ProtocolNetwork::add_app(bool malicious, std::int64_t release_step) {
  aware_.push_back(0);
  in_flight_by_app_.push_back(0);
  return catalog_.add(malicious, release_step);
}

void ProtocolNetwork::set_phases(const std::vector<int>& phases) {
  for (auto& bucket : phase_buckets_) bucket.clear();
  for (NodeId v = 0; v < size(); ++v) {
    const int phase = phases.at(v);
    if (phase < 0 || phase >= params_.monitor_period) {
      throw ConfigError("monitor phase out of range");
    }
    devices_[v].next_monitor_step = phase;
    phase_buckets_[phase].push_back(v);
  }
}

bool ProtocolNetwork::install(NodeId v, AppId app) {
  auto& d = devices_[v];
  if (on_new_application(d, catalog_.at(app))) return true;
  d.installed.insert(app);
  return false;
}

void ProtocolNetwork::note_classified(AppId app) { ++aware_[app]; }

void ProtocolNetwork::deliver(NodeId to, const AlertMessage& msg, int hops,
                              std::vector<InFlight>& out) {
  ++messages_sent_;
  const AlertOutcome r = on_alert(devices_[to], msg, params_);
  if (r.newly_classified) note_classified(msg.app_id);
  if (r.forward) {
    out.push_back({r.next, to, hops});
  } else {
    --in_flight_by_app_[msg.app_id];
    ++hop_histogram_[hops];
  }
}

void ProtocolNetwork::deliver_round() {
  scratch_.clear();
  std::swap(scratch_, pending_);
  for (const auto& m : scratch_) {
    deliver(sample_destination(graph_, m.holder, rng_), m.msg, m.hops + 1, pending_);
  }
}

void ProtocolNetwork::send(NodeId to, const AlertMessage& msg) {
  if (msg.ttl < 1 || msg.ttl > params_.timeout) {
    throw ConfigError("alert ttl outside [1, timeout]");
  }
  ++in_flight_by_app_[msg.app_id];
  deliver(to, msg, 1, pending_);
}

void ProtocolNetwork::emit(NodeId origin, const std::vector<AlertMessage>& alerts,
                           Rng& rng) {
  if (alerts.empty()) return;
  const int count = std::min<int>(static_cast<int>(alerts.size()),
                                  graph_.reachable_count(origin));
  if (count < 1) return;
  const auto targets = sample_destinations(graph_, origin, count, rng);
  for (int i = 0; i < count; ++i) send(targets[i], alerts[i]);
}

void ProtocolNetwork::monitor_round(std::int64_t step) {
  const auto& bucket = phase_buckets_[step % params_.monitor_period];
  for (NodeId v : bucket) {
    ++monitorings_;
    MonitorOutcome r = monitor_tick(devices_[v], catalog_, params_, rng_);
    if (!r.detected) continue;
    ++detections_;
    note_classified(r.app);
    if (r.alerts.empty()) continue;
    ++alert_batches_;
    emit(v, r.alerts, rng_);
  }
}

void ProtocolNetwork::reset_device(NodeId v) {
  auto& d = devices_[v];
  for (AppId a : d.known_malicious) --aware_[a];
  d.reset_knowledge();
}

}  // namespace tpp

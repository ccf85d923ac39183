#pragma once

#include <cstdint>
#include <vector>

#include "tpp/overlay.hpp"
#include "tpp/protocol.hpp"
#include "tpp/rng.hpp"

namespace tpp {

/// All devices of one run plus the in-flight alert tokens. Drives the
/// per-round protocol mechanics shared by the engine and the epidemic model.
class ProtocolNetwork {
 public:
  ProtocolNetwork(const ProtocolParams& params, const OverlayGraph& graph,
                  std::uint64_t dynamics_seed);

  const ProtocolParams& params() const noexcept { return params_; }
  const OverlayGraph& graph() const noexcept { return graph_; }
  int size() const noexcept { return static_cast<int>(devices_.size()); }

  DeviceState& device(NodeId v) { return devices_[v]; }
  const DeviceState& device(NodeId v) const { return devices_[v]; }

  AppCatalog& catalog() noexcept { return catalog_; }
  const AppCatalog& catalog() const noexcept { return catalog_; }
  AppId add_app(bool malicious, std::int64_t release_step = 0);

  /// Sets the monitoring phase of every device (values in [0, T)).
  void set_phases(const std::vector<int>& phases);

  /// New-application interrupt plus installation. Returns true when the
  /// install was blocked because the app is already known malicious.
  bool install(NodeId v, AppId app);

  /// Moves every in-flight message one hop.
  void deliver_round();
  /// Runs monitor_tick on devices whose phase matches `step` and sends the
  /// resulting alerts their first hop.
  void monitor_round(std::int64_t step);

  /// First hop of a batch from `origin`, to distinct destinations drawn from
  /// `rng` (at most the reachable pool size).
  void emit(NodeId origin, const std::vector<AlertMessage>& alerts, Rng& rng);
  /// First hop of one message to an explicit destination.
  void send(NodeId to, const AlertMessage& msg);

  /// Churn: device keeps id, role and phase but forgets everything.
  void reset_device(NodeId v);

  /// Devices whose known-malicious list holds `app`.
  int aware_count(AppId app) const { return aware_[app]; }
  double penetration(AppId app) const {
    return 1.0 - static_cast<double>(aware_[app]) / size();
  }
  std::size_t in_flight() const noexcept { return pending_.size(); }
  std::int64_t in_flight_for(AppId app) const { return in_flight_by_app_[app]; }

  std::uint64_t messages_sent() const noexcept { return messages_sent_; }
  std::uint64_t monitorings() const noexcept { return monitorings_; }
  std::uint64_t alert_batches() const noexcept { return alert_batches_; }
  std::uint64_t detections() const noexcept { return detections_; }
  /// hop_histogram()[h] = messages that died after exactly h hops.
  const std::vector<std::uint64_t>& hop_histogram() const noexcept {
    return hop_histogram_;
  }

  Rng& rng() noexcept { return rng_; }

 private:
  struct InFlight {
    AlertMessage msg;
    NodeId holder;
    int hops;  // made so far, including the one that reached holder
  };

  void deliver(NodeId to, const AlertMessage& msg, int hops,
               std::vector<InFlight>& out);
  void note_classified(AppId app);

  ProtocolParams params_;
  const OverlayGraph& graph_;
  AppCatalog catalog_;
  std::vector<DeviceState> devices_;
  std::vector<std::vector<NodeId>> phase_buckets_;
  std::vector<InFlight> pending_;
  std::vector<InFlight> scratch_;
  std::vector<int> aware_;
  std::vector<std::int64_t> in_flight_by_app_;
  std::vector<std::uint64_t> hop_histogram_;
  std::uint64_t messages_sent_ = 0;
  std::uint64_t monitorings_ = 0;
  std::uint64_t alert_batches_ = 0;
  std::uint64_t detections_ = 0;
  Rng rng_;
};

}  // namespace tpp

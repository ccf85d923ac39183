#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "tpp/overlay.hpp"
#include "tpp/protocol.hpp"

namespace tpp {

enum class AttackKind { kNone, kFraming, kFramingDestinationControl, kMuting };

std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

struct AttackConfig {
  AttackKind kind = AttackKind::kNone;
  int k = 0;                    // adversary count (framing kinds)
  AppId target_app = 0;         // benign app the framers accuse
  double p_mute = 0.0;          // muting probability per device
  double deception_goal = 0.05; // fraction of devices to deceive
};

struct SimConfig {
  ProtocolParams params;
  std::shared_ptr<const OverlayGraph> graph;
  std::vector<AppId> malicious_app_ids;   // subset of [0, N)
  int downloads_per_device = 30;          // installs per device at t = 0
  /// Overrides the random t = 0 installs when non-empty (one list per device).
  std::vector<std::vector<AppId>> initial_installs;
  /// Poisson arrivals of new apps per step after t = 0; 0 disables.
  double arrival_rate = 0.0;
  double arrival_malicious_fraction = 0.0;
  double arrival_install_probability = 0.0;
  AttackConfig adversary;
  std::int64_t max_steps = 1'000'000;
  std::uint64_t seed = 1;
  bool record_series = true;

  /// Throws ConfigError / ParameterError on inconsistent settings.
  void validate() const;
};

struct SimMetrics {
  std::vector<AppId> malicious_apps;
  /// penetration_by_step[i][t] for malicious_apps[i], t = 0..steps_run.
  std::vector<std::vector<double>> penetration_by_step;
  std::vector<double> final_penetration;
  /// Cumulative counters per recorded step (same length as each series).
  std::vector<std::uint64_t> messages_by_step;
  std::vector<std::uint64_t> monitorings_by_step;
  std::uint64_t messages_sent = 0;
  std::uint64_t monitorings = 0;
  std::uint64_t alert_batches = 0;
  std::uint64_t detections = 0;
  std::vector<std::uint64_t> hop_histogram;
  std::uint64_t in_flight_at_end = 0;
  std::optional<std::int64_t> completion_step;
  std::int64_t steps_run = 0;
  /// No message in flight and no device still suspects a malicious app, so
  /// penetration can never change again.
  bool stalled = false;
  int adversary_count = 0;
  int muter_count = 0;
  int deceived_count = 0;
  bool attack_success = false;
  /// C_S * messages_sent + C_M * alert_batches.
  double total_cost = 0.0;

  bool operator==(const SimMetrics&) const = default;
};

/// Synchronous-round simulation of the protocol. Dispatches on the adversary
/// kind, so framing and muting configs are accepted as well.
SimMetrics run(const SimConfig& config);
SimMetrics run_framing_attack(const SimConfig& config);
SimMetrics run_muting(const SimConfig& config);

/// k random walkers on G(n, p_N); returns the first step at which every node
/// has been visited at least rho times, or nullopt past timeout_cap (or k = 0).
std::optional<std::int64_t> run_coverage_experiment(int n, double p_N, int k,
                                                    int rho,
                                                    std::int64_t timeout_cap,
                                                    std::uint64_t seed);
std::optional<std::int64_t> run_coverage_experiment(const OverlayGraph& graph,
                                                    int k, int rho,
                                                    std::int64_t timeout_cap,
                                                    std::uint64_t seed);

}  // namespace tpp

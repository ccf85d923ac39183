#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tpp/overlay.hpp"
#include "tpp/protocol.hpp"

namespace tpp {

struct EpidemicConfig {
  /// n, N (apps released per month) and the protocol constants. The
  /// monitoring period and timeout are in protocol steps.
  ProtocolParams params;
  std::shared_ptr<const OverlayGraph> graph;    // contact graph
  std::shared_ptr<const OverlayGraph> overlay;  // alert overlay; null = graph
  double monthly_downloads = 50.0;   // eta, per device
  double new_fraction = 0.1;         // eta_n / eta
  double malicious_fraction = 0.005;
  int initial_months = 6;            // catalog released before t = 0
  double beta = 0.01;                // per-step contact infection probability
  double gamma = 0.05;               // per-step recovery probability
  double churn = 0.002;              // per-step device replacement probability
  int months = 12;
  int steps_per_month = 30;
  int protocol_steps_per_step = 24;
  bool tpp_enabled = true;
  std::uint64_t seed = 1;

  void validate() const;
};

struct EpidemicSeries {
  /// Index t covers step t; entry 0 is the initial state.
  std::vector<int> susceptible;
  std::vector<int> infected;
  std::vector<int> recovered;
  std::vector<std::uint64_t> cumulative_incidents;
  std::uint64_t direct_incidents = 0;   // malicious downloads installed
  std::uint64_t contact_incidents = 0;  // installs through an infected contact
  std::uint64_t blocked_installs = 0;   // prevented by the known-malicious list
  /// Infections by an app the device already knew; stays 0 by construction.
  std::uint64_t vaccination_violations = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t monitorings = 0;
  int malicious_apps = 0;

  std::uint64_t total_incidents() const {
    return cumulative_incidents.empty() ? 0 : cumulative_incidents.back();
  }
  /// Mean infected count over the final `fraction` of the steps.
  double steady_state_infected(double fraction = 0.5) const;
};

EpidemicSeries run_epidemic(const EpidemicConfig& config);

}  // namespace tpp

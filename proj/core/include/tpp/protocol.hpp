#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "tpp/overlay.hpp"
#include "tpp/rng.hpp"

namespace tpp {

using AppId = int;

/// Protocol and cost constants. Field comments give the usual symbol.
struct ProtocolParams {
  int device_count = 1000;             // n
  int apps_per_month = 100;            // N
  double fanout_probability = 0.01;    // p_N
  double penetration_threshold = 0.01; // p_MAX
  int rho = 1;                         // distinct origins needed to classify
  int monitor_period = 168;            // T, steps between monitorings
  double false_negative = 0.0;         // E_-
  double false_positive = 0.0;         // E_+
  int timeout = 30;                    // initial TTL
  double alpha = 1.0;                  // epsilon = n^-alpha
  double monitor_rate = 1.0 / 168.0;   // lambda_M, monitorings per time unit
  double step_rate = 1.0;              // lambda_T, steps per time unit
  double message_cost = 1.0;           // C_S
  double monitor_cost = 1.0;           // C_M

  double epsilon() const;
  /// X = round(n * p_N), at least 1.
  int fanout() const;
  /// Throws ParameterError naming the first field out of its domain.
  void validate() const;

  bool operator==(const ProtocolParams&) const = default;
};

struct Application {
  AppId id = 0;
  bool malicious = false;
  std::int64_t release_step = 0;
};

/// Applications indexed by id; ids are dense and assigned on insertion.
class AppCatalog {
 public:
  AppId add(bool malicious, std::int64_t release_step = 0);

  std::size_t size() const noexcept { return apps_.size(); }
  const Application& at(AppId id) const { return apps_.at(id); }
  bool is_malicious(AppId id) const { return apps_.at(id).malicious; }
  std::vector<AppId> malicious_ids() const;

 private:
  std::vector<Application> apps_;
};

struct AlertMessage {
  AppId app_id = 0;
  NodeId origin = 0;
  int ttl = 0;

  bool operator==(const AlertMessage&) const = default;
};

enum class Role { kHonest, kFramer, kMuter };

std::string_view to_string(Role role);

/// Small ordered set of ints backed by a sorted vector.
class SortedSet {
 public:
  bool insert(int value);
  bool erase(int value);
  bool contains(int value) const;
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  int operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  void clear() noexcept { items_.clear(); }

  bool operator==(const SortedSet&) const = default;

 private:
  std::vector<int> items_;
};

struct DeviceState {
  NodeId id = 0;
  Role role = Role::kHonest;
  int next_monitor_step = 0;  // phase in [0, T)
  SortedSet installed;        // A(v)
  SortedSet suspected;        // suspected list
  SortedSet known_malicious;  // known-malicious list
  std::map<AppId, SortedSet> alert_origins;

  int origin_count(AppId app) const;
  /// Fresh device with the same id, role and phase (churn replacement).
  void reset_knowledge();
};

/// Returns true when the application is already known malicious; the caller
/// must then block the installation.
bool on_new_application(DeviceState& device, const Application& app);

struct AlertOutcome {
  bool forward = false;
  AlertMessage next;              // valid when forward
  bool newly_classified = false;  // app entered known_malicious on this call
  bool user_alert = false;        // classified app was installed
};

AlertOutcome on_alert(DeviceState& device, const AlertMessage& msg,
                      const ProtocolParams& params);

struct MonitorOutcome {
  bool examined = false;
  AppId app = 0;
  bool detected = false;              // app entered known_malicious
  std::vector<AlertMessage> alerts;   // empty for muters
};

/// One monitoring of a random suspected application. Detected apps yield X
/// alerts with ttl = timeout unless the device is a muter.
MonitorOutcome monitor_tick(DeviceState& device, const AppCatalog& catalog,
                            const ProtocolParams& params, Rng& rng);

}  // namespace tpp

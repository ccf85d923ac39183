#include "tpp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tpp/errors.hpp"

namespace tpp {

double ProtocolParams::epsilon() const {
  return std::pow(static_cast<double>(device_count), -alpha);
}

int ProtocolParams::fanout() const {
  const auto x = std::lround(device_count * fanout_probability);
  return static_cast<int>(std::max<long>(1, x));
}

void ProtocolParams::validate() const {
  auto fail = [](const char* field, const std::string& rule) {
    throw ParameterError(std::string(field) + " " + rule);
  };
  if (device_count < 2) fail("n", "must be >= 2");
  if (apps_per_month < 1) fail("N", "must be >= 1");
  if (!(fanout_probability > 0.0 && fanout_probability <= 1.0)) {
    fail("p_N", "must be in (0, 1]");
  }
  if (!(penetration_threshold > 0.0 && penetration_threshold < 1.0)) {
    fail("p_max", "must be in (0, 1)");
  }
  if (rho < 1) fail("rho", "must be >= 1");
  if (monitor_period < 1) fail("T", "must be >= 1");
  if (!(false_negative >= 0.0 && false_negative < 1.0)) {
    fail("e_minus", "must be in [0, 1)");
  }
  if (!(false_positive >= 0.0 && false_positive <= 1.0)) {
    fail("e_plus", "must be in [0, 1]");
  }
  if (timeout < 1) fail("timeout", "must be >= 1");
  if (!(alpha > 0.0)) fail("alpha", "must be > 0");
  if (!(monitor_rate >= 0.0)) fail("lambda_M", "must be >= 0");
  if (!(step_rate > 0.0)) fail("lambda_T", "must be > 0");
  if (!(message_cost >= 0.0)) fail("C_S", "must be >= 0");
  if (!(monitor_cost >= 0.0)) fail("C_M", "must be >= 0");
}

AppId AppCatalog::add(bool malicious, std::int64_t release_step) {
  const auto id = static_cast<AppId>(apps_.size());
  apps_.push_back({id, malicious, release_step});
  return id;
}

std::vector<AppId> AppCatalog::malicious_ids() const {
  std::vector<AppId> out;
  for (const auto& a : apps_) {
    if (a.malicious) out.push_back(a.id);
  }
  return out;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kHonest:
      return "honest";
    case Role::kFramer:
      return "framer";
    case Role::kMuter:
      return "muter";
  }
  return "unknown";
}

bool SortedSet::insert(int value) {
  auto it = std::lower_bound(items_.begin(), items_.end(), value);
  if (it != items_.end() && *it == value) return false;
  items_.insert(it, value);
  return true;
}

bool SortedSet::erase(int value) {
  auto it = std::lower_bound(items_.begin(), items_.end(), value);
  if (it == items_.end() || *it != value) return false;
  items_.erase(it);
  return true;
}

bool SortedSet::contains(int value) const {
  return std::binary_search(items_.begin(), items_.end(), value);
}

int DeviceState::origin_count(AppId app) const {
  auto it = alert_origins.find(app);
  return it == alert_origins.end() ? 0 : static_cast<int>(it->second.size());
}

void DeviceState::reset_knowledge() {
  installed.clear();
  suspected.clear();
  known_malicious.clear();
  alert_origins.clear();
}

bool on_new_application(DeviceState& device, const Application& app) {
  device.suspected.insert(app.id);
  if (device.known_malicious.contains(app.id)) {
    device.suspected.erase(app.id);
    return true;
  }
  return false;
}

AlertOutcome on_alert(DeviceState& device, const AlertMessage& msg,
                      const ProtocolParams& params) {
  AlertOutcome out;
  auto& origins = device.alert_origins[msg.app_id];
  origins.insert(msg.origin);
  if (static_cast<int>(origins.size()) >= params.rho &&
      !device.known_malicious.contains(msg.app_id)) {
    device.suspected.erase(msg.app_id);
    device.known_malicious.insert(msg.app_id);
    out.newly_classified = true;
    out.user_alert = device.installed.contains(msg.app_id);
  }
  const int remaining = msg.ttl - 1;
  if (remaining >= 1 && device.role != Role::kMuter) {
    out.forward = true;
    out.next = {msg.app_id, msg.origin, remaining};
  }
  return out;
}

MonitorOutcome monitor_tick(DeviceState& device, const AppCatalog& catalog,
                            const ProtocolParams& params, Rng& rng) {
  MonitorOutcome out;
  if (device.suspected.empty()) return out;
  const AppId app = device.suspected[rng.below(device.suspected.size())];
  out.examined = true;
  out.app = app;
  const double hit = catalog.is_malicious(app) ? 1.0 - params.false_negative
                                               : params.false_positive;
  if (!rng.bernoulli(hit)) return out;

  device.suspected.erase(app);
  device.known_malicious.insert(app);
  out.detected = true;
  if (device.role == Role::kMuter) return out;
  out.alerts.assign(params.fanout(), AlertMessage{app, device.id, params.timeout});
  return out;
}

}  // namespace tpp

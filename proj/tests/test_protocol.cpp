#include <gtest/gtest.h>

#include <cmath>

#include "tpp/errors.hpp"
#include "tpp/protocol.hpp"

using namespace tpp;

namespace {

ProtocolParams small_params(int rho, int timeout = 8) {
  ProtocolParams p;
  p.device_count = 1000;
  p.fanout_probability = 0.01;  // X = 10
  p.rho = rho;
  p.timeout = timeout;
  return p;
}

}  // namespace

TEST(Params, DefaultsValidate) {
  ProtocolParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.fanout(), 10);
  EXPECT_DOUBLE_EQ(p.epsilon(), 0.001);
}

TEST(Params, FanoutRoundsAndFloorsAtOne) {
  ProtocolParams p;
  p.device_count = 94;
  p.fanout_probability = 0.092123;  // 8.66
  EXPECT_EQ(p.fanout(), 9);
  p.fanout_probability = 0.001;
  EXPECT_EQ(p.fanout(), 1);
}

TEST(Params, ErrorsNameTheKey) {
  auto message = [](auto mutate) {
    ProtocolParams p;
    mutate(p);
    try {
      p.validate();
    } catch (const ParameterError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(message([](auto& p) { p.rho = 0; }).rfind("rho", 0), 0u);
  EXPECT_EQ(message([](auto& p) { p.penetration_threshold = 1.0; }).rfind("p_max", 0), 0u);
  EXPECT_EQ(message([](auto& p) { p.timeout = 0; }).rfind("timeout", 0), 0u);
  EXPECT_EQ(message([](auto& p) { p.false_negative = 1.0; }).rfind("e_minus", 0), 0u);
  EXPECT_EQ(message([](auto& p) { p.alpha = 0.0; }).rfind("alpha", 0), 0u);
}

TEST(Catalog, DenseIds) {
  AppCatalog c;
  EXPECT_EQ(c.add(false), 0);
  EXPECT_EQ(c.add(true, 5), 1);
  EXPECT_EQ(c.add(false), 2);
  EXPECT_EQ(c.malicious_ids(), std::vector<AppId>{1});
  EXPECT_EQ(c.at(1).release_step, 5);
}

TEST(NewApplication, FreshDeviceBenignApp) {
  DeviceState d;
  EXPECT_FALSE(on_new_application(d, {4, false, 0}));
  EXPECT_TRUE(d.suspected.contains(4));
  EXPECT_EQ(d.suspected.size(), 1u);
}

TEST(NewApplication, KnownMaliciousIsBlocked) {
  DeviceState d;
  d.known_malicious.insert(4);
  EXPECT_TRUE(on_new_application(d, {4, true, 0}));
  EXPECT_FALSE(d.suspected.contains(4));
}

TEST(NewApplication, Idempotent) {
  DeviceState d;
  on_new_application(d, {4, false, 0});
  const auto before = d.suspected;
  on_new_application(d, {4, false, 0});
  EXPECT_EQ(d.suspected, before);
}

TEST(Alert, ThresholdOneClassifiesAndForwards) {
  DeviceState d;
  d.suspected.insert(5);
  const auto out = on_alert(d, {5, 17, 3}, small_params(1));
  EXPECT_TRUE(d.known_malicious.contains(5));
  EXPECT_FALSE(d.suspected.contains(5));
  EXPECT_TRUE(out.newly_classified);
  ASSERT_TRUE(out.forward);
  EXPECT_EQ(out.next, (AlertMessage{5, 17, 2}));
}

TEST(Alert, LastHopIsNotForwarded) {
  DeviceState d;
  d.suspected.insert(5);
  const auto p = small_params(3);
  on_alert(d, {5, 1, 4}, p);
  const auto out = on_alert(d, {5, 2, 1}, p);
  EXPECT_EQ(d.origin_count(5), 2);
  EXPECT_TRUE(d.suspected.contains(5));
  EXPECT_FALSE(d.known_malicious.contains(5));
  EXPECT_FALSE(out.forward);
}

TEST(Alert, DuplicateOriginIgnoredButForwarded) {
  DeviceState d;
  const auto p = small_params(3);
  on_alert(d, {5, 1, 4}, p);
  const auto out = on_alert(d, {5, 1, 4}, p);
  EXPECT_EQ(d.origin_count(5), 1);
  EXPECT_FALSE(d.known_malicious.contains(5));
  EXPECT_TRUE(out.forward);
}

TEST(Alert, ThirdDistinctOriginClassifiesOnce) {
  DeviceState d;
  d.installed.insert(5);
  const auto p = small_params(3);
  on_alert(d, {5, 1, 4}, p);
  on_alert(d, {5, 2, 4}, p);
  const auto third = on_alert(d, {5, 3, 4}, p);
  EXPECT_TRUE(third.newly_classified);
  EXPECT_TRUE(third.user_alert);
  const auto fourth = on_alert(d, {5, 4, 4}, p);
  EXPECT_FALSE(fourth.newly_classified);
  EXPECT_EQ(d.origin_count(5), 4);
}

TEST(Alert, MuterRecordsButNeverForwards) {
  DeviceState d;
  d.role = Role::kMuter;
  const auto out = on_alert(d, {5, 1, 9}, small_params(1));
  EXPECT_TRUE(d.known_malicious.contains(5));
  EXPECT_FALSE(out.forward);
}

TEST(Monitor, MaliciousDetectedDeterministically) {
  AppCatalog c;
  const AppId m = c.add(true);
  DeviceState d;
  d.id = 42;
  d.suspected.insert(m);
  Rng rng(1);
  const auto out = monitor_tick(d, c, small_params(1, 8), rng);
  EXPECT_TRUE(out.detected);
  ASSERT_EQ(out.alerts.size(), 10u);
  for (const auto& a : out.alerts) EXPECT_EQ(a, (AlertMessage{m, 42, 8}));
  EXPECT_TRUE(d.known_malicious.contains(m));
  EXPECT_TRUE(d.suspected.empty());
}

TEST(Monitor, BenignStaysSuspected) {
  AppCatalog c;
  const AppId b = c.add(false);
  DeviceState d;
  d.suspected.insert(b);
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto out = monitor_tick(d, c, small_params(1), rng);
    EXPECT_TRUE(out.examined);
    EXPECT_TRUE(out.alerts.empty());
  }
  EXPECT_TRUE(d.suspected.contains(b));
  EXPECT_TRUE(d.known_malicious.empty());
}

TEST(Monitor, EmptySuspectedIsNoop) {
  AppCatalog c;
  c.add(true);
  DeviceState d;
  Rng rng(1);
  const auto before = d.known_malicious;
  const auto out = monitor_tick(d, c, small_params(1), rng);
  EXPECT_FALSE(out.examined);
  EXPECT_TRUE(out.alerts.empty());
  EXPECT_EQ(d.known_malicious, before);
}

TEST(Monitor, FalseNegativeRate) {
  AppCatalog c;
  const AppId m = c.add(true);
  auto p = small_params(1);
  p.false_negative = 0.25;
  Rng rng(5);
  int hits = 0;
  constexpr int kTrials = 20000;
  for (int i = 0; i < kTrials; ++i) {
    DeviceState d;
    d.suspected.insert(m);
    hits += monitor_tick(d, c, p, rng).detected;
  }
  EXPECT_NEAR(hits / double(kTrials), 0.75, 4 * std::sqrt(0.75 * 0.25 / kTrials));
}

TEST(Monitor, MuterDetectsSilently) {
  AppCatalog c;
  const AppId m = c.add(true);
  DeviceState d;
  d.role = Role::kMuter;
  d.suspected.insert(m);
  Rng rng(1);
  const auto out = monitor_tick(d, c, small_params(1), rng);
  EXPECT_TRUE(out.detected);
  EXPECT_TRUE(out.alerts.empty());
}

TEST(Device, ResetKeepsIdentity) {
  DeviceState d;
  d.id = 3;
  d.role = Role::kFramer;
  d.next_monitor_step = 11;
  d.installed.insert(1);
  d.known_malicious.insert(2);
  d.alert_origins[2].insert(9);
  d.reset_knowledge();
  EXPECT_EQ(d.id, 3);
  EXPECT_EQ(d.role, Role::kFramer);
  EXPECT_EQ(d.next_monitor_step, 11);
  EXPECT_TRUE(d.installed.empty() && d.known_malicious.empty() && d.alert_origins.empty());
}

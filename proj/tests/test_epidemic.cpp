#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "tpp/analytics.hpp"
#include "tpp/epidemic.hpp"
#include "tpp/errors.hpp"

using namespace tpp;

namespace {

EpidemicConfig small_config(std::uint64_t seed, bool tpp) {
  EpidemicConfig c;
  c.params.device_count = 300;
  c.params.apps_per_month = 20;
  c.params.fanout_probability = 0.03;
  c.params.penetration_threshold = 0.05;
  c.params.monitor_period = 24;
  c.params.rho = 1;
  c.params.timeout = static_cast<int>(std::ceil(solve_timeout(c.params)));
  c.graph = std::make_shared<OverlayGraph>(generate_gnp(300, 0.03, 11));
  c.monthly_downloads = 30;
  c.malicious_fraction = 0.05;  // exactly one malicious app per release
  c.months = 4;
  c.tpp_enabled = tpp;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Epidemic, NoMaliciousAppsNoIncidents) {
  auto c = small_config(1, true);
  c.malicious_fraction = 0.0;
  const auto s = run_epidemic(c);
  EXPECT_EQ(s.total_incidents(), 0u);
  EXPECT_EQ(s.malicious_apps, 0);
  for (int i : s.infected) EXPECT_EQ(i, 0);
}

TEST(Epidemic, CompartmentsConserveAndIncidentsGrow) {
  const auto s = run_epidemic(small_config(2, true));
  const std::size_t steps = 4 * 30 + 1;
  ASSERT_EQ(s.infected.size(), steps);
  for (std::size_t t = 0; t < steps; ++t) {
    ASSERT_EQ(s.susceptible[t] + s.infected[t] + s.recovered[t], 300);
    if (t > 0) ASSERT_GE(s.cumulative_incidents[t], s.cumulative_incidents[t - 1]);
  }
  EXPECT_EQ(s.total_incidents(), s.direct_incidents + s.contact_incidents);
  EXPECT_EQ(s.vaccination_violations, 0u);
  EXPECT_GT(s.messages_sent, 0u);
}

TEST(Epidemic, DirectIncidentRateWithoutContagion) {
  auto c = small_config(3, false);
  c.beta = 0.0;
  const auto s = run_epidemic(c);
  const double expected = 300.0 * 30 * 0.05 * 4;
  EXPECT_EQ(s.contact_incidents, 0u);
  EXPECT_NEAR(static_cast<double>(s.total_incidents()), expected, 3 * std::sqrt(expected));
  EXPECT_EQ(s.messages_sent, 0u);
  EXPECT_EQ(s.blocked_installs, 0u);
}

TEST(Epidemic, ProtectionReducesIncidents) {
  std::uint64_t control = 0, protected_ = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto a = run_epidemic(small_config(seed, false));
    const auto b = run_epidemic(small_config(seed, true));
    control += a.total_incidents();
    protected_ += b.total_incidents();
    EXPECT_GT(b.blocked_installs, 0u);
    EXPECT_EQ(b.vaccination_violations, 0u);
  }
  EXPECT_LT(protected_, control);
}

TEST(Epidemic, Deterministic) {
  const auto a = run_epidemic(small_config(9, true));
  const auto b = run_epidemic(small_config(9, true));
  EXPECT_EQ(a.infected, b.infected);
  EXPECT_EQ(a.cumulative_incidents, b.cumulative_incidents);
  EXPECT_EQ(a.messages_sent, b.messages_sent);
}

TEST(Epidemic, SteadyStateWindow) {
  EpidemicSeries s;
  s.infected = {0, 10, 20, 30};
  EXPECT_DOUBLE_EQ(s.steady_state_infected(0.5), 25.0);
  EXPECT_DOUBLE_EQ(s.steady_state_infected(0.1), 30.0);
}

TEST(Epidemic, RejectsBadConfig) {
  auto c = small_config(1, true);
  c.beta = 1.5;
  EXPECT_THROW(run_epidemic(c), ConfigError);
  c = small_config(1, true);
  c.graph = std::make_shared<OverlayGraph>(OverlayGraph::uniform(10, 0.5));
  EXPECT_THROW(run_epidemic(c), ConfigError);
  c = small_config(1, true);
  c.graph.reset();
  EXPECT_THROW(run_epidemic(c), ConfigError);
}

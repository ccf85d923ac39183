#include "tpp/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tpp/errors.hpp"
#include "tpp/network.hpp"
#include "tpp/rng.hpp"

namespace tpp {

void EpidemicConfig::validate() const {
  params.validate();
  if (!graph) throw ConfigError("epidemic needs a contact graph");
  const auto& net_graph = overlay ? *overlay : *graph;
  if (graph->node_count() != params.device_count ||
      net_graph.node_count() != params.device_count) {
    throw ConfigError("graph node count differs from n");
  }
  auto prob = [](double v, const char* key) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(key) + " must be in [0, 1]");
    }
  };
  prob(beta, "beta");
  prob(gamma, "gamma");
  prob(churn, "churn");
  prob(new_fraction, "new_fraction");
  prob(malicious_fraction, "malicious_fraction");
  if (!(monthly_downloads >= 0.0)) throw ConfigError("monthly_downloads must be >= 0");
  if (initial_months < 1) throw ConfigError("initial_months must be >= 1");
  if (months < 0) throw ConfigError("months must be >= 0");
  if (steps_per_month < 1) throw ConfigError("steps_per_month must be >= 1");
  if (protocol_steps_per_step < 1) {
    throw ConfigError("protocol_steps_per_step must be >= 1");
  }
}

double EpidemicSeries::steady_state_infected(double fraction) const {
  if (infected.empty()) return 0.0;
  const auto len = infected.size();
  const auto take = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(len))));
  const double sum =
      std::accumulate(infected.end() - static_cast<std::ptrdiff_t>(take),
                      infected.end(), 0.0);
  return sum / static_cast<double>(take);
}

namespace {

enum class Health : std::uint8_t { kS, kI, kR };

}  // namespace

EpidemicSeries run_epidemic(const EpidemicConfig& cfg) {
  cfg.validate();
  const auto& p = cfg.params;
  const int n = p.device_count;
  const OverlayGraph& contacts = *cfg.graph;
  const OverlayGraph& overlay = cfg.overlay ? *cfg.overlay : *cfg.graph;

  ProtocolNetwork net(p, overlay, Rng::derive(cfg.seed, stream::kDynamics));
  Rng phase_rng(Rng::derive(cfg.seed, stream::kPhase));
  std::vector<int> phases(n);
  for (auto& ph : phases) ph = static_cast<int>(phase_rng.below(p.monitor_period));
  net.set_phases(phases);

  Rng catalog_rng(Rng::derive(cfg.seed, stream::kCatalog));
  Rng rng(Rng::derive(cfg.seed, stream::kEpidemic));
  EpidemicSeries s;

  std::vector<AppId> old_pool;
  std::vector<AppId> new_pool;
  auto release = [&](std::int64_t step) {
    const double expected = p.apps_per_month * cfg.malicious_fraction;
    const auto whole = static_cast<int>(std::floor(expected));
    const int bad = std::min(
        p.apps_per_month, whole + (catalog_rng.bernoulli(expected - whole) ? 1 : 0));
    old_pool.insert(old_pool.end(), new_pool.begin(), new_pool.end());
    new_pool.clear();
    for (int i = 0; i < p.apps_per_month; ++i) {
      new_pool.push_back(net.add_app(i < bad, step));
    }
    s.malicious_apps += bad;
  };
  for (int m = 0; m < cfg.initial_months; ++m) {
    release(static_cast<std::int64_t>(m - cfg.initial_months) * cfg.steps_per_month);
  }

  std::vector<Health> health(n, Health::kS);
  std::vector<AppId> carrier(n, -1);
  int count_s = n, count_i = 0, count_r = 0;
  std::uint64_t incidents = 0;

  auto record = [&]() {
    s.susceptible.push_back(count_s);
    s.infected.push_back(count_i);
    s.recovered.push_back(count_r);
    s.cumulative_incidents.push_back(incidents);
  };
  // Installs `app` on v; returns true for a malicious install (an incident).
  auto try_install = [&](NodeId v, AppId app) {
    if (net.install(v, app)) {
      ++s.blocked_installs;
      return false;
    }
    if (!net.catalog().is_malicious(app)) return false;
    if (net.device(v).known_malicious.contains(app)) ++s.vaccination_violations;
    ++incidents;
    if (health[v] == Health::kS) --count_s;
    if (health[v] == Health::kR) --count_r;
    if (health[v] != Health::kI) ++count_i;
    health[v] = Health::kI;
    carrier[v] = app;
    return true;
  };

  record();
  const double new_rate = cfg.monthly_downloads * cfg.new_fraction / cfg.steps_per_month;
  const double old_rate =
      cfg.monthly_downloads * (1.0 - cfg.new_fraction) / cfg.steps_per_month;
  const std::int64_t total_steps =
      static_cast<std::int64_t>(cfg.months) * cfg.steps_per_month;
  std::int64_t protocol_step = 0;
  std::vector<NodeId> spreaders;

  for (std::int64_t t = 1; t <= total_steps; ++t) {
    if ((t - 1) % cfg.steps_per_month == 0) release(t);

    for (NodeId v = 0; v < n; ++v) {
      for (auto k = rng.poisson(new_rate); k > 0; --k) {
        if (try_install(v, new_pool[rng.below(new_pool.size())])) ++s.direct_incidents;
      }
      if (old_pool.empty()) continue;
      for (auto k = rng.poisson(old_rate); k > 0; --k) {
        if (try_install(v, old_pool[rng.below(old_pool.size())])) ++s.direct_incidents;
      }
    }

    spreaders.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (health[v] == Health::kI) spreaders.push_back(v);
    }
    for (NodeId v : spreaders) {
      for (NodeId u : contacts.out_neighbors(v)) {
        if (health[u] != Health::kS || !rng.bernoulli(cfg.beta)) continue;
        if (try_install(u, carrier[v])) ++s.contact_incidents;
      }
    }

    for (NodeId v : spreaders) {
      if (health[v] == Health::kI && rng.bernoulli(cfg.gamma)) {
        health[v] = Health::kR;
        --count_i;
        ++count_r;
      }
    }

    for (NodeId v = 0; v < n; ++v) {
      if (!rng.bernoulli(cfg.churn)) continue;
      if (health[v] == Health::kI) --count_i;
      if (health[v] == Health::kR) --count_r;
      if (health[v] != Health::kS) ++count_s;
      health[v] = Health::kS;
      carrier[v] = -1;
      net.reset_device(v);
    }

    if (cfg.tpp_enabled) {
      for (int k = 0; k < cfg.protocol_steps_per_step; ++k) {
        ++protocol_step;
        net.deliver_round();
        net.monitor_round(protocol_step);
      }
    }
    record();
  }

  s.messages_sent = net.messages_sent();
  s.monitorings = net.monitorings();
  return s;
}

}  // namespace tpp

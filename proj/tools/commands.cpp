#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "tpp/analytics.hpp"
#include "tpp/engine.hpp"
#include "tpp/epidemic.hpp"
#include "tpp/errors.hpp"
#include "tpp/report.hpp"

namespace tpp::cli {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || v[lo] == v[hi]) return v[lo];
  if (std::isinf(v[hi])) return v[hi];
  return v[lo] + frac * (v[hi] - v[lo]);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs fn(0..count-1) on up to `threads` workers; results come back in index
// order so output never depends on scheduling.
template <class F>
auto replicate(int count, int threads, F fn) {
  using R = decltype(fn(0));
  std::vector<std::optional<R>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < count;) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int extra = std::clamp(threads, 1, std::max(count, 1)) - 1;
  std::vector<std::thread> pool;
  for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<R> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

std::ofstream open_csv(const RunOptions& o, const std::string& name) {
  std::filesystem::create_directories(*o.out_dir);
  const auto path = std::filesystem::path(*o.out_dir) / name;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

std::uint64_t base_seed(const RunConfig& c) {
  return static_cast<std::uint64_t>(c.get_int("seed"));
}

std::int64_t as_i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

void analyze(const RunConfig& config, const RunOptions& o, std::ostream& out) {
  const double month = config.get_double("time_units_per_month");
  if (!o.sweep) {
    const auto p = protocol_params(config);
    const auto r = load_report(p);
    out << to_key_value(r);
    Summary s;
    s.add("max_load_lambda_a_per_month", r.max_load_lambda_a * month);
    s.add("benefit_factor_closed_form", benefit_factor(p).ratio_closed_form);
    s.add("messages_per_device_day", r.messages_per_device_month / 30.0);
    s.add("minimum_coverage_timeout", static_cast<std::int64_t>(minimum_coverage_timeout(p)));
    s.add("timeout", static_cast<std::int64_t>(p.timeout));
    s.write(out);
    return;
  }
  const auto spec = parse_sweep(*o.sweep);
  std::ostringstream table;
  table << kCsvHeader << '\n'
        << spec.key << ',' << load_report_csv_header() << ",max_load_lambda_a_per_month\n";
  for (double v : spec.values()) {
    RunConfig c = config;
    c.set(spec.key, format_number(v));
    const auto r = load_report(protocol_params(c));
    table << format_number(v) << ',' << to_csv_row(r) << ','
          << format_number(r.max_load_lambda_a * month) << '\n';
  }
  out << table.str();
  if (o.out_dir) open_csv(o, "analyze_sweep.csv") << table.str();
}

void simulate(Command command, const RunConfig& config, const RunOptions& o,
              std::ostream& out) {
  const auto seed0 = base_seed(config);
  const double per_day = config.get_double("steps_per_day");
  const auto runs = replicate(o.seeds, o.threads, [&](int r) {
    const auto seed = seed0 + static_cast<std::uint64_t>(r);
    auto cfg = sim_config(config, command, seed);
    cfg.record_series = o.out_dir.has_value();
    auto m = tpp::run(cfg);
    if (o.out_dir) {
      auto f = open_csv(o, std::string(to_string(command)) + "_seed" +
                               std::to_string(seed) + ".csv");
      write_metrics_csv(f, m);
    }
    return m;
  });

  const auto params = protocol_params(config);
  const double n = params.device_count;
  std::vector<double> days, msgs, cost, mons, deceived, muters, steps;
  int completed = 0, stalled = 0, successes = 0;
  for (const auto& m : runs) {
    days.push_back(m.completion_step ? static_cast<double>(*m.completion_step) / per_day : kInf);
    completed += m.completion_step.has_value();
    stalled += m.stalled;
    msgs.push_back(static_cast<double>(m.messages_sent) / n);
    cost.push_back(m.total_cost);
    mons.push_back(static_cast<double>(m.monitorings));
    steps.push_back(static_cast<double>(m.steps_run));
    deceived.push_back(m.deceived_count);
    muters.push_back(m.muter_count);
    successes += m.attack_success;
  }

  Summary s;
  s.add("command", std::string(to_string(command)));
  s.add("runs", static_cast<std::int64_t>(runs.size()));
  s.add("seed_first", static_cast<std::int64_t>(seed0));
  s.add("timeout", static_cast<std::int64_t>(params.timeout));
  if (command == Command::kAttack) {
    const auto& adv = runs.front();
    s.add("attack", std::string(to_string(sim_config(config, command, seed0).adversary.kind)));
    s.add("rho", static_cast<std::int64_t>(params.rho));
    s.add("attack_k", static_cast<std::int64_t>(adv.adversary_count));
    s.add("attack_success_rate", static_cast<double>(successes) / runs.size());
    s.add("deceived_median", quantile(deceived, 0.5));
    s.add("deceived_fraction_median",
          quantile(deceived, 0.5) / (n - adv.adversary_count));
  }
  if (command == Command::kMute) {
    s.add("p_mute", config.get_double("p_mute"));
    s.add("muters_median", quantile(muters, 0.5));
  }
  s.add("completed_runs", static_cast<std::int64_t>(completed));
  s.add("stalled_runs", static_cast<std::int64_t>(stalled));
  s.add("completion_days_median", quantile(days, 0.5));
  s.add("completion_days_q10", quantile(days, 0.1));
  s.add("completion_days_q90", quantile(days, 0.9));
  s.add("steps_run_median", quantile(steps, 0.5));
  s.add("messages_per_user_median", quantile(msgs, 0.5));
  s.add("monitorings_median", quantile(mons, 0.5));
  s.add("total_cost_median", quantile(cost, 0.5));
  s.write(out);
}

void epidemic(const RunConfig& config, const RunOptions& o, std::ostream& out) {
  const auto seed0 = base_seed(config);
  struct Pair {
    EpidemicSeries control, tpp;
  };
  const auto runs = replicate(o.seeds, o.threads, [&](int r) {
    const auto seed = seed0 + static_cast<std::uint64_t>(r);
    auto cfg = epidemic_config(config, seed);
    Pair p;
    cfg.tpp_enabled = false;
    p.control = run_epidemic(cfg);
    cfg.tpp_enabled = true;
    p.tpp = run_epidemic(cfg);
    if (o.out_dir) {
      auto f = open_csv(o, "epidemic_seed" + std::to_string(seed) + ".csv");
      write_epidemic_csv(f, p.control, p.tpp);
    }
    return p;
  });

  const auto params = protocol_params(config);
  std::vector<double> ci, ti, red_i, cinc, tinc, red_inc, blocked, msgs;
  bool never_higher = true;
  std::uint64_t violations = 0;
  const double months = config.get_double("months");
  for (const auto& [c, t] : runs) {
    ci.push_back(c.steady_state_infected());
    ti.push_back(t.steady_state_infected());
    red_i.push_back(1.0 - ti.back() / ci.back());
    cinc.push_back(static_cast<double>(c.total_incidents()));
    tinc.push_back(static_cast<double>(t.total_incidents()));
    red_inc.push_back(1.0 - tinc.back() / cinc.back());
    never_higher = never_higher && t.total_incidents() <= c.total_incidents();
    blocked.push_back(static_cast<double>(t.blocked_installs));
    msgs.push_back(static_cast<double>(t.messages_sent) / params.device_count /
                   std::max(months, 1.0));
    violations += t.vaccination_violations;
  }
  Summary s;
  s.add("command", std::string("epidemic"));
  s.add("runs", static_cast<std::int64_t>(runs.size()));
  s.add("seed_first", static_cast<std::int64_t>(seed0));
  s.add("timeout", static_cast<std::int64_t>(params.timeout));
  s.add("control_steady_infected_median", quantile(ci, 0.5));
  s.add("tpp_steady_infected_median", quantile(ti, 0.5));
  s.add("infected_reduction_median", quantile(red_i, 0.5));
  s.add("infected_reduction_min", quantile(red_i, 0.0));
  s.add("control_incidents_median", quantile(cinc, 0.5));
  s.add("tpp_incidents_median", quantile(tinc, 0.5));
  s.add("incident_reduction_median", quantile(red_inc, 0.5));
  s.add("incident_reduction_min", quantile(red_inc, 0.0));
  s.add("tpp_incidents_never_higher", never_higher);
  s.add("blocked_installs_median", quantile(blocked, 0.5));
  s.add("tpp_messages_per_device_month_median", quantile(msgs, 0.5));
  s.add("vaccination_violations", as_i64(violations));
  s.write(out);
}

void coverage(const RunConfig& config, const RunOptions& o, std::ostream& out) {
  const auto seed0 = base_seed(config);
  const auto cs = coverage_settings(config);
  const auto steps = replicate(o.seeds, o.threads, [&](int r) {
    const auto hit = run_coverage_experiment(cs.n, cs.p_N, cs.walkers, cs.rho, cs.cap,
                                             seed0 + static_cast<std::uint64_t>(r));
    return hit ? static_cast<double>(*hit) : kInf;
  });
  const auto bounds = coverage_time_bounds(cs.n, cs.walkers, cs.rho, cs.epsilon);
  const auto within = std::count_if(steps.begin(), steps.end(),
                                    [&](double v) { return v <= bounds.upper; });
  const auto covered = std::count_if(steps.begin(), steps.end(),
                                     [](double v) { return !std::isinf(v); });
  if (o.out_dir) {
    auto f = open_csv(o, "coverage.csv");
    f << kCsvHeader << '\n' << "seed,cover_step\n";
    for (std::size_t i = 0; i < steps.size(); ++i) {
      f << seed0 + i << ',' << format_number(steps[i]) << '\n';
    }
  }
  Summary s;
  s.add("command", std::string("coverage"));
  s.add("runs", static_cast<std::int64_t>(steps.size()));
  s.add("walkers", static_cast<std::int64_t>(cs.walkers));
  s.add("rho", static_cast<std::int64_t>(cs.rho));
  s.add("covered_runs", static_cast<std::int64_t>(covered));
  s.add("cover_step_median", quantile(steps, 0.5));
  s.add("cover_step_q95", quantile(steps, 0.95));
  s.add("coverage_bound_lower", bounds.lower);
  s.add("coverage_bound_upper", bounds.upper);
  s.add("within_upper_fraction", static_cast<double>(within) / steps.size());
  s.write(out);
}

void lambda_table(const RunConfig& config, const RunOptions& o, std::ostream& out) {
  const auto sweep = lambda_sweep(protocol_params(config), config.get_double("lambda_step"));
  if (o.out_dir) {
    auto f = open_csv(o, "lambda_sweep.csv");
    f << kCsvHeader << '\n' << "lambda,t_vac\n";
    for (std::size_t i = 0; i < sweep.lambdas.size(); ++i) {
      f << format_number(sweep.lambdas[i]) << ',' << format_number(sweep.t_vac[i]) << '\n';
    }
  }
  Summary s;
  s.add("command", std::string("sweep"));
  s.add("grid_points", static_cast<std::int64_t>(sweep.lambdas.size()));
  s.add("lambda_argmin", sweep.argmin);
  s.add("t_vac_min", *std::min_element(sweep.t_vac.begin(), sweep.t_vac.end()));
  s.write(out);
}

}  // namespace

void run_command(Command command, const RunConfig& config, const RunOptions& options,
                 std::ostream& out) {
  config.require_all();
  if (options.seeds < 1) throw ConfigError("--seeds must be >= 1");
  if (options.sweep && command != Command::kAnalyze) {
    throw ConfigError("--sweep is only valid for analyze");
  }
  switch (command) {
    case Command::kAnalyze: return analyze(config, options, out);
    case Command::kSimulate:
    case Command::kAttack:
    case Command::kMute: return simulate(command, config, options, out);
    case Command::kEpidemic: return epidemic(config, options, out);
    case Command::kCoverage: return coverage(config, options, out);
    case Command::kSweep: return lambda_table(config, options, out);
  }
}

}  // namespace tpp::cli

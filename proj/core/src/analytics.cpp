#include "tpp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tpp/errors.hpp"
#include "tpp/report.hpp"

namespace tpp {

namespace {

double ln_n(const ProtocolParams& p) {
  return std::log(static_cast<double>(p.device_count));
}

// rho + (alpha + 1) ln n
double log_budget(const ProtocolParams& p) {
  return p.rho + (p.alpha + 1.0) * ln_n(p);
}

double closed_timeout_raw(const ProtocolParams& p) {
  const double n = p.device_count;
  return std::sqrt(4.0 * p.monitor_period * p.apps_per_month * log_budget(p) /
                   (n * p.penetration_threshold * p.fanout_probability *
                    (1.0 - p.false_negative)));
}

// k = tau n^2 p_MAX p_N (1 - E_-) / (T N)
double agents_for(const ProtocolParams& p, double lifespan) {
  const double n = p.device_count;
  return lifespan * n * n * p.penetration_threshold * p.fanout_probability *
         (1.0 - p.false_negative) / (p.monitor_period * p.apps_per_month);
}

}  // namespace

double coverage_numerator(double n, double rho, double epsilon) {
  return 2.0 * (rho - std::log(epsilon / n));
}

CoverageBounds coverage_time_bounds(double n, double k, double rho,
                                    double epsilon) {
  if (!(n >= 3.0)) throw ParameterError("coverage bounds need n >= 3");
  if (!(k >= 1.0)) throw ParameterError("coverage bounds need k >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ParameterError("epsilon must be in (0, 1]");
  }
  if (!(rho >= 1.0)) throw ParameterError("rho must be >= 1");
  const double num = coverage_numerator(n, rho, epsilon);
  const double ln = std::log(n);
  CoverageBounds b;
  b.lower = num / -std::expm1(-3.0 * k / (2.0 * n * (1.0 - 1.0 / ln)));
  b.upper = num / -std::expm1(-k / (2.0 * n));
  return b;
}

int minimum_coverage_timeout(const ProtocolParams& params) {
  params.validate();
  return static_cast<int>(std::ceil(coverage_numerator(
      params.device_count, params.rho, params.epsilon())));
}

double generation_rate_constant(const ProtocolParams& p) {
  const double n = p.device_count;
  return n * p.penetration_threshold * p.fanout_probability *
         (1.0 - p.false_negative) /
         (2.0 * p.monitor_period * p.apps_per_month);
}

double solve_timeout(const ProtocolParams& params) {
  params.validate();
  const double c = generation_rate_constant(params);
  if (!(c > 0.0)) throw ParameterError("generation rate constant must be > 0");
  const double target = coverage_numerator(params.device_count, params.rho,
                                           params.epsilon());
  auto f = [c](double tau) { return -tau * std::expm1(-tau * c); };

  // f(tau) >= tau - 1/c, so target + 1/c brackets the root from above.
  double lo = 0.0;
  double hi = target + 1.0 / c;
  while (f(hi) < target) hi *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TimeoutEstimate timeout_closed_form(const ProtocolParams& params) {
  params.validate();
  TimeoutEstimate e;
  e.closed_form = closed_timeout_raw(params);
  const double c = generation_rate_constant(params);
  const double n = params.device_count;
  const double p_cap = params.monitor_period * params.apps_per_month /
                       (n * params.penetration_threshold * log_budget(params) *
                        (1.0 - params.false_negative));
  e.regime_ok = e.closed_form * c < 1.0 && params.fanout_probability < p_cap;
  e.timeout = e.regime_ok ? e.closed_form : solve_timeout(params);
  return e;
}

VaccinationTime vaccination_time_bound(const ProtocolParams& params) {
  const auto e = timeout_closed_form(params);
  VaccinationTime v;
  v.t_vac = 2.0 * e.timeout;
  v.published = 2.0 * e.closed_form;  // 4 sqrt(...) == 2 * sqrt(4 ...)
  v.regime_ok = e.regime_ok;
  return v;
}

CostBound total_cost_bound(const ProtocolParams& params) {
  const auto e = timeout_closed_form(params);
  const double n = params.device_count;
  const double budget = log_budget(params);
  CostBound m;
  m.regime_ok = e.regime_ok;
  m.message_term = 4.0 * n * budget * params.message_cost;
  m.monitor_term =
      2.0 * params.monitor_cost *
      std::sqrt(n * budget * params.penetration_threshold *
                (1.0 - params.false_negative) /
                (params.fanout_probability * params.monitor_period *
                 params.apps_per_month));
  m.total = m.message_term + m.monitor_term;
  m.agents = agents_for(params, e.timeout);
  m.observation_total = m.agents * e.timeout * params.message_cost +
                        m.agents / (n * params.fanout_probability) *
                            params.monitor_cost;
  return m;
}

MessageBudget message_budget_per_device(const ProtocolParams& params) {
  params.validate();
  MessageBudget b;
  b.per_month = 4.0 * log_budget(params);
  b.leading_order_per_month = 4.0 * (params.alpha + 1.0) * ln_n(params);
  return b;
}

MaxLoad max_load(const ProtocolParams& params) {
  params.validate();
  const double n = params.device_count;
  const double ln = std::log(n);
  if (!(ln > 1.0)) throw ParameterError("max_load needs n > e");
  const double pn = params.fanout_probability;
  const double budget = log_budget(params);
  const double exponent = 1.5 * pn / ((1.0 - 1.0 / ln) * (1.0 - pn - 1.0 / n));
  MaxLoad r;
  r.lambda_tilde_T = std::min(params.step_rate, 2.0 * budget / -std::expm1(-exponent));
  r.lambda_A = n * params.penetration_threshold * pn *
               (1.0 - params.false_negative) / (16.0 * budget) *
               r.lambda_tilde_T * r.lambda_tilde_T * params.monitor_rate;
  return r;
}

BenefitFactor benefit_factor(const ProtocolParams& params) {
  const auto load = max_load(params);
  BenefitFactor b;
  b.lambda_hat_A = (1.0 - params.false_negative) * params.monitor_rate /
                   (1.0 - params.penetration_threshold);
  b.ratio = b.lambda_hat_A > 0.0 ? load.lambda_A / b.lambda_hat_A : 0.0;
  const double n = params.device_count;
  b.ratio_closed_form = load.lambda_tilde_T * load.lambda_tilde_T *
                        (1.0 - params.penetration_threshold) *
                        params.penetration_threshold * n *
                        params.fanout_probability / (16.0 * log_budget(params));
  return b;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double framing_p_tilde(double ttl, double rho, double k, double p_N) {
  const double mean = ttl * -std::expm1(-k * p_N / 2.0);
  if (mean <= 0.0) return 0.0;
  const double log_p = rho - mean + rho * std::log(mean / rho);
  return std::clamp(std::exp(log_p), 0.0, 1.0);
}

double attack_success_probability(double ttl, double rho, double k, double n,
                                  double p_N, double epsilon_fraction) {
  if (ttl < 0.0 || rho < 1.0 || k < 0.0 || n < 1.0 || !(p_N > 0.0)) {
    throw ParameterError("attack bound arguments out of domain");
  }
  const double mean = ttl * -std::expm1(-k * p_N / 2.0);
  if (!(rho > mean)) {
    throw ValidityError("attack bound needs rho > ttl (1 - exp(-k p_N / 2))");
  }
  const double p = framing_p_tilde(ttl, rho, k, p_N);
  if (p <= 0.0) return epsilon_fraction > 0.0 ? 0.0 : 1.0;
  if (p >= 1.0) return 1.0;
  const double z = std::sqrt(n) * (epsilon_fraction - p) / std::sqrt(p * (1.0 - p));
  // 1 - Phi(z) without cancellation in the upper tail.
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double attack_destination_probability(double ttl, double rho, double k,
                                      double n, double p_N,
                                      double epsilon_fraction) {
  if (rho < 1.0) throw ParameterError("rho must be >= 1");
  const double adjusted = epsilon_fraction - (k / rho) * p_N;
  if (adjusted <= 0.0) return 1.0;
  return attack_success_probability(std::max(0.0, ttl - 1.0), rho, k, n, p_N,
                                    adjusted);
}

int calibrate_framing_rho(double ttl, double k, double n, double p_N,
                          double epsilon_fraction, double max_bound,
                          int rho_limit) {
  for (int rho = 1; rho <= rho_limit; ++rho) {
    const double mean = ttl * -std::expm1(-k * p_N / 2.0);
    if (!(rho > mean)) continue;
    if (attack_success_probability(ttl, rho, k, n, p_N, epsilon_fraction) <=
        max_bound) {
      return rho;
    }
  }
  return 0;
}

double mute_lifespan(double timeout, double p_mute) {
  if (!(p_mute >= 0.0 && p_mute < 1.0)) {
    throw ParameterError("p_mute must be in [0, 1)");
  }
  if (p_mute < 1e-6) return timeout;
  return (1.0 - p_mute - std::exp(-timeout * p_mute)) / p_mute;
}

double mute_vaccination_time(const ProtocolParams& params, double p_mute,
                             TimeoutSource source) {
  const double timeout = source == TimeoutSource::kImplicit
                             ? solve_timeout(params)
                             : timeout_closed_form(params).closed_form;
  const double g = mute_lifespan(timeout, p_mute);
  const double num = coverage_numerator(params.device_count, params.rho,
                                        params.epsilon());
  const double y = g * generation_rate_constant(params);
  if (!(y > 0.0)) return std::numeric_limits<double>::infinity();
  return num / -std::expm1(-y);
}

MuteCostReport mute_cost_invariance_check(const ProtocolParams& params,
                                          const std::vector<double>& grid,
                                          TimeoutSource source) {
  const double timeout = source == TimeoutSource::kImplicit
                             ? solve_timeout(params)
                             : timeout_closed_form(params).closed_form;
  const double X = params.device_count * params.fanout_probability;
  auto evaluate = [&](double p) {
    MuteCostRow row;
    row.p_mute = p;
    row.time = mute_vaccination_time(params, p, source);
    row.agents = agents_for(params, mute_lifespan(timeout, p));
    row.cost = row.agents * row.time * params.message_cost +
               row.agents / X * params.monitor_cost;
    return row;
  };

  MuteCostReport r;
  r.baseline_cost = evaluate(0.0).cost;
  r.allowance = std::max(2.0, params.rho * ln_n(params));
  for (double p : grid) {
    auto row = evaluate(p);
    if (r.baseline_cost > 0.0) {
      row.ratio = row.cost / r.baseline_cost;
    }
    r.max_ratio = std::max({r.max_ratio, row.ratio, 1.0 / row.ratio});
    r.rows.push_back(row);
  }
  r.same_order = r.max_ratio <= r.allowance;
  return r;
}

GeneralGraphBounds general_graph_bounds(const ProtocolParams& params,
                                        double edge_count) {
  params.validate();
  const double n = params.device_count;
  if (!(edge_count >= n - 1.0)) {
    throw ParameterError("general graph needs at least n - 1 edges");
  }
  const double ratio = params.monitor_period * params.apps_per_month /
                       (params.penetration_threshold * (1.0 - params.false_negative));
  GeneralGraphBounds g;
  g.time = std::cbrt(params.rho * ratio * ratio / (n * n)) * std::log(n);
  g.mean_degree = 2.0 * edge_count / n;
  g.agents = g.time * n * g.mean_degree * params.penetration_threshold *
             (1.0 - params.false_negative) /
             (params.monitor_period * params.apps_per_month);
  g.cost = g.agents * g.time * params.message_cost +
           g.agents / g.mean_degree * params.monitor_cost;
  return g;
}

LambdaSweep lambda_sweep(const ProtocolParams& params, double step) {
  params.validate();
  if (!(step > 0.0 && step < 0.5)) throw ParameterError("grid step must be in (0, 0.5)");
  const double n = params.device_count;
  const double base = 4.0 * params.monitor_period * params.apps_per_month *
                      log_budget(params) /
                      (n * params.penetration_threshold * params.fanout_probability *
                       (1.0 - params.false_negative));
  LambdaSweep s;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1;; ++i) {
    const double lambda = i * step;
    if (lambda >= 1.0 - 1e-12) break;
    const double t = (1.0 / lambda) * std::sqrt(base / ((1.0 - lambda) / lambda));
    s.lambdas.push_back(lambda);
    s.t_vac.push_back(t);
    if (t < best) {
      best = t;
      s.argmin = lambda;
    }
  }
  return s;
}

LoadReport load_report(const ProtocolParams& params) {
  LoadReport r;
  const auto e = timeout_closed_form(params);
  r.timeout_closed_form = e.closed_form;
  r.timeout_implicit = solve_timeout(params);
  r.regime_ok = e.regime_ok;
  const auto v = vaccination_time_bound(params);
  r.t_vac_bound = v.t_vac;
  r.t_vac_published = v.published;
  r.cost_bound_m = total_cost_bound(params).total;
  const auto load = max_load(params);
  r.lambda_tilde_t = load.lambda_tilde_T;
  r.max_load_lambda_a = load.lambda_A;
  const auto bf = benefit_factor(params);
  r.single_device_load_lambda_hat_a = bf.lambda_hat_A;
  r.benefit_factor = bf.ratio;
  const auto msg = message_budget_per_device(params);
  r.messages_per_device_month = msg.per_month;
  r.messages_per_device_day_leading = msg.leading_order_per_month / 30.0;
  return r;
}

namespace {

std::vector<std::pair<const char*, double>> report_fields(const LoadReport& r) {
  return {
      {"timeout_closed_form", r.timeout_closed_form},
      {"timeout_implicit", r.timeout_implicit},
      {"t_vac_bound", r.t_vac_bound},
      {"t_vac_published", r.t_vac_published},
      {"cost_bound_m", r.cost_bound_m},
      {"lambda_tilde_t", r.lambda_tilde_t},
      {"max_load_lambda_a", r.max_load_lambda_a},
      {"single_device_load_lambda_hat_a", r.single_device_load_lambda_hat_a},
      {"benefit_factor", r.benefit_factor},
      {"messages_per_device_month", r.messages_per_device_month},
      {"messages_per_device_day_leading", r.messages_per_device_day_leading},
  };
}

}  // namespace

std::string to_key_value(const LoadReport& r) {
  std::string out;
  for (const auto& [key, value] : report_fields(r)) {
    out += key;
    out += " = ";
    out += format_number(value);
    out += '\n';
  }
  out += "regime_ok = ";
  out += r.regime_ok ? "true" : "false";
  out += '\n';
  return out;
}

std::string load_report_csv_header() {
  std::string out;
  for (const auto& [key, value] : report_fields(LoadReport{})) {
    out += key;
    out += ',';
  }
  return out + "regime_ok";
}

std::string to_csv_row(const LoadReport& r) {
  std::string out;
  for (const auto& [key, value] : report_fields(r)) {
    out += format_number(value);
    out += ',';
  }
  return out + (r.regime_ok ? "true" : "false");
}

}  // namespace tpp

#pragma once

#include <string>
#include <vector>

#include "tpp/protocol.hpp"

namespace tpp {

/// 2(rho - ln(eps/n)) = 2(rho + (alpha+1) ln n), the coverage numerator.
double coverage_numerator(double n, double rho, double epsilon);

struct CoverageBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Steps for k random walkers to rho-cover G(n, p) with probability 1 - eps.
/// Throws ParameterError unless k >= 1, 0 < eps <= 1 and n >= 3.
CoverageBounds coverage_time_bounds(double n, double k, double rho,
                                    double epsilon);

/// Saturated (k -> infinity) limit of the coverage bound, rounded up:
/// the smallest TTL a single walker wave can cover with.
int minimum_coverage_timeout(const ProtocolParams& params);

/// c = n p_MAX p_N (1 - E_-) / (2 T N), the agent-generation rate constant.
double generation_rate_constant(const ProtocolParams& params);

/// Root of 2(rho - ln(eps/n)) = tau (1 - exp(-tau c)) by bisection.
double solve_timeout(const ProtocolParams& params);

struct TimeoutEstimate {
  double timeout = 0.0;
  /// tau c < 1 and p_N below its admissibility cap.
  bool regime_ok = true;
  /// Closed-form value before any fallback to the implicit solver.
  double closed_form = 0.0;
};

/// sqrt(4TN(rho + (alpha+1) ln n) / (n p_MAX p_N (1 - E_-))). When the
/// small-exponent regime fails, `timeout` carries the implicit solution and
/// regime_ok is false.
TimeoutEstimate timeout_closed_form(const ProtocolParams& params);

struct VaccinationTime {
  double t_vac = 0.0;        // 2 * timeout
  double published = 0.0;    // 4 * sqrt(TN(...)/(...))
  bool regime_ok = true;
};

VaccinationTime vaccination_time_bound(const ProtocolParams& params);

struct CostBound {
  double total = 0.0;          // message_term + monitor_term
  double message_term = 0.0;   // 4n(rho + (alpha+1) ln n) C_S
  double monitor_term = 0.0;   // 2 C_M sqrt(n(...) p_MAX (1-E_-)/(p_N T N))
  double agents = 0.0;         // k = tau n^2 p_MAX p_N (1-E_-)/(TN)
  double observation_total = 0.0;  // k tau C_S + (k/X) C_M at the timeout used
  bool regime_ok = true;
};

CostBound total_cost_bound(const ProtocolParams& params);

/// Messages each device sends per month: 4(rho + (alpha+1) ln n) and its
/// leading-order part 4(alpha+1) ln n.
struct MessageBudget {
  double per_month = 0.0;
  double leading_order_per_month = 0.0;
};
MessageBudget message_budget_per_device(const ProtocolParams& params);

struct MaxLoad {
  double lambda_A = 0.0;          // apps per time unit
  double lambda_tilde_T = 0.0;    // effective steps per time unit
};

/// Throws ParameterError when n <= e.
MaxLoad max_load(const ProtocolParams& params);

struct BenefitFactor {
  double lambda_hat_A = 0.0;  // single-device load
  double ratio = 0.0;         // lambda_A / lambda_hat_A
  double ratio_closed_form = 0.0;
};

BenefitFactor benefit_factor(const ProtocolParams& params);

double std_normal_cdf(double x);

/// P~ with the Chernoff expression clamped to [0, 1].
double framing_p_tilde(double ttl, double rho, double k, double p_N);

/// Upper bound on the probability that k framers deceive an eps fraction.
/// Throws ValidityError unless rho > ttl (1 - exp(-k p_N / 2)).
double attack_success_probability(double ttl, double rho, double k, double n,
                                  double p_N, double epsilon_fraction);

/// Same bound when framers aim their first hop, with ttl - 1 and
/// eps - (k/rho) p_N. Returns 1 once the adjusted fraction is <= 0.
double attack_destination_probability(double ttl, double rho, double k,
                                      double n, double p_N,
                                      double epsilon_fraction);

/// Smallest integer rho that is valid at k and keeps the bound <= max_bound;
/// 0 if none up to rho_limit.
int calibrate_framing_rho(double ttl, double k, double n, double p_N,
                          double epsilon_fraction, double max_bound,
                          int rho_limit = 1000);

enum class TimeoutSource { kClosedForm, kImplicit };

/// Effective agent lifespan (1 - p - exp(-timeout p)) / p; equals timeout
/// for p below 1e-6.
double mute_lifespan(double timeout, double p_mute);

double mute_vaccination_time(const ProtocolParams& params, double p_mute,
                             TimeoutSource source = TimeoutSource::kClosedForm);

struct MuteCostRow {
  double p_mute = 0.0;
  double time = 0.0;
  double agents = 0.0;
  double cost = 0.0;
  double ratio = 1.0;  // cost / cost at p_mute = 0
};

struct MuteCostReport {
  std::vector<MuteCostRow> rows;
  double baseline_cost = 0.0;
  double max_ratio = 1.0;  // max over rows of max(r, 1/r)
  double allowance = 0.0;  // max(2, rho ln n)
  bool same_order = true;
};

MuteCostReport mute_cost_invariance_check(
    const ProtocolParams& params, const std::vector<double>& p_mute_grid,
    TimeoutSource source = TimeoutSource::kClosedForm);

struct GeneralGraphBounds {
  double time = 0.0;
  double cost = 0.0;
  double agents = 0.0;
  double mean_degree = 0.0;
  bool order_of_magnitude = true;  // unit constant in the asymptotic form
};

/// Throws ParameterError unless edge_count >= n - 1.
GeneralGraphBounds general_graph_bounds(const ProtocolParams& params,
                                        double edge_count);

struct LambdaSweep {
  double argmin = 0.0;
  std::vector<double> lambdas;
  std::vector<double> t_vac;
};

/// T_Vac over the split lambda in (0, 1) on a grid of the given step.
LambdaSweep lambda_sweep(const ProtocolParams& params, double step);

struct LoadReport {
  double timeout_closed_form = 0.0;
  double timeout_implicit = 0.0;
  double t_vac_bound = 0.0;
  double t_vac_published = 0.0;
  double cost_bound_m = 0.0;
  double lambda_tilde_t = 0.0;
  double max_load_lambda_a = 0.0;
  double single_device_load_lambda_hat_a = 0.0;
  double benefit_factor = 0.0;
  double messages_per_device_month = 0.0;
  double messages_per_device_day_leading = 0.0;
  bool regime_ok = true;
};

LoadReport load_report(const ProtocolParams& params);

/// "key = value" lines with locale-independent numbers.
std::string to_key_value(const LoadReport& report);
std::string load_report_csv_header();
std::string to_csv_row(const LoadReport& report);

}  // namespace tpp

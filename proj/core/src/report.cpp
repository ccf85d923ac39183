#include "tpp/report.hpp"

#include <charconv>
#include <cmath>
#include <locale>
#include <ostream>

#include "tpp/engine.hpp"
#include "tpp/epidemic.hpp"

namespace tpp {

namespace {

// Integers go through operator<<, so pin the C locale while writing.
class ClassicLocale {
 public:
  explicit ClassicLocale(std::ostream& out)
      : out_(out), saved_(out.imbue(std::locale::classic())) {}
  ~ClassicLocale() { out_.imbue(saved_); }

 private:
  std::ostream& out_;
  std::locale saved_;
};

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string format_number(std::int64_t value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void Summary::add(std::string key, double value) {
  entries_.emplace_back(std::move(key), format_number(value));
}

void Summary::add(std::string key, std::int64_t value) {
  entries_.emplace_back(std::move(key), format_number(value));
}

void Summary::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void Summary::add(std::string key, bool value) {
  entries_.emplace_back(std::move(key), value ? "true" : "false");
}

void Summary::write(std::ostream& out) const {
  ClassicLocale guard(out);
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

void write_metrics_csv(std::ostream& out, const SimMetrics& m) {
  ClassicLocale guard(out);
  out << kCsvHeader << '\n'
      << "step,app_id,p_a,cumulative_messages,cumulative_monitorings\n";
  for (std::size_t t = 0; t < m.messages_by_step.size(); ++t) {
    for (std::size_t i = 0; i < m.penetration_by_step.size(); ++i) {
      out << t << ',' << m.malicious_apps[i] << ','
          << format_number(m.penetration_by_step[i][t]) << ','
          << m.messages_by_step[t] << ',' << m.monitorings_by_step[t] << '\n';
    }
  }
}

void write_epidemic_csv(std::ostream& out, const EpidemicSeries& control,
                        const EpidemicSeries& tpp) {
  ClassicLocale guard(out);
  out << kCsvHeader << '\n' << "step,arm,S,I,R,cumulative_incidents\n";
  auto arm = [&out](const EpidemicSeries& s, const char* name) {
    for (std::size_t t = 0; t < s.infected.size(); ++t) {
      out << t << ',' << name << ',' << s.susceptible[t] << ',' << s.infected[t]
          << ',' << s.recovered[t] << ',' << s.cumulative_incidents[t] << '\n';
    }
  };
  arm(control, "control");
  arm(tpp, "tpp");
}

Summary summarize(const SimMetrics& m, double steps_per_day) {
  Summary s;
  s.add("completed", m.completion_step.has_value());
  if (m.completion_step) {
    s.add("completion_step", *m.completion_step);
    s.add("completion_days", static_cast<double>(*m.completion_step) / steps_per_day);
  } else {
    s.add("completion_step", std::string("none"));
  }
  s.add("steps_run", m.steps_run);
  s.add("messages_sent", static_cast<std::int64_t>(m.messages_sent));
  s.add("monitorings", static_cast<std::int64_t>(m.monitorings));
  s.add("alert_batches", static_cast<std::int64_t>(m.alert_batches));
  s.add("total_cost", m.total_cost);
  for (std::size_t i = 0; i < m.malicious_apps.size(); ++i) {
    s.add("final_penetration_app_" + std::to_string(m.malicious_apps[i]),
          m.final_penetration[i]);
  }
  if (m.adversary_count > 0) {
    s.add("adversaries", static_cast<std::int64_t>(m.adversary_count));
    s.add("deceived_count", static_cast<std::int64_t>(m.deceived_count));
    s.add("attack_success", m.attack_success);
  }
  if (m.muter_count > 0) s.add("muters", static_cast<std::int64_t>(m.muter_count));
  return s;
}

}  // namespace tpp

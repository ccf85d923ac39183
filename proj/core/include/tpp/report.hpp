#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tpp {

struct SimMetrics;
struct EpidemicSeries;

inline constexpr std::string_view kCsvHeader = "# tpp-sim csv v1";

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double value);
std::string format_number(std::int64_t value);

/// Ordered key = value lines.
class Summary {
 public:
  void add(std::string key, double value);
  void add(std::string key, std::int64_t value);
  void add(std::string key, std::string value);
  void add(std::string key, bool value);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// step,app_id,p_a,cumulative_messages,cumulative_monitorings
void write_metrics_csv(std::ostream& out, const SimMetrics& metrics);

/// step,arm,S,I,R,cumulative_incidents for a control and a TPP arm.
void write_epidemic_csv(std::ostream& out, const EpidemicSeries& control,
                        const EpidemicSeries& tpp);

Summary summarize(const SimMetrics& metrics, double steps_per_day);

}  // namespace tpp

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpp/engine.hpp"
#include "tpp/epidemic.hpp"
#include "tpp/protocol.hpp"

namespace tpp::cli {

enum class Command { kAnalyze, kSimulate, kAttack, kMute, kEpidemic, kCoverage, kSweep };

std::string_view to_string(Command command);

struct KeySpec {
  std::string_view key;
  std::string_view fallback;  // empty = required
  std::string_view help;
};

/// Every accepted key, in dump order.
const std::vector<KeySpec>& key_table();

/// Flat `key = value` document. Unknown keys and duplicate keys are rejected
/// with a ParseError carrying the line number.
class RunConfig {
 public:
  static RunConfig parse(std::istream& in);
  static RunConfig parse_string(std::string_view text);

  /// Flag overrides; "key=value".
  void set(std::string_view assignment);
  void set(std::string_view key, std::string value);

  bool has(std::string_view key) const;
  /// Explicit value or the table default; ConfigError("missing key: k") when
  /// the key is required and absent.
  std::string raw(std::string_view key) const;

  std::int64_t get_int(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  /// Throws ConfigError for the first required key that is missing.
  void require_all() const;

  /// Every key in table order with its resolved value. Parsing the output
  /// yields an equal config.
  void dump(std::ostream& out) const;

  bool operator==(const RunConfig&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

ProtocolParams protocol_params(const RunConfig& config);
/// SimConfig for one replica. The overlay is built here (gnp graphs use
/// graph_seed, or the run seed when graph_seed is 0).
SimConfig sim_config(const RunConfig& config, Command command, std::uint64_t seed);
EpidemicConfig epidemic_config(const RunConfig& config, std::uint64_t seed);

struct CoverageSettings {
  int n = 0;
  double p_N = 0.0;
  int walkers = 0;
  int rho = 1;
  std::int64_t cap = 0;
  double epsilon = 0.0;
};
CoverageSettings coverage_settings(const RunConfig& config);

struct SweepSpec {
  std::string key;
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  /// lo, lo + step, ... up to hi inclusive (with a half-step tolerance).
  std::vector<double> values() const;
};

/// "key=lo:hi:step". Throws ConfigError on a malformed spec or empty range.
SweepSpec parse_sweep(std::string_view text);

}  // namespace tpp::cli

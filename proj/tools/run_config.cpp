#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "tpp/analytics.hpp"
#include "tpp/errors.hpp"
#include "tpp/overlay.hpp"

namespace tpp::cli {

std::string_view to_string(Command command) {
  switch (command) {
    case Command::kAnalyze: return "analyze";
    case Command::kSimulate: return "simulate";
    case Command::kAttack: return "attack";
    case Command::kMute: return "mute";
    case Command::kEpidemic: return "epidemic";
    case Command::kCoverage: return "coverage";
    case Command::kSweep: return "sweep";
  }
  return "?";
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      // protocol
      {"n", "", "device count"},
      {"N", "", "new applications per month"},
      {"p_N", "", "overlay density / fanout probability"},
      {"p_max", "", "penetration threshold"},
      {"rho", "", "distinct alert origins needed to classify"},
      {"T", "", "steps between a device's monitorings"},
      {"e_minus", "0", "monitoring false-negative rate"},
      {"e_plus", "0", "monitoring false-positive rate"},
      {"timeout", "auto", "alert TTL: integer, auto (coverage minimum), solve or closed"},
      {"alpha", "1", "confidence exponent, epsilon = n^-alpha"},
      {"lambda_M", "1/168", "monitorings per time unit"},
      {"lambda_T", "1", "message steps per time unit"},
      {"C_S", "1", "cost per message"},
      {"C_M", "1", "cost per monitoring batch"},
      {"time_units_per_month", "720", "time units in a month, for monthly loads"},
      // overlay
      {"overlay", "uniform", "uniform, gnp or file"},
      {"graph_file", "none", "edge list for overlay = file"},
      {"graph_seed", "0", "gnp seed; 0 reuses the run seed"},
      // simulation
      {"malicious_apps", "1", "malicious apps among the N (ids 0..m-1)"},
      {"downloads", "30", "installs per device at t = 0"},
      {"arrival_rate", "0", "new apps per step after t = 0"},
      {"arrival_malicious_fraction", "0", "malicious share of arrivals"},
      {"arrival_install_probability", "0", "per-device install probability of an arrival"},
      {"max_steps", "1000000", "step cap per run"},
      {"steps_per_day", "24", "steps per simulated day, for reporting"},
      {"seed", "1", "base seed; replica r uses seed + r"},
      // adversaries
      {"attack", "none", "none, framing, framing-destination-control or muting"},
      {"attack_k", "0", "framing adversaries"},
      {"target_app", "auto", "benign app id the framers accuse"},
      {"deception_goal", "0.05", "fraction of devices the framers must deceive"},
      {"p_mute", "0", "per-device muting probability"},
      // epidemic
      {"monthly_downloads", "50", "downloads per device per month"},
      {"new_fraction", "0.1", "share of downloads from the current release"},
      {"malicious_fraction", "0.005", "malicious share of each release"},
      {"initial_months", "6", "months of catalog released before t = 0"},
      {"beta", "0.01", "contact infection probability per step"},
      {"gamma", "0.05", "recovery probability per step"},
      {"churn", "0.002", "device replacement probability per step"},
      {"months", "12", "epidemic duration"},
      {"steps_per_month", "30", "epidemic steps per month"},
      {"protocol_steps_per_step", "24", "protocol rounds per epidemic step"},
      // coverage and sweeps
      {"walkers", "200", "random walkers in the coverage experiment"},
      {"coverage_cap", "100000", "step cap of a coverage run"},
      {"lambda_step", "0.01", "grid step of the lambda sweep"},
  };
  return table;
}

namespace {

const KeySpec* find_key(std::string_view key) {
  for (const auto& spec : key_table()) {
    if (spec.key == key) return &spec;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view text, std::string_view key) {
  auto bad = [&] {
    return ConfigError("key " + std::string(key) + ": not a number: " + std::string(text));
  };
  auto one = [&](std::string_view t) {
    t = trim(t);
    double v = 0.0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty()) throw bad();
    return v;
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const double den = one(text.substr(slash + 1));
    if (den == 0.0) throw bad();
    return one(text.substr(0, slash)) / den;
  }
  return one(text);
}

std::shared_ptr<const OverlayGraph> build_graph(const RunConfig& c, std::uint64_t seed) {
  const auto mode = c.raw("overlay");
  const int n = static_cast<int>(c.get_int("n"));
  const double p = c.get_double("p_N");
  if (mode == "uniform") {
    return std::make_shared<OverlayGraph>(OverlayGraph::uniform(n, p));
  }
  if (mode == "gnp") {
    const auto gs = static_cast<std::uint64_t>(c.get_int("graph_seed"));
    return std::make_shared<OverlayGraph>(generate_gnp(n, p, gs != 0 ? gs : seed));
  }
  if (mode == "file") {
    const auto& path = c.raw("graph_file");
    std::ifstream in(path);
    if (!in) throw ConfigError("key graph_file: cannot open " + path);
    auto g = std::make_shared<OverlayGraph>(load_edge_list(in));
    if (g->node_count() != n) {
      throw ConfigError("key n: graph_file has " + std::to_string(g->node_count()) +
                        " nodes");
    }
    return g;
  }
  throw ConfigError("key overlay: expected uniform, gnp or file, got " + mode);
}

}  // namespace

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(number, "expected key = value");
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    if (!find_key(key)) throw ParseError(number, "unknown key: " + std::string(key));
    if (value.empty()) throw ParseError(number, "empty value for " + std::string(key));
    if (!c.values_.emplace(std::string(key), std::string(value)).second) {
      throw ParseError(number, "duplicate key: " + std::string(key));
    }
  }
  return c;
}

RunConfig RunConfig::parse_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

void RunConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got " + std::string(assignment));
  }
  set(trim(assignment.substr(0, eq)), std::string(trim(assignment.substr(eq + 1))));
}

void RunConfig::set(std::string_view key, std::string value) {
  if (!find_key(key)) throw ConfigError("unknown key: " + std::string(key));
  if (value.empty()) throw ConfigError("empty value for " + std::string(key));
  values_.insert_or_assign(std::string(key), std::move(value));
}

bool RunConfig::has(std::string_view key) const {
  return values_.find(key) != values_.end();
}

std::string RunConfig::raw(std::string_view key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  const auto* spec = find_key(key);
  if (!spec) throw ConfigError("unknown key: " + std::string(key));
  if (spec->fallback.empty()) throw ConfigError("missing key: " + std::string(key));
  return std::string(spec->fallback);
}

std::int64_t RunConfig::get_int(std::string_view key) const {
  const auto str = raw(key);
  const std::string_view text = str;
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && end == text.data() + text.size()) return v;
  // 1e6 style integers
  const double d = parse_real(text, key);
  if (std::nearbyint(d) != d || std::abs(d) > 9e18) {
    throw ConfigError("key " + std::string(key) + ": not an integer: " + std::string(text));
  }
  return static_cast<std::int64_t>(d);
}

double RunConfig::get_double(std::string_view key) const {
  return parse_real(raw(key), key);
}

bool RunConfig::get_bool(std::string_view key) const {
  const auto v = raw(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key " + std::string(key) + ": not a boolean: " + v);
}

void RunConfig::require_all() const {
  for (const auto& spec : key_table()) raw(spec.key);
}

void RunConfig::dump(std::ostream& out) const {
  for (const auto& spec : key_table()) {
    out << spec.key << " = " << raw(spec.key) << '\n';
  }
}

ProtocolParams protocol_params(const RunConfig& c) {
  ProtocolParams p;
  auto as_int = [&](std::string_view key) {
    const auto v = c.get_int(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ConfigError("key " + std::string(key) + ": out of range");
    }
    return static_cast<int>(v);
  };
  p.device_count = as_int("n");
  p.apps_per_month = as_int("N");
  p.fanout_probability = c.get_double("p_N");
  p.penetration_threshold = c.get_double("p_max");
  p.rho = as_int("rho");
  p.monitor_period = as_int("T");
  p.false_negative = c.get_double("e_minus");
  p.false_positive = c.get_double("e_plus");
  p.alpha = c.get_double("alpha");
  p.monitor_rate = c.get_double("lambda_M");
  p.step_rate = c.get_double("lambda_T");
  p.message_cost = c.get_double("C_S");
  p.monitor_cost = c.get_double("C_M");
  p.validate();

  const auto& t = c.raw("timeout");
  if (t == "auto") {
    p.timeout = minimum_coverage_timeout(p);
  } else if (t == "solve") {
    p.timeout = static_cast<int>(std::ceil(solve_timeout(p)));
  } else if (t == "closed") {
    p.timeout = static_cast<int>(std::ceil(timeout_closed_form(p).timeout));
  } else {
    p.timeout = as_int("timeout");
  }
  p.validate();
  return p;
}

SimConfig sim_config(const RunConfig& c, Command command, std::uint64_t seed) {
  SimConfig s;
  s.params = protocol_params(c);
  s.seed = seed;
  s.graph = build_graph(c, seed);

  const auto m = c.get_int("malicious_apps");
  if (m < 0 || m > s.params.apps_per_month) {
    throw ConfigError("key malicious_apps: must be in [0, N]");
  }
  for (AppId a = 0; a < m; ++a) s.malicious_app_ids.push_back(a);
  s.downloads_per_device = static_cast<int>(c.get_int("downloads"));
  s.arrival_rate = c.get_double("arrival_rate");
  s.arrival_malicious_fraction = c.get_double("arrival_malicious_fraction");
  s.arrival_install_probability = c.get_double("arrival_install_probability");
  s.max_steps = c.get_int("max_steps");

  auto& adv = s.adversary;
  adv.kind = parse_attack_kind(c.raw("attack"));
  if (command == Command::kAttack && adv.kind != AttackKind::kFraming &&
      adv.kind != AttackKind::kFramingDestinationControl) {
    adv.kind = AttackKind::kFraming;
  }
  if (command == Command::kMute) adv.kind = AttackKind::kMuting;
  if (command == Command::kSimulate && adv.kind != AttackKind::kMuting) {
    // framing is only run by `attack`
    if (adv.kind != AttackKind::kNone) {
      throw ConfigError("key attack: use the attack subcommand for framing");
    }
  }
  adv.k = static_cast<int>(c.get_int("attack_k"));
  const auto& target = c.raw("target_app");
  adv.target_app = target == "auto" ? static_cast<AppId>(m)
                                    : static_cast<AppId>(c.get_int("target_app"));
  adv.deception_goal = c.get_double("deception_goal");
  adv.p_mute = c.get_double("p_mute");
  s.validate();
  return s;
}

EpidemicConfig epidemic_config(const RunConfig& c, std::uint64_t seed) {
  EpidemicConfig e;
  e.params = protocol_params(c);
  if (c.raw("overlay") == "uniform") {
    throw ConfigError("key overlay: epidemic needs a contact graph (gnp or file)");
  }
  e.graph = build_graph(c, seed);
  e.monthly_downloads = c.get_double("monthly_downloads");
  e.new_fraction = c.get_double("new_fraction");
  e.malicious_fraction = c.get_double("malicious_fraction");
  e.initial_months = static_cast<int>(c.get_int("initial_months"));
  e.beta = c.get_double("beta");
  e.gamma = c.get_double("gamma");
  e.churn = c.get_double("churn");
  e.months = static_cast<int>(c.get_int("months"));
  e.steps_per_month = static_cast<int>(c.get_int("steps_per_month"));
  e.protocol_steps_per_step = static_cast<int>(c.get_int("protocol_steps_per_step"));
  e.seed = seed;
  e.validate();
  return e;
}

CoverageSettings coverage_settings(const RunConfig& c) {
  const auto p = protocol_params(c);
  CoverageSettings s;
  s.n = p.device_count;
  s.p_N = p.fanout_probability;
  s.rho = p.rho;
  s.epsilon = p.epsilon();
  s.walkers = static_cast<int>(c.get_int("walkers"));
  s.cap = c.get_int("coverage_cap");
  if (s.walkers < 1) throw ConfigError("key walkers: must be >= 1");
  if (s.cap < 1) throw ConfigError("key coverage_cap: must be >= 1");
  return s;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 0; i <= count; ++i) {
    // 12 significant digits drops the accumulated representation noise
    char buf[32];
    const double v = lo + static_cast<double>(i) * step;
    auto end = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12).ptr;
    double snapped = v;
    std::from_chars(buf, end, snapped);
    out.push_back(snapped);
  }
  return out;
}

SweepSpec parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("sweep: expected key=lo:hi:step");
  SweepSpec s;
  s.key = std::string(trim(text.substr(0, eq)));
  if (!find_key(s.key)) throw ConfigError("unknown key: " + s.key);
  auto rest = text.substr(eq + 1);
  double parts[3];
  for (int i = 0; i < 3; ++i) {
    const auto colon = rest.find(':');
    if ((i < 2) != (colon != std::string_view::npos)) {
      throw ConfigError("sweep: expected key=lo:hi:step");
    }
    parts[i] = parse_real(rest.substr(0, colon), s.key);
    if (colon != std::string_view::npos) rest = rest.substr(colon + 1);
  }
  s.lo = parts[0];
  s.hi = parts[1];
  s.step = parts[2];
  if (!(s.step > 0.0) || !(s.hi >= s.lo)) throw ConfigError("sweep: empty range");
  return s;
}

}  // namespace tpp::cli

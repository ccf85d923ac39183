#include "tpp/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "tpp/errors.hpp"

namespace tpp {

std::string_view to_string(OverlayMode mode) {
  switch (mode) {
    case OverlayMode::kGnp:
      return "gnp-overlay";
    case OverlayMode::kLoaded:
      return "loaded-graph";
    case OverlayMode::kUniform:
      return "uniform-random";
  }
  return "unknown";
}

OverlayGraph::OverlayGraph(OverlayMode mode, int node_count, double density,
                           const std::vector<std::vector<NodeId>>& out_neighbors)
    : mode_(mode), node_count_(node_count), density_(density) {
  if (node_count < 1) throw ParameterError("overlay needs at least one node");
  if (static_cast<int>(out_neighbors.size()) != node_count) {
    throw ParameterError("neighbor lists do not match node count");
  }
  offsets_.reserve(node_count + 1);
  offsets_.push_back(0);
  for (NodeId v = 0; v < node_count; ++v) {
    std::vector<NodeId> row = out_neighbors[v];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (NodeId u : row) {
      if (u == v) throw ParameterError("self-loop at node " + std::to_string(v));
      if (u < 0 || u >= node_count) {
        throw ParameterError("neighbor index out of range at node " +
                             std::to_string(v));
      }
    }
    targets_.insert(targets_.end(), row.begin(), row.end());
    offsets_.push_back(targets_.size());
  }
}

OverlayGraph OverlayGraph::uniform(int node_count, double density) {
  if (node_count < 2) throw ParameterError("uniform overlay needs n >= 2");
  OverlayGraph g;
  g.mode_ = OverlayMode::kUniform;
  g.node_count_ = node_count;
  g.density_ = density;
  g.offsets_.assign(node_count + 1, 0);
  return g;
}

int OverlayGraph::reachable_count(NodeId v) const {
  return mode_ == OverlayMode::kUniform ? node_count_ - 1 : out_degree(v);
}

bool OverlayGraph::has_arc(NodeId from, NodeId to) const {
  if (mode_ == OverlayMode::kUniform) return from != to;
  auto row = out_neighbors(from);
  return std::binary_search(row.begin(), row.end(), to);
}

namespace {

// One directed G(n,p) row by geometric skipping over the n-1 candidates.
std::vector<NodeId> gnp_row(int n, NodeId v, double p, Rng& rng) {
  std::vector<NodeId> row;
  if (p >= 1.0) {
    row.reserve(n - 1);
    for (NodeId u = 0; u < n; ++u) {
      if (u != v) row.push_back(u);
    }
    return row;
  }
  const double log_q = std::log1p(-p);
  std::int64_t slot = -1;  // index among the n-1 candidates
  while (true) {
    const double r = rng.uniform();
    slot += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    if (slot >= n - 1) break;
    const NodeId u = static_cast<NodeId>(slot < v ? slot : slot + 1);
    row.push_back(u);
  }
  return row;
}

constexpr std::uint64_t kInDegreeStream = std::uint64_t{1} << 63;

// Rows already satisfy the out-degree bounds. If some in-degree is out of
// bounds too, repair greedily and then run an add/remove Metropolis chain
// whose stationary law is G(n, p) restricted to graphs with every in- and
// out-degree inside [low, high].
void condition_in_degrees(std::vector<std::vector<NodeId>>& rows, int n, double p,
                          double low, double high, std::uint64_t seed) {
  const int lo = static_cast<int>(std::ceil(low));
  const int hi = static_cast<int>(std::floor(high));
  std::vector<int> in(n, 0), out(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    out[u] = static_cast<int>(rows[u].size());
    for (NodeId v : rows[u]) ++in[v];
  }
  if (std::all_of(in.begin(), in.end(), [&](int d) { return d >= lo && d <= hi; })) {
    return;
  }

  Rng rng(seed);
  const auto un = static_cast<std::uint64_t>(n);
  std::vector<std::pair<NodeId, NodeId>> arcs;
  std::unordered_map<std::uint64_t, std::size_t> where;
  auto key = [un](NodeId u, NodeId v) { return static_cast<std::uint64_t>(u) * un + v; };
  auto add = [&](NodeId u, NodeId v) {
    where.emplace(key(u, v), arcs.size());
    arcs.emplace_back(u, v);
    ++out[u];
    ++in[v];
  };
  auto remove = [&](std::size_t i) {
    const auto [u, v] = arcs[i];
    where.erase(key(u, v));
    if (i + 1 != arcs.size()) {
      arcs[i] = arcs.back();
      where[key(arcs[i].first, arcs[i].second)] = i;
    }
    arcs.pop_back();
    --out[u];
    --in[v];
  };
  std::fill(in.begin(), in.end(), 0);
  std::fill(out.begin(), out.end(), 0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : rows[u]) add(u, v);
  }

  // Greedy repair. When no sender has spare out-degree, an existing arc is
  // redirected instead, which keeps the sender's out-degree.
  auto redirect = [&](std::size_t i, NodeId u, NodeId w) {
    remove(i);
    add(u, w);
  };
  const std::int64_t budget = 1000 * static_cast<std::int64_t>(n);
  for (NodeId v = 0; v < n; ++v) {
    std::int64_t tries = 0;
    while (in[v] < lo) {
      if (++tries > budget) {
        throw DegenerateTopologyError("generate_gnp: in-degree repair failed");
      }
      if (tries % 2) {
        const auto u = static_cast<NodeId>(rng.below(un));
        if (u != v && out[u] < hi && !where.count(key(u, v))) add(u, v);
      } else {
        const auto i = static_cast<std::size_t>(rng.below(arcs.size()));
        const auto [u, w] = arcs[i];
        if (u != v && w != v && in[w] > lo && !where.count(key(u, v))) redirect(i, u, v);
      }
    }
    while (in[v] > hi) {
      if (++tries > budget) {
        throw DegenerateTopologyError("generate_gnp: in-degree repair failed");
      }
      const auto u = static_cast<NodeId>(rng.below(un));
      const auto it = where.find(key(u, v));
      if (it == where.end()) continue;
      if (out[u] > lo) {
        remove(it->second);
        continue;
      }
      const auto w = static_cast<NodeId>(rng.below(un));
      if (w != u && w != v && in[w] < hi && !where.count(key(u, w))) {
        redirect(it->second, u, w);
      }
    }
  }

  // Metropolis chain on the constrained graphs with target weight
  // p^E (1-p)^(pairs-E). Add and remove proposals are symmetric partners;
  // endpoint redirects keep E and are always accepted when valid.
  const double pairs = static_cast<double>(n) * (n - 1);
  const auto proposals = 40 * static_cast<std::int64_t>(arcs.size());
  for (std::int64_t i = 0; i < proposals; ++i) {
    const double e = static_cast<double>(arcs.size());
    const double a = pairs - e;
    const auto move = rng.below(3);
    if (move == 0) {
      if (arcs.empty()) continue;
      const auto idx = static_cast<std::size_t>(rng.below(arcs.size()));
      const auto [u, v] = arcs[idx];
      if (out[u] <= lo || in[v] <= lo) continue;
      if (rng.uniform() * p * (a + 1.0) < (1.0 - p) * e) remove(idx);
    } else if (move == 1) {
      if (a < 1.0) continue;
      NodeId u, v;
      do {
        u = static_cast<NodeId>(rng.below(un));
        v = static_cast<NodeId>(rng.below(un));
      } while (u == v || where.count(key(u, v)));
      if (out[u] >= hi || in[v] >= hi) continue;
      if (rng.uniform() * (1.0 - p) * (e + 1.0) < p * a) add(u, v);
    } else {
      if (arcs.empty()) continue;
      const auto idx = static_cast<std::size_t>(rng.below(arcs.size()));
      const auto [u, v] = arcs[idx];
      const auto w = static_cast<NodeId>(rng.below(un));
      if (rng.bernoulli(0.5)) {
        // u -> v becomes u -> w
        if (w == u || w == v || where.count(key(u, w))) continue;
        if (in[v] <= lo || in[w] >= hi) continue;
        redirect(idx, u, w);
      } else {
        // u -> v becomes w -> v
        if (w == u || w == v || where.count(key(w, v))) continue;
        if (out[u] <= lo || out[w] >= hi) continue;
        redirect(idx, w, v);
      }
    }
  }

  for (auto& row : rows) row.clear();
  for (const auto& [u, v] : arcs) rows[u].push_back(v);
}

}  // namespace

OverlayGraph generate_gnp(int n, double p_N, std::uint64_t seed) {
  if (n < 2) throw ParameterError("generate_gnp: n must be >= 2");
  if (!(p_N > 0.0 && p_N <= 1.0)) {
    throw ParameterError("generate_gnp: p_N must be in (0, 1]");
  }
  if (n * p_N < std::log(static_cast<double>(n))) {
    throw ParameterError(
        "generate_gnp: n*p_N below ln n, outside the connectivity regime");
  }
  constexpr int kMaxAttempts = 100;
  const double low = n * p_N / 2.0;
  const double high = 3.0 * n * p_N / 2.0;
  const std::uint64_t graph_seed = Rng::derive(seed, stream::kGraph);

  std::vector<std::vector<NodeId>> rows(n);
  for (NodeId v = 0; v < n; ++v) {
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
      Rng rng(Rng::derive(graph_seed, (static_cast<std::uint64_t>(v) << 8) |
                                          static_cast<std::uint64_t>(attempt)));
      auto row = gnp_row(n, v, p_N, rng);
      const double degree = static_cast<double>(row.size());
      if (degree >= low && degree <= high) {
        rows[v] = std::move(row);
        accepted = true;
      }
    }
    if (!accepted) {
      throw DegenerateTopologyError("generate_gnp: node " + std::to_string(v) +
                                    " never met the degree bounds");
    }
  }
  condition_in_degrees(rows, n, p_N, low, high, Rng::derive(graph_seed, kInDegreeStream));
  return OverlayGraph(OverlayMode::kGnp, n, p_N, rows);
}

OverlayGraph load_edge_list(std::istream& source) {
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::vector<NodeId>> rows;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = index.try_emplace(label, static_cast<NodeId>(rows.size()));
    if (inserted) rows.emplace_back();
    return it->second;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string a, b, extra;
    if (!(tokens >> a)) continue;
    if (!(tokens >> b) || (tokens >> extra)) {
      throw ParseError(line_no, "expected exactly two node labels");
    }
    const NodeId u = id_of(a);
    const NodeId v = id_of(b);
    if (u == v) continue;
    rows[u].push_back(v);
    rows[v].push_back(u);
  }

  const int n = static_cast<int>(rows.size());
  if (n < 2) {
    throw DegenerateTopologyError("edge list defines fewer than 2 nodes");
  }
  std::size_t arcs = 0;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    arcs += row.size();
  }
  const double density =
      static_cast<double>(arcs) / (static_cast<double>(n) * (n - 1));
  return OverlayGraph(OverlayMode::kLoaded, n, density, rows);
}

NodeId sample_destination(const OverlayGraph& graph, NodeId from, Rng& rng) {
  if (graph.mode() == OverlayMode::kUniform) {
    const int n = graph.node_count();
    if (n < 2) throw InsufficientFanoutError("no other node to address");
    auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n - 1)));
    return u < from ? u : u + 1;
  }
  auto row = graph.out_neighbors(from);
  if (row.empty()) {
    throw InsufficientFanoutError("node " + std::to_string(from) +
                                  " has no out-neighbors");
  }
  return row[rng.below(row.size())];
}

std::vector<NodeId> sample_destinations(const OverlayGraph& graph, NodeId from,
                                        int count, Rng& rng) {
  if (count < 1) throw ParameterError("sample_destinations: count must be >= 1");
  const int pool = graph.reachable_count(from);
  if (count > pool) {
    throw InsufficientFanoutError(
        "node " + std::to_string(from) + " can reach " + std::to_string(pool) +
        " destinations, " + std::to_string(count) + " requested");
  }

  std::vector<NodeId> out;
  out.reserve(count);
  if (graph.mode() != OverlayMode::kUniform) {
    auto row = graph.out_neighbors(from);
    std::vector<NodeId> scratch(row.begin(), row.end());
    for (int i = 0; i < count; ++i) {
      auto j = i + static_cast<std::size_t>(rng.below(scratch.size() - i));
      std::swap(scratch[i], scratch[j]);
      out.push_back(scratch[i]);
    }
    return out;
  }

  const int n = graph.node_count();
  if (4 * static_cast<std::int64_t>(count) >= n) {
    std::vector<NodeId> scratch;
    scratch.reserve(n - 1);
    for (NodeId u = 0; u < n; ++u) {
      if (u != from) scratch.push_back(u);
    }
    for (int i = 0; i < count; ++i) {
      auto j = i + static_cast<std::size_t>(rng.below(scratch.size() - i));
      std::swap(scratch[i], scratch[j]);
      out.push_back(scratch[i]);
    }
    return out;
  }
  // Sparse draw: rejection against the (short) list picked so far.
  while (static_cast<int>(out.size()) < count) {
    const NodeId u = sample_destination(graph, from, rng);
    if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
  }
  return out;
}

}  // namespace tpp

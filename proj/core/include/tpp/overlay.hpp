#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "tpp/rng.hpp"

namespace tpp {

using NodeId = int;

enum class OverlayMode {
  kGnp,      // directed Erdos-Renyi overlay
  kLoaded,   // symmetrized real-world edge list
  kUniform,  // no stored arcs; any other member is reachable
};

std::string_view to_string(OverlayMode mode);

/// Message-forwarding topology. Immutable once built, so one instance can be
/// shared by concurrent replica runs.
class OverlayGraph {
 public:
  /// Builds from per-node out-neighbor lists. Lists are sorted and
  /// de-duplicated; self-loops and out-of-range targets are rejected.
  OverlayGraph(OverlayMode mode, int node_count, double density,
               const std::vector<std::vector<NodeId>>& out_neighbors);

  /// Uniform-random-member mode: no arcs are stored, destinations are drawn
  /// over all n-1 other nodes.
  static OverlayGraph uniform(int node_count, double density);

  int node_count() const noexcept { return node_count_; }
  double density() const noexcept { return density_; }
  OverlayMode mode() const noexcept { return mode_; }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  int out_degree(NodeId v) const {
    return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  }
  /// Number of destinations a node can address; n-1 in uniform mode.
  int reachable_count(NodeId v) const;

  std::size_t arc_count() const noexcept { return targets_.size(); }
  bool has_arc(NodeId from, NodeId to) const;

  bool operator==(const OverlayGraph&) const = default;

 private:
  OverlayGraph() = default;

  OverlayMode mode_ = OverlayMode::kUniform;
  int node_count_ = 0;
  double density_ = 0.0;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

/// Directed G(n, p_N). Each ordered pair is an arc with probability p_N,
/// conditioned on every out- and in-degree lying in [n*p_N/2, 3*n*p_N/2].
/// Rows with an out-of-bounds out-degree are redrawn from a fresh sub-stream,
/// at most 100 times per row; in-degrees are then brought into bounds and
/// resampled by a Metropolis chain on the constrained graphs.
///
/// Throws ParameterError unless n >= 2, 0 < p_N <= 1 and n*p_N >= ln n.
/// Throws DegenerateTopologyError when a row never meets the bounds.
OverlayGraph generate_gnp(int n, double p_N, std::uint64_t seed);

/// Reads "a b" label pairs, one undirected edge per line. '#' starts a
/// comment and blank lines are skipped. Labels get dense indices in order of
/// first appearance, each edge becomes two arcs and duplicates collapse.
OverlayGraph load_edge_list(std::istream& source);

/// `count` distinct destinations for a message leaving `from`, uniform without
/// replacement over its out-neighbors (or over every other node in uniform
/// mode). Throws InsufficientFanoutError if the pool is smaller than count.
std::vector<NodeId> sample_destinations(const OverlayGraph& graph, NodeId from,
                                        int count, Rng& rng);

/// Single-destination fast path used for every forwarding hop.
NodeId sample_destination(const OverlayGraph& graph, NodeId from, Rng& rng);

}  // namespace tpp

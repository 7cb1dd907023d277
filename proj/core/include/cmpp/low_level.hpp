#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cmpp/congestion.hpp"
#include "cmpp/graph.hpp"
#include "cmpp/instance.hpp"

namespace cmpp {

struct AgentEdge {
  AgentIndex agent = 0;
  EdgeIndex edge = 0;
  friend auto operator<=>(const AgentEdge&, const AgentEdge&) = default;
};

/// Forced (C+) and forbidden (C-) (agent, edge) pairs, kept sorted so that the
/// per-agent slices are contiguous.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  // Sorts and deduplicates; throws Error if a pair appears in both lists.
  static ConstraintSet from_pairs(std::vector<AgentEdge> forced, std::vector<AgentEdge> forbidden);

  // Both throw Error if the pair already sits in the opposite set.
  void add_forced(AgentIndex agent, EdgeIndex edge);
  void add_forbidden(AgentIndex agent, EdgeIndex edge);

  bool is_forced(AgentIndex agent, EdgeIndex edge) const;
  bool is_forbidden(AgentIndex agent, EdgeIndex edge) const;

  // Edge indices in ascending order.
  std::span<const AgentEdge> forced_for(AgentIndex agent) const;
  std::span<const AgentEdge> forbidden_for(AgentIndex agent) const;

  const std::vector<AgentEdge>& forced() const { return forced_; }
  const std::vector<AgentEdge>& forbidden() const { return forbidden_; }
  bool empty() const { return forced_.empty() && forbidden_.empty(); }
  std::size_t size() const { return forced_.size() + forbidden_.size(); }

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

 private:
  std::vector<AgentEdge> forced_;
  std::vector<AgentEdge> forbidden_;
};

/// Minimum sum-of-delta_cost path from `start` to `goal`.
///
/// `flow` must exclude the planning agent's own path. Edges in `forbidden`
/// (sorted edge indices) are never used, and vertices flagged in `excluded`
/// are never entered (the start is exempt); `excluded` may be empty. Ties are
/// broken by fewer edges, then by the smaller vertex index at the first point
/// where two candidate paths diverge. Returns nullopt when no path exists.
std::optional<Path> dijkstra_min_delta(const SparseGraph& graph, const FlowField& flow,
                                       VertexIndex start, VertexIndex goal,
                                       std::span<const EdgeIndex> forbidden = {},
                                       std::span<const char> excluded = {});

struct LowLevelOptions {
  // When the segment-stitching approximation fails, an exhaustive simple-path
  // search is run with this many DFS steps before the agent is declared
  // infeasible. Zero disables the fallback.
  std::uint64_t fallback_steps = 20000;
};

/// Plans agent `agent` under its slice of `constraints`.
///
/// Forced edges are visited in order of Euclidean distance from `start` to the
/// edge's tail (ties by edge index). Each leg is a dijkstra_min_delta call that
/// avoids vertices already on the path, the goal and every endpoint of forced
/// edges still ahead. If that fails and `hint` (usually the agent's previous
/// path) is given, the forced edges are retried in the order they appear on
/// it. Returns nullopt if no constraint-satisfying path is found.
std::optional<Path> plan_with_constraints(const SparseGraph& graph, const FlowField& flow,
                                          AgentIndex agent, VertexIndex start, VertexIndex goal,
                                          const ConstraintSet& constraints,
                                          const LowLevelOptions& options = {},
                                          std::span<const VertexIndex> hint = {});

// Minimum sum-of-delta_cost simple path that contains every edge in `forced`
// and none in `forbidden`, found by depth-first branch and bound. Gives up
// after `max_steps` expansions; `complete` reports whether the search finished.
struct ExhaustivePlan {
  std::optional<Path> path;
  bool complete = false;
};
ExhaustivePlan exhaustive_constrained_path(const SparseGraph& graph, const FlowField& flow,
                                           VertexIndex start, VertexIndex goal,
                                           std::span<const EdgeIndex> forced,
                                           std::span<const EdgeIndex> forbidden,
                                           std::uint64_t max_steps);

}  // namespace cmpp

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmpp/cost.hpp"
#include "cmpp/instance.hpp"
#include "cmpp/low_level.hpp"

namespace cmpp {

/// z_{i,e} = 1 iff agent i traverses directed edge e.
class EdgeIndicatorMatrix {
 public:
  EdgeIndicatorMatrix(std::size_t agents, std::size_t edges) : edges_(edges), z_(agents * edges, 0) {}
  // Paths with edges missing from the graph are skipped at that step.
  static EdgeIndicatorMatrix from_paths(const Solution& solution, const SparseGraph& graph);

  bool operator()(std::size_t agent, EdgeIndex e) const {
    return z_[agent * edges_ + static_cast<std::size_t>(e)] != 0;
  }
  void set(std::size_t agent, EdgeIndex e) { z_[agent * edges_ + static_cast<std::size_t>(e)] = 1; }
  std::size_t num_agents() const { return edges_ == 0 ? 0 : z_.size() / edges_; }

 private:
  std::size_t edges_;
  std::vector<char> z_;
};

enum class ViolationKind {
  agent_count,      // number of paths differs from number of agents
  empty_path,
  unknown_vertex,
  adjacency,        // consecutive vertices with no edge
  start,            // first vertex is not s_i
  goal,             // last vertex is not g_i
  simple_path,      // a vertex appears twice
  start_outflow,    // sum of z over out(s_i) != 1
  goal_inflow,      // sum of z over in(g_i) != 1
  conservation,     // in-flow != out-flow at an intermediate vertex
  anti_parallel,    // z_{i,(u,v)} + z_{i,(v,u)} > 1
  flow_mismatch,    // f_e != sum_i z_{i,e}
  cost_mismatch,    // claimed objective != sum_v C(v)
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int agent = -1;            // agent id, -1 when not agent-specific
  int vertex = -1;           // vertex id, -1 when not applicable
  std::size_t position = 0;  // index into the path, when applicable
  std::string detail;
};

// Checks a solution against the mathematical-programming model of the problem
// (flow and congestion definitions, start/goal unit flow, conservation,
// anti-parallel exclusion) plus the path-level start/goal/adjacency/simplicity
// rules. Returns every violation found; empty means valid.
std::vector<Violation> validate_minlp(const Solution& solution, const CmppInstance& instance);

struct ExactOptions {
  // Maximum edges per path. nullopt means per-agent shortest length + detour_slack.
  std::optional<int> length_cap;
  int detour_slack = 4;
  std::optional<ConstraintSet> constraints;
};

struct ExactResult {
  Solution solution;
  Cost cost;
  // Largest per-agent cap actually used.
  int cap_used = 0;
  std::uint64_t assignments_explored = 0;
};

// Provably optimal solution among all simple paths within the cap, found by
// enumerating candidate paths per agent and branch and bound over joint
// assignments. Throws InfeasibleError when no assignment exists and Error
// when the cap is below an agent's shortest path length.
ExactResult exact_solve(const CmppInstance& instance, const ExactOptions& options = {});

// All simple paths from start to goal with at most `max_edges` edges that
// satisfy the given forced/forbidden edge lists, in lexicographic vertex order.
std::vector<Path> enumerate_simple_paths(const SparseGraph& graph, VertexIndex start, VertexIndex goal,
                                         int max_edges, std::span<const EdgeIndex> forced = {},
                                         std::span<const EdgeIndex> forbidden = {});

}  // namespace cmpp

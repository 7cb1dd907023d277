#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmpp/congestion.hpp"
#include "cmpp/instance.hpp"
#include "cmpp/low_level.hpp"

namespace cmpp {

/// Admissible lower-bound estimators for a search node.
///
/// path_length: sum over agents of the shortest edge count avoiding the
///   agent's forbidden edges. Admissible because C(v) >= sum of inflows.
/// forced_surplus: path_length plus, per vertex, the part of C(v) that the
///   forced flows F alone already exceed their sum by, prod(F_e + 1) - 1 - sum F_e.
///   That surplus is monotone in every flow, so the bound stays admissible.
/// forced_congestion: sum_v (prod(F_e + 1) - 1) plus, per agent, the cheapest
///   route in which every edge not forced for that agent costs
///   prod_{e' in in(v), e' != e} (F_e' + 1). The first-order expansion of the
///   product gives the inequality; it dominates both estimators above.
enum class LowerBoundMode { path_length, forced_surplus, forced_congestion };

std::string to_string(LowerBoundMode mode);
// Accepts the names produced by to_string; throws Error otherwise.
LowerBoundMode parse_lower_bound_mode(const std::string& name);

struct SearchNode {
  ConstraintSet constraints;
  Solution paths;
  Cost cost;
  // A dead node has no constraint-satisfying solution; cost is then Cost::max().
  bool dead = false;
};

struct SolverConfig {
  double omega = 1.0;
  // Wall-clock budget; nullopt means unlimited.
  std::optional<std::chrono::duration<double>> time_limit;
  // Deterministic budget on node expansions; nullopt means unlimited.
  std::optional<std::uint64_t> max_expansions;
  std::uint64_t seed = 0;
  std::optional<Solution> warm_start;
  LowerBoundMode lower_bound = LowerBoundMode::forced_congestion;
  LowLevelOptions low_level;
};

// Throws Error when omega < 1 or not finite.
void validate(const SolverConfig& config);

struct TracePoint {
  double elapsed_seconds = 0.0;
  Cost cost;
};

struct SolverReport {
  Solution best;
  Cost best_cost;
  Cost initial_cost;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t nodes_pruned = 0;
  std::uint64_t nodes_generated = 0;
  double time_to_initial = 0.0;
  double elapsed = 0.0;
  // First entry is the root solution; costs strictly decrease.
  std::vector<TracePoint> improvement_trace;
  // True when the open list ran empty, i.e. the omega guarantee holds.
  bool exhausted = false;
  LowerBoundMode lower_bound = LowerBoundMode::forced_congestion;
};

// Prioritized planning: agents in `priority_order` (default ascending index)
// each take the minimum-delta_cost path against the already planned flow.
// Throws InfeasibleError naming the first agent that cannot reach its goal.
Solution pp_initial(const CmppInstance& instance, std::span<const AgentIndex> priority_order = {},
                    const LowLevelOptions& options = {});

// Root paths for a lifelong step: agents outside `changed` whose previous path
// is still valid keep it; the rest are replanned in ascending index order
// against the kept flow.
Solution warm_start_paths(const CmppInstance& instance, const Solution& previous,
                          std::span<const AgentIndex> changed, const LowLevelOptions& options = {});

SearchNode make_root(const CmppInstance& instance, Solution paths);

// argmax C(v) over vertices entered by some agent through an edge that is not
// forced for that agent; ties to the smaller index.
std::optional<VertexIndex> select_vertex(const SearchNode& node, const CmppInstance& instance);

// Among agents entering v through a non-forced edge, the one whose removal
// from that edge lowers C(v) the most; ties by higher f_e, then smaller index.
AgentEdge select_agent(const SearchNode& node, const CmppInstance& instance, VertexIndex v);

// nullopt stands for +infinity: some agent cannot reach its goal.
std::optional<Cost> lower_bound(const SearchNode& node, const CmppInstance& instance,
                                LowerBoundMode mode = LowerBoundMode::forced_congestion);

// Returns (P, Q): P forces (a, e) and keeps the paths; Q forbids (a, e),
// replans a, then replans every other agent visiting v in ascending index.
std::pair<SearchNode, SearchNode> expand_node(const SearchNode& node, const CmppInstance& instance,
                                              AgentIndex agent, EdgeIndex edge, VertexIndex v,
                                              const LowLevelOptions& options = {});

// Anytime best-first branch and bound. Throws InfeasibleError before search
// when some agent cannot reach its goal.
SolverReport solve(const CmppInstance& instance, const SolverConfig& config);

// solve() seeded with warm_start_paths(previous, changed) instead of PP.
SolverReport solve_lifelong_step(const CmppInstance& instance, const Solution& previous,
                                 std::span<const AgentIndex> changed, const SolverConfig& config);

}  // namespace cmpp

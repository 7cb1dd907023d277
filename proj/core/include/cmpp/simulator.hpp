#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cmpp/abstraction.hpp"
#include "cmpp/acmts.hpp"
#include "cmpp/cost.hpp"
#include "cmpp/grid_map.hpp"
#include "cmpp/pibt.hpp"

namespace cmpp {

enum class GuidanceKind { none, parity, cmpp };

std::string to_string(GuidanceKind kind);
// Throws Error on anything but "none", "parity" or "cmpp".
GuidanceKind parse_guidance_kind(const std::string& name);

struct GuidanceMode {
  GuidanceKind kind = GuidanceKind::none;
  // Used by cmpp only. The simulator budget is max_expansions; wall-clock
  // limits are ignored so runs stay reproducible.
  SolverConfig solver;
  int replan_period = 1;
};

struct SimConfig {
  SparsifyOptions sparsify;
  int agents = 10;
  int steps = 500;
  std::uint64_t seed = 0;
  GuidanceMode mode;
};

struct SimAgent {
  CellIndex pos = 0;
  CellIndex goal = 0;
  // Remaining CMPP path on the sparse graph; front is the current vertex.
  Path plan;
  // Steps since the last arrival; the PIBT priority.
  std::int64_t elapsed = 0;
  std::uint64_t arrivals = 0;
  bool needs_replan = true;
};

/// Simulator state. Agents start on distinct random cells with random goals
/// drawn from their own connected component.
class SimWorld {
 public:
  // Throws Error when there are more agents than traversable cells.
  SimWorld(GridMap grid, const SimConfig& config);

  const GridMap& grid() const { return grid_; }
  const Abstraction& abstraction() const { return abstraction_; }
  const std::vector<SimAgent>& agents() const { return agents_; }
  std::vector<SimAgent>& agents() { return agents_; }
  std::uint64_t clock() const { return clock_; }
  DistanceCache& distances() { return distances_; }

  std::vector<CellIndex> positions() const;
  // Draws a fresh goal for agent `a`, different from its position when its
  // component has more than one cell.
  void assign_goal(std::size_t a);
  // Applies a step: moves agents, counts arrivals, reassigns goals.
  // Returns the number of arrivals this step.
  std::uint64_t advance(const std::vector<CellIndex>& next);

  // Sparse instance with goals f(goal). An agent with a live plan starts at
  // the plan front, the last plan region it entered; others start at f(pos).
  CmppInstance sparse_instance() const;

 private:
  GridMap grid_;
  Abstraction abstraction_;
  std::vector<SimAgent> agents_;
  std::uint64_t clock_ = 0;
  std::mt19937_64 rng_;
  DistanceCache distances_;
  std::vector<int> component_;
  std::vector<std::vector<CellIndex>> component_cells_;
};

// Advances each plan to the furthest vertex equal to f(pos). Leaving the plan
// regions does not reset the plan; the agent keeps its waypoint. Agents with
// no plan or a stale goal are flagged for replanning.
void update_plans(SimWorld& world);

// Per-agent target cells: goal for none/parity; for cmpp, g(plan[1]) when the
// plan has at least three vertices, else the goal.
std::vector<CellIndex> guidance_targets(const SimWorld& world, const GuidanceMode& mode);

struct SimReport {
  std::string mode;
  std::uint64_t seed = 0;
  int steps = 0;
  int agents = 0;
  std::uint64_t arrivals = 0;
  double throughput = 0.0;
  std::uint64_t vertex_conflicts = 0;
  std::uint64_t edge_conflicts = 0;
  std::uint64_t invalid_moves = 0;
  std::uint64_t conflicts = 0;
  // Total congestion of the sparse routes in force at each step: the CMPP
  // plan in cmpp mode, hop-shortest routes otherwise.
  std::vector<Cost> congestion_trace;
  // Per-cell agent visit counts, row-major.
  std::vector<std::uint64_t> occupancy;
  std::uint64_t replans = 0;
  std::uint64_t nodes_expanded = 0;
  std::size_t sparse_vertices = 0;
  std::size_t grid_cells = 0;
};

SimReport run_lifelong(const GridMap& grid, const SimConfig& config);

}  // namespace cmpp

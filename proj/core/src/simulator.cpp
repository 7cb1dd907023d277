#include "cmpp/simulator.hpp"

#include <algorithm>
#include <unordered_map>

#include "cmpp/congestion.hpp"
#include "cmpp/error.hpp"

namespace cmpp {

namespace {

constexpr std::uint64_t kDefaultSimBudget = 200;

}  // namespace

std::string to_string(GuidanceKind kind) {
  switch (kind) {
    case GuidanceKind::none: return "none";
    case GuidanceKind::parity: return "parity";
    case GuidanceKind::cmpp: return "cmpp";
  }
  return "unknown";
}

GuidanceKind parse_guidance_kind(const std::string& name) {
  if (name == "none") return GuidanceKind::none;
  if (name == "parity") return GuidanceKind::parity;
  if (name == "cmpp") return GuidanceKind::cmpp;
  throw Error("unknown guidance mode '" + name + "' (expected none, parity or cmpp)");
}

SimWorld::SimWorld(GridMap grid, const SimConfig& config)
    : grid_(std::move(grid)), rng_(config.seed), distances_(grid_) {
  abstraction_ = sparsify(grid_, config.sparsify);
  if (config.agents < 0) throw Error("agent count must be non-negative");
  std::vector<CellIndex> free;
  for (std::size_t c = 0; c < grid_.size(); ++c) {
    if (grid_.traversable(static_cast<CellIndex>(c))) free.push_back(static_cast<CellIndex>(c));
  }
  if (static_cast<std::size_t>(config.agents) > free.size()) {
    throw Error("cannot place " + std::to_string(config.agents) + " agents on " + std::to_string(free.size()) +
                " traversable cells");
  }

  component_.assign(grid_.size(), -1);
  for (CellIndex c : free) {
    if (component_[static_cast<std::size_t>(c)] >= 0) continue;
    const int id = static_cast<int>(component_cells_.size());
    component_cells_.emplace_back();
    std::vector<CellIndex>& cells = component_cells_.back();
    cells.push_back(c);
    component_[static_cast<std::size_t>(c)] = id;
    for (std::size_t head = 0; head < cells.size(); ++head) {
      for (CellIndex nb : grid_.neighbors(cells[head])) {
        if (nb >= 0 && component_[static_cast<std::size_t>(nb)] < 0) {
          component_[static_cast<std::size_t>(nb)] = id;
          cells.push_back(nb);
        }
      }
    }
    std::sort(cells.begin(), cells.end());
  }

  std::shuffle(free.begin(), free.end(), rng_);
  agents_.resize(static_cast<std::size_t>(config.agents));
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    agents_[a].pos = free[a];
    assign_goal(a);
  }
}

std::vector<CellIndex> SimWorld::positions() const {
  std::vector<CellIndex> out;
  out.reserve(agents_.size());
  for (const SimAgent& agent : agents_) out.push_back(agent.pos);
  return out;
}

void SimWorld::assign_goal(std::size_t a) {
  SimAgent& agent = agents_[a];
  const auto& cells = component_cells_[static_cast<std::size_t>(component_[static_cast<std::size_t>(agent.pos)])];
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  do {
    agent.goal = cells[pick(rng_)];
  } while (cells.size() > 1 && agent.goal == agent.pos);
  agent.needs_replan = true;
}

std::uint64_t SimWorld::advance(const std::vector<CellIndex>& next) {
  std::uint64_t arrived = 0;
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    SimAgent& agent = agents_[a];
    agent.pos = next[a];
    ++agent.elapsed;
    if (agent.pos == agent.goal) {
      ++agent.arrivals;
      ++arrived;
      agent.elapsed = 0;
      assign_goal(a);
    }
  }
  ++clock_;
  return arrived;
}

CmppInstance SimWorld::sparse_instance() const {
  std::vector<CellIndex> starts, goals;
  starts.reserve(agents_.size());
  goals.reserve(agents_.size());
  for (const SimAgent& agent : agents_) {
    starts.push_back(agent.pos);
    goals.push_back(agent.goal);
  }
  CmppInstance lifted = lift_instance(abstraction_, starts, goals);
  std::vector<Agent> agents = lifted.agents();
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (!agents_[a].needs_replan && !agents_[a].plan.empty()) agents[a].start = agents_[a].plan.front();
  }
  return CmppInstance(lifted.graph_ptr(), std::move(agents));
}

void update_plans(SimWorld& world) {
  const Abstraction& abs = world.abstraction();
  for (SimAgent& agent : world.agents()) {
    if (agent.plan.empty() || agent.plan.back() != abs.f(agent.goal)) {
      agent.needs_replan = true;
      continue;
    }
    auto it = std::find(agent.plan.begin() + 1, agent.plan.end(), abs.f(agent.pos));
    if (it != agent.plan.end()) agent.plan.erase(agent.plan.begin(), it);
  }
}

std::vector<CellIndex> guidance_targets(const SimWorld& world, const GuidanceMode& mode) {
  std::vector<CellIndex> out;
  out.reserve(world.agents().size());
  for (const SimAgent& agent : world.agents()) {
    if (mode.kind == GuidanceKind::cmpp && agent.plan.size() >= 3) {
      out.push_back(world.abstraction().g(agent.plan[1]));
    } else {
      out.push_back(agent.goal);
    }
  }
  return out;
}

SimReport run_lifelong(const GridMap& grid, const SimConfig& config) {
  if (config.steps < 0) throw Error("step count must be non-negative");
  if (config.mode.replan_period < 1) throw Error("replan period must be at least 1");
  SimWorld world(grid, config);
  const SparseGraph& sparse = world.abstraction().graph();
  const bool guided = config.mode.kind == GuidanceKind::cmpp;

  SolverConfig solver = config.mode.solver;
  solver.time_limit.reset();
  solver.warm_start.reset();
  if (!solver.max_expansions) solver.max_expansions = kDefaultSimBudget;
  validate(solver);

  SimReport report;
  report.mode = to_string(config.mode.kind);
  report.seed = config.seed;
  report.steps = config.steps;
  report.agents = config.agents;
  report.sparse_vertices = sparse.num_vertices();
  report.grid_cells = grid.size();
  report.occupancy.assign(grid.size(), 0);
  for (const SimAgent& agent : world.agents()) ++report.occupancy[static_cast<std::size_t>(agent.pos)];

  // Hop-shortest routes for the unguided congestion trace, keyed by (s, g).
  std::unordered_map<std::int64_t, Path> routes;
  const FlowField empty(sparse);
  auto shortest_route_cost = [&]() {
    FlowField flow(sparse);
    Solution solution;
    for (const SimAgent& agent : world.agents()) {
      VertexIndex s = world.abstraction().f(agent.pos), g = world.abstraction().f(agent.goal);
      auto key = static_cast<std::int64_t>(s) * static_cast<std::int64_t>(sparse.num_vertices()) + g;
      auto it = routes.find(key);
      if (it == routes.end()) {
        auto path = dijkstra_min_delta(sparse, empty, s, g);
        it = routes.emplace(key, path ? *path : Path{s}).first;
      }
      solution.paths.push_back(it->second);
    }
    return total_cost(solution, sparse);
  };

  for (int step = 0; step < config.steps; ++step) {
    if (guided) {
      update_plans(world);
      bool any_stale = std::any_of(world.agents().begin(), world.agents().end(),
                                   [](const SimAgent& a) { return a.needs_replan; });
      if (step % config.mode.replan_period == 0 || any_stale) {
        CmppInstance instance = world.sparse_instance();
        Solution previous;
        std::vector<AgentIndex> changed;
        for (std::size_t a = 0; a < world.agents().size(); ++a) {
          const SimAgent& agent = world.agents()[a];
          previous.paths.push_back(agent.plan.empty() ? Path{instance.agents()[a].start} : agent.plan);
          if (agent.needs_replan) changed.push_back(static_cast<AgentIndex>(a));
        }
        SolverReport solved = solve_lifelong_step(instance, previous, changed, solver);
        for (std::size_t a = 0; a < world.agents().size(); ++a) {
          world.agents()[a].plan = solved.best.paths[a];
          world.agents()[a].needs_replan = false;
        }
        ++report.replans;
        report.nodes_expanded += solved.nodes_expanded;
        report.congestion_trace.push_back(solved.best_cost);
      } else {
        Solution current;
        for (const SimAgent& agent : world.agents()) current.paths.push_back(agent.plan);
        report.congestion_trace.push_back(total_cost(current, sparse));
      }
    } else {
      report.congestion_trace.push_back(shortest_route_cost());
    }

    std::vector<CellIndex> before = world.positions();
    std::vector<CellIndex> targets = guidance_targets(world, config.mode);
    std::vector<std::int64_t> priorities;
    priorities.reserve(before.size());
    for (const SimAgent& agent : world.agents()) priorities.push_back(agent.elapsed);
    PibtRequest request{before, targets, priorities, config.mode.kind == GuidanceKind::parity};
    std::vector<CellIndex> next = pibt_step(world.grid(), request, world.distances());

    StepConflicts conflicts = check_step(world.grid(), before, next);
    report.vertex_conflicts += conflicts.vertex;
    report.edge_conflicts += conflicts.edge;
    report.invalid_moves += conflicts.invalid;
    report.arrivals += world.advance(next);
    for (CellIndex c : next) ++report.occupancy[static_cast<std::size_t>(c)];
  }

  report.conflicts = report.vertex_conflicts + report.edge_conflicts + report.invalid_moves;
  report.throughput = config.steps > 0 ? static_cast<double>(report.arrivals) / config.steps : 0.0;
  return report;
}

}  // namespace cmpp

#include "cmpp/acmts.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <tuple>

#include "cmpp/error.hpp"

namespace cmpp {

std::string to_string(LowerBoundMode mode) {
  switch (mode) {
    case LowerBoundMode::path_length: return "path-length";
    case LowerBoundMode::forced_surplus: return "forced-surplus";
    case LowerBoundMode::forced_congestion: return "forced-congestion";
  }
  return "unknown";
}

LowerBoundMode parse_lower_bound_mode(const std::string& name) {
  for (auto mode : {LowerBoundMode::path_length, LowerBoundMode::forced_surplus,
                    LowerBoundMode::forced_congestion}) {
    if (to_string(mode) == name) return mode;
  }
  throw Error("unknown lower-bound mode '" + name + "'");
}

void validate(const SolverConfig& config) {
  if (!std::isfinite(config.omega) || config.omega < 1.0) {
    throw Error("suboptimality factor omega must be a finite value >= 1.0");
  }
  if (config.time_limit && config.time_limit->count() < 0.0) {
    throw Error("time limit must be non-negative");
  }
}

namespace {

using PathRefs = std::vector<const Path*>;

PathRefs refs_of(const Solution& solution) {
  PathRefs refs;
  refs.reserve(solution.paths.size());
  for (const Path& p : solution.paths) refs.push_back(&p);
  return refs;
}

CongestionState state_of(const SparseGraph& graph, const PathRefs& paths) {
  CongestionState state(graph);
  for (const Path* p : paths) state.apply(*p);
  return state;
}

bool forced_in_slice(std::span<const AgentEdge> slice, EdgeIndex e) {
  return std::any_of(slice.begin(), slice.end(), [e](const AgentEdge& ae) { return ae.edge == e; });
}

// Shortest edge count for agent a avoiding its forbidden edges; -1 if none.
int min_length(const CmppInstance& instance, const ConstraintSet& constraints, AgentIndex a) {
  const Agent& agent = instance.agent(a);
  if (agent.start == agent.goal) return 0;
  auto forbidden = constraints.forbidden_for(a);
  auto dist = bfs_distances(instance.graph(), agent.start, [&](EdgeIndex e) {
    return std::binary_search(forbidden.begin(), forbidden.end(), AgentEdge{a, e});
  });
  return dist[static_cast<std::size_t>(agent.goal)];
}

std::optional<std::uint64_t> min_length_sum(const CmppInstance& instance,
                                            const ConstraintSet& constraints) {
  std::uint64_t sum = 0;
  for (std::size_t a = 0; a < instance.num_agents(); ++a) {
    int len = min_length(instance, constraints, static_cast<AgentIndex>(a));
    if (len < 0) return std::nullopt;
    sum += static_cast<std::uint64_t>(len);
  }
  return sum;
}

// Flow made of forced constraints only: F_e = #agents forced onto e.
FlowField forced_flow(const SparseGraph& graph, const ConstraintSet& constraints) {
  FlowField flow(graph);
  for (const AgentEdge& ae : constraints.forced()) flow.increment(ae.edge);
  return flow;
}

// sum_v [prod(F_e + 1) - 1 - sum F_e]
Cost forced_surplus(const SparseGraph& graph, const FlowField& forced) {
  Cost surplus;
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    Cost c = congestion_degree(forced, static_cast<VertexIndex>(v), graph);
    Cost inflow;
    for (EdgeIndex e : graph.in_edges(static_cast<VertexIndex>(v))) inflow += Cost(forced[e]);
    surplus += c - inflow;
  }
  return surplus;
}

// Dijkstra over per-edge weights toward `target` along reversed edges, giving
// each vertex's cheapest cost to reach `target`. Cost::max() marks unreachable.
template <typename Weight, typename Skip>
std::vector<Cost> costs_to(const SparseGraph& graph, VertexIndex target, Weight weight, Skip skip) {
  std::vector<Cost> dist(graph.num_vertices(), Cost::max());
  using Entry = std::pair<Cost, VertexIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[static_cast<std::size_t>(target)] = Cost(0);
  open.emplace(Cost(0), target);
  while (!open.empty()) {
    auto [d, v] = open.top();
    open.pop();
    if (d != dist[static_cast<std::size_t>(v)]) continue;
    for (EdgeIndex e : graph.in_edges(v)) {
      if (skip(e)) continue;
      VertexIndex u = graph.edge(e).from;
      Cost nd = d + weight(e);
      if (nd < dist[static_cast<std::size_t>(u)]) {
        dist[static_cast<std::size_t>(u)] = nd;
        open.emplace(nd, u);
      }
    }
  }
  return dist;
}

std::optional<Cost> forced_congestion_bound(const CmppInstance& instance,
                                            const ConstraintSet& constraints) {
  const SparseGraph& graph = instance.graph();
  FlowField forced = forced_flow(graph, constraints);
  Cost bound = total_cost(forced, graph);

  std::vector<Cost> weight(graph.num_edges());
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    weight[e] = delta_cost(forced, static_cast<EdgeIndex>(e), graph);
  }

  // Unconstrained agents share one reverse search per goal.
  std::map<VertexIndex, std::vector<Cost>> by_goal;
  for (std::size_t i = 0; i < instance.num_agents(); ++i) {
    auto a = static_cast<AgentIndex>(i);
    const Agent& agent = instance.agent(a);
    auto own_forced = constraints.forced_for(a);
    auto own_forbidden = constraints.forbidden_for(a);
    Cost route;
    if (own_forced.empty() && own_forbidden.empty()) {
      auto it = by_goal.find(agent.goal);
      if (it == by_goal.end()) {
        it = by_goal
                 .emplace(agent.goal,
                          costs_to(graph, agent.goal,
                                   [&](EdgeIndex e) { return weight[static_cast<std::size_t>(e)]; },
                                   [](EdgeIndex) { return false; }))
                 .first;
      }
      route = it->second[static_cast<std::size_t>(agent.start)];
    } else {
      auto dist = costs_to(
          graph, agent.goal,
          [&](EdgeIndex e) {
            return forced_in_slice(own_forced, e) ? Cost(0) : weight[static_cast<std::size_t>(e)];
          },
          [&](EdgeIndex e) { return forced_in_slice(own_forbidden, e); });
      route = dist[static_cast<std::size_t>(agent.start)];
    }
    if (route == Cost::max()) return std::nullopt;
    bound += route;
  }
  return bound;
}

std::optional<Cost> bound_from(const CmppInstance& instance, const ConstraintSet& constraints,
                               LowerBoundMode mode, std::optional<std::uint64_t> min_len) {
  if (!min_len) min_len = min_length_sum(instance, constraints);
  if (!min_len) return std::nullopt;
  switch (mode) {
    case LowerBoundMode::path_length: return Cost(*min_len);
    case LowerBoundMode::forced_surplus:
      return Cost(*min_len) + forced_surplus(instance.graph(), forced_flow(instance.graph(), constraints));
    case LowerBoundMode::forced_congestion: {
      if (constraints.forced().empty()) return Cost(*min_len);
      return forced_congestion_bound(instance, constraints);
    }
  }
  return std::nullopt;
}

std::optional<VertexIndex> select_vertex_impl(const SparseGraph& graph, const PathRefs& paths,
                                              const ConstraintSet& constraints,
                                              const CongestionLedger& ledger) {
  std::vector<char> in_gamma(graph.num_vertices(), 0);
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const Path& p = *paths[a];
    auto forced = constraints.forced_for(static_cast<AgentIndex>(a));
    for (std::size_t k = 1; k < p.size(); ++k) {
      if (in_gamma[static_cast<std::size_t>(p[k])]) continue;
      if (!forced.empty() && forced_in_slice(forced, graph.edge_index(p[k - 1], p[k]))) continue;
      in_gamma[static_cast<std::size_t>(p[k])] = 1;
    }
  }
  std::optional<VertexIndex> best;
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    if (!in_gamma[v]) continue;
    if (!best || ledger.degree(static_cast<VertexIndex>(v)) > ledger.degree(*best)) {
      best = static_cast<VertexIndex>(v);
    }
  }
  return best;
}

AgentEdge select_agent_impl(const SparseGraph& graph, const PathRefs& paths,
                            const ConstraintSet& constraints, const FlowField& flow, VertexIndex v) {
  std::optional<AgentEdge> best;
  Cost best_drop;
  std::uint32_t best_flow = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = *paths[i];
    auto a = static_cast<AgentIndex>(i);
    auto it = std::find(p.begin(), p.end(), v);
    if (it == p.end() || it == p.begin()) continue;
    EdgeIndex e = graph.edge_index(*(it - 1), v);
    if (constraints.is_forced(a, e)) continue;
    // C(v) - C(v | f_e - 1) = prod over the other inflows of (f + 1).
    Cost drop = delta_cost(flow, e, graph);
    if (!best || drop > best_drop || (drop == best_drop && flow[e] > best_flow)) {
      best = AgentEdge{a, e};
      best_drop = drop;
      best_flow = flow[e];
    }
  }
  if (!best) throw Error("select_agent: no modifiable agent enters the selected vertex");
  return *best;
}

bool visits(const Path& path, VertexIndex v) { return std::find(path.begin(), path.end(), v) != path.end(); }

// Replanning step of the forbidden child. `paths` and `state` are updated in
// place; returns the agents whose path changed, or nullopt when `agent` has
// no route under the new constraint set.
std::optional<std::vector<std::pair<AgentIndex, Path>>> replan_forbidden_child(
    const CmppInstance& instance, std::vector<const Path*>& paths, CongestionState& state,
    const ConstraintSet& constraints, AgentIndex agent, VertexIndex v, const LowLevelOptions& options) {
  const SparseGraph& graph = instance.graph();
  std::vector<std::pair<AgentIndex, Path>> changed;
  changed.reserve(8);

  state.remove(*paths[static_cast<std::size_t>(agent)]);
  const Agent& target = instance.agent(agent);
  auto replanned = plan_with_constraints(graph, state.flow(), agent, target.start, target.goal,
                                         constraints, options, *paths[static_cast<std::size_t>(agent)]);
  if (!replanned) return std::nullopt;
  state.apply(*replanned);
  changed.emplace_back(agent, std::move(*replanned));

  std::vector<Path> storage;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    auto other = static_cast<AgentIndex>(i);
    if (other == agent || !visits(*paths[i], v)) continue;
    const Agent& info = instance.agent(other);
    state.remove(*paths[i]);
    auto path = plan_with_constraints(graph, state.flow(), other, info.start, info.goal, constraints,
                                      options, *paths[i]);
    if (path) {
      state.apply(*path);
      changed.emplace_back(other, std::move(*path));
    } else {
      state.apply(*paths[i]);
    }
  }
  return changed;
}

[[maybe_unused]] bool satisfies(const SparseGraph& graph, const PathRefs& paths,
                                const ConstraintSet& constraints) {
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = *paths[i];
    auto a = static_cast<AgentIndex>(i);
    std::vector<EdgeIndex> used;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) used.push_back(graph.edge_index(p[k], p[k + 1]));
    std::sort(used.begin(), used.end());
    for (const AgentEdge& ae : constraints.forced_for(a)) {
      if (!std::binary_search(used.begin(), used.end(), ae.edge)) return false;
    }
    for (const AgentEdge& ae : constraints.forbidden_for(a)) {
      if (std::binary_search(used.begin(), used.end(), ae.edge)) return false;
    }
  }
  return true;
}

}  // namespace

Solution pp_initial(const CmppInstance& instance, std::span<const AgentIndex> priority_order,
                    const LowLevelOptions& options) {
  std::vector<AgentIndex> order(priority_order.begin(), priority_order.end());
  if (order.empty()) {
    order.resize(instance.num_agents());
    std::iota(order.begin(), order.end(), 0);
  }
  {
    std::vector<AgentIndex> check = order;
    std::sort(check.begin(), check.end());
    bool permutation = check.size() == instance.num_agents();
    for (std::size_t i = 0; permutation && i < check.size(); ++i) {
      permutation = check[i] == static_cast<AgentIndex>(i);
    }
    if (!permutation) throw Error("priority order is not a permutation of the agents");
  }

  const SparseGraph& graph = instance.graph();
  Solution solution;
  solution.paths.resize(instance.num_agents());
  CongestionState state(graph);
  ConstraintSet none;
  for (AgentIndex a : order) {
    const Agent& agent = instance.agent(a);
    auto path = plan_with_constraints(graph, state.flow(), a, agent.start, agent.goal, none, options);
    if (!path) {
      throw InfeasibleError("agent " + std::to_string(agent.id) + " cannot reach its goal");
    }
    state.apply(*path);
    solution.paths[static_cast<std::size_t>(a)] = std::move(*path);
  }
  solution.claimed_cost = state.total();
  return solution;
}

Solution warm_start_paths(const CmppInstance& instance, const Solution& previous,
                          std::span<const AgentIndex> changed, const LowLevelOptions& options) {
  const SparseGraph& graph = instance.graph();
  const std::size_t n = instance.num_agents();
  std::vector<char> keep(n, 0);
  if (previous.paths.size() == n) {
    for (std::size_t a = 0; a < n; ++a) {
      const Path& p = previous.paths[a];
      keep[a] = path_defect(graph, p).empty() && p.front() == instance.agents()[a].start &&
                p.back() == instance.agents()[a].goal;
    }
  }
  for (AgentIndex a : changed) {
    if (a >= 0 && static_cast<std::size_t>(a) < n) keep[static_cast<std::size_t>(a)] = 0;
  }

  Solution root;
  root.paths.resize(n);
  CongestionState state(graph);
  for (std::size_t a = 0; a < n; ++a) {
    if (!keep[a]) continue;
    root.paths[a] = previous.paths[a];
    state.apply(root.paths[a]);
  }
  ConstraintSet none;
  for (std::size_t a = 0; a < n; ++a) {
    if (keep[a]) continue;
    const Agent& agent = instance.agents()[a];
    auto path = plan_with_constraints(graph, state.flow(), static_cast<AgentIndex>(a), agent.start,
                                      agent.goal, none, options);
    if (!path) throw InfeasibleError("agent " + std::to_string(agent.id) + " cannot reach its goal");
    state.apply(*path);
    root.paths[a] = std::move(*path);
  }
  root.claimed_cost = state.total();
  return root;
}

SearchNode make_root(const CmppInstance& instance, Solution paths) {
  SearchNode root;
  root.cost = total_cost(paths, instance.graph());
  root.paths = std::move(paths);
  root.paths.claimed_cost = root.cost;
  return root;
}

std::optional<VertexIndex> select_vertex(const SearchNode& node, const CmppInstance& instance) {
  auto refs = refs_of(node.paths);
  auto state = state_of(instance.graph(), refs);
  return select_vertex_impl(instance.graph(), refs, node.constraints, state.ledger());
}

AgentEdge select_agent(const SearchNode& node, const CmppInstance& instance, VertexIndex v) {
  auto refs = refs_of(node.paths);
  auto flow = compute_flow(node.paths, instance.graph());
  return select_agent_impl(instance.graph(), refs, node.constraints, flow, v);
}

std::optional<Cost> lower_bound(const SearchNode& node, const CmppInstance& instance,
                                LowerBoundMode mode) {
  return bound_from(instance, node.constraints, mode, std::nullopt);
}

std::pair<SearchNode, SearchNode> expand_node(const SearchNode& node, const CmppInstance& instance,
                                              AgentIndex agent, EdgeIndex edge, VertexIndex v,
                                              const LowLevelOptions& options) {
  SearchNode forced = node;
  forced.constraints.add_forced(agent, edge);

  SearchNode forbidden;
  forbidden.constraints = node.constraints;
  forbidden.constraints.add_forbidden(agent, edge);
  auto refs = refs_of(node.paths);
  auto state = state_of(instance.graph(), refs);
  auto changed = replan_forbidden_child(instance, refs, state, forbidden.constraints, agent, v, options);
  if (!changed) {
    forbidden.dead = true;
    forbidden.cost = Cost::max();
    forbidden.paths = node.paths;
    forbidden.paths.claimed_cost.reset();
    return {std::move(forced), std::move(forbidden)};
  }
  forbidden.paths = node.paths;
  for (auto& [a, path] : *changed) forbidden.paths.paths[static_cast<std::size_t>(a)] = std::move(path);
  forbidden.cost = state.total();
  forbidden.paths.claimed_cost = forbidden.cost;
  return {std::move(forced), std::move(forbidden)};
}

namespace {

constexpr int kSnapshotInterval = 16;

using SharedPath = std::shared_ptr<const Path>;

struct NodeRecord {
  std::shared_ptr<const NodeRecord> parent;
  std::optional<AgentEdge> added;
  bool added_forced = false;
  std::vector<std::pair<AgentIndex, SharedPath>> overrides;
  std::shared_ptr<const std::vector<SharedPath>> snapshot;
  Cost cost;
  bool dead = false;
  std::uint64_t min_len_sum = 0;
  int depth = 0;
};

using RecordPtr = std::shared_ptr<const NodeRecord>;

std::vector<SharedPath> materialize_paths(const NodeRecord& node, std::size_t n) {
  std::vector<SharedPath> paths(n);
  std::size_t filled = 0;
  for (const NodeRecord* cur = &node; cur != nullptr; cur = cur->parent.get()) {
    if (cur->snapshot) {
      for (std::size_t a = 0; a < n; ++a) {
        if (!paths[a]) paths[a] = (*cur->snapshot)[a];
      }
      return paths;
    }
    for (const auto& [a, p] : cur->overrides) {
      auto& slot = paths[static_cast<std::size_t>(a)];
      if (!slot) {
        slot = p;
        ++filled;
      }
    }
    if (filled == n) return paths;
  }
  return paths;
}

ConstraintSet materialize_constraints(const NodeRecord& node) {
  std::vector<AgentEdge> forced, forbidden;
  for (const NodeRecord* cur = &node; cur != nullptr; cur = cur->parent.get()) {
    if (!cur->added) continue;
    (cur->added_forced ? forced : forbidden).push_back(*cur->added);
  }
  return ConstraintSet::from_pairs(std::move(forced), std::move(forbidden));
}

bool prunes(Cost upper, double omega, Cost lower) {
  if (omega == 1.0) return upper <= lower;
  return upper.to_long_double() <= static_cast<long double>(omega) * lower.to_long_double();
}

Solution to_solution(const std::vector<SharedPath>& paths, Cost cost) {
  Solution s;
  s.paths.reserve(paths.size());
  for (const auto& p : paths) s.paths.push_back(*p);
  s.claimed_cost = cost;
  return s;
}

struct OpenEntry {
  Cost cost;
  std::uint64_t seq;
  RecordPtr node;
  bool operator>(const OpenEntry& other) const {
    return std::tie(cost, seq) > std::tie(other.cost, other.seq);
  }
};

SolverReport run_search(const CmppInstance& instance, const SolverConfig& config, Solution root_paths,
                        std::chrono::steady_clock::time_point started) {
  using Clock = std::chrono::steady_clock;
  const SparseGraph& graph = instance.graph();
  const std::size_t n = instance.num_agents();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

  SolverReport report;
  report.lower_bound = config.lower_bound;

  auto root = std::make_shared<NodeRecord>();
  {
    auto snapshot = std::make_shared<std::vector<SharedPath>>();
    snapshot->reserve(n);
    for (auto& p : root_paths.paths) snapshot->push_back(std::make_shared<const Path>(std::move(p)));
    root->snapshot = std::move(snapshot);
  }
  {
    PathRefs refs;
    for (const auto& p : *root->snapshot) refs.push_back(p.get());
    root->cost = state_of(graph, refs).total();
  }
  auto root_min_len = min_length_sum(instance, ConstraintSet{});
  if (!root_min_len) throw InfeasibleError("some agent cannot reach its goal");
  root->min_len_sum = *root_min_len;

  Cost upper = root->cost;
  std::vector<SharedPath> best = *root->snapshot;
  report.initial_cost = upper;
  report.time_to_initial = elapsed();
  report.improvement_trace.push_back({report.time_to_initial, upper});

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  std::uint64_t seq = 0;
  open.push({root->cost, seq++, root});
  report.nodes_generated = 1;

  std::optional<Clock::time_point> deadline;
  if (config.time_limit) {
    deadline = started + std::chrono::duration_cast<Clock::duration>(*config.time_limit);
  }
  auto interrupted = [&] {
    if (config.max_expansions && report.nodes_expanded >= *config.max_expansions) return true;
    return deadline && Clock::now() >= *deadline;
  };
  auto improve = [&](const NodeRecord& node) {
    upper = node.cost;
    best = materialize_paths(node, n);
    report.improvement_trace.push_back({elapsed(), upper});
  };

  while (!open.empty() && !interrupted()) {
    RecordPtr node = open.top().node;
    open.pop();
    if (node->dead) {
      ++report.nodes_pruned;
      continue;
    }
    if (node->cost < upper) improve(*node);

    // The path-length bound is maintained incrementally; the stronger
    // estimators are only evaluated when it does not already prune.
    if (prunes(upper, config.omega, Cost(node->min_len_sum))) {
      ++report.nodes_pruned;
      continue;
    }
    ConstraintSet constraints = materialize_constraints(*node);
    if (config.lower_bound != LowerBoundMode::path_length) {
      auto lb = bound_from(instance, constraints, config.lower_bound, node->min_len_sum);
      if (!lb || prunes(upper, config.omega, *lb)) {
        ++report.nodes_pruned;
        continue;
      }
    }

    std::vector<SharedPath> shared = materialize_paths(*node, n);
    PathRefs refs;
    refs.reserve(n);
    for (const auto& p : shared) refs.push_back(p.get());
    CongestionState state = state_of(graph, refs);

    auto v = select_vertex_impl(graph, refs, constraints, state.ledger());
    if (!v) continue;
    AgentEdge choice = select_agent_impl(graph, refs, constraints, state.flow(), *v);

    auto forced_child = std::make_shared<NodeRecord>();
    forced_child->parent = node;
    forced_child->added = choice;
    forced_child->added_forced = true;
    forced_child->cost = node->cost;
    forced_child->min_len_sum = node->min_len_sum;
    forced_child->depth = node->depth + 1;

    auto forbidden_child = std::make_shared<NodeRecord>();
    forbidden_child->parent = node;
    forbidden_child->added = choice;
    forbidden_child->added_forced = false;
    forbidden_child->depth = node->depth + 1;

    int before_len = min_length(instance, constraints, choice.agent);
    constraints.add_forbidden(choice.agent, choice.edge);
    int after_len = min_length(instance, constraints, choice.agent);
    auto changed = after_len < 0 ? std::nullopt
                                 : replan_forbidden_child(instance, refs, state, constraints,
                                                          choice.agent, *v, config.low_level);
    if (!changed) {
      forbidden_child->dead = true;
      forbidden_child->cost = Cost::max();
    } else {
      forbidden_child->cost = state.total();
      forbidden_child->min_len_sum = node->min_len_sum - static_cast<std::uint64_t>(before_len) +
                                     static_cast<std::uint64_t>(after_len);
      for (auto& [a, path] : *changed) {
        auto stored = std::make_shared<const Path>(std::move(path));
        shared[static_cast<std::size_t>(a)] = stored;
        forbidden_child->overrides.emplace_back(a, std::move(stored));
      }
#ifndef NDEBUG
      PathRefs child_refs;
      for (const auto& p : shared) child_refs.push_back(p.get());
      assert(satisfies(graph, child_refs, constraints));
#endif
      if (forbidden_child->depth % kSnapshotInterval == 0) {
        forbidden_child->snapshot = std::make_shared<const std::vector<SharedPath>>(std::move(shared));
      }
    }
    if (forced_child->depth % kSnapshotInterval == 0) {
      forced_child->snapshot =
          std::make_shared<const std::vector<SharedPath>>(materialize_paths(*node, n));
    }

    ++report.nodes_expanded;
    report.nodes_generated += 2;
    open.push({forced_child->cost, seq++, forced_child});
    open.push({forbidden_child->cost, seq++, forbidden_child});
  }

  report.exhausted = open.empty();
  // The cheapest queued node may already beat the incumbent when the budget
  // runs out.
  if (!open.empty()) {
    const auto& top = open.top().node;
    if (!top->dead && top->cost < upper) improve(*top);
  }

  report.best_cost = upper;
  report.best = to_solution(best, upper);
  report.elapsed = elapsed();
  return report;
}

}  // namespace

SolverReport solve(const CmppInstance& instance, const SolverConfig& config) {
  validate(config);
  auto started = std::chrono::steady_clock::now();
  Solution root = config.warm_start
                      ? warm_start_paths(instance, *config.warm_start, {}, config.low_level)
                      : pp_initial(instance, {}, config.low_level);
  return run_search(instance, config, std::move(root), started);
}

SolverReport solve_lifelong_step(const CmppInstance& instance, const Solution& previous,
                                 std::span<const AgentIndex> changed, const SolverConfig& config) {
  validate(config);
  auto started = std::chrono::steady_clock::now();
  Solution root = warm_start_paths(instance, previous, changed, config.low_level);
  return run_search(instance, config, std::move(root), started);
}

}  // namespace cmpp

#include "cmpp/exact.hpp"

#include <algorithm>
#include <numeric>

#include "cmpp/congestion.hpp"
#include "cmpp/error.hpp"

namespace cmpp {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::agent_count: return "agent-count";
    case ViolationKind::empty_path: return "empty-path";
    case ViolationKind::unknown_vertex: return "unknown-vertex";
    case ViolationKind::adjacency: return "adjacency";
    case ViolationKind::start: return "start";
    case ViolationKind::goal: return "goal";
    case ViolationKind::simple_path: return "simple-path";
    case ViolationKind::start_outflow: return "start-outflow";
    case ViolationKind::goal_inflow: return "goal-inflow";
    case ViolationKind::conservation: return "conservation";
    case ViolationKind::anti_parallel: return "anti-parallel";
    case ViolationKind::flow_mismatch: return "flow-mismatch";
    case ViolationKind::cost_mismatch: return "cost-mismatch";
  }
  return "unknown";
}

EdgeIndicatorMatrix EdgeIndicatorMatrix::from_paths(const Solution& solution, const SparseGraph& graph) {
  EdgeIndicatorMatrix z(solution.paths.size(), graph.num_edges());
  for (std::size_t a = 0; a < solution.paths.size(); ++a) {
    const Path& p = solution.paths[a];
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      if (auto e = graph.find_edge(p[k], p[k + 1])) z.set(a, *e);
    }
  }
  return z;
}

std::vector<Violation> validate_minlp(const Solution& solution, const CmppInstance& instance) {
  const SparseGraph& graph = instance.graph();
  std::vector<Violation> out;
  auto vid = [&](VertexIndex v) { return graph.contains(v) ? graph.vertex(v).id : v; };

  if (solution.paths.size() != instance.num_agents()) {
    out.push_back({ViolationKind::agent_count, -1, -1, 0,
                   std::to_string(solution.paths.size()) + " paths for " +
                       std::to_string(instance.num_agents()) + " agents"});
  }
  const std::size_t n = std::min(solution.paths.size(), instance.num_agents());
  bool structurally_sound = solution.paths.size() == instance.num_agents();

  EdgeIndicatorMatrix z(n, graph.num_edges());
  for (std::size_t i = 0; i < n; ++i) {
    const Path& p = solution.paths[i];
    const Agent& agent = instance.agents()[i];
    if (p.empty()) {
      out.push_back({ViolationKind::empty_path, agent.id, -1, 0, "path has no vertices"});
      structurally_sound = false;
      continue;
    }
    bool known = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!graph.contains(p[k])) {
        out.push_back({ViolationKind::unknown_vertex, agent.id, p[k], k, "vertex not in graph"});
        known = false;
      }
    }
    if (!known) {
      structurally_sound = false;
      continue;
    }
    if (p.front() != agent.start) {
      out.push_back({ViolationKind::start, agent.id, vid(p.front()), 0,
                     "path starts at " + std::to_string(vid(p.front())) + ", expected " +
                         std::to_string(vid(agent.start))});
    }
    if (p.back() != agent.goal) {
      out.push_back({ViolationKind::goal, agent.id, vid(p.back()), p.size() - 1,
                     "path ends at " + std::to_string(vid(p.back())) + ", expected " +
                         std::to_string(vid(agent.goal))});
    }
    std::vector<std::size_t> first_seen(graph.num_vertices(), SIZE_MAX);
    for (std::size_t k = 0; k < p.size(); ++k) {
      auto& slot = first_seen[static_cast<std::size_t>(p[k])];
      if (slot != SIZE_MAX) {
        out.push_back({ViolationKind::simple_path, agent.id, vid(p[k]), k,
                       "vertex first visited at position " + std::to_string(slot)});
      } else {
        slot = k;
      }
    }
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      auto e = graph.find_edge(p[k], p[k + 1]);
      if (!e) {
        out.push_back({ViolationKind::adjacency, agent.id, vid(p[k + 1]), k + 1,
                       "no edge " + std::to_string(vid(p[k])) + " -> " + std::to_string(vid(p[k + 1]))});
        structurally_sound = false;
        continue;
      }
      z.set(i, *e);
    }

    // Unit out-flow at the start and in-flow at the goal, conservation elsewhere.
    auto inflow = [&](VertexIndex v) {
      int s = 0;
      for (EdgeIndex e : graph.in_edges(v)) s += z(i, e) ? 1 : 0;
      return s;
    };
    auto outflow = [&](VertexIndex v) {
      int s = 0;
      for (EdgeIndex e : graph.out_edges(v)) s += z(i, e) ? 1 : 0;
      return s;
    };
    if (agent.start != agent.goal) {
      if (int f = outflow(agent.start); f != 1) {
        out.push_back({ViolationKind::start_outflow, agent.id, vid(agent.start), 0,
                       "out-flow at start is " + std::to_string(f)});
      }
      if (int f = inflow(agent.goal); f != 1) {
        out.push_back({ViolationKind::goal_inflow, agent.id, vid(agent.goal), 0,
                       "in-flow at goal is " + std::to_string(f)});
      }
    }
    for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
      auto vi = static_cast<VertexIndex>(v);
      if (vi == agent.start || vi == agent.goal) continue;
      if (int fin = inflow(vi), fout = outflow(vi); fin != fout) {
        out.push_back({ViolationKind::conservation, agent.id, vid(vi), 0,
                       "in-flow " + std::to_string(fin) + " != out-flow " + std::to_string(fout)});
      }
    }
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      auto ei = static_cast<EdgeIndex>(e);
      EdgeIndex r = graph.reverse(ei);
      if (ei < r && z(i, ei) && z(i, r)) {
        const Edge& edge = graph.edge(ei);
        out.push_back({ViolationKind::anti_parallel, agent.id, vid(edge.to), 0,
                       "uses both " + std::to_string(vid(edge.from)) + " -> " + std::to_string(vid(edge.to)) +
                           " and its reverse"});
      }
    }
  }

  if (structurally_sound) {
    FlowField flow = compute_flow(solution, graph);
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      std::uint32_t sum = 0;
      for (std::size_t i = 0; i < n; ++i) sum += z(i, static_cast<EdgeIndex>(e)) ? 1 : 0;
      if (sum != flow[static_cast<EdgeIndex>(e)]) {
        out.push_back({ViolationKind::flow_mismatch, -1, vid(graph.edge(static_cast<EdgeIndex>(e)).to), 0,
                       "flow " + std::to_string(flow[static_cast<EdgeIndex>(e)]) + " != sum of z " +
                           std::to_string(sum)});
      }
    }
    if (solution.claimed_cost) {
      Cost actual = total_cost(flow, graph);
      if (actual != *solution.claimed_cost) {
        out.push_back({ViolationKind::cost_mismatch, -1, -1, 0,
                       "claimed " + solution.claimed_cost->to_string() + ", actual " + actual.to_string()});
      }
    }
  }
  return out;
}

std::vector<Path> enumerate_simple_paths(const SparseGraph& graph, VertexIndex start, VertexIndex goal,
                                         int max_edges, std::span<const EdgeIndex> forced,
                                         std::span<const EdgeIndex> forbidden) {
  std::vector<Path> out;
  auto has = [](std::span<const EdgeIndex> sorted, EdgeIndex e) {
    return std::binary_search(sorted.begin(), sorted.end(), e);
  };
  if (start == goal) {
    if (forced.empty()) out.push_back(Path{start});
    return out;
  }
  std::vector<char> visited(graph.num_vertices(), 0);
  Path current{start};
  visited[static_cast<std::size_t>(start)] = 1;
  auto recurse = [&](auto&& self, VertexIndex u, std::size_t forced_used) -> void {
    if (static_cast<int>(current.size()) - 1 >= max_edges) return;
    // Out-edges are sorted by head, which yields lexicographic order.
    for (EdgeIndex e : graph.out_edges(u)) {
      VertexIndex w = graph.edge(e).to;
      if (visited[static_cast<std::size_t>(w)] || has(forbidden, e)) continue;
      std::size_t used = forced_used + (has(forced, e) ? 1 : 0);
      current.push_back(w);
      if (w == goal) {
        if (used == forced.size()) out.push_back(current);
      } else {
        visited[static_cast<std::size_t>(w)] = 1;
        self(self, w, used);
        visited[static_cast<std::size_t>(w)] = 0;
      }
      current.pop_back();
    }
  };
  recurse(recurse, start, 0);
  return out;
}

ExactResult exact_solve(const CmppInstance& instance, const ExactOptions& options) {
  const SparseGraph& graph = instance.graph();
  const std::size_t n = instance.num_agents();
  ConstraintSet constraints = options.constraints.value_or(ConstraintSet{});

  ExactResult result;
  std::vector<std::vector<Path>> candidates(n);
  std::vector<std::vector<EdgeIndex>> forbidden(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Agent& agent = instance.agents()[a];
    auto ai = static_cast<AgentIndex>(a);
    std::vector<EdgeIndex> forced;
    for (const AgentEdge& ae : constraints.forced_for(ai)) forced.push_back(ae.edge);
    for (const AgentEdge& ae : constraints.forbidden_for(ai)) forbidden[a].push_back(ae.edge);

    int shortest = bfs_distances(graph, agent.start)[static_cast<std::size_t>(agent.goal)];
    if (shortest < 0) throw InfeasibleError("agent " + std::to_string(agent.id) + " cannot reach its goal");
    int cap = options.length_cap.value_or(shortest + options.detour_slack);
    if (cap < shortest) {
      throw Error("length cap " + std::to_string(cap) + " is below the shortest path length " +
                  std::to_string(shortest) + " of agent " + std::to_string(agent.id));
    }
    result.cap_used = std::max(result.cap_used, cap);
    candidates[a] = enumerate_simple_paths(graph, agent.start, agent.goal, cap, forced, forbidden[a]);
    if (candidates[a].empty()) {
      throw InfeasibleError("agent " + std::to_string(agent.id) + " has no admissible path within the cap");
    }
  }

  CongestionState state(graph);
  std::vector<std::size_t> choice(n, 0), best_choice;
  Cost best = Cost::max();

  auto remaining_bound = [&](std::size_t from) {
    Cost sum;
    for (std::size_t r = from; r < n; ++r) {
      const Agent& agent = instance.agents()[r];
      auto path = dijkstra_min_delta(graph, state.flow(), agent.start, agent.goal, forbidden[r]);
      if (path) sum += path_delta_cost(state.flow(), *path, graph);
    }
    return sum;
  };

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == n) {
      if (state.total() < best) {
        best = state.total();
        best_choice = choice;
      }
      return;
    }
    ++result.assignments_explored;
    Cost rest = remaining_bound(depth + 1);
    std::vector<std::pair<Cost, std::size_t>> ranked;
    ranked.reserve(candidates[depth].size());
    for (std::size_t c = 0; c < candidates[depth].size(); ++c) {
      ranked.emplace_back(path_delta_cost(state.flow(), candidates[depth][c], graph), c);
    }
    std::stable_sort(ranked.begin(), ranked.end());
    for (const auto& [delta, c] : ranked) {
      if (best != Cost::max() && state.total() + delta + rest >= best) break;
      const Path& path = candidates[depth][c];
      state.apply(path);
      choice[depth] = c;
      self(self, depth + 1);
      state.remove(path);
    }
  };
  recurse(recurse, 0);

  if (best_choice.empty() && n > 0) throw InfeasibleError("no feasible joint assignment");
  result.solution.paths.resize(n);
  for (std::size_t a = 0; a < n; ++a) result.solution.paths[a] = candidates[a][best_choice[a]];
  result.cost = n == 0 ? Cost(0) : best;
  result.solution.claimed_cost = result.cost;
  return result;
}

}  // namespace cmpp

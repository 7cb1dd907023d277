#include "cmpp/low_level.hpp"

#include <algorithm>
#include <climits>
#include <iterator>
#include <queue>
#include <string>
#include <tuple>

#include "cmpp/error.hpp"

namespace cmpp {

namespace {

std::span<const AgentEdge> agent_slice(const std::vector<AgentEdge>& sorted, AgentIndex agent) {
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), AgentEdge{agent, INT32_MIN});
  auto hi = std::lower_bound(lo, sorted.end(), AgentEdge{agent + 1, INT32_MIN});
  return {sorted.data() + (lo - sorted.begin()), static_cast<std::size_t>(hi - lo)};
}

bool insert_sorted(std::vector<AgentEdge>& sorted, AgentEdge item) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), item);
  if (it != sorted.end() && *it == item) return false;
  sorted.insert(it, item);
  return true;
}

std::vector<EdgeIndex> edges_of(std::span<const AgentEdge> slice) {
  std::vector<EdgeIndex> out;
  out.reserve(slice.size());
  for (const AgentEdge& ae : slice) out.push_back(ae.edge);
  return out;
}

bool contains_sorted(std::span<const EdgeIndex> sorted, EdgeIndex e) {
  return std::binary_search(sorted.begin(), sorted.end(), e);
}

}  // namespace

ConstraintSet ConstraintSet::from_pairs(std::vector<AgentEdge> forced,
                                        std::vector<AgentEdge> forbidden) {
  ConstraintSet set;
  std::sort(forced.begin(), forced.end());
  forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
  std::sort(forbidden.begin(), forbidden.end());
  forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
  std::vector<AgentEdge> both;
  std::set_intersection(forced.begin(), forced.end(), forbidden.begin(), forbidden.end(),
                        std::back_inserter(both));
  if (!both.empty()) {
    throw Error("edge " + std::to_string(both.front().edge) + " is both forced and forbidden for agent #" +
                std::to_string(both.front().agent));
  }
  set.forced_ = std::move(forced);
  set.forbidden_ = std::move(forbidden);
  return set;
}

void ConstraintSet::add_forced(AgentIndex agent, EdgeIndex edge) {
  if (is_forbidden(agent, edge)) {
    throw Error("edge " + std::to_string(edge) + " is already forbidden for agent #" +
                std::to_string(agent));
  }
  insert_sorted(forced_, AgentEdge{agent, edge});
}

void ConstraintSet::add_forbidden(AgentIndex agent, EdgeIndex edge) {
  if (is_forced(agent, edge)) {
    throw Error("edge " + std::to_string(edge) + " is already forced for agent #" +
                std::to_string(agent));
  }
  insert_sorted(forbidden_, AgentEdge{agent, edge});
}

bool ConstraintSet::is_forced(AgentIndex agent, EdgeIndex edge) const {
  return std::binary_search(forced_.begin(), forced_.end(), AgentEdge{agent, edge});
}

bool ConstraintSet::is_forbidden(AgentIndex agent, EdgeIndex edge) const {
  return std::binary_search(forbidden_.begin(), forbidden_.end(), AgentEdge{agent, edge});
}

std::span<const AgentEdge> ConstraintSet::forced_for(AgentIndex agent) const {
  return agent_slice(forced_, agent);
}

std::span<const AgentEdge> ConstraintSet::forbidden_for(AgentIndex agent) const {
  return agent_slice(forbidden_, agent);
}

std::optional<Path> dijkstra_min_delta(const SparseGraph& graph, const FlowField& flow,
                                       VertexIndex start, VertexIndex goal,
                                       std::span<const EdgeIndex> forbidden,
                                       std::span<const char> excluded) {
  const std::size_t n = graph.num_vertices();
  if (start == goal) return Path{start};

  std::vector<Cost> dist(n, Cost::max());
  std::vector<int> hops(n, INT_MAX);
  std::vector<VertexIndex> pred(n, -1);
  std::vector<char> settled(n, 0);

  auto at = [](auto& vec, VertexIndex v) -> auto& { return vec[static_cast<std::size_t>(v)]; };

  // Equal-depth predecessor chains always meet, at the latest at `start`.
  // The last differing pair before they meet is the divergence point.
  auto prefer = [&](VertexIndex candidate, VertexIndex incumbent) {
    VertexIndex x = candidate, y = incumbent;
    VertexIndex last_x = x, last_y = y;
    while (x != y) {
      last_x = x;
      last_y = y;
      x = at(pred, x);
      y = at(pred, y);
    }
    return last_x < last_y;
  };

  using Entry = std::tuple<Cost, int, VertexIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  at(dist, start) = Cost(0);
  at(hops, start) = 0;
  open.emplace(Cost(0), 0, start);

  while (!open.empty()) {
    auto [cost, h, u] = open.top();
    open.pop();
    if (at(settled, u) || cost != at(dist, u) || h != at(hops, u)) continue;
    at(settled, u) = 1;
    if (u == goal) break;
    for (EdgeIndex e : graph.out_edges(u)) {
      VertexIndex w = graph.edge(e).to;
      if (at(settled, w)) continue;
      if (!excluded.empty() && excluded[static_cast<std::size_t>(w)]) continue;
      if (!forbidden.empty() && contains_sorted(forbidden, e)) continue;
      Cost next = cost + delta_cost(flow, e, graph);
      int next_hops = h + 1;
      auto incumbent = std::tie(at(dist, w), at(hops, w));
      if (std::tie(next, next_hops) < incumbent) {
        at(dist, w) = next;
        at(hops, w) = next_hops;
        at(pred, w) = u;
        open.emplace(next, next_hops, w);
      } else if (std::tie(next, next_hops) == incumbent && prefer(u, at(pred, w))) {
        at(pred, w) = u;
      }
    }
  }

  if (!at(settled, goal)) return std::nullopt;
  Path path;
  for (VertexIndex v = goal; v != -1; v = at(pred, v)) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Forced edge sets no simple start-goal path can contain: two edges leaving
// or entering one vertex, an edge into the start or out of the goal, or an
// edge together with its reverse.
bool forced_set_impossible(const SparseGraph& graph, VertexIndex start, VertexIndex goal,
                           std::span<const EdgeIndex> forced) {
  std::vector<VertexIndex> tails, heads;
  for (EdgeIndex e : forced) {
    const Edge& edge = graph.edge(e);
    if (edge.to == start || edge.from == goal) return true;
    if (contains_sorted(forced, graph.reverse(e))) return true;
    tails.push_back(edge.from);
    heads.push_back(edge.to);
  }
  std::sort(tails.begin(), tails.end());
  std::sort(heads.begin(), heads.end());
  return std::adjacent_find(tails.begin(), tails.end()) != tails.end() ||
         std::adjacent_find(heads.begin(), heads.end()) != heads.end();
}

}  // namespace

ExhaustivePlan exhaustive_constrained_path(const SparseGraph& graph, const FlowField& flow,
                                           VertexIndex start, VertexIndex goal,
                                           std::span<const EdgeIndex> forced,
                                           std::span<const EdgeIndex> forbidden,
                                           std::uint64_t max_steps) {
  ExhaustivePlan result;
  if (start == goal) {
    if (forced.empty()) result.path = Path{start};
    result.complete = true;
    return result;
  }
  if (forced_set_impossible(graph, start, goal, forced)) {
    result.complete = true;
    return result;
  }

  // Every remaining edge costs at least one, so hop distance to the goal
  // (ignoring visited vertices) is an admissible completion bound.
  std::vector<int> to_goal = bfs_distances(graph, goal, [&](EdgeIndex e) {
    return contains_sorted(forbidden, graph.reverse(e));
  });
  if (to_goal[static_cast<std::size_t>(start)] < 0) {
    result.complete = true;
    return result;
  }

  const std::size_t n = graph.num_vertices();
  // A simple path leaves and enters each vertex at most once, so a forced
  // edge is the only way out of its tail and the only way into its head.
  std::vector<EdgeIndex> forced_out(n, -1), forced_in(n, -1);
  for (EdgeIndex e : forced) {
    forced_out[static_cast<std::size_t>(graph.edge(e).from)] = e;
    forced_in[static_cast<std::size_t>(graph.edge(e).to)] = e;
  }

  std::vector<char> visited(n, 0), reached(n, 0);
  std::vector<char> forced_done(forced.size(), 0);
  std::vector<VertexIndex> queue;
  Path current{start};
  visited[static_cast<std::size_t>(start)] = 1;
  Cost best = Cost::max();
  std::uint64_t steps = 0;
  bool aborted = false;

  // From u through unvisited vertices, the goal and every pending forced
  // edge must still be reachable.
  auto can_finish = [&](VertexIndex u) {
    std::fill(reached.begin(), reached.end(), 0);
    queue.assign(1, u);
    reached[static_cast<std::size_t>(u)] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      VertexIndex x = queue[head];
      if (x == goal) continue;
      for (EdgeIndex e : graph.out_edges(x)) {
        VertexIndex w = graph.edge(e).to;
        auto k = static_cast<std::size_t>(w);
        if (reached[k] || visited[k] || contains_sorted(forbidden, e)) continue;
        reached[k] = 1;
        queue.push_back(w);
      }
    }
    if (!reached[static_cast<std::size_t>(goal)]) return false;
    for (std::size_t i = 0; i < forced.size(); ++i) {
      if (!forced_done[i] && !reached[static_cast<std::size_t>(graph.edge(forced[i]).from)]) return false;
    }
    return true;
  };

  struct Step {
    Cost cost;
    Cost bound;
    VertexIndex to;
    EdgeIndex edge;
  };

  auto recurse = [&](auto&& self, VertexIndex u, Cost cost, std::size_t forced_used) -> void {
    if (aborted) return;
    if (++steps > max_steps) {
      aborted = true;
      return;
    }
    if (!can_finish(u)) return;
    std::vector<Step> moves;
    const EdgeIndex must = forced_out[static_cast<std::size_t>(u)];
    for (EdgeIndex e : graph.out_edges(u)) {
      if (must >= 0 && e != must) continue;
      VertexIndex w = graph.edge(e).to;
      const auto k = static_cast<std::size_t>(w);
      int h = to_goal[k];
      if (visited[k] || h < 0) continue;
      if (forced_in[k] >= 0 && forced_in[k] != e) continue;
      if (contains_sorted(forbidden, e)) continue;
      Cost next = cost + delta_cost(flow, e, graph);
      moves.push_back({next, next + Cost(static_cast<std::uint64_t>(h)), w, e});
    }
    std::sort(moves.begin(), moves.end(), [](const Step& a, const Step& b) {
      return std::tie(a.bound, a.to) < std::tie(b.bound, b.to);
    });
    for (const Step& m : moves) {
      if (m.bound >= best) break;
      auto slot = std::lower_bound(forced.begin(), forced.end(), m.edge);
      const bool is_forced = slot != forced.end() && *slot == m.edge;
      std::size_t used = forced_used + (is_forced ? 1 : 0);
      if (m.to == goal) {
        if (used == forced.size()) {
          best = m.cost;
          current.push_back(m.to);
          result.path = current;
          current.pop_back();
        }
        continue;
      }
      if (is_forced) forced_done[static_cast<std::size_t>(slot - forced.begin())] = 1;
      visited[static_cast<std::size_t>(m.to)] = 1;
      current.push_back(m.to);
      self(self, m.to, m.cost, used);
      current.pop_back();
      visited[static_cast<std::size_t>(m.to)] = 0;
      if (is_forced) forced_done[static_cast<std::size_t>(slot - forced.begin())] = 0;
      if (aborted) return;
    }
  };
  recurse(recurse, start, Cost(0), 0);
  result.complete = !aborted;
  return result;
}

namespace {

void sort_by_distance(const SparseGraph& graph, VertexIndex start, std::vector<EdgeIndex>& forced) {
  const auto& origin = graph.vertex(start);
  auto key = [&](EdgeIndex e) {
    const auto& t = graph.vertex(graph.edge(e).from);
    return std::make_pair((t.x - origin.x) * (t.x - origin.x) + (t.y - origin.y) * (t.y - origin.y), e);
  };
  std::sort(forced.begin(), forced.end(), [&](EdgeIndex a, EdgeIndex b) { return key(a) < key(b); });
}

// Order of first appearance along `hint`; edges not on it keep their
// relative order at the end.
std::vector<EdgeIndex> order_along(const SparseGraph& graph, std::span<const VertexIndex> hint,
                                   const std::vector<EdgeIndex>& forced) {
  std::vector<std::pair<std::size_t, std::size_t>> keyed;
  for (std::size_t i = 0; i < forced.size(); ++i) {
    const Edge& edge = graph.edge(forced[i]);
    std::size_t pos = SIZE_MAX;
    for (std::size_t k = 0; k + 1 < hint.size(); ++k) {
      if (hint[k] == edge.from && hint[k + 1] == edge.to) {
        pos = k;
        break;
      }
    }
    keyed.emplace_back(pos, i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<EdgeIndex> out;
  for (auto [pos, i] : keyed) out.push_back(forced[i]);
  return out;
}

// `forced` is visited in the given order.
std::optional<Path> stitch_forced_edges(const SparseGraph& graph, const FlowField& flow,
                                        VertexIndex start, VertexIndex goal,
                                        const std::vector<EdgeIndex>& forced,
                                        std::span<const EdgeIndex> forbidden) {
  if (start == goal) return std::nullopt;
  const std::size_t n = graph.num_vertices();
  std::vector<char> used(n, 0);
  Path path{start};
  used[static_cast<std::size_t>(start)] = 1;
  VertexIndex cursor = start;

  std::vector<char> leg_excluded;
  auto extend = [&](const Path& leg) {
    for (std::size_t k = 1; k < leg.size(); ++k) {
      path.push_back(leg[k]);
      used[static_cast<std::size_t>(leg[k])] = 1;
    }
  };

  for (std::size_t i = 0; i < forced.size(); ++i) {
    const Edge& edge = graph.edge(forced[i]);
    if (edge.from == goal || used[static_cast<std::size_t>(edge.to)]) return std::nullopt;
    if (cursor != edge.from) {
      if (used[static_cast<std::size_t>(edge.from)]) return std::nullopt;
      leg_excluded = used;
      leg_excluded[static_cast<std::size_t>(goal)] = 1;
      for (std::size_t j = i; j < forced.size(); ++j) {
        leg_excluded[static_cast<std::size_t>(graph.edge(forced[j]).from)] = 1;
        leg_excluded[static_cast<std::size_t>(graph.edge(forced[j]).to)] = 1;
      }
      leg_excluded[static_cast<std::size_t>(edge.from)] = 0;
      auto leg = dijkstra_min_delta(graph, flow, cursor, edge.from, forbidden, leg_excluded);
      if (!leg) return std::nullopt;
      extend(*leg);
    }
    if (edge.to == goal && i + 1 != forced.size()) return std::nullopt;
    path.push_back(edge.to);
    used[static_cast<std::size_t>(edge.to)] = 1;
    cursor = edge.to;
  }

  if (cursor != goal) {
    auto leg = dijkstra_min_delta(graph, flow, cursor, goal, forbidden, used);
    if (!leg) return std::nullopt;
    extend(*leg);
  }
  return path;
}

}  // namespace

std::optional<Path> plan_with_constraints(const SparseGraph& graph, const FlowField& flow,
                                          AgentIndex agent, VertexIndex start, VertexIndex goal,
                                          const ConstraintSet& constraints,
                                          const LowLevelOptions& options,
                                          std::span<const VertexIndex> hint) {
  std::vector<EdgeIndex> forced = edges_of(constraints.forced_for(agent));
  std::vector<EdgeIndex> forbidden = edges_of(constraints.forbidden_for(agent));
  if (forced.empty()) return dijkstra_min_delta(graph, flow, start, goal, forbidden);

  std::vector<EdgeIndex> ordered = forced;
  sort_by_distance(graph, start, ordered);
  if (auto stitched = stitch_forced_edges(graph, flow, start, goal, ordered, forbidden)) {
    return stitched;
  }
  if (!hint.empty()) {
    std::vector<EdgeIndex> along = order_along(graph, hint, ordered);
    if (along != ordered) {
      if (auto stitched = stitch_forced_edges(graph, flow, start, goal, along, forbidden)) {
        return stitched;
      }
    }
  }
  if (options.fallback_steps == 0) return std::nullopt;
  return exhaustive_constrained_path(graph, flow, start, goal, forced, forbidden,
                                     options.fallback_steps)
      .path;
}

}  // namespace cmpp

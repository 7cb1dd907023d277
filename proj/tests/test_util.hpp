#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "cmpp/congestion.hpp"
#include "cmpp/graph.hpp"
#include "cmpp/instance.hpp"

namespace cmpp::testing {

inline std::shared_ptr<const SparseGraph> grid_graph(int w, int h) {
  return std::make_shared<const SparseGraph>(SparseGraph::grid(w, h));
}

// Path graph 0 - 1 - ... - (n-1).
inline std::shared_ptr<const SparseGraph> line_graph(int n) {
  std::vector<Vertex> vs;
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < n; ++i) vs.push_back({i, double(i), 0.0});
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return std::make_shared<const SparseGraph>(std::move(vs), es);
}

// Connected random graph: a random spanning tree plus extra edges.
inline std::shared_ptr<const SparseGraph> random_graph(int n, int extra, std::mt19937_64& rng) {
  std::vector<Vertex> vs;
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  for (int i = 0; i < n; ++i) vs.push_back({i, coord(rng), coord(rng)});
  std::vector<std::pair<int, int>> es;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    es.emplace_back(parent(rng), i);
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int k = 0; k < extra; ++k) {
    int a = any(rng), b = any(rng);
    if (a != b) es.emplace_back(a, b);
  }
  return std::make_shared<const SparseGraph>(std::move(vs), es);
}

// Uniform starts and goals with start != goal; agents may share vertices.
inline CmppInstance random_instance(std::shared_ptr<const SparseGraph> graph, int agents, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(graph->num_vertices()) - 1);
  std::vector<Agent> list;
  for (int a = 0; a < agents; ++a) {
    int s = pick(rng), g = pick(rng);
    while (g == s) g = pick(rng);
    list.push_back({a, s, g});
  }
  return CmppInstance(std::move(graph), std::move(list));
}

// Congestion computed straight from the definition over vertex pairs, kept
// apart from the library's flow machinery.
inline std::uint64_t reference_cost(const SparseGraph& graph, const std::vector<Path>& paths) {
  std::map<std::pair<int, int>, std::uint64_t> flow;
  for (const Path& p : paths) {
    for (std::size_t k = 0; k + 1 < p.size(); ++k) ++flow[{p[k], p[k + 1]}];
  }
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    std::uint64_t prod = 1;
    for (const auto& [key, f] : flow) {
      if (key.second == static_cast<int>(v)) prod *= f + 1;
    }
    total += prod - 1;
  }
  return total;
}

// Every simple path from s to g, by plain DFS over neighbour lists.
inline std::vector<Path> all_simple_paths(const SparseGraph& graph, VertexIndex s, VertexIndex g) {
  std::vector<Path> out;
  Path cur{s};
  std::vector<char> seen(graph.num_vertices(), 0);
  seen[static_cast<std::size_t>(s)] = 1;
  auto rec = [&](auto&& self, VertexIndex u) -> void {
    if (u == g) {
      out.push_back(cur);
      return;
    }
    for (EdgeIndex e : graph.out_edges(u)) {
      VertexIndex w = graph.edge(e).to;
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      cur.push_back(w);
      self(self, w);
      cur.pop_back();
      seen[static_cast<std::size_t>(w)] = 0;
    }
  };
  rec(rec, s);
  return out;
}

// Brute-force optimum over the cross product of all simple paths.
inline std::uint64_t brute_force_optimum(const CmppInstance& instance) {
  const SparseGraph& graph = instance.graph();
  std::vector<std::vector<Path>> options;
  for (const Agent& a : instance.agents()) options.push_back(all_simple_paths(graph, a.start, a.goal));
  std::vector<std::size_t> pick(options.size(), 0);
  std::uint64_t best = UINT64_MAX;
  while (true) {
    std::vector<Path> paths;
    for (std::size_t i = 0; i < options.size(); ++i) paths.push_back(options[i][pick[i]]);
    best = std::min(best, reference_cost(graph, paths));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return best;
}

}  // namespace cmpp::testing

#pragma once

#include <deque>

namespace cmpp {

template <typename Blocked>
std::vector<int> bfs_distances(const SparseGraph& graph, VertexIndex source, Blocked blocked) {
  std::vector<int> dist(graph.num_vertices(), -1);
  std::deque<VertexIndex> queue;
  dist[static_cast<std::size_t>(source)] = 0;
  queue.push_back(source);
  while (!queue.empty()) {
    VertexIndex u = queue.front();
    queue.pop_front();
    for (EdgeIndex e : graph.out_edges(u)) {
      if (blocked(e)) continue;
      VertexIndex w = graph.edge(e).to;
      if (dist[static_cast<std::size_t>(w)] >= 0) continue;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

}  // namespace cmpp

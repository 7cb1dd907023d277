#include "cmpp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmpp/error.hpp"

namespace cmpp {

SparseGraph::SparseGraph(std::vector<Vertex> vertices, const std::vector<std::pair<int, int>>& edges,
                         bool symmetrize)
    : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i].id == vertices_[i - 1].id) {
      throw Error("duplicate vertex id " + std::to_string(vertices_[i].id));
    }
  }

  std::vector<std::pair<VertexIndex, VertexIndex>> pairs;
  pairs.reserve(edges.size() * (symmetrize ? 2 : 1));
  for (const auto& [from_id, to_id] : edges) {
    auto from = find_vertex(from_id);
    auto to = find_vertex(to_id);
    if (!from || !to) {
      throw Error("edge (" + std::to_string(from_id) + ", " + std::to_string(to_id) +
                  ") references an unknown vertex");
    }
    if (*from == *to) throw Error("self-loop at vertex " + std::to_string(from_id));
    pairs.emplace_back(*from, *to);
    if (symmetrize) pairs.emplace_back(*to, *from);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  edges_.reserve(pairs.size());
  for (const auto& [from, to] : pairs) edges_.push_back(Edge{from, to});
  build_adjacency();

  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (reverse_[e] < 0) {
      throw Error("graph is not symmetric: missing reverse of (" +
                  std::to_string(vertex(edges_[e].from).id) + ", " +
                  std::to_string(vertex(edges_[e].to).id) + ")");
    }
  }
}

SparseGraph SparseGraph::grid(int width, int height) {
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      int id = r * width + c;
      vertices.push_back(Vertex{id, static_cast<double>(c), static_cast<double>(r)});
      if (c + 1 < width) edges.emplace_back(id, id + 1);
      if (r + 1 < height) edges.emplace_back(id, id + width);
    }
  }
  return SparseGraph(std::move(vertices), edges, true);
}

void SparseGraph::build_adjacency() {
  const std::size_t n = vertices_.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++out_offsets_[static_cast<std::size_t>(e.from) + 1];
    ++in_offsets_[static_cast<std::size_t>(e.to) + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  out_list_.assign(edges_.size(), 0);
  in_list_.assign(edges_.size(), 0);
  std::vector<std::int32_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::int32_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // Edges are sorted by (from, to): out-lists come out sorted by head and
  // in-lists sorted by tail.
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    out_list_[static_cast<std::size_t>(out_fill[static_cast<std::size_t>(edge.from)]++)] =
        static_cast<EdgeIndex>(e);
    in_list_[static_cast<std::size_t>(in_fill[static_cast<std::size_t>(edge.to)]++)] =
        static_cast<EdgeIndex>(e);
  }
  reverse_.assign(edges_.size(), -1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (auto r = find_edge(edges_[e].to, edges_[e].from)) reverse_[e] = *r;
  }
}

std::span<const EdgeIndex> SparseGraph::out_edges(VertexIndex v) const {
  auto i = static_cast<std::size_t>(v);
  return {out_list_.data() + out_offsets_[i],
          static_cast<std::size_t>(out_offsets_[i + 1] - out_offsets_[i])};
}

std::span<const EdgeIndex> SparseGraph::in_edges(VertexIndex v) const {
  auto i = static_cast<std::size_t>(v);
  return {in_list_.data() + in_offsets_[i],
          static_cast<std::size_t>(in_offsets_[i + 1] - in_offsets_[i])};
}

std::optional<EdgeIndex> SparseGraph::find_edge(VertexIndex from, VertexIndex to) const {
  if (!contains(from) || !contains(to)) return std::nullopt;
  auto out = out_edges(from);
  auto it = std::lower_bound(out.begin(), out.end(), to,
                             [this](EdgeIndex e, VertexIndex head) { return edge(e).to < head; });
  if (it == out.end() || edge(*it).to != to) return std::nullopt;
  return *it;
}

EdgeIndex SparseGraph::edge_index(VertexIndex from, VertexIndex to) const {
  if (auto e = find_edge(from, to)) return *e;
  throw NotFoundError("no edge between vertex indices " + std::to_string(from) + " and " +
                      std::to_string(to));
}

EdgeIndex SparseGraph::reverse(EdgeIndex e) const { return reverse_[static_cast<std::size_t>(e)]; }

std::optional<VertexIndex> SparseGraph::find_vertex(int id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const Vertex& v, int key) { return v.id < key; });
  if (it == vertices_.end() || it->id != id) return std::nullopt;
  return static_cast<VertexIndex>(it - vertices_.begin());
}

VertexIndex SparseGraph::index_of(int id) const {
  if (auto v = find_vertex(id)) return *v;
  throw NotFoundError("unknown vertex id " + std::to_string(id));
}

double SparseGraph::distance(VertexIndex a, VertexIndex b) const {
  return std::hypot(vertex(a).x - vertex(b).x, vertex(a).y - vertex(b).y);
}

std::vector<int> bfs_distances(const SparseGraph& graph, VertexIndex source) {
  return bfs_distances(graph, source, [](EdgeIndex) { return false; });
}

}  // namespace cmpp

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cmpp {

using VertexIndex = std::int32_t;
using EdgeIndex = std::int32_t;

struct Vertex {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  VertexIndex from = 0;
  VertexIndex to = 0;
};

/// Symmetric directed graph with planar vertex coordinates.
///
/// Vertices are stored in ascending id order, so vertex-index order equals
/// id order. Edges are indexed in lexicographic (from, to) order; anti-parallel
/// edges are distinct objects. Adjacency is kept in compressed form, with
/// out-edges sorted by head and in-edges sorted by tail.
class SparseGraph {
 public:
  SparseGraph() = default;

  // `edges` hold vertex ids. With `symmetrize`, the reverse of every edge is
  // added; otherwise the input must already be symmetric. Self-loops, unknown
  // ids and duplicate vertex ids raise Error. Duplicate edges are merged.
  SparseGraph(std::vector<Vertex> vertices, const std::vector<std::pair<int, int>>& edges,
              bool symmetrize = true);

  // 4-connected width x height lattice; ids row-major, coordinates (col, row).
  static SparseGraph grid(int width, int height);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Vertex& vertex(VertexIndex v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Edge& edge(EdgeIndex e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const EdgeIndex> out_edges(VertexIndex v) const;
  std::span<const EdgeIndex> in_edges(VertexIndex v) const;

  bool contains(VertexIndex v) const { return v >= 0 && static_cast<std::size_t>(v) < vertices_.size(); }
  std::optional<EdgeIndex> find_edge(VertexIndex from, VertexIndex to) const;
  // Throws NotFoundError.
  EdgeIndex edge_index(VertexIndex from, VertexIndex to) const;
  EdgeIndex reverse(EdgeIndex e) const;

  std::optional<VertexIndex> find_vertex(int id) const;
  // Throws NotFoundError.
  VertexIndex index_of(int id) const;

  double distance(VertexIndex a, VertexIndex b) const;

 private:
  void build_adjacency();

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> out_offsets_;
  std::vector<EdgeIndex> out_list_;
  std::vector<std::int32_t> in_offsets_;
  std::vector<EdgeIndex> in_list_;
  std::vector<EdgeIndex> reverse_;
};

// Unweighted BFS distances (edge counts) from `source`; -1 when unreachable.
// `blocked(e)` returning true hides edge e.
template <typename Blocked>
std::vector<int> bfs_distances(const SparseGraph& graph, VertexIndex source, Blocked blocked);

std::vector<int> bfs_distances(const SparseGraph& graph, VertexIndex source);

}  // namespace cmpp

#include "cmpp/detail/graph_inl.hpp"

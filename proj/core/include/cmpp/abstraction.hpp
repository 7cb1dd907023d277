#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cmpp/graph.hpp"
#include "cmpp/grid_map.hpp"
#include "cmpp/instance.hpp"

namespace cmpp {

/// Sparse waypoint graph over a grid plus the cell/vertex correspondences.
///
/// to_sparse (f) maps every traversable cell to a vertex and is -1 on blocked
/// cells; to_grid (g) maps each vertex to its representative cell, with
/// f(g(v)) == v. Vertex ids equal vertex indices and follow the row-major
/// order of the representative cells.
struct Abstraction {
  std::shared_ptr<const SparseGraph> sparse;
  std::vector<VertexIndex> to_sparse;
  std::vector<CellIndex> to_grid;

  VertexIndex f(CellIndex c) const { return to_sparse[static_cast<std::size_t>(c)]; }
  CellIndex g(VertexIndex v) const { return to_grid[static_cast<std::size_t>(v)]; }
  const SparseGraph& graph() const { return *sparse; }
};

struct SparsifyOptions {
  int interval = 3;
  // Adjacent regions are joined when their representative cells are at most
  // edge_factor * interval apart through the two regions plus a 1-cell margin.
  double edge_factor = 2.0;
};

// Throws Error when interval < 1 or the grid has no traversable cell.
Abstraction sparsify(const GridMap& grid, const SparsifyOptions& options);
inline Abstraction sparsify(const GridMap& grid, int interval) {
  return sparsify(grid, SparsifyOptions{interval, 2.0});
}

// Agents get ids 0..n-1 with starts and goals mapped through f. Throws Error on
// blocked or out-of-range cells or mismatched list lengths.
CmppInstance lift_instance(const Abstraction& abstraction, std::span<const CellIndex> starts,
                           std::span<const CellIndex> goals);

}  // namespace cmpp

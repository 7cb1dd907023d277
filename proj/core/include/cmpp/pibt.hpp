#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "cmpp/grid_map.hpp"

namespace cmpp {

/// Lazily built BFS distance tables, one per target cell.
class DistanceCache {
 public:
  explicit DistanceCache(const GridMap& grid) : grid_(&grid) {}
  // Distances from every cell to `target`; -1 where unreachable.
  const std::vector<int>& to(CellIndex target);
  int distance(CellIndex from, CellIndex target) { return to(target)[static_cast<std::size_t>(from)]; }
  std::size_t tables() const { return tables_.size(); }

 private:
  const GridMap* grid_;
  std::unordered_map<CellIndex, std::vector<int>> tables_;
};

struct PibtRequest {
  std::span<const CellIndex> positions;
  std::span<const CellIndex> targets;
  // Higher moves first; ties by smaller agent index.
  std::span<const std::int64_t> priorities;
  // Break distance ties toward up (down) on odd (even) columns and right
  // (left) on odd (even) rows before the fixed up, right, down, left order.
  bool parity_bias = false;
};

// One collision-free step by priority inheritance with backtracking. Each
// agent moves to a neighbouring cell or stays; no two agents end in the same
// cell and no two agents swap. Returns the next cell of every agent.
std::vector<CellIndex> pibt_step(const GridMap& grid, const PibtRequest& request, DistanceCache& distances);

struct StepConflicts {
  std::uint64_t vertex = 0;
  std::uint64_t edge = 0;
  // Moves to a cell that is neither the current cell nor a traversable neighbour.
  std::uint64_t invalid = 0;
  std::uint64_t total() const { return vertex + edge + invalid; }
};

StepConflicts check_step(const GridMap& grid, std::span<const CellIndex> before, std::span<const CellIndex> after);

}  // namespace cmpp

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cmpp {

// Row-major cell index: row * width + col.
using CellIndex = std::int32_t;

/// 4-connected occupancy grid.
class GridMap {
 public:
  GridMap() = default;
  // `traversable` is row-major; throws Error when its size is not width * height.
  GridMap(int width, int height, std::vector<char> traversable);
  static GridMap open(int width, int height);
  // Rows of '.' (free) and '@' (blocked), all the same length.
  static GridMap from_rows(const std::vector<std::string>& rows);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  CellIndex index(int col, int row) const { return row * width_ + col; }
  int col(CellIndex c) const { return c % width_; }
  int row(CellIndex c) const { return c / width_; }
  bool in_bounds(int col, int row) const { return col >= 0 && row >= 0 && col < width_ && row < height_; }
  bool traversable(CellIndex c) const { return c >= 0 && static_cast<std::size_t>(c) < cells_.size() && cells_[static_cast<std::size_t>(c)]; }
  bool traversable(int col, int row) const { return in_bounds(col, row) && cells_[static_cast<std::size_t>(index(col, row))]; }
  std::size_t traversable_count() const;
  const std::vector<char>& cells() const { return cells_; }

  // Traversable 4-neighbours in the fixed order up, right, down, left.
  // Missing directions are -1.
  std::array<CellIndex, 4> neighbors(CellIndex c) const;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<char> cells_;
};

// Unit-cost BFS over traversable cells; -1 where unreachable.
std::vector<int> grid_bfs(const GridMap& grid, CellIndex source);

// MovingAI .map text. '.' and 'G' are traversable; '@', 'T', 'O' are blocked.
// Throws ParseError carrying the 1-based line number.
GridMap parse_map(std::string_view text);
GridMap load_map(const std::string& path);
std::string format_map(const GridMap& grid);

struct ScenarioEntry {
  int bucket = 0;
  std::string map_name;
  int map_width = 0;
  int map_height = 0;
  int start_col = 0;
  int start_row = 0;
  int goal_col = 0;
  int goal_row = 0;
  double optimal_length = 0.0;
};

// MovingAI .scen, version 1.
std::vector<ScenarioEntry> parse_scen(std::string_view text);

}  // namespace cmpp

#include <gtest/gtest.h>

#include <set>

#include "cmpp/abstraction.hpp"
#include "cmpp/error.hpp"
#include "cmpp/grid_map.hpp"
#include "cmpp/pibt.hpp"

namespace cmpp {
namespace {

TEST(GridMap, ParsesMovingAiFormat) {
  GridMap g = parse_map("type octile\nheight 2\nwidth 3\nmap\n.@.\nGT.\n");
  EXPECT_EQ(g.width(), 3);
  EXPECT_EQ(g.height(), 2);
  EXPECT_TRUE(g.traversable(0, 0));
  EXPECT_FALSE(g.traversable(1, 0));
  EXPECT_TRUE(g.traversable(0, 1));
  EXPECT_FALSE(g.traversable(1, 1));
  EXPECT_EQ(g.traversable_count(), 4u);
  EXPECT_EQ(parse_map(format_map(g)), g);
}

TEST(GridMap, ParseErrorsCarryLineNumbers) {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_map(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("height 2\nwidth 2\nmap\n..\n..\n"), 3u);
  EXPECT_EQ(line_of("type octile\nheight x\nwidth 2\nmap\n..\n..\n"), 2u);
  EXPECT_EQ(line_of("type octile\nheight 2\nwidth 2\nmap\n..\n.\n"), 6u);
  EXPECT_EQ(line_of("type octile\nheight 2\nwidth 2\nmap\n..\n.?\n"), 6u);
  EXPECT_EQ(line_of("type octile\nheight 2\nwidth 2\nmap\n..\n"), 6u);
  EXPECT_EQ(line_of("type octile\nheight 1\nwidth 2\nmap\n..\n@@\n"), 6u);
  EXPECT_EQ(line_of("type octile\nheight 1\nwidth 2\nmap\n..\n"), 0u);
}

TEST(GridMap, NeighboursInFixedOrder) {
  GridMap g = GridMap::from_rows({"...", ".@.", "..."});
  auto n = g.neighbors(g.index(1, 0));
  EXPECT_EQ(n[0], -1);
  EXPECT_EQ(n[1], g.index(2, 0));
  EXPECT_EQ(n[2], -1);
  EXPECT_EQ(n[3], g.index(0, 0));
  auto d = grid_bfs(g, 0);
  EXPECT_EQ(d[static_cast<std::size_t>(g.index(2, 2))], 4);
  EXPECT_EQ(d[static_cast<std::size_t>(g.index(1, 1))], -1);
}

TEST(GridMap, ParsesScenarios) {
  auto entries = parse_scen("version 1\n0\tm.map\t8\t8\t1\t2\t3\t4\t5.5\n");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].start_col, 1);
  EXPECT_EQ(entries[0].goal_row, 4);
  EXPECT_DOUBLE_EQ(entries[0].optimal_length, 5.5);
  EXPECT_THROW(parse_scen("version 1\n0\tm.map\t8\n"), ParseError);
}

TEST(Sparsify, OpenGridAnchors) {
  Abstraction abs = sparsify(GridMap::open(10, 10), 3);
  EXPECT_EQ(abs.graph().num_vertices(), 16u);
  for (std::size_t v = 0; v < abs.graph().num_vertices(); ++v) {
    EXPECT_EQ(abs.f(abs.g(static_cast<VertexIndex>(v))), static_cast<VertexIndex>(v));
  }
  // Anchor lattice neighbours are joined; diagonals are not.
  EXPECT_TRUE(abs.graph().find_edge(abs.f(0), abs.f(3)));
  EXPECT_FALSE(abs.graph().find_edge(abs.f(0), abs.f(33)));
}

TEST(Sparsify, IntervalOneIsTheGrid) {
  GridMap grid = GridMap::from_rows({"....", ".@@.", "....", "@..."});
  Abstraction abs = sparsify(grid, 1);
  ASSERT_EQ(abs.graph().num_vertices(), grid.traversable_count());
  std::size_t links = 0;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    auto cell = static_cast<CellIndex>(c);
    if (!grid.traversable(cell)) {
      EXPECT_EQ(abs.f(cell), -1);
      continue;
    }
    for (CellIndex n : grid.neighbors(cell)) {
      if (n < 0) continue;
      ++links;
      EXPECT_TRUE(abs.graph().find_edge(abs.f(cell), abs.f(n)));
    }
  }
  EXPECT_EQ(abs.graph().num_edges(), links);
}

TEST(Sparsify, KeepsComponentsConnected) {
  GridMap grid = GridMap::from_rows({
      "..........",
      ".@@@@@@@@.",
      ".@......@.",
      ".@.@@@@.@.",
      ".@......@.",
      ".@@@@@@@@.",
      "..........",
      "@@@@@@@@@@",
      "...@......",
  });
  Abstraction abs = sparsify(grid, 3);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    auto cell = static_cast<CellIndex>(c);
    if (!grid.traversable(cell)) continue;
    auto cells = grid_bfs(grid, cell);
    auto verts = bfs_distances(abs.graph(), abs.f(cell));
    for (std::size_t d = 0; d < grid.size(); ++d) {
      if (!grid.traversable(static_cast<CellIndex>(d))) continue;
      EXPECT_EQ(cells[d] >= 0, verts[static_cast<std::size_t>(abs.f(static_cast<CellIndex>(d)))] >= 0);
    }
  }
}

TEST(Sparsify, RepresentativesAreOrderedAndTraversable) {
  GridMap grid = load_map(CMPP_DATA_DIR "/maps/warehouse-small.map");
  Abstraction abs = sparsify(grid, 3);
  for (std::size_t v = 0; v < abs.to_grid.size(); ++v) {
    EXPECT_TRUE(grid.traversable(abs.to_grid[v]));
    if (v > 0) {
      EXPECT_LT(abs.to_grid[v - 1], abs.to_grid[v]);
    }
    EXPECT_EQ(abs.graph().vertex(static_cast<VertexIndex>(v)).id, static_cast<int>(v));
  }
  EXPECT_LT(abs.graph().num_vertices(), grid.traversable_count() / 4);
}

TEST(Sparsify, Errors) {
  EXPECT_THROW(sparsify(GridMap::open(3, 3), 0), Error);
  EXPECT_THROW(sparsify(GridMap::from_rows({"@@"}), 1), Error);
  Abstraction abs = sparsify(GridMap::from_rows({"..", ".@"}), 1);
  std::vector<CellIndex> starts{0}, goals{3}, ok{1};
  EXPECT_THROW(lift_instance(abs, starts, goals), Error);
  EXPECT_THROW(lift_instance(abs, starts, std::vector<CellIndex>{}), Error);
  CmppInstance inst = lift_instance(abs, starts, ok);
  EXPECT_EQ(inst.agent(0).goal, abs.f(1));
}

TEST(Pibt, CorridorAgentsPassWithoutSwap) {
  GridMap grid = GridMap::from_rows({"....."});
  DistanceCache cache(grid);
  std::vector<CellIndex> pos{0, 1}, tgt{4, 4};
  std::vector<std::int64_t> pri{0, 0};
  for (int step = 0; step < 6; ++step) {
    auto next = pibt_step(grid, {pos, tgt, pri, false}, cache);
    EXPECT_EQ(check_step(grid, pos, next).total(), 0u);
    pos = next;
  }
  EXPECT_TRUE(pos[0] == 4 || pos[1] == 4);
}

TEST(Pibt, HeadOnInCorridorNeverSwaps) {
  GridMap grid = GridMap::from_rows({"...", ".@."});
  DistanceCache cache(grid);
  std::vector<CellIndex> pos{0, 2}, tgt{2, 0};
  std::vector<std::int64_t> pri{1, 0};
  for (int step = 0; step < 10; ++step) {
    auto next = pibt_step(grid, {pos, tgt, pri, false}, cache);
    ASSERT_EQ(check_step(grid, pos, next).total(), 0u);
    pos = next;
  }
}

TEST(Pibt, SurroundedAgentStays) {
  GridMap grid = GridMap::from_rows({"@.@", "...", "@.@"});
  DistanceCache cache(grid);
  std::vector<CellIndex> pos{4, 1, 3, 5, 7};
  std::vector<CellIndex> tgt = pos;
  std::vector<std::int64_t> pri{5, 0, 0, 0, 0};
  auto next = pibt_step(grid, {pos, tgt, pri, false}, cache);
  EXPECT_EQ(next, pos);
}

TEST(Pibt, PriorityInheritancePushesBlocker) {
  GridMap grid = GridMap::from_rows({"...."});
  DistanceCache cache(grid);
  // Agent 0 wants to pass through agent 1 who sits at its goal.
  std::vector<CellIndex> pos{0, 1}, tgt{3, 1};
  std::vector<std::int64_t> pri{9, 0};
  auto next = pibt_step(grid, {pos, tgt, pri, false}, cache);
  EXPECT_EQ(next[0], 1);
  EXPECT_EQ(next[1], 2);
}

TEST(Pibt, ParityBiasBreaksTies) {
  GridMap grid = GridMap::open(3, 3);
  DistanceCache cache(grid);
  std::vector<CellIndex> pos{grid.index(1, 1)};
  std::vector<CellIndex> far{grid.index(0, 0)};
  std::vector<std::int64_t> pri{0};
  // From the centre, (0, 0) is reached equally via up or left. Column 1 is
  // odd, so the bias prefers up.
  auto next = pibt_step(grid, {pos, far, pri, true}, cache);
  EXPECT_EQ(next[0], grid.index(1, 0));
}

TEST(Pibt, CheckStepFlagsConflicts) {
  GridMap grid = GridMap::open(3, 1);
  std::vector<CellIndex> before{0, 1}, same{1, 1}, swap{1, 0}, follow{1, 2};
  EXPECT_EQ(check_step(grid, before, same).vertex, 1u);
  EXPECT_EQ(check_step(grid, before, swap).edge, 1u);
  std::vector<CellIndex> b2{0}, far{2};
  EXPECT_EQ(check_step(grid, b2, far).invalid, 1u);
  EXPECT_EQ(check_step(grid, before, follow).total(), 0u);
}

TEST(DistanceCache, BuildsOnce) {
  GridMap grid = GridMap::open(4, 4);
  DistanceCache cache(grid);
  EXPECT_EQ(cache.distance(0, 15), 6);
  EXPECT_EQ(cache.distance(5, 15), 4);
  EXPECT_EQ(cache.tables(), 1u);
}

}  // namespace
}  // namespace cmpp

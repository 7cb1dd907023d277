#include <gtest/gtest.h>

#include <random>

#include "cmpp/acmts.hpp"
#include "cmpp/error.hpp"
#include "cmpp/exact.hpp"
#include "cmpp/low_level.hpp"
#include "test_util.hpp"

namespace cmpp {
namespace {

using testing::grid_graph;
using testing::line_graph;

// Edges of `path` in graph index form.
std::vector<EdgeIndex> edges_of(const SparseGraph& g, const Path& path) {
  std::vector<EdgeIndex> out;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) out.push_back(g.edge_index(path[k], path[k + 1]));
  return out;
}

bool uses(const SparseGraph& g, const Path& path, EdgeIndex e) {
  auto es = edges_of(g, path);
  return std::find(es.begin(), es.end(), e) != es.end();
}

TEST(Dijkstra, PrefersShortestOnEmptyFlow) {
  auto g = grid_graph(3, 3);
  FlowField flow(*g);
  auto p = dijkstra_min_delta(*g, flow, 0, 8);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->size(), 5u);
  // Equal-length routes diverge at vertex 0; the smaller index (1) wins.
  EXPECT_EQ((*p)[1], 1);
}

TEST(Dijkstra, AvoidsCongestedVertex) {
  auto g = grid_graph(3, 3);
  // Three agents cross vertex 4 in each horizontal direction, so entering it
  // from above costs 4 * 4 and the side routes pay only 4 at vertex 3 or 5.
  Solution load{{{3, 4, 5}, {3, 4, 5}, {3, 4, 5}, {5, 4, 3}, {5, 4, 3}, {5, 4, 3}}, std::nullopt};
  FlowField flow = compute_flow(load, *g);
  auto p = dijkstra_min_delta(*g, flow, 1, 7);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (Path{1, 0, 3, 6, 7}));
  EXPECT_EQ(path_delta_cost(flow, *p, *g), Cost(7));
}

TEST(Dijkstra, ForbiddenAndUnreachable) {
  auto g = line_graph(3);
  FlowField flow(*g);
  std::vector<EdgeIndex> forbid{g->edge_index(1, 2)};
  EXPECT_FALSE(dijkstra_min_delta(*g, flow, 0, 2, forbid));
  EXPECT_EQ(*dijkstra_min_delta(*g, flow, 1, 1), (Path{1}));
}

TEST(Dijkstra, MatchesEnumerationMinimum) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_graph(7, 5, rng);
    CmppInstance inst = testing::random_instance(g, 5, rng);
    Solution others;
    for (std::size_t a = 1; a < inst.num_agents(); ++a) {
      others.paths.push_back(testing::all_simple_paths(*g, inst.agent(a).start, inst.agent(a).goal).back());
    }
    FlowField flow = compute_flow(others, *g);
    const Agent& a0 = inst.agent(0);
    auto best = dijkstra_min_delta(*g, flow, a0.start, a0.goal);
    ASSERT_TRUE(best);
    Cost want = Cost::max();
    for (const Path& p : testing::all_simple_paths(*g, a0.start, a0.goal)) want = std::min(want, path_delta_cost(flow, p, *g));
    EXPECT_EQ(path_delta_cost(flow, *best, *g), want);
  }
}

TEST(ConstraintSet, SlicesAndConflicts) {
  ConstraintSet c = ConstraintSet::from_pairs({{1, 4}, {0, 2}, {1, 3}, {1, 3}}, {{0, 5}});
  EXPECT_EQ(c.forced().size(), 3u);
  EXPECT_EQ(c.forced_for(1).size(), 2u);
  EXPECT_EQ(c.forced_for(1)[0].edge, 3);
  EXPECT_TRUE(c.is_forbidden(0, 5));
  EXPECT_FALSE(c.is_forced(2, 4));
  EXPECT_THROW(c.add_forced(0, 5), Error);
  EXPECT_THROW(ConstraintSet::from_pairs({{0, 1}}, {{0, 1}}), Error);
}

TEST(LowLevel, HonoursForcedEdge) {
  auto g = grid_graph(3, 3);
  FlowField flow(*g);
  EdgeIndex forced = g->edge_index(4, 5);
  ConstraintSet c = ConstraintSet::from_pairs({{0, forced}}, {});
  auto p = plan_with_constraints(*g, flow, 0, 0, 8, c);
  ASSERT_TRUE(p);
  EXPECT_TRUE(uses(*g, *p, forced));
  EXPECT_EQ(path_defect(*g, *p), "");
  EXPECT_EQ(p->front(), 0);
  EXPECT_EQ(p->back(), 8);
}

TEST(LowLevel, ImpossibleForcedPairs) {
  auto g = grid_graph(3, 3);
  FlowField flow(*g);
  // Two forced edges leaving the same vertex.
  ConstraintSet c = ConstraintSet::from_pairs({{0, g->edge_index(4, 5)}, {0, g->edge_index(4, 7)}}, {});
  EXPECT_FALSE(plan_with_constraints(*g, flow, 0, 0, 8, c));
  // An edge and its reverse.
  ConstraintSet r = ConstraintSet::from_pairs({{0, g->edge_index(4, 5)}, {0, g->edge_index(5, 4)}}, {});
  EXPECT_FALSE(plan_with_constraints(*g, flow, 0, 0, 8, r));
  // Forced edge into the start.
  ConstraintSet s = ConstraintSet::from_pairs({{0, g->edge_index(1, 0)}}, {});
  EXPECT_FALSE(plan_with_constraints(*g, flow, 0, 0, 8, s));
}

TEST(LowLevel, ExhaustiveFallbackFindsStitchMisses) {
  // Forced edges listed so that nearest-first stitching blocks its own route;
  // every answer must still satisfy the constraints.
  std::mt19937_64 rng(17);
  auto g = grid_graph(4, 4);
  FlowField flow(*g);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    CmppInstance inst = testing::random_instance(g, 1, rng);
    auto paths = testing::all_simple_paths(*g, inst.agent(0).start, inst.agent(0).goal);
    std::uniform_int_distribution<std::size_t> pick(0, paths.size() - 1);
    const Path& ref = paths[pick(rng)];
    auto es = edges_of(*g, ref);
    std::vector<AgentEdge> forced;
    for (std::size_t k = 0; k < es.size(); k += 2) forced.push_back({0, es[k]});
    ConstraintSet c = ConstraintSet::from_pairs(forced, {});
    auto p = plan_with_constraints(*g, flow, 0, inst.agent(0).start, inst.agent(0).goal, c);
    ASSERT_TRUE(p) << "a satisfying path exists";
    for (const AgentEdge& ae : forced) EXPECT_TRUE(uses(*g, *p, ae.edge));
    EXPECT_EQ(path_defect(*g, *p), "");
    ++found;
  }
  EXPECT_EQ(found, 200);
}

TEST(LowLevel, ExhaustiveIsOptimalWhenComplete) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_graph(7, 6, rng);
    CmppInstance inst = testing::random_instance(g, 4, rng);
    Solution others;
    for (std::size_t a = 1; a < inst.num_agents(); ++a) {
      others.paths.push_back(testing::all_simple_paths(*g, inst.agent(a).start, inst.agent(a).goal).front());
    }
    FlowField flow = compute_flow(others, *g);
    const Agent& a0 = inst.agent(0);
    auto all = testing::all_simple_paths(*g, a0.start, a0.goal);
    auto es = edges_of(*g, all.back());
    std::vector<EdgeIndex> forced{es.front()};
    auto res = exhaustive_constrained_path(*g, flow, a0.start, a0.goal, forced, {}, 1'000'000);
    ASSERT_TRUE(res.complete);
    ASSERT_TRUE(res.path);
    Cost want = Cost::max();
    for (const Path& p : all) {
      if (uses(*g, p, forced[0])) want = std::min(want, path_delta_cost(flow, p, *g));
    }
    EXPECT_EQ(path_delta_cost(flow, *res.path, *g), want);
  }
}

TEST(PrioritizedPlanning, SequentialMinDelta) {
  auto g = line_graph(4);
  CmppInstance inst(g, {{0, 0, 3}, {1, 3, 0}});
  Solution s = pp_initial(inst);
  EXPECT_EQ(s.paths[0], (Path{0, 1, 2, 3}));
  EXPECT_EQ(s.paths[1], (Path{3, 2, 1, 0}));
  EXPECT_EQ(total_cost(s, *g), Cost(8));
}

TEST(PrioritizedPlanning, InfeasibleAgentIsNamed) {
  auto g = std::make_shared<const SparseGraph>(std::vector<Vertex>{{0, 0, 0}, {1, 1, 0}, {2, 2, 0}},
                                               std::vector<std::pair<int, int>>{{0, 1}});
  CmppInstance inst(g, {{0, 0, 1}, {7, 0, 2}});
  try {
    pp_initial(inst);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find('7'), std::string::npos);
  }
  SolverConfig config;
  EXPECT_THROW(solve(inst, config), InfeasibleError);
}

TEST(Acmts, ValidateRejectsBadOmega) {
  SolverConfig c;
  c.omega = 0.5;
  EXPECT_THROW(validate(c), Error);
  c.omega = std::numeric_limits<double>::infinity();
  EXPECT_THROW(validate(c), Error);
  c.omega = 1.0;
  EXPECT_NO_THROW(validate(c));
}

TEST(Acmts, ExpandProducesComplementaryChildren) {
  auto g = grid_graph(3, 3);
  CmppInstance inst(g, {{0, 1, 7}, {1, 3, 5}, {2, 7, 1}});
  SearchNode root = make_root(inst, pp_initial(inst));
  auto v = select_vertex(root, inst);
  ASSERT_TRUE(v);
  AgentEdge ae = select_agent(root, inst, *v);
  auto [p, q] = expand_node(root, inst, ae.agent, ae.edge, *v);
  EXPECT_TRUE(p.constraints.is_forced(ae.agent, ae.edge));
  EXPECT_EQ(p.paths, root.paths);
  EXPECT_TRUE(q.constraints.is_forbidden(ae.agent, ae.edge));
  if (!q.dead) {
    EXPECT_TRUE(is_valid_solution(inst, q.paths));
    EXPECT_FALSE(uses(*g, q.paths.paths[static_cast<std::size_t>(ae.agent)], ae.edge));
    EXPECT_EQ(q.cost, total_cost(q.paths, *g));
  }
}

TEST(Acmts, SelectVertexPicksMostCongested) {
  auto g = grid_graph(3, 3);
  CmppInstance inst(g, {{0, 1, 7}, {1, 3, 5}, {2, 0, 2}});
  SearchNode root = make_root(inst, Solution{{{1, 4, 7}, {3, 4, 5}, {0, 1, 2}}, std::nullopt});
  EXPECT_EQ(*select_vertex(root, inst), 4);
  AgentEdge ae = select_agent(root, inst, 4);
  EXPECT_EQ(ae.agent, 0);
  EXPECT_EQ(ae.edge, g->edge_index(1, 4));
}

TEST(Acmts, TraceStrictlyDecreasesAndMatchesBest) {
  std::mt19937_64 rng(8);
  auto g = grid_graph(3, 3);
  CmppInstance inst = testing::random_instance(g, 10, rng);
  SolverConfig config;
  config.max_expansions = 2000;
  SolverReport r = solve(inst, config);
  ASSERT_FALSE(r.improvement_trace.empty());
  EXPECT_EQ(r.improvement_trace.front().cost, r.initial_cost);
  EXPECT_EQ(r.improvement_trace.back().cost, r.best_cost);
  for (std::size_t i = 1; i < r.improvement_trace.size(); ++i) {
    EXPECT_LT(r.improvement_trace[i].cost, r.improvement_trace[i - 1].cost);
  }
  EXPECT_TRUE(is_valid_solution(inst, r.best));
  EXPECT_EQ(total_cost(r.best, *g), r.best_cost);
  EXPECT_LE(r.best_cost, r.initial_cost);
}

TEST(Acmts, DeterministicUnderExpansionBudget) {
  std::mt19937_64 rng(4);
  auto g = grid_graph(4, 4);
  CmppInstance inst = testing::random_instance(g, 20, rng);
  SolverConfig config;
  config.max_expansions = 300;
  SolverReport a = solve(inst, config);
  SolverReport b = solve(inst, config);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.nodes_expanded, b.nodes_expanded);
}

TEST(Acmts, LowerBoundsAreOrderedAndAdmissible) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = testing::random_graph(7, 4, rng);
    CmppInstance inst = testing::random_instance(g, 3, rng);
    SearchNode root = make_root(inst, pp_initial(inst));
    Cost opt(testing::brute_force_optimum(inst));
    auto pl = lower_bound(root, inst, LowerBoundMode::path_length);
    auto pe = lower_bound(root, inst, LowerBoundMode::forced_surplus);
    auto fc = lower_bound(root, inst, LowerBoundMode::forced_congestion);
    ASSERT_TRUE(pl && pe && fc);
    EXPECT_LE(*pl, *pe);
    EXPECT_LE(*pl, *fc);
    EXPECT_LE(*fc, opt);
    EXPECT_LE(*pe, opt);
  }
}

TEST(Acmts, LifelongWarmStartKeepsUnchangedPaths) {
  auto g = grid_graph(4, 4);
  CmppInstance inst(g, {{0, 0, 15}, {1, 3, 12}, {2, 5, 6}});
  Solution prev = pp_initial(inst);
  CmppInstance next(g, {{0, 0, 15}, {1, 3, 12}, {2, 6, 9}});
  std::vector<AgentIndex> changed{2};
  Solution root = warm_start_paths(next, prev, changed);
  EXPECT_EQ(root.paths[0], prev.paths[0]);
  EXPECT_EQ(root.paths[1], prev.paths[1]);
  EXPECT_EQ(root.paths[2].front(), 6);
  EXPECT_EQ(root.paths[2].back(), 9);
  SolverConfig config;
  config.max_expansions = 50;
  SolverReport r = solve_lifelong_step(next, prev, changed, config);
  EXPECT_TRUE(is_valid_solution(next, r.best));
}

TEST(Acmts, LowerBoundModeNames) {
  for (auto m : {LowerBoundMode::path_length, LowerBoundMode::forced_surplus, LowerBoundMode::forced_congestion}) {
    EXPECT_EQ(parse_lower_bound_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_lower_bound_mode("nope"), Error);
}

TEST(Exact, LineGraphHandValue) {
  // Every agent has a single route on a line.
  auto g = line_graph(3);
  CmppInstance inst(g, {{0, 0, 2}, {1, 2, 0}, {2, 0, 2}});
  ExactResult r = exact_solve(inst);
  // Vertex 1 gets f=2 from the left and f=1 from the right: 3 * 2 - 1 = 5.
  // Vertex 2 gets 2 from the left: 2. Vertex 0 gets 1: 1.
  EXPECT_EQ(r.cost, Cost(8));
  EXPECT_EQ(*r.solution.claimed_cost, Cost(8));
}

TEST(Exact, MatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = testing::random_graph(6 + trial % 3, 4, rng);
    CmppInstance inst = testing::random_instance(g, 2 + trial % 3, rng);
    ExactOptions opt;
    opt.length_cap = static_cast<int>(g->num_vertices()) - 1;
    ExactResult r = exact_solve(inst, opt);
    EXPECT_EQ(r.cost, Cost(testing::brute_force_optimum(inst))) << "trial " << trial;
    EXPECT_TRUE(validate_minlp(r.solution, inst).empty());
  }
}

TEST(Exact, CapErrors) {
  auto g = line_graph(4);
  CmppInstance inst(g, {{0, 0, 3}});
  ExactOptions opt;
  opt.length_cap = 2;
  EXPECT_THROW(exact_solve(inst, opt), Error);
  auto split = std::make_shared<const SparseGraph>(std::vector<Vertex>{{0, 0, 0}, {1, 1, 0}, {2, 2, 0}},
                                                   std::vector<std::pair<int, int>>{{0, 1}});
  CmppInstance bad(split, {{0, 0, 2}});
  EXPECT_THROW(exact_solve(bad), InfeasibleError);
}

TEST(Exact, EnumerationRespectsConstraints) {
  auto g = grid_graph(3, 3);
  auto all = enumerate_simple_paths(*g, 0, 8, 8);
  EXPECT_EQ(all.size(), testing::all_simple_paths(*g, 0, 8).size());
  EXPECT_EQ(enumerate_simple_paths(*g, 0, 8, 4).size(), 6u);
  std::vector<EdgeIndex> forced{g->edge_index(4, 5)};
  for (const Path& p : enumerate_simple_paths(*g, 0, 8, 8, forced)) EXPECT_TRUE(uses(*g, p, forced[0]));
  std::vector<EdgeIndex> forbidden{g->edge_index(0, 1)};
  for (const Path& p : enumerate_simple_paths(*g, 0, 8, 8, {}, forbidden)) EXPECT_EQ(p[1], 3);
}

TEST(Validator, ReportsEachViolationKind) {
  auto g = grid_graph(3, 3);
  CmppInstance inst(g, {{0, 0, 8}, {1, 2, 6}});
  Solution good{{{0, 1, 2, 5, 8}, {2, 1, 0, 3, 6}}, std::nullopt};
  good.claimed_cost = total_cost(good, *g);
  EXPECT_TRUE(validate_minlp(good, inst).empty());

  auto kinds = [&](const Solution& s) {
    std::vector<ViolationKind> out;
    for (const Violation& v : validate_minlp(s, inst)) out.push_back(v.kind);
    return out;
  };
  auto has = [](const std::vector<ViolationKind>& ks, ViolationKind k) {
    return std::find(ks.begin(), ks.end(), k) != ks.end();
  };

  Solution s = good;
  s.paths.pop_back();
  EXPECT_TRUE(has(kinds(s), ViolationKind::agent_count));
  s = good;
  s.paths[0] = {0, 1, 4, 1, 2, 5, 8};
  EXPECT_TRUE(has(kinds(s), ViolationKind::simple_path));
  EXPECT_TRUE(has(kinds(s), ViolationKind::anti_parallel));
  s = good;
  s.paths[0] = {0, 4, 8};
  EXPECT_TRUE(has(kinds(s), ViolationKind::adjacency));
  s = good;
  s.paths[0] = {0, 1, 2, 5};
  EXPECT_TRUE(has(kinds(s), ViolationKind::goal));
  s = good;
  s.paths[1] = {1, 0, 3, 6};
  EXPECT_TRUE(has(kinds(s), ViolationKind::start));
  s = good;
  s.paths[1] = {};
  EXPECT_TRUE(has(kinds(s), ViolationKind::empty_path));
  s = good;
  s.paths[1] = {2, 1, 42};
  EXPECT_TRUE(has(kinds(s), ViolationKind::unknown_vertex));
  s = good;
  s.claimed_cost = *good.claimed_cost + Cost(1);
  EXPECT_TRUE(has(kinds(s), ViolationKind::cost_mismatch));
}

}  // namespace
}  // namespace cmpp

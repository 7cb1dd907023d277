#include "cmpp/io.hpp"

#include <fstream>
#include <ostream>

#include "cmpp/congestion.hpp"
#include "cmpp/error.hpp"

namespace cmpp {

Json cost_to_json(const Cost& cost) {
  if (cost.fits_u64()) return cost.to_u64();
  return cost.to_string();
}

Cost cost_from_json(const Json& j) {
  if (j.is_number_unsigned()) return Cost(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Cost(static_cast<std::uint64_t>(j.get<std::int64_t>()));
  if (j.is_string()) return Cost::parse(j.get<std::string>());
  throw Error("cost must be a non-negative integer or a decimal string");
}

Json instance_to_json(const CmppInstance& instance) {
  const SparseGraph& graph = instance.graph();
  Json vertices = Json::array();
  for (const Vertex& v : graph.vertices()) vertices.push_back({{"id", v.id}, {"x", v.x}, {"y", v.y}});
  Json edges = Json::array();
  for (const Edge& e : graph.edges()) {
    if (e.from < e.to) edges.push_back({graph.vertex(e.from).id, graph.vertex(e.to).id});
  }
  Json agents = Json::array();
  for (const Agent& a : instance.agents()) {
    agents.push_back({{"id", a.id}, {"start", graph.vertex(a.start).id}, {"goal", graph.vertex(a.goal).id}});
  }
  return {{"vertices", vertices}, {"edges", edges}, {"directed", false}, {"agents", agents}};
}

CmppInstance instance_from_json(const Json& j) {
  try {
    std::vector<Vertex> vertices;
    for (const Json& v : j.at("vertices")) {
      vertices.push_back({v.at("id").get<int>(), v.value("x", 0.0), v.value("y", 0.0)});
    }
    std::vector<std::pair<int, int>> edges;
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error("each edge must be a [from, to] pair");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    const bool directed = j.value("directed", false);
    auto graph = std::make_shared<const SparseGraph>(std::move(vertices), edges, !directed);
    std::vector<Agent> agents;
    for (const Json& a : j.value("agents", Json::array())) {
      const int id = a.at("id").get<int>();
      auto start = graph->find_vertex(a.at("start").get<int>());
      auto goal = graph->find_vertex(a.at("goal").get<int>());
      if (!start || !goal) throw Error("agent " + std::to_string(id) + " has an endpoint outside the graph");
      agents.push_back({id, *start, *goal});
    }
    return CmppInstance(std::move(graph), std::move(agents));
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed instance: ") + e.what());
  }
}

Json solution_to_json(const Solution& solution, const CmppInstance& instance) {
  const SparseGraph& graph = instance.graph();
  Json paths = Json::object();
  for (std::size_t a = 0; a < solution.paths.size() && a < instance.num_agents(); ++a) {
    Json ids = Json::array();
    for (VertexIndex v : solution.paths[a]) ids.push_back(graph.contains(v) ? graph.vertex(v).id : v);
    paths[std::to_string(instance.agents()[a].id)] = std::move(ids);
  }
  Json out = {{"paths", paths}};
  if (solution.claimed_cost) out["total_cost"] = cost_to_json(*solution.claimed_cost);
  return out;
}

Solution solution_from_json(const Json& j, const CmppInstance& instance) {
  try {
    const SparseGraph& graph = instance.graph();
    Solution solution;
    solution.paths.resize(instance.num_agents());
    for (const auto& [key, ids] : j.at("paths").items()) {
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw Error("path key '" + key + "' is not an agent id");
      }
      auto agent = instance.find_agent(id);
      if (!agent) throw Error("solution names unknown agent " + key);
      Path& path = solution.paths[static_cast<std::size_t>(*agent)];
      for (const Json& v : ids) path.push_back(graph.find_vertex(v.get<int>()).value_or(-1));
    }
    if (j.contains("total_cost")) solution.claimed_cost = cost_from_json(j.at("total_cost"));
    return solution;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed solution: ") + e.what());
  }
}

Json report_to_json(const SolverReport& report) {
  Json trace = Json::array();
  for (const TracePoint& p : report.improvement_trace) {
    trace.push_back({{"elapsed_seconds", p.elapsed_seconds}, {"cost", cost_to_json(p.cost)}});
  }
  return {{"best_cost", cost_to_json(report.best_cost)},
          {"initial_cost", cost_to_json(report.initial_cost)},
          {"nodes_expanded", report.nodes_expanded},
          {"nodes_pruned", report.nodes_pruned},
          {"nodes_generated", report.nodes_generated},
          {"time_to_initial", report.time_to_initial},
          {"elapsed", report.elapsed},
          {"exhausted", report.exhausted},
          {"lower_bound", to_string(report.lower_bound)},
          {"improvement_trace", trace}};
}

Json sim_report_to_json(const SimReport& report) {
  Json trace = Json::array();
  for (const Cost& c : report.congestion_trace) trace.push_back(cost_to_json(c));
  return {{"mode", report.mode},
          {"seed", report.seed},
          {"steps", report.steps},
          {"agents", report.agents},
          {"arrivals", report.arrivals},
          {"throughput", report.throughput},
          {"conflicts", report.conflicts},
          {"vertex_conflicts", report.vertex_conflicts},
          {"edge_conflicts", report.edge_conflicts},
          {"invalid_moves", report.invalid_moves},
          {"replans", report.replans},
          {"nodes_expanded", report.nodes_expanded},
          {"sparse_vertices", report.sparse_vertices},
          {"grid_cells", report.grid_cells},
          {"congestion_trace", trace}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path);
}

void write_congestion_csv(std::ostream& out, const Solution& solution, const CmppInstance& instance) {
  const SparseGraph& graph = instance.graph();
  FlowField flow = compute_flow(solution, graph);
  out << "vertex_id,x,y,C\n";
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    const Vertex& vx = graph.vertex(static_cast<VertexIndex>(v));
    out << vx.id << ',' << vx.x << ',' << vx.y << ','
        << congestion_degree(flow, static_cast<VertexIndex>(v), graph) << '\n';
  }
}

void write_throughput_csv(std::ostream& out, std::span<const SimReport> reports, bool header) {
  if (header) out << "seed,mode,throughput\n";
  for (const SimReport& r : reports) out << r.seed << ',' << r.mode << ',' << r.throughput << '\n';
}

void write_congestion_trace_csv(std::ostream& out, const SimReport& report) {
  out << "step,total_C\n";
  for (std::size_t s = 0; s < report.congestion_trace.size(); ++s) {
    out << s << ',' << report.congestion_trace[s] << '\n';
  }
}

void write_occupancy_csv(std::ostream& out, const SimReport& report, const GridMap& grid) {
  out << "x,y,visits\n";
  for (std::size_t c = 0; c < report.occupancy.size(); ++c) {
    auto cell = static_cast<CellIndex>(c);
    if (!grid.traversable(cell)) continue;
    out << grid.col(cell) << ',' << grid.row(cell) << ',' << report.occupancy[c] << '\n';
  }
}

}  // namespace cmpp

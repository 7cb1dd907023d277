#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "cmpp/acmts.hpp"
#include "cmpp/cost.hpp"
#include "cmpp/grid_map.hpp"
#include "cmpp/instance.hpp"
#include "cmpp/simulator.hpp"

namespace cmpp {

using Json = nlohmann::json;

// Costs that fit in 64 bits are JSON numbers, larger ones decimal strings.
Json cost_to_json(const Cost& cost);
Cost cost_from_json(const Json& j);

// {"vertices": [{"id", "x", "y"}], "edges": [[u, v]], "directed": bool,
//  "agents": [{"id", "start", "goal"}]}, all endpoints given as vertex ids.
// Undirected files list each edge once; directed files must be symmetric.
Json instance_to_json(const CmppInstance& instance);
CmppInstance instance_from_json(const Json& j);

// {"paths": {"<agent id>": [vertex ids]}, "total_cost": cost}. Agents missing
// from the file get empty paths and unknown vertex ids become -1, so the
// validator can report them.
Json solution_to_json(const Solution& solution, const CmppInstance& instance);
Solution solution_from_json(const Json& j, const CmppInstance& instance);

Json report_to_json(const SolverReport& report);
// Occupancy is left to the CSV writer.
Json sim_report_to_json(const SimReport& report);

// Throws Error with the path on I/O failure and ParseError on bad JSON.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// vertex_id,x,y,C
void write_congestion_csv(std::ostream& out, const Solution& solution, const CmppInstance& instance);
// seed,mode,throughput
void write_throughput_csv(std::ostream& out, std::span<const SimReport> reports, bool header = true);
// step,total_C
void write_congestion_trace_csv(std::ostream& out, const SimReport& report);
// x,y,visits for traversable cells
void write_occupancy_csv(std::ostream& out, const SimReport& report, const GridMap& grid);

}  // namespace cmpp

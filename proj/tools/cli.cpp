#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cmpp/abstraction.hpp"
#include "cmpp/acmts.hpp"
#include "cmpp/congestion.hpp"
#include "cmpp/error.hpp"
#include "cmpp/exact.hpp"
#include "cmpp/grid_map.hpp"
#include "cmpp/io.hpp"
#include "cmpp/simulator.hpp"

#ifndef CMPP_VERSION
#define CMPP_VERSION "unknown"
#endif

namespace cmpp::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kExactMaxVertices = 12;
constexpr std::size_t kExactMaxAgents = 5;

// Refusals that are the caller's fault rather than the solver's.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string absolute(const std::string& path) { return path.empty() ? path : fs::absolute(path).lexically_normal().string(); }

fs::path sibling(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  return p.parent_path() / (p.stem().string() + suffix);
}

fs::path out_dir(const std::string& out) {
  fs::path parent = fs::path(out).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

void ensure_parent(const std::string& out) {
  fs::path parent = fs::path(out).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

template <typename Writer>
void write_text(const fs::path& path, Writer writer) {
  std::ofstream file(path);
  if (!file) throw Error("cannot write " + path.string());
  writer(file);
  if (!file) throw Error("failed writing " + path.string());
}

void write_meta(const fs::path& dir, const std::string& subcommand, const Json& config, std::uint64_t seed,
                const std::vector<std::string>& artifacts) {
  Json meta = {{"tool", "cmpp"},
               {"version", CMPP_VERSION},
               {"subcommand", subcommand},
               {"seed", seed},
               {"config", config},
               {"artifacts", artifacts}};
  write_json_file((dir / "run_meta.json").string(), meta);
}

struct SolveArgs {
  std::string instance;
  std::string out;
  std::string solver = "acmts";
  std::string lower_bound = "forced-congestion";
  double omega = 1.0;
  double time_limit = 10.0;
  std::uint64_t max_expansions = 0;
  std::uint64_t seed = 0;
  int length_cap = -1;
  bool force = false;
};

int run_solve(const SolveArgs& args, std::ostream& out) {
  const CmppInstance instance = instance_from_json(read_json_file(args.instance));
  Solution solution;
  Json report;
  if (args.solver == "exact") {
    if (!args.force && (instance.graph().num_vertices() > kExactMaxVertices || instance.num_agents() > kExactMaxAgents)) {
      throw UsageError("exact solver is limited to " + std::to_string(kExactMaxVertices) + " vertices and " +
                       std::to_string(kExactMaxAgents) + " agents; pass --force to override");
    }
    ExactOptions options;
    if (args.length_cap >= 0) options.length_cap = args.length_cap;
    auto started = std::chrono::steady_clock::now();
    ExactResult result = exact_solve(instance, options);
    solution = result.solution;
    report = {{"best_cost", cost_to_json(result.cost)},
              {"cap_used", result.cap_used},
              {"assignments_explored", result.assignments_explored},
              {"elapsed", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};
  } else if (args.solver == "pp") {
    auto started = std::chrono::steady_clock::now();
    solution = pp_initial(instance);
    solution.claimed_cost = total_cost(solution, instance.graph());
    report = {{"best_cost", cost_to_json(*solution.claimed_cost)},
              {"elapsed", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};
  } else {
    SolverConfig config;
    config.omega = args.omega;
    if (args.time_limit > 0) config.time_limit = std::chrono::duration<double>(args.time_limit);
    if (args.max_expansions > 0) config.max_expansions = args.max_expansions;
    config.seed = args.seed;
    config.lower_bound = parse_lower_bound_mode(args.lower_bound);
    validate(config);
    SolverReport result = solve(instance, config);
    solution = result.best;
    report = report_to_json(result);
  }
  report["solver"] = args.solver;

  Json summary = {{"solver", args.solver}, {"cost", report["best_cost"]}, {"agents", instance.num_agents()}};
  if (args.out.empty()) {
    out << Json{{"solution", solution_to_json(solution, instance)}, {"report", report}}.dump(2) << '\n';
    return kSuccess;
  }
  ensure_parent(args.out);
  const fs::path report_path = sibling(args.out, ".report.json");
  const fs::path csv_path = sibling(args.out, ".congestion.csv");
  write_json_file(args.out, solution_to_json(solution, instance));
  write_json_file(report_path.string(), report);
  write_text(csv_path, [&](std::ostream& f) { write_congestion_csv(f, solution, instance); });
  Json config = {{"instance", absolute(args.instance)}, {"solver", args.solver},
                 {"omega", args.omega},                 {"time_limit", args.time_limit},
                 {"max_expansions", args.max_expansions}, {"lower_bound", args.lower_bound},
                 {"length_cap", args.length_cap},         {"force", args.force}};
  write_meta(out_dir(args.out), "solve", config, args.seed,
             {absolute(args.out), absolute(report_path.string()), absolute(csv_path.string())});
  out << summary.dump() << '\n';
  return kSuccess;
}

struct ValidateArgs {
  std::string instance;
  std::string solution;
};

int run_validate(const ValidateArgs& args, std::ostream& out) {
  const CmppInstance instance = instance_from_json(read_json_file(args.instance));
  const Solution solution = solution_from_json(read_json_file(args.solution), instance);
  std::vector<Violation> violations = validate_minlp(solution, instance);
  if (violations.empty()) {
    out << "valid cost=" << total_cost(solution, instance.graph()) << '\n';
    return kSuccess;
  }
  for (const Violation& v : violations) {
    out << "violation: " << to_string(v.kind) << " agent=" << v.agent << " vertex=" << v.vertex
        << " position=" << v.position << ": " << v.detail << '\n';
  }
  return kInfeasible;
}

struct SparsifyArgs {
  std::string map;
  std::string scen;
  std::string out;
  int interval = 3;
  double edge_factor = 2.0;
  int agents = 0;
};

int run_sparsify(const SparsifyArgs& args, std::ostream& out) {
  const GridMap grid = load_map(args.map);
  const Abstraction abs = sparsify(grid, SparsifyOptions{args.interval, args.edge_factor});
  std::vector<CellIndex> starts, goals;
  if (!args.scen.empty()) {
    std::ifstream in(args.scen);
    if (!in) throw Error("cannot open " + args.scen);
    std::stringstream text;
    text << in.rdbuf();
    for (const ScenarioEntry& e : parse_scen(text.str())) {
      if (args.agents > 0 && static_cast<int>(starts.size()) >= args.agents) break;
      if (!grid.in_bounds(e.start_col, e.start_row) || !grid.in_bounds(e.goal_col, e.goal_row)) {
        throw Error("scenario cell outside the map");
      }
      starts.push_back(grid.index(e.start_col, e.start_row));
      goals.push_back(grid.index(e.goal_col, e.goal_row));
    }
  }
  const CmppInstance instance = lift_instance(abs, starts, goals);
  const Json j = instance_to_json(instance);
  const std::size_t free_cells = grid.traversable_count();
  Json summary = {{"vertices", abs.graph().num_vertices()},
                  {"edges", abs.graph().num_edges()},
                  {"grid_cells", free_cells},
                  {"reduction_ratio", static_cast<double>(abs.graph().num_vertices()) / static_cast<double>(free_cells)},
                  {"agents", instance.num_agents()}};
  if (args.out.empty()) {
    out << j.dump(2) << '\n';
    return kSuccess;
  }
  ensure_parent(args.out);
  write_json_file(args.out, j);
  write_meta(out_dir(args.out), "sparsify",
             {{"map", absolute(args.map)}, {"scen", absolute(args.scen)}, {"interval", args.interval},
              {"edge_factor", args.edge_factor}, {"agents", args.agents}},
             0, {absolute(args.out)});
  out << summary.dump() << '\n';
  return kSuccess;
}

struct SimArgs {
  std::string map;
  std::string out;
  std::string mode = "none";
  std::string modes = "none,parity,cmpp";
  std::string lower_bound = "path-length";
  int interval = 3;
  double edge_factor = 2.0;
  int agents = 10;
  int steps = 500;
  std::uint64_t seed = 0;
  int seeds = 25;
  double omega = 1.3;
  std::uint64_t budget = 200;
  int replan_period = 1;
  std::uint64_t fallback_steps = 0;
};

SimConfig sim_config(const SimArgs& args, GuidanceKind kind, std::uint64_t seed) {
  SimConfig config;
  config.sparsify = {args.interval, args.edge_factor};
  config.agents = args.agents;
  config.steps = args.steps;
  config.seed = seed;
  config.mode.kind = kind;
  config.mode.replan_period = args.replan_period;
  config.mode.solver.omega = args.omega;
  config.mode.solver.max_expansions = args.budget;
  config.mode.solver.seed = seed;
  config.mode.solver.lower_bound = parse_lower_bound_mode(args.lower_bound);
  config.mode.solver.low_level.fallback_steps = args.fallback_steps;
  return config;
}

Json sim_meta_config(const SimArgs& args) {
  return {{"map", absolute(args.map)},       {"interval", args.interval}, {"edge_factor", args.edge_factor},
          {"agents", args.agents},           {"steps", args.steps},       {"omega", args.omega},
          {"budget", args.budget},           {"replan_period", args.replan_period},
          {"lower_bound", args.lower_bound}, {"fallback_steps", args.fallback_steps}};
}

int run_simulate(const SimArgs& args, std::ostream& out) {
  const GridMap grid = load_map(args.map);
  const GuidanceKind kind = parse_guidance_kind(args.mode);
  SimReport report = run_lifelong(grid, sim_config(args, kind, args.seed));
  Json j = sim_report_to_json(report);
  if (!args.out.empty()) {
    ensure_parent(args.out);
    const fs::path dir = out_dir(args.out);
    write_json_file(args.out, j);
    write_text(dir / "throughput.csv", [&](std::ostream& f) { write_throughput_csv(f, std::span(&report, 1)); });
    write_text(dir / "congestion_trace.csv", [&](std::ostream& f) { write_congestion_trace_csv(f, report); });
    write_text(dir / "occupancy.csv", [&](std::ostream& f) { write_occupancy_csv(f, report, grid); });
    Json config = sim_meta_config(args);
    config["mode"] = args.mode;
    write_meta(dir, "simulate", config, args.seed,
               {absolute(args.out), absolute((dir / "throughput.csv").string()),
                absolute((dir / "congestion_trace.csv").string()), absolute((dir / "occupancy.csv").string())});
  }
  out << Json{{"mode", report.mode}, {"seed", report.seed}, {"throughput", report.throughput},
              {"arrivals", report.arrivals}, {"conflicts", report.conflicts}}
             .dump()
      << '\n';
  return report.conflicts == 0 ? kSuccess : kInternal;
}

std::size_t thread_cap(std::size_t jobs) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CMPP_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) threads = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("CMPP_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  return std::max<std::size_t>(1, std::min(threads, jobs));
}

int run_bench(const SimArgs& args, std::ostream& out) {
  const GridMap grid = load_map(args.map);
  std::vector<GuidanceKind> kinds;
  std::stringstream list(args.modes);
  for (std::string name; std::getline(list, name, ',');) {
    if (!name.empty()) kinds.push_back(parse_guidance_kind(name));
  }
  if (kinds.empty()) throw UsageError("--modes lists no mode");
  if (args.seeds < 1) throw UsageError("--seeds must be at least 1");

  struct Job {
    GuidanceKind kind;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (GuidanceKind k : kinds) {
    for (int s = 0; s < args.seeds; ++s) jobs.push_back({k, args.seed + static_cast<std::uint64_t>(s)});
  }
  std::vector<SimReport> reports(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (std::size_t i; (i = cursor.fetch_add(1)) < jobs.size();) {
      try {
        reports[i] = run_lifelong(grid, sim_config(args, jobs[i].kind, jobs[i].seed));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0, n = thread_cap(jobs.size()); t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  Json summary = Json::object();
  std::uint64_t conflicts = 0;
  for (GuidanceKind k : kinds) {
    std::vector<double> values;
    for (const SimReport& r : reports) {
      if (r.mode == to_string(k)) values.push_back(r.throughput);
    }
    double mean = 0.0, var = 0.0;
    for (double v : values) mean += v / static_cast<double>(values.size());
    for (double v : values) var += (v - mean) * (v - mean);
    double sd = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    summary[to_string(k)] = {{"mean_throughput", mean}, {"sd_throughput", sd}, {"runs", values.size()}};
  }
  for (const SimReport& r : reports) conflicts += r.conflicts;
  summary["conflicts"] = conflicts;

  if (!args.out.empty()) {
    fs::create_directories(args.out);
    const fs::path dir(args.out);
    write_text(dir / "throughput.csv", [&](std::ostream& f) { write_throughput_csv(f, reports); });
    Json runs = Json::array();
    for (const SimReport& r : reports) runs.push_back(sim_report_to_json(r));
    write_json_file((dir / "bench.json").string(), {{"summary", summary}, {"runs", runs}});
    Json config = sim_meta_config(args);
    config["modes"] = args.modes;
    config["seeds"] = args.seeds;
    write_meta(dir, "bench", config, args.seed,
               {absolute((dir / "throughput.csv").string()), absolute((dir / "bench.json").string())});
  }
  out << summary.dump() << '\n';
  return conflicts == 0 ? kSuccess : kInternal;
}

void add_sim_options(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--map", a.map, "MovingAI .map file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--interval", a.interval, "Anchor spacing in cells")->check(CLI::PositiveNumber);
  cmd->add_option("--edge-factor", a.edge_factor, "Maximum edge length as a multiple of the interval")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--agents", a.agents, "Number of agents")->check(CLI::NonNegativeNumber);
  cmd->add_option("--steps", a.steps, "Simulation steps")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", a.seed, "Random seed (first seed for bench)");
  cmd->add_option("--omega", a.omega, "Suboptimality factor for cmpp guidance")->check(CLI::Range(1.0, 1e9));
  cmd->add_option("--budget", a.budget, "Node expansions per replan")->check(CLI::PositiveNumber);
  cmd->add_option("--replan-period", a.replan_period, "Steps between replans")->check(CLI::PositiveNumber);
  cmd->add_option("--fallback-steps", a.fallback_steps, "Exhaustive low-level search budget; 0 disables it");
  cmd->add_option("--lower-bound", a.lower_bound, "Lower bound used by the guidance solver")
      ->check(CLI::IsMember({"path-length", "forced-surplus", "forced-congestion"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Congestion mitigation path planning toolkit", "cmpp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CMPP_VERSION);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance JSON");
  solve_cmd->add_option("--instance", solve_args.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--omega", solve_args.omega, "Suboptimality factor (>= 1)")->check(CLI::Range(1.0, 1e9));
  solve_cmd->add_option("--time-limit", solve_args.time_limit, "Seconds; 0 for no limit")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--max-expansions", solve_args.max_expansions, "Node expansion budget; 0 for none");
  solve_cmd->add_option("--solver", solve_args.solver, "acmts, pp or exact")
      ->check(CLI::IsMember({"acmts", "pp", "exact"}));
  solve_cmd->add_option("--lower-bound", solve_args.lower_bound, "A-CMTS lower bound")
      ->check(CLI::IsMember({"path-length", "forced-surplus", "forced-congestion"}));
  solve_cmd->add_option("--length-cap", solve_args.length_cap, "Exact solver path length cap");
  solve_cmd->add_option("--seed", solve_args.seed, "Random seed");
  solve_cmd->add_option("--out", solve_args.out, "Solution JSON; report and CSV are written beside it");
  solve_cmd->add_flag("--force", solve_args.force, "Lift the exact solver size guard");

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check a solution against an instance");
  validate_cmd->add_option("--instance", validate_args.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--solution", validate_args.solution, "Solution JSON")->required()->check(CLI::ExistingFile);

  SparsifyArgs sparsify_args;
  auto* sparsify_cmd = app.add_subcommand("sparsify", "Build the sparse graph of a grid map");
  sparsify_cmd->add_option("--map", sparsify_args.map, "MovingAI .map file")->required()->check(CLI::ExistingFile);
  sparsify_cmd->add_option("--interval", sparsify_args.interval, "Anchor spacing in cells")->check(CLI::PositiveNumber);
  sparsify_cmd->add_option("--edge-factor", sparsify_args.edge_factor, "Maximum edge length as a multiple of the interval")
      ->check(CLI::PositiveNumber);
  sparsify_cmd->add_option("--scen", sparsify_args.scen, "MovingAI .scen file for agents")->check(CLI::ExistingFile);
  sparsify_cmd->add_option("--agents", sparsify_args.agents, "Use the first N scenario entries");
  sparsify_cmd->add_option("--out", sparsify_args.out, "Instance JSON");

  SimArgs sim_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run one lifelong simulation");
  add_sim_options(simulate_cmd, sim_args);
  simulate_cmd->add_option("--mode", sim_args.mode, "none, parity or cmpp")
      ->check(CLI::IsMember({"none", "parity", "cmpp"}));
  simulate_cmd->add_option("--out", sim_args.out, "SimReport JSON; CSVs are written beside it");

  SimArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run simulations over seeds and modes");
  add_sim_options(bench_cmd, bench_args);
  bench_cmd->add_option("--seeds", bench_args.seeds, "Number of consecutive seeds")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--modes", bench_args.modes, "Comma-separated guidance modes");
  bench_cmd->add_option("--out", bench_args.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kSuccess;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve_args, out);
    if (*validate_cmd) return run_validate(validate_args, out);
    if (*sparsify_cmd) return run_sparsify(sparsify_args, out);
    if (*simulate_cmd) return run_simulate(sim_args, out);
    if (*bench_cmd) return run_bench(bench_args, out);
  } catch (const InfeasibleError& e) {
    err << "error: infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const OverflowError& e) {
    err << "error: internal: " << e.what() << '\n';
    return kInternal;
  } catch (const UnderflowError& e) {
    err << "error: internal: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace cmpp::cli

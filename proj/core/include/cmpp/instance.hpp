#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmpp/cost.hpp"
#include "cmpp/graph.hpp"

namespace cmpp {

using AgentIndex = std::int32_t;

// Ordered vertex sequence; simple and edge-adjacent when valid.
using Path = std::vector<VertexIndex>;

struct Agent {
  int id = 0;
  VertexIndex start = 0;
  VertexIndex goal = 0;
};

/// A CMPP problem: a shared graph plus agents with start/goal vertices.
/// Agents are kept in ascending id order; agent index order equals id order.
class CmppInstance {
 public:
  CmppInstance() = default;
  // Throws Error on duplicate agent ids or endpoints outside the graph.
  CmppInstance(std::shared_ptr<const SparseGraph> graph, std::vector<Agent> agents);

  const SparseGraph& graph() const { return *graph_; }
  const std::shared_ptr<const SparseGraph>& graph_ptr() const { return graph_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(AgentIndex a) const { return agents_[static_cast<std::size_t>(a)]; }
  std::size_t num_agents() const { return agents_.size(); }
  std::optional<AgentIndex> find_agent(int id) const;

 private:
  std::shared_ptr<const SparseGraph> graph_;
  std::vector<Agent> agents_;
};

struct Solution {
  std::vector<Path> paths;
  // Objective value as reported by whoever produced the solution, if any.
  std::optional<Cost> claimed_cost;

  friend bool operator==(const Solution&, const Solution&) = default;
};

// Adjacency and simplicity only; empty string when valid.
std::string path_defect(const SparseGraph& graph, const Path& path);

// Start/goal, adjacency and simple-path checks for every agent.
bool is_valid_solution(const CmppInstance& instance, const Solution& solution);

}  // namespace cmpp

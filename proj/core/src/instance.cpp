#include "cmpp/instance.hpp"

#include <algorithm>

#include "cmpp/error.hpp"

namespace cmpp {

CmppInstance::CmppInstance(std::shared_ptr<const SparseGraph> graph, std::vector<Agent> agents)
    : graph_(std::move(graph)), agents_(std::move(agents)) {
  if (!graph_) throw Error("instance requires a graph");
  std::sort(agents_.begin(), agents_.end(),
            [](const Agent& a, const Agent& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (i > 0 && agents_[i].id == agents_[i - 1].id) {
      throw Error("duplicate agent id " + std::to_string(agents_[i].id));
    }
    if (!graph_->contains(agents_[i].start) || !graph_->contains(agents_[i].goal)) {
      throw Error("agent " + std::to_string(agents_[i].id) + " has an endpoint outside the graph");
    }
  }
}

std::optional<AgentIndex> CmppInstance::find_agent(int id) const {
  auto it = std::lower_bound(agents_.begin(), agents_.end(), id,
                             [](const Agent& a, int key) { return a.id < key; });
  if (it == agents_.end() || it->id != id) return std::nullopt;
  return static_cast<AgentIndex>(it - agents_.begin());
}

std::string path_defect(const SparseGraph& graph, const Path& path) {
  if (path.empty()) return "empty path";
  std::vector<char> seen(graph.num_vertices(), 0);
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (!graph.contains(path[k])) return "unknown vertex at position " + std::to_string(k);
    auto& mark = seen[static_cast<std::size_t>(path[k])];
    if (mark) return "vertex revisited at position " + std::to_string(k);
    mark = 1;
    if (k > 0 && !graph.find_edge(path[k - 1], path[k])) {
      return "no edge into position " + std::to_string(k);
    }
  }
  return {};
}

bool is_valid_solution(const CmppInstance& instance, const Solution& solution) {
  if (solution.paths.size() != instance.num_agents()) return false;
  for (std::size_t a = 0; a < solution.paths.size(); ++a) {
    const Path& p = solution.paths[a];
    if (!path_defect(instance.graph(), p).empty()) return false;
    if (p.front() != instance.agents()[a].start || p.back() != instance.agents()[a].goal) return false;
  }
  return true;
}

}  // namespace cmpp

#include "cmpp/congestion.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cmpp/error.hpp"

namespace cmpp {

void FlowField::decrement(EdgeIndex e) {
  auto& f = flow_[static_cast<std::size_t>(e)];
  if (f == 0) throw UnderflowError("flow on edge " + std::to_string(e) + " would become negative");
  --f;
}

std::uint64_t FlowField::total() const {
  return std::accumulate(flow_.begin(), flow_.end(), std::uint64_t{0});
}

FlowField compute_flow(const Solution& solution, const SparseGraph& graph) {
  FlowField flow(graph);
  std::vector<EdgeIndex> used;
  for (std::size_t a = 0; a < solution.paths.size(); ++a) {
    const Path& path = solution.paths[a];
    used.clear();
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      auto e = graph.find_edge(path[k], path[k + 1]);
      if (!e) {
        throw InvalidPathError(static_cast<int>(a), k + 1,
                               "agent #" + std::to_string(a) + ": no edge into path position " +
                                   std::to_string(k + 1));
      }
      used.push_back(*e);
    }
    // An agent counts once per edge.
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (EdgeIndex e : used) flow.increment(e);
  }
  return flow;
}

namespace {

Cost product_of_inflows(const FlowField& flow, VertexIndex v, const SparseGraph& graph,
                        EdgeIndex skip = -1) {
  Cost product(1);
  for (EdgeIndex e : graph.in_edges(v)) {
    if (e == skip) continue;
    product *= Cost(std::uint64_t{flow[e]} + 1);
  }
  return product;
}

}  // namespace

Cost congestion_degree(const FlowField& flow, VertexIndex v, const SparseGraph& graph) {
  if (!graph.contains(v)) throw NotFoundError("unknown vertex index " + std::to_string(v));
  return product_of_inflows(flow, v, graph) - Cost(1);
}

Cost total_cost(const FlowField& flow, const SparseGraph& graph) {
  Cost total;
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    total += congestion_degree(flow, static_cast<VertexIndex>(v), graph);
  }
  return total;
}

Cost total_cost(const Solution& solution, const SparseGraph& graph) {
  return total_cost(compute_flow(solution, graph), graph);
}

Cost delta_cost(const FlowField& flow, EdgeIndex e, const SparseGraph& graph) {
  if (e < 0 || static_cast<std::size_t>(e) >= graph.num_edges()) {
    throw NotFoundError("unknown edge index " + std::to_string(e));
  }
  return product_of_inflows(flow, graph.edge(e).to, graph, e);
}

Cost path_delta_cost(const FlowField& flow, const Path& path, const SparseGraph& graph) {
  Cost sum;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    sum += delta_cost(flow, graph.edge_index(path[k], path[k + 1]), graph);
  }
  return sum;
}

CongestionLedger CongestionLedger::from_flow(const FlowField& flow, const SparseGraph& graph) {
  CongestionLedger ledger(graph);
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    ledger.degree_[v] = congestion_degree(flow, static_cast<VertexIndex>(v), graph);
    ledger.total_ += ledger.degree_[v];
  }
  return ledger;
}

void CongestionLedger::refresh(VertexIndex v, const FlowField& flow, const SparseGraph& graph) {
  auto& slot = degree_[static_cast<std::size_t>(v)];
  Cost updated = congestion_degree(flow, v, graph);
  total_ -= slot;
  total_ += updated;
  slot = updated;
}

namespace {

std::vector<EdgeIndex> path_edges(const Path& path, const SparseGraph& graph) {
  std::vector<EdgeIndex> edges;
  edges.reserve(path.size());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    auto e = graph.find_edge(path[k], path[k + 1]);
    if (!e) {
      throw InvalidPathError(-1, k + 1, "no edge into path position " + std::to_string(k + 1));
    }
    edges.push_back(*e);
  }
  return edges;
}

}  // namespace

void apply_path(FlowField& flow, CongestionLedger& ledger, const Path& path, const SparseGraph& graph) {
  for (EdgeIndex e : path_edges(path, graph)) {
    flow.increment(e);
    ledger.refresh(graph.edge(e).to, flow, graph);
  }
}

void remove_path(FlowField& flow, CongestionLedger& ledger, const Path& path, const SparseGraph& graph) {
  auto edges = path_edges(path, graph);
  for (EdgeIndex e : edges) {
    if (flow[e] == 0) {
      throw UnderflowError("removing a path that was never applied (edge " + std::to_string(e) + ")");
    }
  }
  for (EdgeIndex e : edges) {
    flow.decrement(e);
    ledger.refresh(graph.edge(e).to, flow, graph);
  }
}

}  // namespace cmpp

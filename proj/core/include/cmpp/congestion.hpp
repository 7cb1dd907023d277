#pragma once

#include <cstdint>
#include <vector>

#include "cmpp/cost.hpp"
#include "cmpp/graph.hpp"
#include "cmpp/instance.hpp"

namespace cmpp {

/// Per-directed-edge agent counts f_e.
class FlowField {
 public:
  FlowField() = default;
  explicit FlowField(const SparseGraph& graph) : flow_(graph.num_edges(), 0) {}

  std::uint32_t operator[](EdgeIndex e) const { return flow_[static_cast<std::size_t>(e)]; }
  std::size_t size() const { return flow_.size(); }
  void increment(EdgeIndex e) { ++flow_[static_cast<std::size_t>(e)]; }
  // Throws UnderflowError when f_e is already zero.
  void decrement(EdgeIndex e);
  std::uint64_t total() const;
  const std::vector<std::uint32_t>& values() const { return flow_; }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  std::vector<std::uint32_t> flow_;
};

// f_e = number of agents whose path traverses e. Throws InvalidPathError
// (agent index, position) on non-adjacent consecutive vertices.
FlowField compute_flow(const Solution& solution, const SparseGraph& graph);

// C(v) = prod_{e in in(v)} (f_e + 1) - 1. Throws NotFoundError on unknown v.
Cost congestion_degree(const FlowField& flow, VertexIndex v, const SparseGraph& graph);

// Sum of C(v) over all vertices for the flow induced by `solution`.
Cost total_cost(const Solution& solution, const SparseGraph& graph);
Cost total_cost(const FlowField& flow, const SparseGraph& graph);

// C(v) growth when f_e for e = (u, v) is incremented by one:
// prod_{e' in in(v), e' != e} (f_e' + 1), which is always >= 1.
Cost delta_cost(const FlowField& flow, EdgeIndex e, const SparseGraph& graph);

// Sum of delta_cost over the path's edges against a flow that excludes it.
Cost path_delta_cost(const FlowField& flow, const Path& path, const SparseGraph& graph);

/// Per-vertex congestion degrees plus their running total.
class CongestionLedger {
 public:
  CongestionLedger() = default;
  explicit CongestionLedger(const SparseGraph& graph) : degree_(graph.num_vertices()) {}
  static CongestionLedger from_flow(const FlowField& flow, const SparseGraph& graph);

  Cost degree(VertexIndex v) const { return degree_[static_cast<std::size_t>(v)]; }
  Cost total() const { return total_; }
  const std::vector<Cost>& degrees() const { return degree_; }

  // Recomputes C(v) from `flow` and adjusts the total.
  void refresh(VertexIndex v, const FlowField& flow, const SparseGraph& graph);

  friend bool operator==(const CongestionLedger&, const CongestionLedger&) = default;

 private:
  std::vector<Cost> degree_;
  Cost total_;
};

// Incremental bookkeeping; the path is assumed adjacent (checked) and simple.
// remove_path throws UnderflowError when the path was not applied, leaving
// both structures untouched.
void apply_path(FlowField& flow, CongestionLedger& ledger, const Path& path, const SparseGraph& graph);
void remove_path(FlowField& flow, CongestionLedger& ledger, const Path& path, const SparseGraph& graph);

/// Flow field and ledger kept in sync.
class CongestionState {
 public:
  CongestionState() = default;
  explicit CongestionState(const SparseGraph& graph) : graph_(&graph), flow_(graph), ledger_(graph) {}

  void apply(const Path& path) { apply_path(flow_, ledger_, path, *graph_); }
  void remove(const Path& path) { remove_path(flow_, ledger_, path, *graph_); }

  const FlowField& flow() const { return flow_; }
  const CongestionLedger& ledger() const { return ledger_; }
  Cost total() const { return ledger_.total(); }
  Cost degree(VertexIndex v) const { return ledger_.degree(v); }
  const SparseGraph& graph() const { return *graph_; }

 private:
  const SparseGraph* graph_ = nullptr;
  FlowField flow_;
  CongestionLedger ledger_;
};

}  // namespace cmpp

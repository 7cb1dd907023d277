#include "cmpp/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "cmpp/error.hpp"

namespace cmpp {

namespace {

// Nearest traversable cell in Manhattan distance, ties to the smaller index.
CellIndex snap(const GridMap& grid, int col, int row) {
  if (grid.traversable(col, row)) return grid.index(col, row);
  const int limit = grid.width() + grid.height();
  for (int d = 1; d <= limit; ++d) {
    CellIndex best = -1;
    for (int dy = -d; dy <= d; ++dy) {
      int rest = d - std::abs(dy);
      for (int dx : {-rest, rest}) {
        if (grid.traversable(col + dx, row + dy)) {
          CellIndex c = grid.index(col + dx, row + dy);
          if (best < 0 || c < best) best = c;
        }
        if (rest == 0) break;
      }
    }
    if (best >= 0) return best;
  }
  return -1;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    return true;
  }
};

}  // namespace

Abstraction sparsify(const GridMap& grid, const SparsifyOptions& options) {
  if (options.interval < 1) throw Error("interval must be at least 1");
  if (grid.traversable_count() == 0) throw Error("grid has no traversable cell");
  const std::size_t n = grid.size();

  std::set<CellIndex> reps;
  for (int r = 0; r < grid.height(); r += options.interval) {
    for (int c = 0; c < grid.width(); c += options.interval) {
      if (CellIndex s = snap(grid, c, r); s >= 0) reps.insert(s);
    }
  }

  // Components that received no anchor get one at their smallest cell.
  std::vector<int> component(n, -1);
  int components = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (!grid.traversable(static_cast<CellIndex>(c)) || component[c] >= 0) continue;
    std::vector<CellIndex> queue{static_cast<CellIndex>(c)};
    component[c] = components;
    bool has_rep = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      has_rep = has_rep || reps.count(queue[head]);
      for (CellIndex nb : grid.neighbors(queue[head])) {
        if (nb >= 0 && component[static_cast<std::size_t>(nb)] < 0) {
          component[static_cast<std::size_t>(nb)] = components;
          queue.push_back(nb);
        }
      }
    }
    if (!has_rep) reps.insert(static_cast<CellIndex>(c));
    ++components;
  }

  Abstraction out;
  out.to_grid.assign(reps.begin(), reps.end());
  const auto num_vertices = out.to_grid.size();

  // Layered multi-source BFS; a cell reached from several regions in the same
  // layer joins the one with the smallest vertex id.
  out.to_sparse.assign(n, -1);
  std::vector<int> dist(n, -1);
  std::vector<CellIndex> frontier;
  for (std::size_t v = 0; v < num_vertices; ++v) {
    auto c = static_cast<std::size_t>(out.to_grid[v]);
    out.to_sparse[c] = static_cast<VertexIndex>(v);
    dist[c] = 0;
    frontier.push_back(out.to_grid[v]);
  }
  for (int d = 0; !frontier.empty(); ++d) {
    std::vector<CellIndex> next;
    for (CellIndex c : frontier) {
      VertexIndex owner = out.to_sparse[static_cast<std::size_t>(c)];
      for (CellIndex nb : grid.neighbors(c)) {
        if (nb < 0) continue;
        auto k = static_cast<std::size_t>(nb);
        if (dist[k] < 0) {
          dist[k] = d + 1;
          out.to_sparse[k] = owner;
          next.push_back(nb);
        } else if (dist[k] == d + 1) {
          out.to_sparse[k] = std::min(out.to_sparse[k], owner);
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::vector<CellIndex>> region(num_vertices);
  for (std::size_t c = 0; c < n; ++c) {
    if (out.to_sparse[c] >= 0) region[static_cast<std::size_t>(out.to_sparse[c])].push_back(static_cast<CellIndex>(c));
  }

  std::set<std::pair<VertexIndex, VertexIndex>> touching;
  for (std::size_t c = 0; c < n; ++c) {
    VertexIndex a = out.to_sparse[c];
    if (a < 0) continue;
    for (CellIndex nb : grid.neighbors(static_cast<CellIndex>(c))) {
      if (nb < 0) continue;
      VertexIndex b = out.to_sparse[static_cast<std::size_t>(nb)];
      if (a < b) touching.emplace(a, b);
    }
  }

  const double max_distance = options.edge_factor * options.interval;
  std::vector<int> allowed(n, -1), seen(n, -1);
  int stamp = 0;
  auto restricted_distance = [&](VertexIndex a, VertexIndex b) {
    ++stamp;
    for (VertexIndex v : {a, b}) {
      for (CellIndex c : region[static_cast<std::size_t>(v)]) {
        allowed[static_cast<std::size_t>(c)] = stamp;
        for (CellIndex nb : grid.neighbors(c)) {
          if (nb >= 0) allowed[static_cast<std::size_t>(nb)] = stamp;
        }
      }
    }
    CellIndex source = out.g(a), target = out.g(b);
    std::vector<std::pair<CellIndex, int>> queue{{source, 0}};
    seen[static_cast<std::size_t>(source)] = stamp;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto [c, d] = queue[head];
      if (c == target) return d;
      for (CellIndex nb : grid.neighbors(c)) {
        if (nb < 0) continue;
        auto k = static_cast<std::size_t>(nb);
        if (allowed[k] != stamp || seen[k] == stamp) continue;
        seen[k] = stamp;
        queue.emplace_back(nb, d + 1);
      }
    }
    return -1;
  };

  std::vector<std::pair<int, int>> edges;
  std::vector<std::tuple<int, VertexIndex, VertexIndex>> rejected;
  DisjointSets sets(num_vertices);
  for (auto [a, b] : touching) {
    int d = restricted_distance(a, b);
    if (d >= 0 && d <= max_distance) {
      edges.emplace_back(a, b);
      sets.unite(a, b);
    } else {
      rejected.emplace_back(d < 0 ? INT32_MAX : d, a, b);
    }
  }
  // Touching regions always share a component, so re-adding the shortest
  // rejected links restores grid connectivity.
  std::sort(rejected.begin(), rejected.end());
  for (auto [d, a, b] : rejected) {
    if (sets.unite(a, b)) edges.emplace_back(a, b);
  }

  std::vector<Vertex> vertices;
  vertices.reserve(num_vertices);
  for (std::size_t v = 0; v < num_vertices; ++v) {
    CellIndex c = out.to_grid[v];
    vertices.push_back({static_cast<int>(v), static_cast<double>(grid.col(c)), static_cast<double>(grid.row(c))});
  }
  out.sparse = std::make_shared<const SparseGraph>(std::move(vertices), edges, true);
  return out;
}

CmppInstance lift_instance(const Abstraction& abstraction, std::span<const CellIndex> starts,
                           std::span<const CellIndex> goals) {
  if (starts.size() != goals.size()) throw Error("start and goal lists differ in length");
  auto lift = [&](CellIndex c, std::size_t i, const char* what) {
    if (c < 0 || static_cast<std::size_t>(c) >= abstraction.to_sparse.size() || abstraction.f(c) < 0) {
      throw Error(std::string(what) + " cell " + std::to_string(c) + " of agent " + std::to_string(i) +
                  " is not traversable");
    }
    return abstraction.f(c);
  };
  std::vector<Agent> agents;
  agents.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    agents.push_back({static_cast<int>(i), lift(starts[i], i, "start"), lift(goals[i], i, "goal")});
  }
  return CmppInstance(abstraction.sparse, std::move(agents));
}

}  // namespace cmpp

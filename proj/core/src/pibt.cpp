#include "cmpp/pibt.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <unordered_set>

#include "cmpp/error.hpp"

namespace cmpp {

const std::vector<int>& DistanceCache::to(CellIndex target) {
  auto it = tables_.find(target);
  if (it == tables_.end()) it = tables_.emplace(target, grid_bfs(*grid_, target)).first;
  return it->second;
}

namespace {

enum Direction { up = 0, right = 1, down = 2, left = 3, stay = 4 };

class Pibt {
 public:
  Pibt(const GridMap& grid, const PibtRequest& request, DistanceCache& distances)
      : grid_(grid), req_(request), dist_(distances), n_(request.positions.size()),
        next_(n_, -1), occupied_now_(grid.size(), -1), occupied_next_(grid.size(), -1) {
    for (std::size_t a = 0; a < n_; ++a) occupied_now_[static_cast<std::size_t>(req_.positions[a])] = static_cast<int>(a);
  }

  std::vector<CellIndex> run() {
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return req_.priorities[static_cast<std::size_t>(a)] > req_.priorities[static_cast<std::size_t>(b)];
    });
    for (int a : order) {
      if (next_[static_cast<std::size_t>(a)] < 0) plan(a);
    }
    return next_;
  }

 private:
  struct Candidate {
    CellIndex cell;
    int distance;
    int bias;
    int direction;
  };

  std::vector<Candidate> candidates(int a) {
    const CellIndex here = req_.positions[static_cast<std::size_t>(a)];
    const std::vector<int>& table = dist_.to(req_.targets[static_cast<std::size_t>(a)]);
    auto d = [&](CellIndex c) {
      int v = table[static_cast<std::size_t>(c)];
      return v < 0 ? INT_MAX : v;
    };
    int vertical = up, horizontal = right;
    if (req_.parity_bias) {
      vertical = grid_.col(here) % 2 == 1 ? up : down;
      horizontal = grid_.row(here) % 2 == 1 ? right : left;
    }
    std::vector<Candidate> out;
    auto nbrs = grid_.neighbors(here);
    for (int k = 0; k < 4; ++k) {
      if (nbrs[static_cast<std::size_t>(k)] < 0) continue;
      int bias = req_.parity_bias && (k == vertical || k == horizontal) ? 0 : 1;
      out.push_back({nbrs[static_cast<std::size_t>(k)], d(nbrs[static_cast<std::size_t>(k)]), bias, k});
    }
    out.push_back({here, d(here), 1, stay});
    std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
      return std::tie(x.distance, x.bias, x.direction) < std::tie(y.distance, y.bias, y.direction);
    });
    return out;
  }

  bool plan(int a) {
    const auto ai = static_cast<std::size_t>(a);
    const CellIndex from = req_.positions[ai];
    for (const Candidate& c : candidates(a)) {
      const auto cell = static_cast<std::size_t>(c.cell);
      if (occupied_next_[cell] >= 0) continue;
      const int other = occupied_now_[cell];
      // Swap: the occupant already committed to our cell.
      if (other >= 0 && next_[static_cast<std::size_t>(other)] == from) continue;
      occupied_next_[cell] = a;
      next_[ai] = c.cell;
      if (other >= 0 && other != a && next_[static_cast<std::size_t>(other)] < 0 && !plan(other)) continue;
      return true;
    }
    occupied_next_[static_cast<std::size_t>(from)] = a;
    next_[ai] = from;
    return false;
  }

  const GridMap& grid_;
  const PibtRequest& req_;
  DistanceCache& dist_;
  std::size_t n_;
  std::vector<CellIndex> next_;
  std::vector<int> occupied_now_;
  std::vector<int> occupied_next_;
};

}  // namespace

std::vector<CellIndex> pibt_step(const GridMap& grid, const PibtRequest& request, DistanceCache& distances) {
  const std::size_t n = request.positions.size();
  if (request.targets.size() != n || request.priorities.size() != n) {
    throw Error("pibt_step: positions, targets and priorities differ in length");
  }
  return Pibt(grid, request, distances).run();
}

StepConflicts check_step(const GridMap& grid, std::span<const CellIndex> before, std::span<const CellIndex> after) {
  StepConflicts out;
  std::unordered_map<CellIndex, std::size_t> arriving;
  for (std::size_t a = 0; a < after.size(); ++a) {
    auto nbrs = grid.neighbors(before[a]);
    if (after[a] != before[a] && std::find(nbrs.begin(), nbrs.end(), after[a]) == nbrs.end()) ++out.invalid;
    if (!arriving.emplace(after[a], a).second) ++out.vertex;
  }
  std::unordered_map<CellIndex, std::size_t> leaving;
  for (std::size_t a = 0; a < before.size(); ++a) leaving.emplace(before[a], a);
  for (std::size_t a = 0; a < after.size(); ++a) {
    if (after[a] == before[a]) continue;
    auto it = leaving.find(after[a]);
    if (it != leaving.end() && it->second > a && after[it->second] == before[a]) ++out.edge;
  }
  return out;
}

}  // namespace cmpp

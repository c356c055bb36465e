#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <stdexcept>
#include <vector>

namespace topowalk {

/// Cell-centred sampling of [lo, hi] with `count` nodes.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  double node(int i) const { return lo + (i + 0.5) * (hi - lo) / count; }
  void validate() const {
    if (count < 1) throw std::invalid_argument("grid axis needs at least one node");
    if (!(hi > lo)) throw std::invalid_argument("grid axis bounds must satisfy lo < hi");
  }
};

/// Two-parameter grid. Cells are stored with the first axis outermost.
struct Grid2D {
  GridAxis first;
  GridAxis second;

  std::size_t size() const {
    return static_cast<std::size_t>(first.count) * static_cast<std::size_t>(second.count);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(second.count) +
           static_cast<std::size_t>(j);
  }
};

template <class Cell>
struct ScalarMap {
  Grid2D grid;
  std::vector<Cell> cells;

  const Cell& at(int i, int j) const { return cells[grid.index(i, j)]; }
};

/// Called with (completed, total) as grid nodes finish.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Evaluates `node(x, y)` at every grid node, in parallel over nodes. Cell
/// order is fixed by the grid regardless of completion order.
template <class Cell, class NodeFn>
ScalarMap<Cell> fill_map(const Grid2D& grid, NodeFn&& node, const ProgressFn& progress = {}) {
  grid.first.validate();
  grid.second.validate();
  ScalarMap<Cell> map{grid, std::vector<Cell>(grid.size())};
  const auto total = static_cast<long long>(grid.size());
  std::atomic<std::size_t> done{0};
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < total; ++k) {
    try {
      const int i = static_cast<int>(k / grid.second.count);
      const int j = static_cast<int>(k % grid.second.count);
      map.cells[static_cast<std::size_t>(k)] = node(grid.first.node(i), grid.second.node(j));
      const std::size_t finished = ++done;
      if (progress) {
#pragma omp critical(topowalk_progress)
        progress(finished, grid.size());
      }
    } catch (...) {
#pragma omp critical(topowalk_map_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return map;
}

}  // namespace topowalk

// Transportation simplex for the exact word mover's distance.
//
// The basis is a spanning tree of the bipartite graph rows + columns with
// exactly m + n - 1 basic cells (possibly carrying zero flow). Each pivot
// recomputes dual potentials over the tree, enters the cell with the most
// negative reduced cost, and pushes flow around the unique cycle it closes.
// After a run of degenerate pivots the entering/leaving choice switches to
// Bland's smallest-index rule, which rules out cycling.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "claimdist/error.hpp"
#include "claimdist/transport.hpp"

namespace claimdist {

namespace {

constexpr double kReducedCostTol = 1e-12;

struct Cell {
  std::size_t row;
  std::size_t col;
  double flow;
};

class TransportSimplex {
 public:
  TransportSimplex(std::span<const double> supply, std::span<const double> demand, const GroundCost& cost)
      : m_(supply.size()), n_(demand.size()), cost_(cost), basis_index_(m_ * n_, kNone) {
    northwest_corner(supply, demand);
  }

  TransportSolution solve() {
    const std::size_t nodes = m_ + n_;
    potential_.assign(nodes, 0.0);
    parent_edge_.assign(nodes, kNone);
    parent_node_.assign(nodes, kNone);
    depth_.assign(nodes, 0);

    const std::size_t degenerate_limit = 2 * nodes;
    const std::size_t max_pivots = 50 * m_ * n_ + 1000;
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::size_t pivots = 0;

    while (true) {
      build_tree();
      auto entering = choose_entering(bland);
      if (!entering) break;
      if (++pivots > max_pivots) throw InvariantError("transportation simplex failed to converge");
      double theta = pivot(entering->first, entering->second, bland);
      degenerate_run = theta == 0.0 ? degenerate_run + 1 : 0;
      if (degenerate_run > degenerate_limit) bland = true;
    }

    TransportSolution sol;
    sol.plan.flow = Matrix(m_, n_);
    for (const Cell& c : basis_) {
      sol.plan.flow(c.row, c.col) = c.flow;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) sol.cost += sol.plan.flow(i, j) * cost_(i, j);
    }
    sol.pivots = pivots;
    return sol;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t col_node(std::size_t j) const { return m_ + j; }

  void add_basic(std::size_t i, std::size_t j, double flow) {
    basis_index_[i * n_ + j] = basis_.size();
    basis_.push_back({i, j, flow});
  }

  void northwest_corner(std::span<const double> supply, std::span<const double> demand) {
    std::vector<double> left(supply.begin(), supply.end());
    std::vector<double> need(demand.begin(), demand.end());
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      double x = std::min(left[i], need[j]);
      add_basic(i, j, x);
      left[i] -= x;
      need[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i == m_ - 1) {
        ++j;
      } else if (j == n_ - 1) {
        ++i;
      } else if (left[i] <= need[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // Potentials u_i + v_j = c_ij on basic cells, rooted at row 0 with u_0 = 0.
  void build_tree() {
    const std::size_t nodes = m_ + n_;
    adjacency_.resize(nodes);
    for (auto& list : adjacency_) list.clear();
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adjacency_[basis_[e].row].push_back(e);
      adjacency_[col_node(basis_[e].col)].push_back(e);
    }
    std::fill(parent_edge_.begin(), parent_edge_.end(), kNone);
    std::fill(parent_node_.begin(), parent_node_.end(), kNone);
    seen_.assign(nodes, 0);
    queue_.assign(1, 0);
    auto& seen = seen_;
    auto& queue = queue_;
    seen[0] = 1;
    potential_[0] = 0.0;
    depth_[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t node = queue[head];
      for (std::size_t e : adjacency_[node]) {
        const Cell& c = basis_[e];
        std::size_t other = node < m_ ? col_node(c.col) : c.row;
        if (seen[other]) continue;
        seen[other] = 1;
        // Row potential u, column potential v; c = u + v.
        potential_[other] = cost_(c.row, c.col) - potential_[node];
        parent_edge_[other] = e;
        parent_node_[other] = node;
        depth_[other] = depth_[node] + 1;
        queue.push_back(other);
      }
    }
    if (queue.size() != nodes) throw InvariantError("transport basis is not a spanning tree");
  }

  std::optional<std::pair<std::size_t, std::size_t>> choose_entering(bool bland) const {
    double best = -kReducedCostTol;
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (basis_index_[i * n_ + j] != kNone) continue;
        double reduced = cost_(i, j) - potential_[i] - potential_[col_node(j)];
        if (bland) {
          if (reduced < -kReducedCostTol) return std::pair{i, j};
        } else if (reduced < best) {
          best = reduced;
          pick = std::pair{i, j};
        }
      }
    }
    return pick;
  }

  // Adds (i, j) to the basis, returns the flow moved around the cycle.
  double pivot(std::size_t i, std::size_t j, bool bland) {
    // Tree path from column node j to row node i through their common ancestor.
    auto& from_col = path_;
    auto& from_row = scratch_;
    from_col.clear();
    from_row.clear();
    std::size_t a = col_node(j);
    std::size_t b = i;
    while (depth_[a] > depth_[b]) {
      from_col.push_back(parent_edge_[a]);
      a = parent_node_[a];
    }
    while (depth_[b] > depth_[a]) {
      from_row.push_back(parent_edge_[b]);
      b = parent_node_[b];
    }
    while (a != b) {
      from_col.push_back(parent_edge_[a]);
      a = parent_node_[a];
      from_row.push_back(parent_edge_[b]);
      b = parent_node_[b];
    }
    auto& path = from_col;
    path.insert(path.end(), from_row.rbegin(), from_row.rend());

    // Signs alternate along the cycle, starting with a decrease next to the
    // entering cell's column.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = kNone;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = basis_[path[k]];
      bool better = c.flow < theta;
      if (!better && bland && c.flow == theta && leaving != kNone) {
        const Cell& cur = basis_[path[leaving]];
        better = c.row * n_ + c.col < cur.row * n_ + cur.col;
      }
      if (better) {
        theta = c.flow;
        leaving = k;
      }
    }
    if (leaving == kNone) throw InvariantError("transport pivot found no leaving cell");

    for (std::size_t k = 0; k < path.size(); ++k) {
      Cell& c = basis_[path[k]];
      if (k % 2 == 0) {
        c.flow = (k == leaving) ? 0.0 : c.flow - theta;
      } else {
        c.flow += theta;
      }
    }

    std::size_t slot = path[leaving];
    Cell& out = basis_[slot];
    basis_index_[out.row * n_ + out.col] = kNone;
    out = {i, j, theta};
    basis_index_[i * n_ + j] = slot;
    return theta;
  }

  std::size_t m_;
  std::size_t n_;
  const GroundCost& cost_;
  std::vector<Cell> basis_;
  std::vector<std::size_t> basis_index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> potential_;
  std::vector<std::size_t> parent_edge_;
  std::vector<std::size_t> parent_node_;
  std::vector<std::size_t> depth_;
  // Scratch reused across pivots.
  std::vector<char> seen_;
  std::vector<std::size_t> queue_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> scratch_;
};

}  // namespace

TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const GroundCost& cost) {
  if (supply.empty() || demand.empty()) throw std::invalid_argument("solve_transport: empty marginal");
  if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
    throw std::invalid_argument("solve_transport: cost shape does not match marginals");
  }
  auto valid = [](double w) { return std::isfinite(w) && w >= 0.0; };
  if (!std::all_of(supply.begin(), supply.end(), valid) || !std::all_of(demand.begin(), demand.end(), valid)) {
    throw std::invalid_argument("solve_transport: marginals must be finite and nonnegative");
  }
  double total_supply = std::accumulate(supply.begin(), supply.end(), 0.0);
  double total_demand = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (std::abs(total_supply - total_demand) > 1e-9 * std::max(1.0, total_supply)) {
    throw std::invalid_argument("solve_transport: supply and demand totals differ");
  }
  return TransportSimplex(supply, demand, cost).solve();
}

}  // namespace claimdist

#include "swarmplan/assignment.hpp"

#include <algorithm>
#include <limits>

namespace swarmplan {

bool Assignment::is_permutation() const {
  std::vector<char> seen(goal_of.size(), 0);
  for (int g : goal_of) {
    if (g < 0 || g >= size() || seen[g]) return false;
    seen[g] = 1;
  }
  return true;
}

CostMatrix build_cost_matrix(std::span<const Vec3> starts, std::span<const Vec3> goals,
                             const TrajectoryGenerator& gen) {
  if (starts.size() != goals.size()) {
    throw Error(ErrorCode::InvalidInput, "start and goal counts differ");
  }
  const auto n = static_cast<Eigen::Index>(starts.size());
  CostMatrix cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double length = (goals[j].head<2>() - starts[i].head<2>()).norm();
      cost(i, j) = gen.duration(length, Direction::Horizontal);
    }
  }
  return cost;
}

Assignment solve_assignment(const CostMatrix& cost) {
  if (cost.rows() != cost.cols()) throw Error(ErrorCode::InvalidInput, "cost matrix not square");
  if (!cost.allFinite()) throw Error(ErrorCode::InvalidInput, "cost matrix has non-finite entries");
  const int n = static_cast<int>(cost.rows());
  constexpr double inf = std::numeric_limits<double>::infinity();

  // 1-based arrays; column 0 is the virtual root of each augmenting search.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    row_of[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = row_of[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.goal_of.assign(n, -1);
  for (int j = 1; j <= n; ++j) out.goal_of[row_of[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) out.total_cost += cost(i, out.goal_of[i]);
  return out;
}

}  // namespace swarmplan

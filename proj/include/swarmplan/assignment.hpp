#pragma once

#include "swarmplan/common.hpp"
#include "swarmplan/trajgen.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace swarmplan {

/// C(i, j) = seconds for agent i to fly the straight horizontal line to goal j.
using CostMatrix = Eigen::MatrixXd;

struct Assignment {
  /// goal_of[i] = index of the goal assigned to agent i.
  std::vector<int> goal_of;
  double total_cost = 0.0;

  int size() const { return static_cast<int>(goal_of.size()); }
  bool is_permutation() const;
};

/// Horizontal travel durations; vertical components of the inputs are ignored.
CostMatrix build_cost_matrix(std::span<const Vec3> starts, std::span<const Vec3> goals,
                             const TrajectoryGenerator& gen);

/// Minimum-cost perfect matching of a square cost matrix in O(n^3)
/// (shortest augmenting paths with dual potentials). Deterministic: agents
/// are inserted in index order and ties keep the first column found.
Assignment solve_assignment(const CostMatrix& cost);

}  // namespace swarmplan

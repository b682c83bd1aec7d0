#pragma once

#include "swarmplan/assignment.hpp"
#include "swarmplan/resolve.hpp"
#include "swarmplan/scenario.hpp"
#include "swarmplan/trajgen.hpp"

#include <span>
#include <vector>

namespace swarmplan {

struct AgentTimes {
  double horizontal = 0.0;
  double vertical = 0.0;
  double wait = 0.0;

  double total() const { return horizontal + vertical + wait; }
};

struct TimeDecomposition {
  std::vector<AgentTimes> agents;

  AgentTimes mean() const;
};

AgentTimes decompose(const Trajectory& traj);
TimeDecomposition decompose(std::span<const Trajectory> trajs);
inline TimeDecomposition decompose(const Plan& plan) { return decompose(plan.trajectories); }

/// Duration of a horizontal move across the diagonal of a square of side S.
double characteristic_time(double side, const TrajectoryGenerator& gen);

/// Mean over agents of (horizontal + wait time), divided by t_c.
double t_p_metric(const TimeDecomposition& times, double t_c);

/// Per-trial means divided by the mean horizontal time.
struct NormalizedMetrics {
  double t_c = 0.0;
  double t_p = 0.0;
  double total = 0.0;
  double vertical = 0.0;
  double wait = 0.0;
};

NormalizedMetrics normalize(const TimeDecomposition& times, double t_c);

struct BaselineResult {
  Plan plan;
  /// Common flight duration of every agent.
  double duration = 0.0;
  TimeDecomposition times;
  double t_p = 0.0;
};

/// Goal assignment minimising summed squared distance, then synchronised
/// constant-speed straight lines on the ground plane: every agent departs at
/// t = 0 and arrives when the longest path finishes at full speed. Collisions
/// are not resolved. t_p uses the given characteristic time.
BaselineResult capt_baseline(const Scenario& sc, double t_c);

}  // namespace swarmplan

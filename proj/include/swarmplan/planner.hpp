#pragma once

// End-to-end pipeline: goal assignment, trajectory generation and collision
// resolution, with wall-clock timing of each stage.

#include "swarmplan/metrics.hpp"
#include "swarmplan/resolve.hpp"
#include "swarmplan/scenario.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace swarmplan {

struct PlannerConfig {
  Method method = Method::Delays;
  double tau_inc = 0.1;
  std::uint64_t seed = 0;
  int degree = 7;
  StretchPolicy policy = StretchPolicy::Exact;
  /// Defaults to waiting on the ground whenever the assignment allows it.
  std::optional<bool> ground_wait;
};

struct StageTimings {
  double assign = 0.0;
  double trajgen = 0.0;
  double collision = 0.0;
};

struct PlanResult {
  Plan plan;
  TimeDecomposition times;
  NormalizedMetrics metrics;
  StageTimings timings;
};

TrajectoryGenerator make_generator(const Scenario& sc, int degree = 7,
                                   StretchPolicy policy = StretchPolicy::Exact);

/// Whether no start lies within the radius sum of a goal assigned to another
/// agent, so delayed agents may wait on the ground.
bool ground_wait_safe(std::span<const Vec3> starts, std::span<const Vec3> assigned_goals,
                      std::span<const Cylinder> cylinders);

/// Runs the configured method. For the delay and altitude methods the result
/// is checked with the analytic collision test and VerificationFailure is
/// thrown if any pair collides.
PlanResult plan_scenario(const Scenario& sc, const PlannerConfig& config);

}  // namespace swarmplan

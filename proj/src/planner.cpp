#include "swarmplan/planner.hpp"

#include "swarmplan/assignment.hpp"
#include "swarmplan/collision.hpp"

#include <chrono>
#include <string>

namespace swarmplan {

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

TrajectoryGenerator make_generator(const Scenario& sc, int degree, StretchPolicy policy) {
  return TrajectoryGenerator(sc.limits_horz, sc.limits_vert, degree, policy);
}

bool ground_wait_safe(std::span<const Vec3> starts, std::span<const Vec3> assigned_goals,
                      std::span<const Cylinder> cylinders) {
  const std::size_t n = starts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (starts[i].head<2>() - assigned_goals[j].head<2>()).norm();
      if (d <= cylinders[i].radius + cylinders[j].radius) return false;
    }
  }
  return true;
}

PlanResult plan_scenario(const Scenario& sc, const PlannerConfig& config) {
  const ValidationReport report = validate(sc);
  if (!report.ok()) throw Error(ErrorCode::InvalidInput, "invalid scenario: " + report.violations.front());
  const int n = sc.size();
  PlanResult out;
  Stopwatch clock;

  const TrajectoryGenerator gen = make_generator(sc, config.degree, config.policy);
  const double t_c = sc.side_length > 0.0 ? characteristic_time(sc.side_length, gen) : 0.0;

  if (config.method == Method::Baseline) {
    out.timings.trajgen = clock.lap();
    BaselineResult base = capt_baseline(sc, t_c);
    out.timings.assign = clock.lap();
    out.plan = std::move(base.plan);
    out.times = std::move(base.times);
    if (t_c > 0.0) out.metrics = normalize(out.times, t_c);
    return out;
  }

  // Every start-goal trajectory duration counts as trajectory generation.
  const CostMatrix cost = build_cost_matrix(sc.starts, sc.goals, gen);
  out.timings.trajgen = clock.lap();
  const Assignment assignment = solve_assignment(cost);
  std::vector<Vec3> goals(n);
  for (int i = 0; i < n; ++i) goals[i] = sc.goals[assignment.goal_of[i]];
  out.timings.assign = clock.lap();

  ResolveOptions options;
  options.tau_inc = config.tau_inc;
  options.seed = config.seed;
  options.ground_wait = config.ground_wait.value_or(ground_wait_safe(sc.starts, goals, sc.cylinders));
  out.plan = config.method == Method::Delays
                 ? resolve_by_delays(sc.starts, goals, sc.cylinders, gen, options)
                 : resolve_by_altitudes(sc.starts, goals, sc.cylinders, gen, options);
  out.plan.goal_of = assignment.goal_of;
  const CollisionFlags flags = all_agents_collisions(out.plan.trajectories, sc.cylinders);
  out.timings.collision = clock.lap();
  if (flags.any()) {
    throw Error(ErrorCode::VerificationFailure,
                std::to_string(flags.count()) + " colliding pairs remain after resolution");
  }

  out.times = decompose(out.plan);
  if (t_c > 0.0) out.metrics = normalize(out.times, t_c);
  return out;
}

}  // namespace swarmplan

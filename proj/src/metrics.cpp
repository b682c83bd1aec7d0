#include "swarmplan/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace swarmplan {

AgentTimes TimeDecomposition::mean() const {
  AgentTimes m;
  if (agents.empty()) return m;
  for (const auto& a : agents) {
    m.horizontal += a.horizontal;
    m.vertical += a.vertical;
    m.wait += a.wait;
  }
  const double n = static_cast<double>(agents.size());
  m.horizontal /= n;
  m.vertical /= n;
  m.wait /= n;
  return m;
}

AgentTimes decompose(const Trajectory& traj) {
  AgentTimes t;
  for (const auto& seg : traj.segments) {
    switch (seg.kind) {
      case SegmentKind::Horizontal: t.horizontal += seg.duration(); break;
      case SegmentKind::Vertical: t.vertical += seg.duration(); break;
      case SegmentKind::Wait: t.wait += seg.duration(); break;
    }
  }
  return t;
}

TimeDecomposition decompose(std::span<const Trajectory> trajs) {
  TimeDecomposition d;
  d.agents.reserve(trajs.size());
  for (const auto& t : trajs) d.agents.push_back(decompose(t));
  return d;
}

double characteristic_time(double side, const TrajectoryGenerator& gen) {
  if (!(side > 0.0)) throw Error(ErrorCode::InvalidInput, "side length must be positive");
  return gen.duration(std::sqrt(2.0) * side, Direction::Horizontal);
}

double t_p_metric(const TimeDecomposition& times, double t_c) {
  if (times.agents.empty()) throw Error(ErrorCode::InvalidInput, "no agents to average");
  const AgentTimes m = times.mean();
  return (m.horizontal + m.wait) / t_c;
}

NormalizedMetrics normalize(const TimeDecomposition& times, double t_c) {
  NormalizedMetrics out;
  out.t_c = t_c;
  out.t_p = t_p_metric(times, t_c);
  const AgentTimes m = times.mean();
  if (m.horizontal > 0.0) {
    out.total = m.total() / m.horizontal;
    out.vertical = m.vertical / m.horizontal;
    out.wait = m.wait / m.horizontal;
  }
  return out;
}

BaselineResult capt_baseline(const Scenario& sc, double t_c) {
  const int n = sc.size();
  CostMatrix cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cost(i, j) = (sc.goals[j].head<2>() - sc.starts[i].head<2>()).squaredNorm();
    }
  }
  const Assignment a = solve_assignment(cost);

  double longest = 0.0;
  for (int i = 0; i < n; ++i) {
    longest = std::max(longest, (sc.goals[a.goal_of[i]] - sc.starts[i]).head<2>().norm());
  }
  const double speed = sc.limits_horz.speed();
  const double T = longest / speed;

  BaselineResult out;
  out.duration = T;
  out.plan.method = Method::Baseline;
  out.plan.goal_of = a.goal_of;
  out.plan.delays.assign(n, 0.0);
  out.plan.holds.assign(n, 0);
  out.plan.trajectories.resize(n);
  for (int i = 0; i < n; ++i) {
    Trajectory& traj = out.plan.trajectories[i];
    traj.agent_id = i;
    const Vec3 s(sc.starts[i].x(), sc.starts[i].y(), 0.0);
    const Vec3 g(sc.goals[a.goal_of[i]].x(), sc.goals[a.goal_of[i]].y(), 0.0);
    const double length = (g - s).norm();
    if (T <= 0.0) {
      traj.append(make_wait_segment(s, {0.0, 0.0}));
    } else if (length == 0.0) {
      traj.append(make_wait_segment(s, {0.0, T}));
    } else {
      traj.append(make_segment(Polynomial{0.0, length / T}, (g - s) / length, s, {0.0, T},
                               SegmentKind::Horizontal));
    }
  }
  out.times = decompose(out.plan);
  out.t_p = t_p_metric(out.times, t_c);
  return out;
}

}  // namespace swarmplan

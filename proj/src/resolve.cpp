#include "swarmplan/resolve.hpp"

#include "swarmplan/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace swarmplan {

namespace {

constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

Vec3 lifted(const Vec3& p, double z) { return {p.x(), p.y(), z}; }

// A subtrajectory built once at t = 0 and re-placed at any start time.
struct Move {
  std::vector<TrajectorySegment> segments;
  double duration = 0.0;
};

Move make_move(const Vec3& from, const Vec3& to, const TrajectoryGenerator& gen) {
  Move m;
  if ((to - from).norm() < 1e-12) return m;
  m.segments = gen.make_subtrajectory(from, to, 0.0);
  m.duration = m.segments.back().interval.tf;
  return m;
}

void place(Trajectory& traj, const Move& m, double& t) {
  for (TrajectorySegment seg : m.segments) {
    seg.interval.t0 += t;
    seg.interval.tf += t;
    traj.segments.push_back(std::move(seg));
  }
  t += m.duration;
}

void wait(Trajectory& traj, const Vec3& pos, double duration, double& t) {
  if (duration <= 0.0) return;
  traj.segments.push_back(make_wait_segment(pos, {t, t + duration}));
  t += duration;
}

void check_inputs(std::span<const Vec3> starts, std::span<const Vec3> goals,
                  std::span<const Cylinder> cylinders, const ResolveOptions& options) {
  if (starts.size() != goals.size() || starts.size() != cylinders.size()) {
    throw Error(ErrorCode::InvalidInput, "starts, goals and cylinders must have equal length");
  }
  if (!(options.tau_inc > 0.0)) throw Error(ErrorCode::InvalidInput, "tau_inc must be positive");
}

// Agents whose ground lines pass the pair prefilter; the only candidates for
// any collision with the given agent.
std::vector<std::vector<int>> ground_neighbours(std::span<const Vec3> starts,
                                                std::span<const Vec3> goals,
                                                std::span<const Cylinder> cylinders) {
  const int n = static_cast<int>(starts.size());
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = segment_segment_distance(lifted(starts[i], 0.0), lifted(goals[i], 0.0),
                                                lifted(starts[j], 0.0), lifted(goals[j], 0.0));
      if (d <= cylinders[i].radius + cylinders[j].radius) {
        out[i].push_back(j);
        out[j].push_back(i);
      }
    }
  }
  return out;
}

// The fixed neighbour hit first and the colliding segment of `traj`.
std::optional<std::size_t> first_hit_against(const Trajectory& traj, int agent,
                                             std::span<const int> neighbours,
                                             std::span<const char> fixed,
                                             std::span<const Trajectory> trajs,
                                             std::span<const Cylinder> cylinders) {
  for (int j : neighbours) {
    if (!fixed[j]) continue;
    if (auto hit = first_collision(traj, trajs[j], cylinders[agent], cylinders[j])) return hit->seg_i;
  }
  return std::nullopt;
}

void guard(std::size_t increments, std::size_t bound, std::size_t factor) {
  if (increments > factor * std::max<std::size_t>(bound, 1)) {
    throw Error(ErrorCode::IterationGuard, "delay increments exceeded " + std::to_string(factor) +
                                               "x the analytic bound " + std::to_string(bound));
  }
}

// Pieces of one delay-method trajectory that do not depend on tau.
struct DelayPieces {
  Move climb;   // ground to holding altitude, if used
  Vec3 wait_at;
  Move motion;  // to traversal altitude, across, and down
};

DelayPieces delay_pieces(const Vec3& start, const Vec3& goal, const DelayLayout& layout,
                         bool use_holding, const TrajectoryGenerator& gen) {
  DelayPieces d;
  const Vec3 ground = lifted(start, 0.0);
  d.wait_at = use_holding ? lifted(start, layout.holding) : ground;
  if (use_holding) d.climb = make_move(ground, d.wait_at, gen);
  const Vec3 a = lifted(start, layout.traversal);
  const Vec3 b = lifted(goal, layout.traversal);
  Trajectory tmp;
  double t = 0.0;
  place(tmp, make_move(d.wait_at, a, gen), t);
  place(tmp, make_move(a, b, gen), t);
  place(tmp, make_move(b, lifted(goal, 0.0), gen), t);
  d.motion.segments = std::move(tmp.segments);
  d.motion.duration = t;
  return d;
}

Trajectory assemble_delay(int agent_id, const DelayPieces& d, double tau) {
  Trajectory traj;
  traj.agent_id = agent_id;
  double t = 0.0;
  place(traj, d.climb, t);
  wait(traj, d.wait_at, tau, t);
  place(traj, d.motion, t);
  return traj;
}

// Per-agent state of the altitude method.
struct AltitudeAgent {
  int layer = 0;
  bool hold = false;
  bool ground_safe = false;
  double ground_delay = 0.0;
  double pre_delay = 0.0;
  double hold_delay = 0.0;
};

struct AltitudeBuild {
  Trajectory traj;
  std::size_t climb_begin = 0;
  std::size_t climb_end = 0;
  // Wait in the traversal altitude before crossing, and the holding wait.
  std::size_t layer_wait = kNoIndex;
  std::size_t hold_wait = kNoIndex;
  // First segment after the traversal.
  std::size_t descent_index = 0;
  // First segment after the holding wait, or kNoIndex without a hold.
  std::size_t release_index = kNoIndex;
};

AltitudeBuild build_altitude_trajectory(int agent_id, const Vec3& start, const Vec3& goal,
                                        const AltitudeLayout& layout, const AltitudeAgent& a,
                                        double t1, const TrajectoryGenerator& gen) {
  AltitudeBuild out;
  Trajectory& traj = out.traj;
  traj.agent_id = agent_id;
  const double z = layout.traversal[a.layer];
  const Vec3 s0 = lifted(start, 0.0);
  const Vec3 s1 = lifted(start, z);
  const Vec3 g1 = lifted(goal, z);
  const Vec3 g0 = lifted(goal, 0.0);
  double t = 0.0;
  wait(traj, s0, a.ground_delay, t);
  out.climb_begin = traj.segments.size();
  place(traj, make_move(s0, s1, gen), t);
  out.climb_end = traj.segments.size();
  const double layer_wait = std::max(t1 - t, 0.0) + a.pre_delay;
  if (layer_wait > 0.0) out.layer_wait = traj.segments.size();
  wait(traj, s1, layer_wait, t);
  place(traj, make_move(s1, g1, gen), t);
  out.descent_index = traj.segments.size();
  if (a.hold) {
    const Vec3 gh = lifted(goal, *layout.holding[a.layer]);
    place(traj, make_move(g1, gh, gen), t);
    if (a.hold_delay > 0.0) out.hold_wait = traj.segments.size();
    wait(traj, gh, a.hold_delay, t);
    out.release_index = traj.segments.size();
    place(traj, make_move(gh, g0, gen), t);
  } else {
    place(traj, make_move(g1, g0, gen), t);
  }
  return out;
}

// Time by which every agent has reached its traversal altitude.
double last_arrival(const AltitudeLayout& layout, std::span<const AltitudeAgent> agents,
                    const TrajectoryGenerator& gen) {
  double t = 0.0;
  for (const auto& a : agents) t = std::max(t, gen.duration(layout.traversal[a.layer], Direction::Vertical));
  return t;
}

// Whether the descent of `upper` (everything after its traversal) meets `lower`.
bool descent_hits(const AltitudeBuild& upper, const Trajectory& lower, const Cylinder& c_upper,
                  const Cylinder& c_lower) {
  const auto& segs = upper.traj.segments;
  for (std::size_t k = upper.descent_index; k < segs.size(); ++k) {
    for (const auto& s : lower.segments) {
      if (segment_pair_collides(segs[k], s, c_upper, c_lower)) return true;
    }
  }
  return false;
}

Trajectory climb_only(const AltitudeBuild& b) {
  Trajectory t;
  t.agent_id = b.traj.agent_id;
  t.segments.assign(b.traj.segments.begin() + static_cast<std::ptrdiff_t>(b.climb_begin),
                    b.traj.segments.begin() + static_cast<std::ptrdiff_t>(b.climb_end));
  return t;
}

// Raised when waiting longer cannot clear a conflict because the conflict
// lies inside the wait itself.
struct Stuck {};

Plan resolve_altitudes_with(std::span<const Vec3> starts, std::span<const Vec3> goals,
                            std::span<const Cylinder> cylinders, const TrajectoryGenerator& gen,
                            const ResolveOptions& options, HorizontalStart start_rule) {
  const int n = static_cast<int>(starts.size());
  const double spacing = layer_spacing(cylinders);
  const auto enlarged = enlarge_for_exit_collisions(cylinders, gen, spacing).first;

  // Primary conflicts: everyone in one altitude with enlarged radii and a
  // common horizontal start.
  std::vector<AltitudeAgent> agents(n);
  std::vector<AltitudeBuild> builds(n);
  std::vector<Trajectory> trajs(n);
  {
    const std::vector<char> no_hold{0};
    const AltitudeLayout single = AltitudeLayout::build(no_hold, spacing);
    const double t1 = last_arrival(single, agents, gen);
    for (int i = 0; i < n; ++i) {
      trajs[i] = build_altitude_trajectory(i, starts[i], goals[i], single, agents[i], t1, gen).traj;
    }
  }
  CollisionOptions primary;
  primary.horizontal_only = true;
  const CollisionFlags flags = all_agents_collisions(trajs, enlarged, primary);
  const std::vector<int> order = random_order(n, options.seed);
  const AltitudeAssignment assignment = assign_altitudes(flags, order);
  for (int i = 0; i < n; ++i) {
    agents[i].layer = assignment.layer_of[i];
    agents[i].ground_safe = true;
    for (int k = 0; k < n && agents[i].ground_safe; ++k) {
      agents[i].ground_safe = k == i || (starts[i].head<2>() - goals[k].head<2>()).norm() >
                                            cylinders[i].radius + cylinders[k].radius;
    }
  }

  std::vector<char> layer_hold(assignment.layers, 0);
  AltitudeLayout layout;
  double t1 = 0.0;
  auto rebuild = [&](int i) {
    builds[i] = build_altitude_trajectory(i, starts[i], goals[i], layout, agents[i], t1, gen);
    trajs[i] = builds[i].traj;
  };
  auto rebuild_all = [&] {
    layout = AltitudeLayout::build(layer_hold, spacing);
    t1 = start_rule == HorizontalStart::AllArrived ? last_arrival(layout, agents, gen) : 0.0;
    for (int i = 0; i < n; ++i) rebuild(i);
  };
  rebuild_all();

  // Entrance conflicts: an agent descending from a higher altitude into
  // traffic gets a holding stop below its traversal altitude.
  for (int round = 0; round < n; ++round) {
    const CollisionFlags found = all_agents_collisions(trajs, cylinders);
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!found(i, j) || agents[i].layer == agents[j].layer) continue;
        const int upper = agents[i].layer > agents[j].layer ? i : j;
        const int lower = upper == i ? j : i;
        if (agents[upper].hold ||
            !descent_hits(builds[upper], trajs[lower], cylinders[upper], cylinders[lower])) {
          continue;
        }
        agents[upper].hold = true;
        layer_hold[agents[upper].layer] = 1;
        changed = true;
      }
    }
    if (!changed) break;
    rebuild_all();
  }

  Plan plan;
  plan.method = Method::Altitudes;
  plan.ground_wait = false;
  double longest = 0.0;
  for (const auto& t : trajs) longest = std::max(longest, t.end_time());
  plan.increment_bound = delay_increment_bound(n, longest, options.tau_inc);

  // Remaining conflicts, lower altitudes first: each agent waits until it
  // clears every agent fixed before it and every climb that cannot move.
  std::vector<int> priority(n);
  for (int k = 0; k < n; ++k) priority[order[k]] = k;
  std::vector<int> sequence(n);
  std::iota(sequence.begin(), sequence.end(), 0);
  std::sort(sequence.begin(), sequence.end(), [&](int a, int b) {
    if (agents[a].layer != agents[b].layer) return agents[a].layer < agents[b].layer;
    return priority[a] < priority[b];
  });
  const auto neighbours = ground_neighbours(starts, goals, cylinders);
  std::vector<Trajectory> climbs(n);
  for (int i = 0; i < n; ++i) {
    if (!agents[i].ground_safe) climbs[i] = climb_only(builds[i]);
  }
  std::vector<char> fixed(n, 0);
  auto first_hit = [&](int i) -> std::optional<std::size_t> {
    for (int j : neighbours[i]) {
      const Trajectory& other = fixed[j] ? trajs[j] : climbs[j];
      if (other.empty()) continue;
      if (auto hit = first_collision(trajs[i], other, cylinders[i], cylinders[j])) return hit->seg_i;
    }
    return std::nullopt;
  };
  for (int i : sequence) {
    while (auto seg = first_hit(i)) {
      ++plan.increments;
      guard(plan.increments, plan.increment_bound, options.guard_factor);
      AltitudeAgent& a = agents[i];
      const AltitudeBuild& b = builds[i];
      if (*seg == b.layer_wait || *seg == b.hold_wait) throw Stuck{};
      if (a.hold && *seg >= b.release_index) {
        a.hold_delay += options.tau_inc;
      } else if (a.ground_safe) {
        a.ground_delay += options.tau_inc;
      } else if (*seg < b.climb_end) {
        throw Stuck{};
      } else {
        a.pre_delay += options.tau_inc;
      }
      rebuild(i);
    }
    fixed[i] = 1;
  }

  plan.trajectories = std::move(trajs);
  plan.altitudes = assignment;
  plan.layout = layout;
  plan.delays.resize(n);
  plan.holds.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& a = agents[i];
    plan.delays[i] = a.ground_delay + a.pre_delay + a.hold_delay;
    plan.holds[i] = a.hold ? 1 : 0;
  }
  return plan;
}

}  // namespace

double layer_spacing(std::span<const Cylinder> cylinders) {
  double h = 0.0;
  for (const auto& c : cylinders) h = std::max(h, c.height);
  return h + kContactMargin;
}

const char* to_string(Method method) {
  switch (method) {
    case Method::Delays: return "delays";
    case Method::Altitudes: return "altitudes";
    case Method::Baseline: return "baseline";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "delays") return Method::Delays;
  if (name == "altitudes") return Method::Altitudes;
  if (name == "baseline") return Method::Baseline;
  throw Error(ErrorCode::InvalidInput, "unknown method '" + name + "'");
}

AltitudeLayout AltitudeLayout::build(std::span<const char> has_holding, double spacing) {
  AltitudeLayout layout;
  layout.spacing = spacing;
  double z = 0.0;
  for (char hold : has_holding) {
    if (hold) {
      z += spacing;
      layout.holding.emplace_back(z);
    } else {
      layout.holding.emplace_back(std::nullopt);
    }
    z += spacing;
    layout.traversal.push_back(z);
  }
  return layout;
}

int AltitudeLayout::holding_count() const {
  return static_cast<int>(std::count_if(holding.begin(), holding.end(),
                                        [](const auto& h) { return h.has_value(); }));
}

Eigen::MatrixXi AltitudeAssignment::matrix() const {
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(layer_of.size()), layers);
  for (std::size_t i = 0; i < layer_of.size(); ++i) b(static_cast<Eigen::Index>(i), layer_of[i]) = 1;
  return b;
}

std::vector<int> random_order(int n, std::uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<int>(order));
  return order;
}

std::size_t delay_increment_bound(int n, double longest, double tau_inc) {
  const auto steps = static_cast<std::size_t>(std::ceil(longest / tau_inc));
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2 * steps;
}

Trajectory build_delay_trajectory(int agent_id, const Vec3& start, const Vec3& goal, double tau,
                                  const DelayLayout& layout, bool use_holding,
                                  const TrajectoryGenerator& gen) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidInput, "delay must be nonnegative");
  return assemble_delay(agent_id, delay_pieces(start, goal, layout, use_holding, gen), tau);
}

Plan resolve_by_delays(std::span<const Vec3> starts, std::span<const Vec3> goals,
                       std::span<const Cylinder> cylinders, const TrajectoryGenerator& gen,
                       const ResolveOptions& options) {
  check_inputs(starts, goals, cylinders, options);
  const int n = static_cast<int>(starts.size());
  const DelayLayout layout = DelayLayout::for_spacing(layer_spacing(cylinders));
  const bool use_holding = !options.ground_wait;

  std::vector<DelayPieces> pieces;
  pieces.reserve(n);
  double longest = 0.0;
  for (int i = 0; i < n; ++i) {
    pieces.push_back(delay_pieces(starts[i], goals[i], layout, use_holding, gen));
    longest = std::max(longest, pieces.back().motion.duration);
  }

  Plan plan;
  plan.method = Method::Delays;
  plan.ground_wait = options.ground_wait;
  plan.delays.assign(n, 0.0);
  plan.holds.assign(n, use_holding ? 1 : 0);
  plan.increment_bound = delay_increment_bound(n, longest, options.tau_inc);
  plan.trajectories.resize(n);

  const auto neighbours = ground_neighbours(starts, goals, cylinders);
  std::vector<char> fixed(n, 0);
  for (int i : random_order(n, options.seed)) {
    std::size_t steps = 0;
    Trajectory traj = assemble_delay(i, pieces[i], 0.0);
    while (auto seg = first_hit_against(traj, i, neighbours[i], fixed, plan.trajectories, cylinders)) {
      if (*seg < pieces[i].climb.segments.size()) {
        throw Error(ErrorCode::IterationGuard,
                    "agent " + std::to_string(i) + " collides while climbing to its holding altitude");
      }
      ++steps;
      ++plan.increments;
      guard(plan.increments, plan.increment_bound, options.guard_factor);
      traj = assemble_delay(i, pieces[i], static_cast<double>(steps) * options.tau_inc);
    }
    plan.delays[i] = static_cast<double>(steps) * options.tau_inc;
    plan.trajectories[i] = std::move(traj);
    fixed[i] = 1;
  }
  return plan;
}

std::pair<std::vector<Cylinder>, double> enlarge_for_exit_collisions(
    std::span<const Cylinder> cylinders, const TrajectoryGenerator& gen, double spacing) {
  const double t_exit = gen.duration(spacing, Direction::Vertical);
  const double l_exit = gen.limits(Direction::Horizontal).speed() * t_exit;
  std::vector<Cylinder> out(cylinders.begin(), cylinders.end());
  for (auto& c : out) c.radius += 0.5 * l_exit;
  return {std::move(out), l_exit};
}

AltitudeAssignment assign_altitudes(const CollisionFlags& flags, std::span<const int> order) {
  const int n = flags.size();
  if (static_cast<int>(order.size()) != n) {
    throw Error(ErrorCode::InvalidInput, "priority order must list every agent");
  }
  AltitudeAssignment out;
  out.layer_of.assign(n, -1);
  std::vector<std::vector<int>> members;
  for (int i : order) {
    int chosen = -1;
    for (int layer = 0; layer < static_cast<int>(members.size()); ++layer) {
      const auto& m = members[layer];
      if (std::none_of(m.begin(), m.end(), [&](int k) { return flags(i, k); })) {
        chosen = layer;
        break;
      }
    }
    if (chosen < 0) {
      chosen = static_cast<int>(members.size());
      members.emplace_back();
    }
    members[chosen].push_back(i);
    out.layer_of[i] = chosen;
  }
  out.layers = static_cast<int>(members.size());
  return out;
}

AltitudeAssignment assign_altitudes(const CollisionFlags& flags, std::uint64_t seed) {
  const auto order = random_order(flags.size(), seed);
  return assign_altitudes(flags, order);
}

Plan resolve_by_altitudes(std::span<const Vec3> starts, std::span<const Vec3> goals,
                          std::span<const Cylinder> cylinders, const TrajectoryGenerator& gen,
                          const ResolveOptions& options) {
  check_inputs(starts, goals, cylinders, options);
  if (options.horizontal_start == HorizontalStart::OnArrival) {
    try {
      return resolve_altitudes_with(starts, goals, cylinders, gen, options, HorizontalStart::OnArrival);
    } catch (const Stuck&) {
      // Fall through to the common start, where climbs never meet traffic.
    }
  }
  try {
    return resolve_altitudes_with(starts, goals, cylinders, gen, options, HorizontalStart::AllArrived);
  } catch (const Stuck&) {
    throw Error(ErrorCode::IterationGuard, "a conflict lies inside a wait that cannot clear it");
  }
}

}  // namespace swarmplan

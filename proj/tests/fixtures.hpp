#pragma once

// Random inputs shared by the unit and acceptance tests.

#include "swarmplan/random.hpp"
#include "swarmplan/trajgen.hpp"

#include <cmath>
#include <numbers>

namespace fixture {

using swarmplan::Rng;
using swarmplan::Trajectory;
using swarmplan::TrajectoryGenerator;
using swarmplan::Vec3;
using swarmplan::make_wait_segment;

// A short random flight near the origin: an optional wait, then one or two
// generated moves, each horizontal or vertical.
inline Trajectory random_flight(Rng& rng, const TrajectoryGenerator& gen, int id) {
  Trajectory traj;
  traj.agent_id = id;
  double t = rng.uniform(0.0, 2.0);
  Vec3 pos(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), 0.4 * static_cast<double>(rng.below(3)));
  if (rng.below(2)) {
    const double w = rng.uniform(0.1, 2.0);
    traj.append(make_wait_segment(pos, {t, t + w}));
    t += w;
  }
  const int moves = 1 + static_cast<int>(rng.below(2));
  for (int m = 0; m < moves; ++m) {
    Vec3 next = pos;
    if (rng.below(3) == 0) {
      next.z() += rng.below(2) ? 0.4 : -0.4;
      if (next.z() < 0.0) next.z() = 0.8;
    } else {
      const double a = rng.uniform(0, 2 * std::numbers::pi);
      const double len = rng.uniform(0.05, 1.2);
      next += Vec3(len * std::cos(a), len * std::sin(a), 0);
    }
    traj.append(gen.make_subtrajectory(pos, next, t));
    t = traj.end_time();
    pos = next;
  }
  return traj;
}

}  // namespace fixture

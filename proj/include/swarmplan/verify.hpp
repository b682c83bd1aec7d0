#pragma once

// Brute-force safety check by dense time sampling. It uses only position
// evaluation and cylinder geometry, so it is independent of the analytic
// collision test it is meant to audit.

#include "swarmplan/collision.hpp"
#include "swarmplan/polycore.hpp"
#include "swarmplan/trajgen.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace swarmplan {

/// Signed gap between two cylinders: the larger of the horizontal gap and
/// the vertical gap. Nonpositive exactly when they intersect.
double clearance(const Vec3& x_i, const Vec3& x_j, const Cylinder& c_i, const Cylinder& c_j);

/// Position at any time, parked at the start before the trajectory begins
/// and at the end after it finishes.
Vec3 position_at(const Trajectory& traj, double t);

struct SampledContact {
  int agent_i = -1;
  int agent_j = -1;
  double t = 0.0;
  double clearance = kInf;
};

struct VerifyReport {
  std::size_t samples = 0;
  std::size_t colliding_samples = 0;
  /// Closest approach over all sampled pairs within the search window.
  SampledContact closest;
  std::optional<SampledContact> first_collision;
  /// Per agent, the smallest clearance to any other agent; kInf when no
  /// other agent ever came within the search window.
  std::vector<double> agent_min_clearance;

  bool pass() const { return colliding_samples == 0; }
};

/// Samples every dt over the union of all trajectory intervals (endpoints
/// included). Pairs farther apart in x than the radius sum plus `window` are
/// skipped.
VerifyReport verify_plan(std::span<const Trajectory> trajs, std::span<const Cylinder> cylinders,
                         double dt = 1e-3, double window = 1.0);

}  // namespace swarmplan

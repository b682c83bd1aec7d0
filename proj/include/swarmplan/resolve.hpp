#pragma once

// Turns straight assigned flights into complete collision-free 3D plans,
// either by delaying departures or by spreading agents over flight altitudes.

#include "swarmplan/collision.hpp"
#include "swarmplan/common.hpp"
#include "swarmplan/trajgen.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace swarmplan {

/// Extra vertical gap between adjacent altitudes. Collision tests are
/// inclusive, so slabs spaced exactly one cylinder height apart would touch.
inline constexpr double kContactMargin = 1e-6;

/// Centre-to-centre distance between adjacent altitudes for these vehicles.
double layer_spacing(std::span<const Cylinder> cylinders);

enum class Method { Delays, Altitudes, Baseline };

const char* to_string(Method method);
/// Throws InvalidInput for unknown names.
Method parse_method(const std::string& name);

/// Heights used by the delay method.
struct DelayLayout {
  double traversal = 0.0;
  double holding = 0.0;

  static DelayLayout for_spacing(double spacing) { return {spacing, 2.0 * spacing}; }
};

/// Traversal altitudes from the ground up, each optionally with a holding
/// altitude directly below it.
struct AltitudeLayout {
  double spacing = 0.0;
  std::vector<double> traversal;
  std::vector<std::optional<double>> holding;

  /// Stacks the slabs bottom-up, one spacing apart, starting one spacing
  /// above the ground.
  static AltitudeLayout build(std::span<const char> has_holding, double spacing);

  int layers() const { return static_cast<int>(traversal.size()); }
  int holding_count() const;
};

struct AltitudeAssignment {
  std::vector<int> layer_of;
  int layers = 0;

  /// n x m indicator matrix with exactly one 1 per row.
  Eigen::MatrixXi matrix() const;
};

struct Plan {
  Method method = Method::Delays;
  /// goal_of[i] = index of the goal flown to by agent i.
  std::vector<int> goal_of;
  std::vector<Trajectory> trajectories;
  /// Wait inserted by the resolution loop, per agent.
  std::vector<double> delays;
  bool ground_wait = true;
  std::optional<AltitudeAssignment> altitudes;
  std::optional<AltitudeLayout> layout;
  /// Agents that stop in a holding altitude before landing.
  std::vector<char> holds;
  std::size_t increments = 0;
  std::size_t increment_bound = 0;
};

/// When agents of the altitude method begin their horizontal crossing.
enum class HorizontalStart {
  /// Everyone starts together once the last agent reaches its altitude.
  AllArrived,
  /// Each agent starts on arrival and waits only for actual conflicts,
  /// falling back to AllArrived if a conflict cannot be cleared by waiting.
  OnArrival,
};

struct ResolveOptions {
  double tau_inc = 0.1;
  std::uint64_t seed = 0;
  /// Wait on the ground instead of in a holding altitude (delay method).
  bool ground_wait = true;
  /// Number of guard multiples of the analytic increment bound.
  std::size_t guard_factor = 10;
  HorizontalStart horizontal_start = HorizontalStart::OnArrival;
};

/// Wait tau at the start (on the ground, or after climbing to the holding
/// altitude), move to the traversal altitude, fly to the goal, land.
Trajectory build_delay_trajectory(int agent_id, const Vec3& start, const Vec3& goal, double tau,
                                  const DelayLayout& layout, bool use_holding,
                                  const TrajectoryGenerator& gen);

/// Agents in seeded random order; each agent's delay grows by tau_inc until it
/// clears every agent fixed before it. goals[i] is agent i's assigned goal.
Plan resolve_by_delays(std::span<const Vec3> starts, std::span<const Vec3> goals,
                       std::span<const Cylinder> cylinders, const TrajectoryGenerator& gen,
                       const ResolveOptions& options);

/// Radii grown by half the horizontal distance covered at full speed during
/// the time needed to leave an altitude vertically. Returns the enlarged
/// cylinders and that distance.
std::pair<std::vector<Cylinder>, double> enlarge_for_exit_collisions(
    std::span<const Cylinder> cylinders, const TrajectoryGenerator& gen, double spacing);

/// Greedy assignment in the given priority order: each agent takes the lowest
/// altitude holding no agent it is flagged against, opening a new altitude
/// when none fits.
AltitudeAssignment assign_altitudes(const CollisionFlags& flags, std::span<const int> order);
/// Same with a seeded random priority order.
AltitudeAssignment assign_altitudes(const CollisionFlags& flags, std::uint64_t seed);

/// Altitude method: exit-safe radius enlargement, altitude assignment,
/// holding altitudes for agents that descend into traffic, then delays.
Plan resolve_by_altitudes(std::span<const Vec3> starts, std::span<const Vec3> goals,
                          std::span<const Cylinder> cylinders, const TrajectoryGenerator& gen,
                          const ResolveOptions& options);

/// Seeded random permutation of 0..n-1.
std::vector<int> random_order(int n, std::uint64_t seed);

/// n(n+1)/2 * ceil(longest / tau_inc).
std::size_t delay_increment_bound(int n, double longest, double tau_inc);

}  // namespace swarmplan

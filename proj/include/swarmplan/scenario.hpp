#pragma once

#include "swarmplan/collision.hpp"
#include "swarmplan/common.hpp"
#include "swarmplan/trajgen.hpp"

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace swarmplan {

/// Densest possible packing of equal discs in the plane.
inline constexpr double kPackingLimit = std::numbers::pi / (2.0 * std::numbers::sqrt3);

/// Area density of n discs of radius R over a square of side S.
double density_for_side_length(int n, double radius, double side);

struct DensitySpec {
  double eta = 0.01;
  int n = 10;
  double radius = 0.15;

  void validate() const;
};

/// Positive root of eta S^2 + 4 eta R S + (eta - n) pi R^2 = 0. Throws
/// InfeasibleDensity at or above the packing limit.
double side_length_for_density(const DensitySpec& spec);

struct Scenario {
  std::vector<Vec3> starts;
  std::vector<Vec3> goals;
  std::vector<Cylinder> cylinders;
  DerivativeLimits limits_horz = default_limits();
  DerivativeLimits limits_vert = default_limits();
  double side_length = 0.0;
  /// Requested density; zero when the scenario was not generated from one.
  double eta = 0.0;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(starts.size()); }
};

/// Starts, then goals, drawn uniformly over [0, S]^2 and rejected until every
/// pair within the set is more than the radius sum apart. Throws
/// SamplingTimeout after 10^6 rejections.
Scenario random_scenario(const DensitySpec& spec, std::uint64_t seed, const Cylinder& vehicle = {},
                         const DerivativeLimits& limits_horz = default_limits(),
                         const DerivativeLimits& limits_vert = default_limits());

struct ValidationReport {
  std::vector<std::string> violations;
  /// Every start is clear of every goal, so whatever the assignment, no agent
  /// lands on one waiting on the ground.
  bool ground_wait_allowed = true;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Scenario& sc);

}  // namespace swarmplan

#include "swarmplan/scenario.hpp"

#include "swarmplan/random.hpp"

#include <cmath>

namespace swarmplan {

namespace {

constexpr long kMaxRejections = 1'000'000;

double horizontal_distance(const Vec3& a, const Vec3& b) { return (a.head<2>() - b.head<2>()).norm(); }

std::vector<Vec3> sample_separated(int n, double side, const std::vector<Cylinder>& cylinders,
                                   Rng& rng, long& rejections) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n) {
    const Vec3 p(rng.uniform(0.0, side), rng.uniform(0.0, side), 0.0);
    const std::size_t k = pts.size();
    bool clear = true;
    for (std::size_t j = 0; j < k && clear; ++j) {
      clear = horizontal_distance(p, pts[j]) > cylinders[k].radius + cylinders[j].radius;
    }
    if (clear) {
      pts.push_back(p);
    } else if (++rejections > kMaxRejections) {
      throw Error(ErrorCode::SamplingTimeout, "no separated placement after 1e6 rejections");
    }
  }
  return pts;
}

}  // namespace

double density_for_side_length(int n, double radius, double side) {
  const double disc = std::numbers::pi * radius * radius;
  return n * disc / (side * side + 4.0 * radius * side + disc);
}

void DensitySpec::validate() const {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "agent count must be positive");
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidInput, "radius must be positive");
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidInput, "density must be positive");
  if (eta >= kPackingLimit) {
    throw Error(ErrorCode::InfeasibleDensity, "density must stay below the packing limit 0.9069");
  }
}

double side_length_for_density(const DensitySpec& spec) {
  spec.validate();
  const double r = spec.radius;
  const double a = spec.eta;
  const double b = 4.0 * spec.eta * r;
  const double c = (spec.eta - spec.n) * std::numbers::pi * r * r;
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  // c <= 0, so the positive root is the "+" branch, written without cancellation.
  return c == 0.0 ? 0.0 : (-2.0 * c) / (b + disc);
}

Scenario random_scenario(const DensitySpec& spec, std::uint64_t seed, const Cylinder& vehicle,
                         const DerivativeLimits& limits_horz, const DerivativeLimits& limits_vert) {
  Scenario sc;
  sc.side_length = side_length_for_density(spec);
  sc.eta = spec.eta;
  sc.seed = seed;
  sc.limits_horz = limits_horz;
  sc.limits_vert = limits_vert;
  sc.cylinders.assign(spec.n, Cylinder{spec.radius, vehicle.height});
  Rng rng(seed);
  long rejections = 0;
  sc.starts = sample_separated(spec.n, sc.side_length, sc.cylinders, rng, rejections);
  sc.goals = sample_separated(spec.n, sc.side_length, sc.cylinders, rng, rejections);
  return sc;
}

ValidationReport validate(const Scenario& sc) {
  ValidationReport report;
  const int n = sc.size();
  auto fail = [&](const std::string& msg) { report.violations.push_back(msg); };
  if (static_cast<int>(sc.goals.size()) != n || static_cast<int>(sc.cylinders.size()) != n) {
    fail("starts, goals and cylinders differ in length");
    report.ground_wait_allowed = false;
    return report;
  }
  for (int i = 0; i < n; ++i) {
    const auto& c = sc.cylinders[i];
    if (!(c.radius > 0.0) || !(c.height > 0.0)) fail("agent " + std::to_string(i) + " has a degenerate cylinder");
    if (sc.starts[i].z() != 0.0 || sc.goals[i].z() != 0.0) fail("agent " + std::to_string(i) + " is off the ground");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double r = sc.cylinders[i].radius + sc.cylinders[j].radius;
      if (horizontal_distance(sc.starts[i], sc.starts[j]) <= r) {
        fail("starts " + std::to_string(i) + " and " + std::to_string(j) + " are too close");
      }
      if (horizontal_distance(sc.goals[i], sc.goals[j]) <= r) {
        fail("goals " + std::to_string(i) + " and " + std::to_string(j) + " are too close");
      }
    }
  }
  for (int i = 0; i < n && report.ground_wait_allowed; ++i) {
    for (int j = 0; j < n; ++j) {
      if (horizontal_distance(sc.starts[i], sc.goals[j]) <=
                        sc.cylinders[i].radius + sc.cylinders[j].radius) {
        report.ground_wait_allowed = false;
        break;
      }
    }
  }
  try {
    sc.limits_horz.validate(1);
    sc.limits_vert.validate(1);
  } catch (const Error& e) {
    fail(e.what());
  }
  return report;
}

}  // namespace swarmplan

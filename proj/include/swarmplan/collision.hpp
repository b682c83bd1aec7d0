#pragma once

// Exact collision tests between vertical cylinders carried along
// piecewise-polynomial straight-line trajectories.

#include "swarmplan/common.hpp"
#include "swarmplan/trajgen.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace swarmplan {

struct Cylinder {
  double radius = 0.15;
  double height = 0.4;
};

/// Symmetric pairwise flags with a false diagonal, stored as the strict upper
/// triangle.
class CollisionFlags {
 public:
  explicit CollisionFlags(int n = 0) : n_(n), bits_(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2, 0) {}

  int size() const { return n_; }
  bool operator()(int i, int j) const { return i != j && bits_[index(i, j)] != 0; }
  void set(int i, int j, bool value = true) {
    if (i != j) bits_[index(i, j)] = value ? 1 : 0;
  }
  bool any() const;
  std::size_t count() const;

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  int n_;
  std::vector<char> bits_;
};

/// Work counters for the pairwise scan.
struct CollisionStats {
  std::size_t pairs = 0;
  std::size_t prefiltered = 0;
  std::size_t segment_checks = 0;
};

struct CollisionOptions {
  /// Skip pairs whose ground start-to-goal lines are farther apart than the
  /// radius sum. Only sound for plans whose horizontal motion stays on that line.
  bool prefilter = true;
  /// Only test segment pairs in which both agents move horizontally.
  bool horizontal_only = false;
};

/// Horizontal distance at most the radius sum and vertical centre gap at most
/// the mean height (both inclusive).
bool cylinders_intersect(const Vec3& x_i, const Vec3& x_j, const Cylinder& c_i, const Cylinder& c_j);

/// Whether the two swept cylinders intersect at some instant of the common
/// time interval of the segments.
bool segment_pair_collides(const TrajectorySegment& seg_i, const TrajectorySegment& seg_j,
                           const Cylinder& c_i, const Cylinder& c_j);

/// Minimum Euclidean distance between closed segments [a0, a1] and [b0, b1].
double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

/// Indices of the first colliding segment pair, if any.
struct SegmentHit {
  std::size_t seg_i = 0;
  std::size_t seg_j = 0;
};

std::optional<SegmentHit> first_collision(const Trajectory& a, const Trajectory& b,
                                          const Cylinder& c_a, const Cylinder& c_b,
                                          bool horizontal_only = false);

/// Full pair test including the optional ground-line prefilter.
bool trajectories_collide(const Trajectory& a, const Trajectory& b, const Cylinder& c_a,
                          const Cylinder& c_b, const CollisionOptions& options = {},
                          CollisionStats* stats = nullptr);

CollisionFlags all_agents_collisions(std::span<const Trajectory> trajs,
                                     std::span<const Cylinder> cylinders,
                                     const CollisionOptions& options = {},
                                     CollisionStats* stats = nullptr);

/// Whether the last index in `active` collides with any other index in
/// `active`. Pairs not involving the last index are assumed already clear.
bool subset_collisions(std::span<const Trajectory> trajs, std::span<const int> active,
                       std::span<const Cylinder> cylinders, const CollisionOptions& options = {},
                       CollisionStats* stats = nullptr);

}  // namespace swarmplan

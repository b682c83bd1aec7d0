#include "swarmplan/collision.hpp"

#include <algorithm>
#include <cmath>

namespace swarmplan {

namespace {

bool is_horizontal(const TrajectorySegment& s) { return s.heading.z() == 0.0 && !s.p.is_zero(); }

Vec3 flat(const Vec3& v) { return {v.x(), v.y(), 0.0}; }

// Cached swept boxes, inflated by the cylinder extents, are disjoint.
bool boxes_apart(const TrajectorySegment& a, const TrajectorySegment& b, double r, double h) {
  return a.lower.x() - b.upper.x() > r || b.lower.x() - a.upper.x() > r ||
         a.lower.y() - b.upper.y() > r || b.lower.y() - a.upper.y() > r ||
         a.lower.z() - b.upper.z() > h || b.lower.z() - a.upper.z() > h;
}

// Horizontal mover i against an agent j that moves only vertically (or not at
// all) over the local window [0, span].
bool mixed_collides(const Vec3& anchor_i, const Vec3& h_i, const Polynomial& p_i,
                    const Vec3& anchor_j, const Vec3& h_j, const Polynomial& p_j, double span,
                    double r, double h) {
  const Polynomial gap = Polynomial::constant(anchor_j.z() - anchor_i.z()) + h_j.z() * p_j;
  const auto windows = intervals_in_range(gap, {0.0, span}, -h, h);
  const Vec3 offset = flat(anchor_j - anchor_i);
  for (const auto& w : windows) {
    if (min_separation(flat(h_i), p_i, Vec3::Zero(), Polynomial(), w, offset).distance <= r) return true;
  }
  return false;
}

}  // namespace

bool CollisionFlags::any() const {
  return std::any_of(bits_.begin(), bits_.end(), [](char b) { return b != 0; });
}

std::size_t CollisionFlags::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool cylinders_intersect(const Vec3& x_i, const Vec3& x_j, const Cylinder& c_i, const Cylinder& c_j) {
  return (x_j.head<2>() - x_i.head<2>()).norm() <= c_i.radius + c_j.radius &&
         std::abs(x_j.z() - x_i.z()) <= 0.5 * (c_i.height + c_j.height);
}

bool segment_pair_collides(const TrajectorySegment& seg_i, const TrajectorySegment& seg_j,
                           const Cylinder& c_i, const Cylinder& c_j) {
  const auto common = intersect(seg_i.interval, seg_j.interval);
  if (!common) return false;
  const double r = c_i.radius + c_j.radius;
  const double h = 0.5 * (c_i.height + c_j.height);
  if (boxes_apart(seg_i, seg_j, r, h)) return false;

  // Both polynomials re-expressed in time since the start of the common window.
  const double span = common->duration();
  const Polynomial p_i = seg_i.p.shifted(common->t0 - seg_i.interval.t0);
  const Polynomial p_j = seg_j.p.shifted(common->t0 - seg_j.interval.t0);
  const TimeInterval window{0.0, span};
  const Vec3 offset = seg_j.anchor - seg_i.anchor;

  const bool horz_i = is_horizontal(seg_i);
  const bool horz_j = is_horizontal(seg_j);
  if (horz_i && horz_j) {
    if (std::abs(offset.z()) > h) return false;
    return min_separation(flat(seg_i.heading), p_i, flat(seg_j.heading), p_j, window, flat(offset))
               .distance <= r;
  }
  if (!horz_i && !horz_j) {
    if (offset.head<2>().norm() > r) return false;
    const Vec3 vz(0.0, 0.0, offset.z());
    return min_separation(Vec3(0.0, 0.0, seg_i.heading.z()), p_i, Vec3(0.0, 0.0, seg_j.heading.z()),
                          p_j, window, vz)
               .distance <= h;
  }
  if (horz_i) {
    return mixed_collides(seg_i.anchor, seg_i.heading, p_i, seg_j.anchor, seg_j.heading, p_j, span, r, h);
  }
  return mixed_collides(seg_j.anchor, seg_j.heading, p_j, seg_i.anchor, seg_i.heading, p_i, span, r, h);
}

double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  const Vec3 d1 = a1 - a0;
  const Vec3 d2 = b1 - b0;
  const Vec3 r = a0 - b0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double eps = 1e-300;
  double s = 0.0;
  double t = 0.0;
  if (a <= eps && e <= eps) return r.norm();
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((a0 + s * d1) - (b0 + t * d2)).norm();
}

std::optional<SegmentHit> first_collision(const Trajectory& a, const Trajectory& b,
                                          const Cylinder& c_a, const Cylinder& c_b,
                                          bool horizontal_only) {
  // Segments are time-ordered, so a merge-style sweep visits only the
  // overlapping pairs.
  std::size_t start_j = 0;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const auto& si = a.segments[i];
    while (start_j < b.segments.size() && b.segments[start_j].interval.tf < si.interval.t0) ++start_j;
    for (std::size_t j = start_j; j < b.segments.size(); ++j) {
      const auto& sj = b.segments[j];
      if (sj.interval.t0 > si.interval.tf) break;
      if (horizontal_only && (si.kind != SegmentKind::Horizontal || sj.kind != SegmentKind::Horizontal)) {
        continue;
      }
      if (segment_pair_collides(si, sj, c_a, c_b)) return SegmentHit{i, j};
    }
  }
  return std::nullopt;
}

bool trajectories_collide(const Trajectory& a, const Trajectory& b, const Cylinder& c_a,
                          const Cylinder& c_b, const CollisionOptions& options,
                          CollisionStats* stats) {
  if (stats) ++stats->pairs;
  if (a.empty() || b.empty()) return false;
  if (options.prefilter) {
    const double d = segment_segment_distance(flat(a.start_position()), flat(a.end_position()),
                                              flat(b.start_position()), flat(b.end_position()));
    if (d > c_a.radius + c_b.radius) {
      if (stats) ++stats->prefiltered;
      return false;
    }
  }
  if (stats) ++stats->segment_checks;
  return first_collision(a, b, c_a, c_b, options.horizontal_only).has_value();
}

CollisionFlags all_agents_collisions(std::span<const Trajectory> trajs,
                                     std::span<const Cylinder> cylinders,
                                     const CollisionOptions& options, CollisionStats* stats) {
  if (trajs.size() != cylinders.size()) {
    throw Error(ErrorCode::InvalidInput, "one cylinder per trajectory required");
  }
  const int n = static_cast<int>(trajs.size());
  CollisionFlags flags(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (trajectories_collide(trajs[i], trajs[j], cylinders[i], cylinders[j], options, stats)) {
        flags.set(i, j);
      }
    }
  }
  return flags;
}

bool subset_collisions(std::span<const Trajectory> trajs, std::span<const int> active,
                       std::span<const Cylinder> cylinders, const CollisionOptions& options,
                       CollisionStats* stats) {
  if (active.size() < 2) return false;
  const int last = active.back();
  for (std::size_t k = 0; k + 1 < active.size(); ++k) {
    const int other = active[k];
    if (trajectories_collide(trajs[other], trajs[last], cylinders[other], cylinders[last], options,
                             stats)) {
      return true;
    }
  }
  return false;
}

}  // namespace swarmplan

#include "swarmplan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace swarmplan {

namespace {

// Evaluates a trajectory at nondecreasing times, advancing a segment cursor.
class Cursor {
 public:
  explicit Cursor(const Trajectory& traj) : traj_(&traj) {}

  Vec3 at(double t) {
    const auto& segs = traj_->segments;
    if (segs.empty()) return Vec3::Zero();
    if (t <= segs.front().interval.t0) return segs.front().start_position();
    if (t >= segs.back().interval.tf) return segs.back().end_position();
    while (k_ + 1 < segs.size() && segs[k_].interval.tf < t) ++k_;
    return segs[k_].position(t);
  }

 private:
  const Trajectory* traj_;
  std::size_t k_ = 0;
};

}  // namespace

double clearance(const Vec3& x_i, const Vec3& x_j, const Cylinder& c_i, const Cylinder& c_j) {
  const double horizontal = (x_j.head<2>() - x_i.head<2>()).norm() - (c_i.radius + c_j.radius);
  const double vertical = std::abs(x_j.z() - x_i.z()) - 0.5 * (c_i.height + c_j.height);
  return std::max(horizontal, vertical);
}

Vec3 position_at(const Trajectory& traj, double t) { return Cursor(traj).at(t); }

VerifyReport verify_plan(std::span<const Trajectory> trajs, std::span<const Cylinder> cylinders,
                         double dt, double window) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidInput, "sampling step must be positive");
  if (trajs.size() != cylinders.size()) {
    throw Error(ErrorCode::InvalidInput, "one cylinder per trajectory required");
  }
  const int n = static_cast<int>(trajs.size());
  VerifyReport report;
  report.agent_min_clearance.assign(n, kInf);
  double t_begin = kInf;
  double t_end = -kInf;
  double r_max = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!trajs[i].empty()) {
      t_begin = std::min(t_begin, trajs[i].start_time());
      t_end = std::max(t_end, trajs[i].end_time());
    }
    r_max = std::max(r_max, cylinders[i].radius);
  }
  if (n < 2 || t_begin > t_end) return report;
  const double reach = 2.0 * r_max + window;

  std::vector<Cursor> cursors;
  cursors.reserve(n);
  for (const auto& t : trajs) cursors.emplace_back(t);
  std::vector<Vec3> pos(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_begin) / dt));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = std::min(t_begin + static_cast<double>(k) * dt, t_end);
    for (int i = 0; i < n; ++i) pos[i] = cursors[i].at(t);
    // Positions change little per step, so insertion sort is near linear.
    for (int a = 1; a < n; ++a) {
      const int v = order[a];
      int b = a - 1;
      while (b >= 0 && pos[order[b]].x() > pos[v].x()) {
        order[b + 1] = order[b];
        --b;
      }
      order[b + 1] = v;
    }
    for (int a = 0; a < n; ++a) {
      const int i = order[a];
      for (int b = a + 1; b < n && pos[order[b]].x() - pos[i].x() <= reach; ++b) {
        const int j = order[b];
        const double c = clearance(pos[i], pos[j], cylinders[i], cylinders[j]);
        report.agent_min_clearance[i] = std::min(report.agent_min_clearance[i], c);
        report.agent_min_clearance[j] = std::min(report.agent_min_clearance[j], c);
        if (c < report.closest.clearance) report.closest = {std::min(i, j), std::max(i, j), t, c};
        if (c <= 0.0) {
          ++report.colliding_samples;
          if (!report.first_collision) report.first_collision = SampledContact{std::min(i, j), std::max(i, j), t, c};
        }
      }
    }
    ++report.samples;
  }
  return report;
}

}  // namespace swarmplan

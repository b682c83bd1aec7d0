#pragma once

// Straight-line piecewise-polynomial subtrajectories: a rest-to-rest
// acceleration polynomial solved once from endpoint derivative conditions,
// then rescaled per move so that speed and the higher derivatives respect
// their limits.

#include "swarmplan/common.hpp"
#include "swarmplan/polycore.hpp"

#include <Eigen/Core>

#include <vector>

namespace swarmplan {

enum class Direction { Horizontal, Vertical };
enum class SegmentKind { Horizontal, Vertical, Wait };

const char* to_string(SegmentKind kind);

/// Magnitude limits on the time derivatives of position, starting with speed:
/// delta[0] m/s, delta[1] m/s^2, delta[2] m/s^3, ...
struct DerivativeLimits {
  std::vector<double> delta;

  double speed() const { return delta.at(0); }
  int count() const { return static_cast<int>(delta.size()); }
  void validate(int required) const;
};

/// Limits used throughout the simulations (speed, acceleration, jerk).
inline DerivativeLimits default_limits() { return {{0.2, 0.5, 10.0}}; }

/// Rest-to-rest acceleration polynomial on [0, duration]: p(0) = 0 with the
/// first q-1 derivatives zero, p(duration) = path_length, pdot(duration) =
/// terminal_speed and the remaining terminal derivatives zero.
struct BasePolynomial {
  Polynomial p;
  double duration = 0.0;
  double terminal_speed = 0.0;
  double path_length = 0.0;
};

/// How the higher-derivative stretch factor is applied to an already
/// speed-scaled acceleration polynomial.
enum class StretchPolicy {
  /// Use the factor as computed; at least one higher derivative becomes tight.
  Exact,
  /// Never let the factor drop below one, i.e. never speed up.
  ClampAtOne,
};

/// Endpoint-condition matrix (2q x 2q, with 2q = degree + 1) mapping monomial
/// coefficients to [p(0), p'(0), ..., p^(q-1)(0), p(T), ..., p^(q-1)(T)].
/// Throws IllPosed when the matrix is numerically singular.
Eigen::MatrixXd build_endpoint_matrix(int degree, double duration);

/// Solves the endpoint system with duration 2 x_f / v_f, which keeps position
/// and speed monotone on [0, duration] for degree 7.
BasePolynomial solve_base_polynomial(double x_f, double v_f, int degree);

/// Temporal scaling p(t) <- p(c t), c = delta1 / peak speed, so the peak speed
/// becomes delta1. Path length is kept.
BasePolynomial scale_to_terminal_speed(const BasePolynomial& bp, double delta1);

/// p(t) <- psi p(t / psi), with psi the largest of
/// (max|p^(k)| / delta_k)^(1/(k-1)) over k = 2..q-1. Terminal speed is kept.
BasePolynomial scale_to_higher_derivatives(const BasePolynomial& bp, const DerivativeLimits& limits,
                                           StretchPolicy policy = StretchPolicy::Exact);

/// One polynomial piece: position(t) = anchor + p(t - interval.t0) * heading.
struct TrajectorySegment {
  Polynomial p;
  Vec3 heading = Vec3::UnitZ();
  Vec3 anchor = Vec3::Zero();
  TimeInterval interval;
  SegmentKind kind = SegmentKind::Wait;
  // Axis-aligned bounds of the centre positions swept over the interval.
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Zero();

  Vec3 position(double t) const;
  /// k-th time derivative of position at global time t (k >= 1).
  Vec3 derivative(double t, int k) const;
  Vec3 start_position() const { return anchor + p(0.0) * heading; }
  Vec3 end_position() const { return anchor + p(interval.duration()) * heading; }
  double duration() const { return interval.duration(); }
};

/// Builds a segment and its cached bounds.
TrajectorySegment make_segment(Polynomial p, const Vec3& heading, const Vec3& anchor,
                               const TimeInterval& interval, SegmentKind kind);

/// Stationary segment (zero polynomial, vertical heading) at pos.
TrajectorySegment make_wait_segment(const Vec3& pos, const TimeInterval& iv);

struct Trajectory {
  int agent_id = 0;
  std::vector<TrajectorySegment> segments;

  bool empty() const { return segments.empty(); }
  double start_time() const { return segments.front().interval.t0; }
  double end_time() const { return segments.back().interval.tf; }
  Vec3 start_position() const { return segments.front().start_position(); }
  Vec3 end_position() const { return segments.back().end_position(); }

  void append(const std::vector<TrajectorySegment>& more);
  void append(const TrajectorySegment& seg) { segments.push_back(seg); }
  /// Copy with every interval moved by dt.
  Trajectory shifted(double dt) const;
};

struct TrajectorySample {
  Vec3 position = Vec3::Zero();
  /// derivatives[k-1] is the k-th time derivative.
  std::vector<Vec3> derivatives;
};

/// Position and the first max_order derivatives at global time t. Throws
/// OutOfDomain outside [start_time, end_time].
TrajectorySample sample(const Trajectory& traj, double t, int max_order = 3);

/// Accel (+ constant speed) + decel segments joining start and end along a
/// straight horizontal or vertical line, starting at global time t_start.
/// `accel` must already be scaled to the limits (see TrajectoryGenerator).
std::vector<TrajectorySegment> make_subtrajectory(const Vec3& start, const Vec3& end,
                                                  const DerivativeLimits& limits,
                                                  const BasePolynomial& accel, double t_start);

/// Holds the scaled acceleration polynomials for both directions, computed
/// once, and builds subtrajectories from them. Immutable after construction.
class TrajectoryGenerator {
 public:
  TrajectoryGenerator(DerivativeLimits horizontal, DerivativeLimits vertical, int degree = 7,
                      StretchPolicy policy = StretchPolicy::Exact);

  int degree() const { return degree_; }
  StretchPolicy policy() const { return policy_; }
  const DerivativeLimits& limits(Direction dir) const;
  const BasePolynomial& acceleration(Direction dir) const;

  /// Duration of make_subtrajectory for a straight move of the given length,
  /// evaluated in closed form from cached derivative maxima. Zero for a zero
  /// length.
  double duration(double length, Direction dir) const;

  /// Direction is inferred from the displacement.
  std::vector<TrajectorySegment> make_subtrajectory(const Vec3& start, const Vec3& end,
                                                    double t_start) const;

 private:
  struct Profile {
    DerivativeLimits limits;
    BasePolynomial accel;
    std::vector<double> maxima;  // max |accel^(k)| on [0, T], k = 1..q-1
  };

  const Profile& profile(Direction dir) const {
    return dir == Direction::Horizontal ? horizontal_ : vertical_;
  }
  Profile build_profile(DerivativeLimits limits) const;

  int degree_;
  StretchPolicy policy_;
  Profile horizontal_;
  Profile vertical_;
};

/// Direction of a displacement; throws DegenerateDisplacement or MixedHeading.
Direction classify_displacement(const Vec3& displacement);

}  // namespace swarmplan

#include "swarmplan/trajgen.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace swarmplan {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kDegenerateLength = 1e-12;

int half_order(int degree) { return (degree + 1) / 2; }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_degree(int degree) {
  if (degree < 1 || degree % 2 == 0) {
    throw Error(ErrorCode::InvalidInput, "polynomial degree must be odd and positive, got " +
                                             std::to_string(degree));
  }
}

double max_abs_derivative(const Polynomial& p, int k, double T) {
  return max_abs_on_interval(p.derivative(k), {0.0, T});
}

}  // namespace

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Horizontal: return "horizontal";
    case SegmentKind::Vertical: return "vertical";
    case SegmentKind::Wait: return "wait";
  }
  return "unknown";
}

void DerivativeLimits::validate(int required) const {
  if (count() < required) {
    throw Error(ErrorCode::InvalidInput, "need " + std::to_string(required) +
                                             " derivative limits, got " + std::to_string(count()));
  }
  for (double d : delta) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw Error(ErrorCode::InvalidInput, "derivative limits must be positive and finite");
    }
  }
}

Eigen::MatrixXd build_endpoint_matrix(int degree, double duration) {
  check_degree(degree);
  if (!(duration > 0.0)) throw Error(ErrorCode::InvalidInput, "duration must be positive");
  const int q = half_order(degree);
  const int n = 2 * q;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < q; ++r) A(r, r) = factorial(r);
  for (int r = 0; r < q; ++r) {
    // Row q + r holds the r-th derivative evaluated at t = duration.
    for (int j = r; j < n; ++j) {
      A(q + r, j) = factorial(j) / factorial(j - r) * std::pow(duration, j - r);
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (!(smallest > 0.0) || s(0) / smallest > kMaxCondition) {
    throw Error(ErrorCode::IllPosed, "endpoint matrix is numerically singular");
  }
  return A;
}

BasePolynomial solve_base_polynomial(double x_f, double v_f, int degree) {
  if (!(x_f > 0.0) || !(v_f > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "terminal position and speed must be positive");
  }
  check_degree(degree);
  const int q = half_order(degree);
  const double T = 2.0 * x_f / v_f;
  // Solve on unit time, then map s = t / T so the system stays well conditioned for any T.
  const Eigen::MatrixXd A = build_endpoint_matrix(degree, 1.0);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * q);
  b(q) = x_f;
  if (q > 1) b(q + 1) = v_f * T;
  Eigen::VectorXd alpha = A.fullPivLu().solve(b);
  // The leading q coefficients are pinned by the zero initial conditions.
  for (int i = 0; i < q; ++i) alpha(i) = 0.0;
  for (int j = q; j < alpha.size(); ++j) alpha(j) /= std::pow(T, j);

  BasePolynomial bp;
  bp.p = Polynomial(std::vector<double>(alpha.data(), alpha.data() + alpha.size()));
  bp.duration = T;
  bp.path_length = x_f;
  bp.terminal_speed = q > 1 ? v_f : x_f / T;
  return bp;
}

BasePolynomial scale_to_terminal_speed(const BasePolynomial& bp, double delta1) {
  if (!(delta1 > 0.0)) throw Error(ErrorCode::InvalidInput, "speed limit must be positive");
  const double peak = max_abs_derivative(bp.p, 1, bp.duration);
  const double c = delta1 / peak;
  if (std::abs(c - 1.0) <= 1e-12) return bp;
  BasePolynomial out;
  out.p = bp.p.time_scaled(c);
  out.duration = bp.duration / c;
  out.path_length = bp.path_length;
  out.terminal_speed = bp.terminal_speed * c;
  return out;
}

BasePolynomial scale_to_higher_derivatives(const BasePolynomial& bp, const DerivativeLimits& limits,
                                           StretchPolicy policy) {
  const int q = half_order(bp.p.degree() | 1);
  double psi = 0.0;
  for (int k = 2; k <= std::min(q - 1, limits.count()); ++k) {
    const double peak = max_abs_derivative(bp.p, k, bp.duration);
    psi = std::max(psi, std::pow(peak / limits.delta[k - 1], 1.0 / (k - 1)));
  }
  if (policy == StretchPolicy::ClampAtOne) psi = std::max(psi, 1.0);
  if (psi == 0.0 || psi == 1.0) return bp;
  BasePolynomial out;
  out.p = psi * bp.p.time_scaled(1.0 / psi);
  out.duration = bp.duration * psi;
  out.path_length = bp.path_length * psi;
  out.terminal_speed = bp.terminal_speed;
  return out;
}

Vec3 TrajectorySegment::position(double t) const {
  return anchor + p(t - interval.t0) * heading;
}

Vec3 TrajectorySegment::derivative(double t, int k) const {
  return p.derivative(k)(t - interval.t0) * heading;
}

TrajectorySegment make_segment(Polynomial p, const Vec3& heading, const Vec3& anchor,
                               const TimeInterval& interval, SegmentKind kind) {
  TrajectorySegment seg;
  seg.p = std::move(p);
  seg.heading = heading;
  seg.anchor = anchor;
  seg.interval = interval;
  seg.kind = kind;
  double lo = seg.p(0.0);
  double hi = lo;
  if (!seg.p.is_zero() && interval.duration() > 0.0) {
    const TimeInterval local{0.0, interval.duration()};
    lo = minimize_on_interval(seg.p, local).value;
    hi = maximize_on_interval(seg.p, local).value;
  }
  const Vec3 a = anchor + lo * heading;
  const Vec3 b = anchor + hi * heading;
  seg.lower = a.cwiseMin(b);
  seg.upper = a.cwiseMax(b);
  return seg;
}

TrajectorySegment make_wait_segment(const Vec3& pos, const TimeInterval& iv) {
  if (!(iv.tf >= iv.t0)) throw Error(ErrorCode::InvalidInput, "wait interval is reversed");
  return make_segment(Polynomial(), Vec3::UnitZ(), pos, iv, SegmentKind::Wait);
}

void Trajectory::append(const std::vector<TrajectorySegment>& more) {
  segments.insert(segments.end(), more.begin(), more.end());
}

Trajectory Trajectory::shifted(double dt) const {
  Trajectory out = *this;
  for (auto& seg : out.segments) {
    seg.interval.t0 += dt;
    seg.interval.tf += dt;
  }
  return out;
}

TrajectorySample sample(const Trajectory& traj, double t, int max_order) {
  if (traj.empty() || t < traj.start_time() || t > traj.end_time()) {
    throw Error(ErrorCode::OutOfDomain, "time " + std::to_string(t) + " outside trajectory");
  }
  // Last segment whose start is not after t.
  auto it = std::upper_bound(traj.segments.begin(), traj.segments.end(), t,
                             [](double v, const TrajectorySegment& s) { return v < s.interval.t0; });
  const TrajectorySegment& seg = *std::prev(it);
  TrajectorySample out;
  out.position = seg.position(t);
  Polynomial d = seg.p;
  for (int k = 1; k <= max_order; ++k) {
    d = d.derivative();
    out.derivatives.push_back(d(t - seg.interval.t0) * seg.heading);
  }
  return out;
}

Direction classify_displacement(const Vec3& displacement) {
  const double length = displacement.norm();
  if (!(length >= kDegenerateLength)) {
    throw Error(ErrorCode::DegenerateDisplacement, "zero-length move");
  }
  const double tol = 1e-12 * std::max(1.0, length);
  const double horizontal = displacement.head<2>().norm();
  if (std::abs(displacement.z()) <= tol) return Direction::Horizontal;
  if (horizontal <= tol) return Direction::Vertical;
  throw Error(ErrorCode::MixedHeading, "move is neither horizontal nor vertical");
}

std::vector<TrajectorySegment> make_subtrajectory(const Vec3& start, const Vec3& end,
                                                  const DerivativeLimits& limits,
                                                  const BasePolynomial& accel, double t_start) {
  const Vec3 d = end - start;
  const Direction dir = classify_displacement(d);
  Vec3 heading;
  double length;
  if (dir == Direction::Horizontal) {
    length = d.head<2>().norm();
    heading = Vec3(d.x() / length, d.y() / length, 0.0);
  } else {
    length = std::abs(d.z());
    heading = Vec3(0.0, 0.0, d.z() > 0.0 ? 1.0 : -1.0);
  }
  const SegmentKind kind = dir == Direction::Horizontal ? SegmentKind::Horizontal : SegmentKind::Vertical;
  const double speed = limits.speed();

  std::vector<TrajectorySegment> out;
  if (accel.p.degree() <= 1) {
    const double T = length / speed;
    out.push_back(make_segment(Polynomial{0.0, speed}, heading, start, {t_start, t_start + T}, kind));
    return out;
  }

  Polynomial a = accel.p;
  double Ta = accel.duration;
  double La = accel.p(Ta);
  double cruise = 0.0;
  if (2.0 * La < length) {
    cruise = (length - 2.0 * La) / speed;
  } else {
    const double s = length / (2.0 * La);
    const Polynomial shrunk = s * a;
    const int q = half_order(a.degree() | 1);
    double psi = 0.0;
    for (int k = 1; k <= std::min(q - 1, limits.count()); ++k) {
      const double peak = max_abs_derivative(shrunk, k, Ta);
      psi = std::max(psi, std::pow(peak / limits.delta[k - 1], 1.0 / k));
    }
    a = shrunk.time_scaled(1.0 / psi);
    Ta *= psi;
    La = a(Ta);
  }

  double t = t_start;
  out.push_back(make_segment(a, heading, start, {t, t + Ta}, kind));
  t += Ta;
  if (cruise > 0.0) {
    out.push_back(make_segment(Polynomial{0.0, speed}, heading, start + La * heading,
                               {t, t + cruise}, kind));
    t += cruise;
  }
  // Mirror of the acceleration: p_dec(tau) = La - a(Ta - tau), anchored so it
  // ends on `end`.
  Polynomial dec = Polynomial::constant(La) - a.compose_affine(-1.0, Ta);
  out.push_back(make_segment(std::move(dec), heading, end - La * heading, {t, t + Ta}, kind));
  return out;
}

TrajectoryGenerator::TrajectoryGenerator(DerivativeLimits horizontal, DerivativeLimits vertical,
                                         int degree, StretchPolicy policy)
    : degree_(degree), policy_(policy) {
  check_degree(degree);
  horizontal_ = build_profile(std::move(horizontal));
  vertical_ = build_profile(std::move(vertical));
}

TrajectoryGenerator::Profile TrajectoryGenerator::build_profile(DerivativeLimits limits) const {
  const int q = half_order(degree_);
  limits.validate(std::max(1, q - 1));
  Profile prof;
  prof.limits = std::move(limits);
  const double speed = prof.limits.speed();
  BasePolynomial bp = solve_base_polynomial(1.0, speed, degree_);
  bp = scale_to_terminal_speed(bp, speed);
  bp = scale_to_higher_derivatives(bp, prof.limits, policy_);
  prof.accel = bp;
  for (int k = 1; k <= q - 1; ++k) prof.maxima.push_back(max_abs_derivative(bp.p, k, bp.duration));
  return prof;
}

const DerivativeLimits& TrajectoryGenerator::limits(Direction dir) const {
  return profile(dir).limits;
}

const BasePolynomial& TrajectoryGenerator::acceleration(Direction dir) const {
  return profile(dir).accel;
}

double TrajectoryGenerator::duration(double length, Direction dir) const {
  if (length <= 0.0) return 0.0;
  const Profile& prof = profile(dir);
  const double speed = prof.limits.speed();
  if (degree_ == 1) return length / speed;
  const double Ta = prof.accel.duration;
  const double La = prof.accel.p(Ta);
  if (2.0 * La < length) return 2.0 * Ta + (length - 2.0 * La) / speed;
  const double s = length / (2.0 * La);
  double psi = 0.0;
  for (std::size_t k = 1; k <= prof.maxima.size(); ++k) {
    psi = std::max(psi, std::pow(s * prof.maxima[k - 1] / prof.limits.delta[k - 1], 1.0 / k));
  }
  return 2.0 * Ta * psi;
}

std::vector<TrajectorySegment> TrajectoryGenerator::make_subtrajectory(const Vec3& start,
                                                                       const Vec3& end,
                                                                       double t_start) const {
  const Profile& prof = profile(classify_displacement(end - start));
  return swarmplan::make_subtrajectory(start, end, prof.limits, prof.accel, t_start);
}

}  // namespace swarmplan

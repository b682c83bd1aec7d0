#pragma once

// Real polynomials in the monomial basis and the root-based queries built on
// them: extrema over an interval, level-set intervals and the minimum
// separation of two points moving along straight lines.

#include "swarmplan/common.hpp"

#include <initializer_list>
#include <limits>
#include <optional>
#include <vector>

namespace swarmplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// p(t) = sum_i coeffs[i] * t^i.
///
/// Trailing coefficients with magnitude at most 1e-12 * max|coeff| are dropped
/// on construction so that degree() reflects the numerically meaningful
/// degree. The zero polynomial is stored as {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs) : Polynomial(std::vector<double>(coeffs)) {}

  static Polynomial constant(double c) { return Polynomial({c}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  /// Coefficient of t^i; zero above the degree.
  double operator[](int i) const { return i <= degree() ? coeffs_[i] : 0.0; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  double max_abs_coeff() const;

  double operator()(double t) const;

  Polynomial derivative(int k = 1) const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;
  /// q(t) = p(a * t + b).
  Polynomial compose_affine(double a, double b) const;
  /// q(t) = p(c * t).
  Polynomial time_scaled(double c) const { return compose_affine(c, 0.0); }
  /// q(t) = p(t + c).
  Polynomial shifted(double c) const { return compose_affine(1.0, c); }

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void trim();

  std::vector<double> coeffs_;
};

/// Closed interval [t0, tf]; either end may be infinite.
struct TimeInterval {
  double t0 = 0.0;
  double tf = 0.0;

  double duration() const { return tf - t0; }
  bool contains(double t) const { return t >= t0 && t <= tf; }
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

std::optional<TimeInterval> intersect(const TimeInterval& a, const TimeInterval& b);

inline double evaluate(const Polynomial& p, double t) { return p(t); }
inline Polynomial differentiate(const Polynomial& p, int k) { return p.derivative(k); }

/// Distinct real roots in ascending order, from the eigenvalues of the
/// balanced companion matrix. Throws ErrorCode::ZeroPolynomial for p == 0.
std::vector<double> real_roots(const Polynomial& p);

struct Extremum {
  double value = 0.0;
  double t = 0.0;
};

/// Global minimum over iv, taken among the endpoints and the real stationary
/// points inside iv.
Extremum minimize_on_interval(const Polynomial& p, const TimeInterval& iv);
Extremum maximize_on_interval(const Polynomial& p, const TimeInterval& iv);
/// max |p(t)| over iv.
double max_abs_on_interval(const Polynomial& p, const TimeInterval& iv);

/// Maximal intervals of the real line where p(t) >= lo, ascending. Unbounded
/// ends use +/-kInf. An identically-equal polynomial counts as above.
std::vector<TimeInterval> intervals_above(const Polynomial& p, double lo);
/// Maximal intervals where p(t) <= hi.
std::vector<TimeInterval> intervals_below(const Polynomial& p, double hi);
/// {t in iv : lo <= p(t) <= hi} as disjoint ascending intervals. Single-point
/// intervals are kept. lo may be -kInf and hi may be +kInf.
std::vector<TimeInterval> intervals_in_range(const Polynomial& p, const TimeInterval& iv, double lo,
                                             double hi);

struct Separation {
  double distance = 0.0;
  double t = 0.0;
};

/// Squared norm of offset + p_j(t) h_j - p_i(t) h_i as a single polynomial.
Polynomial squared_separation(const Vec3& h_i, const Polynomial& p_i, const Vec3& h_j,
                              const Polynomial& p_j, const Vec3& offset = Vec3::Zero());

/// Minimum over iv of || offset + p_j(t) h_j - p_i(t) h_i ||. Lower-dimensional
/// problems are handled by zeroing the unused heading/offset components.
Separation min_separation(const Vec3& h_i, const Polynomial& p_i, const Vec3& h_j,
                          const Polynomial& p_j, const TimeInterval& iv,
                          const Vec3& offset = Vec3::Zero());

}  // namespace swarmplan

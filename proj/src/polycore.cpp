#include "swarmplan/polycore.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace swarmplan {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::IllPosed: return "IllPosed";
    case ErrorCode::DegenerateDisplacement: return "DegenerateDisplacement";
    case ErrorCode::MixedHeading: return "MixedHeading";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::IterationGuard: return "IterationGuard";
    case ErrorCode::InfeasibleDensity: return "InfeasibleDensity";
    case ErrorCode::SamplingTimeout: return "SamplingTimeout";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace {

constexpr double kTrimRelative = 1e-12;
constexpr double kImagRelative = 1e-9;
constexpr double kDedupRelative = 1e-8;

// Horner evaluation together with the running bound sum |a_i| |t|^i used to
// judge whether a residual is at rounding level.
double evaluate_with_bound(const std::vector<double>& c, double t, double* bound) {
  double v = 0.0;
  double b = 0.0;
  const double at = std::abs(t);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    v = v * t + *it;
    b = b * at + std::abs(*it);
  }
  *bound = b;
  return v;
}

// Parlett-Reinsch style diagonal balancing, powers of two only.
void balance(Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double row = m.row(i).lpNorm<1>() - std::abs(m(i, i));
      const double col = m.col(i).lpNorm<1>() - std::abs(m(i, i));
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double f = std::ldexp(1.0, exponent);
      if (col * f + row / f < 0.95 * (col + row)) {
        m.col(i) *= f;
        m.row(i) /= f;
        changed = true;
      }
    }
  }
}

std::vector<TimeInterval> merge_touching(std::vector<TimeInterval> in) {
  std::sort(in.begin(), in.end(), [](const TimeInterval& a, const TimeInterval& b) {
    return a.t0 < b.t0 || (a.t0 == b.t0 && a.tf < b.tf);
  });
  std::vector<TimeInterval> out;
  for (const auto& iv : in) {
    if (!out.empty() && iv.t0 <= out.back().tf) {
      out.back().tf = std::max(out.back().tf, iv.tf);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  trim();
}

void Polynomial::trim() {
  const double eps = kTrimRelative * max_abs_coeff();
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= eps) coeffs_.pop_back();
  if (coeffs_.size() == 1 && std::abs(coeffs_[0]) == 0.0) coeffs_[0] = 0.0;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::operator()(double t) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
  return v;
}

Polynomial Polynomial::derivative(int k) const {
  if (k <= 0) return *this;
  if (k > degree()) return Polynomial();
  std::vector<double> out(coeffs_.size() - k);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double f = 1.0;
    for (int j = 0; j < k; ++j) f *= static_cast<double>(i + k - j);
    out[i] = coeffs_[i + k] * f;
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> out(coeffs_.size() + 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::compose_affine(double a, double b) const {
  // Horner over polynomials: q <- q * (a t + b) + c_i.
  std::vector<double> q{coeffs_.back()};
  q.reserve(coeffs_.size());
  for (int i = degree() - 1; i >= 0; --i) {
    q.push_back(0.0);
    for (std::size_t j = q.size() - 1; j > 0; --j) q[j] = q[j] * b + q[j - 1] * a;
    q[0] = q[0] * b + coeffs_[i];
  }
  return Polynomial(std::move(q));
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(out));
}

std::optional<TimeInterval> intersect(const TimeInterval& a, const TimeInterval& b) {
  const double lo = std::max(a.t0, b.t0);
  const double hi = std::min(a.tf, b.tf);
  if (lo > hi) return std::nullopt;
  return TimeInterval{lo, hi};
}

std::vector<double> real_roots(const Polynomial& p) {
  if (p.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "every t is a root of the zero polynomial");
  std::vector<double> c = p.coeffs();
  std::vector<double> roots;

  // Exact roots at the origin are split off before the eigensolve.
  std::size_t zeros = 0;
  while (zeros + 1 < c.size() && c[zeros] == 0.0) ++zeros;
  if (zeros > 0) {
    roots.push_back(0.0);
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
  }

  const int d = static_cast<int>(c.size()) - 1;
  if (d == 1) {
    roots.push_back(-c[0] / c[1]);
  } else if (d >= 2) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
    balance(companion);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& eig = solver.eigenvalues();

    for (Eigen::Index k = 0; k < eig.size(); ++k) {
      double x = eig[k].real();
      const double y = eig[k].imag();
      if (!std::isfinite(x)) continue;
      double bound = 0.0;
      const double residual = std::abs(evaluate_with_bound(c, x, &bound));
      // A conjugate pair this close to the axis cannot be told apart from a
      // repeated real root at working precision.
      const bool real_enough = std::abs(y) <= kImagRelative * std::max(1.0, std::abs(x)) ||
                               residual <= 64.0 * std::numeric_limits<double>::epsilon() * bound;
      if (!real_enough) continue;
      // Newton polish, kept only while the residual improves.
      double best = residual;
      for (int it = 0; it < 4 && best > 0.0; ++it) {
        double dv = 0.0;
        double v = 0.0;
        for (auto r = c.rbegin(); r != c.rend(); ++r) {
          dv = dv * x + v;
          v = v * x + *r;
        }
        if (dv == 0.0) break;
        const double xn = x - v / dv;
        double bn = 0.0;
        const double rn = std::abs(evaluate_with_bound(c, xn, &bn));
        if (!(rn < best)) break;
        x = xn;
        best = rn;
      }
      roots.push_back(x);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i + 1;
    double sum = roots[i];
    while (j < roots.size() && roots[j] - roots[j - 1] <= kDedupRelative * (1.0 + std::abs(roots[j - 1]))) {
      sum += roots[j];
      ++j;
    }
    // An exact zero root stays exact.
    bool has_zero = false;
    for (std::size_t k = i; k < j; ++k) has_zero = has_zero || roots[k] == 0.0;
    merged.push_back(has_zero ? 0.0 : sum / static_cast<double>(j - i));
    i = j;
  }
  return merged;
}

Extremum minimize_on_interval(const Polynomial& p, const TimeInterval& iv) {
  Extremum best{p(iv.t0), iv.t0};
  auto consider = [&](double t) {
    const double v = p(t);
    if (v < best.value) best = {v, t};
  };
  const Polynomial dp = p.derivative();
  if (!dp.is_zero()) {
    for (double r : real_roots(dp)) {
      if (r > iv.t0 && r < iv.tf) consider(r);
    }
  }
  consider(iv.tf);
  return best;
}

Extremum maximize_on_interval(const Polynomial& p, const TimeInterval& iv) {
  Extremum e = minimize_on_interval(-p, iv);
  e.value = -e.value;
  return e;
}

double max_abs_on_interval(const Polynomial& p, const TimeInterval& iv) {
  return std::max(maximize_on_interval(p, iv).value, -minimize_on_interval(p, iv).value);
}

std::vector<TimeInterval> intervals_above(const Polynomial& p, double lo) {
  if (lo == -kInf) return {{-kInf, kInf}};
  if (lo == kInf) return {};
  const Polynomial shifted = p - Polynomial::constant(lo);
  if (shifted.is_zero()) return {{-kInf, kInf}};
  const std::vector<double> roots = real_roots(shifted);
  if (roots.empty()) {
    if (p(0.0) >= lo) return {{-kInf, kInf}};
    return {};
  }

  std::vector<TimeInterval> cells;
  std::vector<bool> root_covered(roots.size(), false);
  const std::size_t m = roots.size();
  for (std::size_t i = 0; i <= m; ++i) {
    double lwr;
    double upr;
    double probe;
    if (i == 0) {
      lwr = -kInf;
      upr = roots[0];
      probe = roots[0] - 1.0;
    } else if (i == m) {
      lwr = roots[m - 1];
      upr = kInf;
      probe = roots[m - 1] + 1.0;
    } else {
      lwr = roots[i - 1];
      upr = roots[i];
      probe = 0.5 * (lwr + upr);
    }
    if (p(probe) >= lo) {
      cells.push_back({lwr, upr});
      if (i > 0) root_covered[i - 1] = true;
      if (i < m) root_covered[i] = true;
    }
  }
  // p equals lo at a root, so an isolated tangency still satisfies p >= lo.
  for (std::size_t i = 0; i < m; ++i) {
    if (!root_covered[i]) cells.push_back({roots[i], roots[i]});
  }
  return merge_touching(std::move(cells));
}

std::vector<TimeInterval> intervals_below(const Polynomial& p, double hi) {
  return intervals_above(-p, -hi);
}

std::vector<TimeInterval> intervals_in_range(const Polynomial& p, const TimeInterval& iv, double lo,
                                             double hi) {
  const auto above = intervals_above(p, lo);
  const auto below = intervals_below(p, hi);
  std::vector<TimeInterval> out;
  for (const auto& a : above) {
    for (const auto& b : below) {
      if (auto ab = intersect(a, b)) {
        if (auto k = intersect(*ab, iv)) out.push_back(*k);
      }
    }
  }
  return merge_touching(std::move(out));
}

Polynomial squared_separation(const Vec3& h_i, const Polynomial& p_i, const Vec3& h_j,
                              const Polynomial& p_j, const Vec3& offset) {
  Polynomial sum;
  for (int c = 0; c < 3; ++c) {
    if (h_i[c] == 0.0 && h_j[c] == 0.0 && offset[c] == 0.0) continue;
    const Polynomial r = Polynomial::constant(offset[c]) + h_j[c] * p_j - h_i[c] * p_i;
    sum += r * r;
  }
  return sum;
}

Separation min_separation(const Vec3& h_i, const Polynomial& p_i, const Vec3& h_j,
                          const Polynomial& p_j, const TimeInterval& iv, const Vec3& offset) {
  const Extremum e = minimize_on_interval(squared_separation(h_i, p_i, h_j, p_j, offset), iv);
  return {std::sqrt(std::max(0.0, e.value)), e.t};
}

}  // namespace swarmplan

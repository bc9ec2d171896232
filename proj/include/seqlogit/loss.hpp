#pragma once

// Logistic loss, its Maclaurin quadratic surrogate and tangent-line
// piecewise-linear underestimators.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace seqlogit {

/// f(v) = log(1 + exp(-v)), evaluated without overflow for any finite v.
template <std::floating_point Scalar>
Scalar logistic_loss(Scalar v) {
  using std::exp;
  using std::log1p;
  if (v >= Scalar(0)) return log1p(exp(-v));
  return -v + log1p(exp(v));
}

/// f'(v) = -1 / (1 + exp(v)), always in (-1, 0).
template <std::floating_point Scalar>
Scalar logistic_loss_grad(Scalar v) {
  using std::exp;
  if (v >= Scalar(0)) {
    const Scalar e = exp(-v);
    return -e / (Scalar(1) + e);
  }
  return Scalar(-1) / (Scalar(1) + exp(v));
}

/// Logistic sigmoid 1 / (1 + exp(-v)).
template <std::floating_point Scalar>
Scalar sigmoid(Scalar v) {
  using std::exp;
  if (v >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-v));
  const Scalar e = exp(v);
  return e / (Scalar(1) + e);
}

/// f''(v) = sigma(v) (1 - sigma(v)).
template <std::floating_point Scalar>
Scalar logistic_loss_curv(Scalar v) {
  using std::abs;
  using std::exp;
  // symmetric in v; evaluate on the negative side to keep exp() small
  const Scalar e = exp(-abs(v));
  return e / ((Scalar(1) + e) * (Scalar(1) + e));
}

/// Second-order Maclaurin expansion of the logistic loss around 0.
template <std::floating_point Scalar>
Scalar quad_loss(Scalar v) {
  return v * v / Scalar(8) - v / Scalar(2) + std::numbers::ln2_v<Scalar>;
}

template <std::floating_point Scalar>
Scalar quad_loss_grad(Scalar v) {
  return v / Scalar(4) - Scalar(0.5);
}

template <std::floating_point Scalar>
constexpr Scalar quad_loss_curv(Scalar /*v*/) {
  return Scalar(0.25);
}

/// A tangent point: either finite or one of the two symbolic infinities.
struct TangentPoint {
  enum class Kind { minus_infinity, finite, plus_infinity };
  Kind kind = Kind::finite;
  double value = 0.0;

  static TangentPoint finite(double v) { return {Kind::finite, v}; }
  static TangentPoint minus_inf() { return {Kind::minus_infinity, 0.0}; }
  static TangentPoint plus_inf() { return {Kind::plus_infinity, 0.0}; }

  bool is_finite() const { return kind == Kind::finite; }
  friend bool operator<(const TangentPoint& a, const TangentPoint& b);
  friend bool operator==(const TangentPoint& a, const TangentPoint& b) = default;
};

/// Family of tangent lines  t >= slope * v + offset  whose pointwise maximum
/// underestimates the logistic loss. Lines are ordered by increasing slope.
template <std::floating_point Scalar>
struct BasicTangentSet {
  std::vector<TangentPoint> points;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> slopes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> offsets;

  Eigen::Index size() const { return slopes.size(); }

  bool has_minus_sentinel() const {
    return !points.empty() && points.front().kind == TangentPoint::Kind::minus_infinity;
  }
  bool has_plus_sentinel() const {
    return !points.empty() && points.back().kind == TangentPoint::Kind::plus_infinity;
  }
};

using TangentSet = BasicTangentSet<double>;

/// Builds the tangent family for sorted, distinct points. The -inf sentinel
/// contributes the line -v, the +inf sentinel the line 0.
/// Throws std::invalid_argument on fewer than two points or duplicates.
template <std::floating_point Scalar = double>
BasicTangentSet<Scalar> make_tangents(std::vector<TangentPoint> points);

/// The 17-point set {0, ±0.44, ±0.89, ±1.37, ±1.90, ±2.63, ±3.55, ±5.16, ±inf}.
std::vector<TangentPoint> default_tangent_points();

inline TangentSet default_tangents() { return make_tangents<double>(default_tangent_points()); }

/// max over lines of slope * v + offset.
template <std::floating_point Scalar>
Scalar pwl_loss(const BasicTangentSet<Scalar>& tset, Scalar v) {
  Scalar best = tset.slopes(0) * v + tset.offsets(0);
  for (Eigen::Index l = 1; l < tset.size(); ++l) {
    const Scalar line = tset.slopes(l) * v + tset.offsets(l);
    if (line > best) best = line;
  }
  return best;
}

/// Parses one tangent point per line; accepts "inf", "+inf", "-inf".
/// Blank lines and lines starting with '#' are skipped.
std::vector<TangentPoint> read_tangent_points(std::istream& in);
std::vector<TangentPoint> read_tangent_file(const std::string& path);

std::string to_string(const TangentPoint& p);

// ---------------------------------------------------------------------------

inline bool operator<(const TangentPoint& a, const TangentPoint& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return a.is_finite() && a.value < b.value;
}

template <std::floating_point Scalar>
BasicTangentSet<Scalar> make_tangents(std::vector<TangentPoint> points) {
  if (points.size() < 2) throw std::invalid_argument("tangent set needs at least two points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i] == points[i + 1])
      throw std::invalid_argument("duplicate tangent point " + to_string(points[i]));
    if (!(points[i] < points[i + 1]))
      throw std::invalid_argument("tangent points must be sorted ascending");
  }
  BasicTangentSet<Scalar> out;
  const auto h = static_cast<Eigen::Index>(points.size());
  out.slopes.resize(h);
  out.offsets.resize(h);
  for (Eigen::Index l = 0; l < h; ++l) {
    const TangentPoint& p = points[static_cast<std::size_t>(l)];
    switch (p.kind) {
      case TangentPoint::Kind::minus_infinity:
        out.slopes(l) = Scalar(-1);
        out.offsets(l) = Scalar(0);
        break;
      case TangentPoint::Kind::plus_infinity:
        out.slopes(l) = Scalar(0);
        out.offsets(l) = Scalar(0);
        break;
      case TangentPoint::Kind::finite: {
        const auto v = static_cast<Scalar>(p.value);
        const Scalar a = logistic_loss_grad(v);
        out.slopes(l) = a;
        out.offsets(l) = logistic_loss(v) - a * v;
        break;
      }
    }
  }
  out.points = std::move(points);
  return out;
}

}  // namespace seqlogit

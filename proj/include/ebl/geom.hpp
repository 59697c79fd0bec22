#pragma once

// Floating-point primitives: ellipses, tangents, reflections, line
// intersections and least-squares conic fitting.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ebl/error.hpp"

namespace ebl {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Point2 = Vec2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
constexpr Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_pi(double t) {
  double w = wrap_two_pi(t);
  return w > kPi ? w - kTwoPi : w;
}

/// Axis-aligned, origin-centred ellipse (x/a)^2 + (y/b)^2 = 1 with a >= b > 0.
class Ellipse {
 public:
  Ellipse(double a, double b) : a_(a), b_(b) {
    if (!(std::isfinite(a) && std::isfinite(b)) || !(b > 0.0) || a < b) {
      throw Error(ErrorCode::InvalidArgument, "ellipse requires a >= b > 0");
    }
  }

  double a() const { return a_; }
  double b() const { return b_; }

  /// Implicit form value; 1 on the boundary.
  double implicit(Point2 p) const {
    const double u = p.x / a_;
    const double v = p.y / b_;
    return u * u + v * v;
  }

  /// Signed level-set defect f(p) - 1.
  double defect(Point2 p) const { return implicit(p) - 1.0; }

  /// Eccentric angle of a point, in [0, 2pi).
  double parameter_of(Point2 p) const { return wrap_two_pi(std::atan2(p.y / b_, p.x / a_)); }

 private:
  double a_;
  double b_;
};

/// Line through `p` with unit direction `d`.
struct Line2 {
  Point2 p;
  Vec2 d;

  static Line2 through(Point2 p, Vec2 dir) { return {p, normalized(dir)}; }
  static Line2 between(Point2 a, Point2 b) { return through(a, b - a); }

  Point2 at(double s) const { return p + s * d; }
  Vec2 normal() const { return perp(d); }
  double distance_to(Point2 q) const { return std::abs(cross(d, q - p)); }
  /// Orthogonal projection of q onto the line.
  Point2 foot_of(Point2 q) const { return p + dot(q - p, d) * d; }
};

inline Point2 point_at(const Ellipse& e, double t) {
  return {e.a() * std::cos(t), e.b() * std::sin(t)};
}

/// Gradient 2(x/a^2, y/b^2) of the implicit form; p need not be on e.
inline Vec2 gradient(const Ellipse& e, Point2 p) {
  return {2.0 * p.x / (e.a() * e.a()), 2.0 * p.y / (e.b() * e.b())};
}

/// Mirror image of v about the line whose normal is n.
inline Vec2 reflect(Vec2 v, Vec2 n) {
  const double len = norm(n);
  if (len < 1e-14) throw Error(ErrorCode::ZeroNormal, "reflection normal has zero length");
  const Vec2 nh = n / len;
  const Vec2 r = v - 2.0 * dot(v, nh) * nh;
  return normalized(r);
}

inline constexpr double kOnBoundaryTol = 1e-10;

inline void require_on_boundary(const Ellipse& e, Point2 p, double tol = kOnBoundaryTol) {
  if (!(std::abs(e.defect(p)) < tol)) {
    throw Error(ErrorCode::NotOnBoundary, "point is not on the ellipse boundary");
  }
}

/// Tangent at a boundary point. The direction is the counterclockwise
/// tangent (gradient rotated by +pi/2).
inline Line2 tangent_line_at(const Ellipse& e, Point2 p) {
  require_on_boundary(e, p);
  return Line2::through(p, perp(gradient(e, p)));
}

/// Same as tangent_line_at without the boundary check; for points known to be
/// on e up to round-off accumulated elsewhere.
inline Line2 tangent_line_unchecked(const Ellipse& e, Point2 p) {
  return Line2::through(p, perp(gradient(e, p)));
}

/// Gap between a line and its parallel support line of e: zero iff tangent.
inline double tangency_gap(const Ellipse& e, const Line2& l) {
  const Vec2 n = l.normal();
  const double offset = std::abs(dot(n, l.p));
  const double support = std::hypot(e.a() * n.x, e.b() * n.y);
  return std::abs(support - offset);
}

/// Contact points of the two tangents from an exterior point q, ordered by
/// eccentric angle in [0, 2pi).
inline std::pair<Point2, Point2> tangent_points_from_external(const Ellipse& e, Point2 q) {
  if (!(e.implicit(q) > 1.0 + 1e-12)) {
    throw Error(ErrorCode::InsideEllipse, "tangent source point is not outside the ellipse");
  }
  // Polar line of q in the eccentric parametrisation: u.(cos t, sin t) = 1.
  const Vec2 u{q.x / e.a(), q.y / e.b()};
  const double rho = norm(u);
  const double phi = std::atan2(u.y, u.x);
  const double half = std::acos(1.0 / rho);
  double t1 = wrap_two_pi(phi - half);
  double t2 = wrap_two_pi(phi + half);
  if (t2 < t1) std::swap(t1, t2);
  return {point_at(e, t1), point_at(e, t2)};
}

inline Point2 intersect_lines(const Line2& l1, const Line2& l2) {
  const double c = cross(l1.d, l2.d);
  if (std::abs(c) <= 1e-12) throw Error(ErrorCode::ParallelLines, "lines are parallel");
  const double s = cross(l2.p - l1.p, l2.d) / c;
  return l1.at(s);
}

/// Boundary crossings of a line, sorted by line parameter. A tangent line
/// yields a single point.
inline std::vector<Point2> intersect_line_ellipse(const Ellipse& e, const Line2& l) {
  const double ia2 = 1.0 / (e.a() * e.a());
  const double ib2 = 1.0 / (e.b() * e.b());
  const double qa = l.d.x * l.d.x * ia2 + l.d.y * l.d.y * ib2;
  const double qb = 2.0 * (l.p.x * l.d.x * ia2 + l.p.y * l.d.y * ib2);
  const double qc = l.p.x * l.p.x * ia2 + l.p.y * l.p.y * ib2 - 1.0;
  double disc = qb * qb - 4.0 * qa * qc;
  const double scale = std::max({qb * qb, std::abs(4.0 * qa * qc), 1e-300});
  if (std::abs(disc) < 1e-12 * scale) disc = 0.0;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {l.at(-qb / (2.0 * qa))};
  // Numerically stable pair of roots.
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (qb + std::copysign(sq, qb));
  double s1 = qq / qa;
  double s2 = qq != 0.0 ? qc / qq : -s1;
  if (s2 < s1) std::swap(s1, s2);
  return {l.at(s1), l.at(s2)};
}

/// Second crossing of the ray from a boundary point p along unit direction d.
/// Uses the closed-form root s = -2 (p.Dd)/(d.Dd), exact when f(p) = 1.
inline std::optional<Point2> far_boundary_point(const Ellipse& e, Point2 p, Vec2 d) {
  const double ia2 = 1.0 / (e.a() * e.a());
  const double ib2 = 1.0 / (e.b() * e.b());
  const double qa = d.x * d.x * ia2 + d.y * d.y * ib2;
  const double qb = p.x * d.x * ia2 + p.y * d.y * ib2;
  const double s = -2.0 * qb / qa;
  if (!(s > 1e-12 * e.a())) return std::nullopt;
  return p + s * d;
}

// ---------------------------------------------------------------------------
// Conic fitting and classification

/// Coefficients of A x^2 + B xy + C y^2 + D x + E y + F = 0, unit norm.
struct ConicCoeffs {
  double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;

  double norm() const { return std::sqrt(A * A + B * B + C * C + D * D + E * E + F * F); }
  double discriminant() const { return B * B - 4.0 * A * C; }
  double evaluate(Point2 p) const {
    return A * p.x * p.x + B * p.x * p.y + C * p.y * p.y + D * p.x + E * p.y + F;
  }
};

struct ConicFit {
  ConicCoeffs coeffs;        // original frame
  ConicCoeffs normalized;    // centred, unit-diameter frame
  double rms_residual = 0;   // RMS algebraic residual in the normalized frame
};

enum class ConicTag { StationaryPoint, Circle, Ellipse, NonConic };

constexpr std::string_view to_string(ConicTag t) {
  switch (t) {
    case ConicTag::StationaryPoint: return "StationaryPoint";
    case ConicTag::Circle: return "Circle";
    case ConicTag::Ellipse: return "Ellipse";
    case ConicTag::NonConic: return "NonConic";
  }
  return "Unknown";
}

struct ConicClass {
  ConicTag tag = ConicTag::NonConic;
  double metric = 0.0;  // fit residual, or diameter for StationaryPoint
};

inline constexpr double kConicResidualThreshold = 1e-6;

inline double diameter(std::span<const Point2> pts) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Vec2 v = pts[i] - pts[j];
      d2 = std::max(d2, dot(v, v));
    }
  }
  return std::sqrt(d2);
}

inline ConicCoeffs unit_normalize(ConicCoeffs c) {
  const double n = c.norm();
  // Fix the sign so results are reproducible: largest |coefficient| positive.
  std::array<double, 6> v{c.A, c.B, c.C, c.D, c.E, c.F};
  const auto big = std::max_element(v.begin(), v.end(),
                                    [](double l, double r) { return std::abs(l) < std::abs(r); });
  const double s = (*big < 0 ? -1.0 : 1.0) / n;
  return {c.A * s, c.B * s, c.C * s, c.D * s, c.E * s, c.F * s};
}

/// Algebraic least-squares conic through a point cloud; the cloud is centred
/// and scaled to unit diameter before solving.
inline ConicFit fit_conic(std::span<const Point2> pts) {
  if (pts.size() < 6) throw Error(ErrorCode::InvalidArgument, "conic fit needs at least 6 points");
  const double diam = diameter(pts);
  if (diam < 1e-12) throw Error(ErrorCode::DegenerateInput, "point cloud is a single point");

  Point2 c{};
  for (const auto& p : pts) c += p;
  c = c / static_cast<double>(pts.size());

  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd m(n, 6);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 q = (pts[static_cast<std::size_t>(i)] - c) / diam;
    m.row(i) << q.x * q.x, q.x * q.y, q.y * q.y, q.x, q.y, 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  const Eigen::VectorXd v = svd.matrixV().col(5);
  const double rms = (m * v).norm() / std::sqrt(static_cast<double>(n));

  ConicFit fit;
  fit.normalized = unit_normalize({v(0), v(1), v(2), v(3), v(4), v(5)});
  fit.rms_residual = rms;

  // Undo x' = (x - cx)/s, y' = (y - cy)/s.
  const auto& k = fit.normalized;
  const double s = diam;
  const double s2 = s * s;
  ConicCoeffs o;
  o.A = k.A / s2;
  o.B = k.B / s2;
  o.C = k.C / s2;
  o.D = (-2.0 * k.A * c.x - k.B * c.y) / s2 + k.D / s;
  o.E = (-2.0 * k.C * c.y - k.B * c.x) / s2 + k.E / s;
  o.F = (k.A * c.x * c.x + k.B * c.x * c.y + k.C * c.y * c.y) / s2 - (k.D * c.x + k.E * c.y) / s + k.F;
  fit.coeffs = unit_normalize(o);
  return fit;
}

/// Tags a swept point set. `scale` is the billiard semi-major axis.
inline ConicClass classify_locus(std::span<const Point2> pts, double scale,
                                 double residual_threshold = kConicResidualThreshold) {
  if (pts.size() < 6) throw Error(ErrorCode::InvalidArgument, "classification needs at least 6 points");
  const double diam = diameter(pts);
  if (diam < 1e-8 * scale) return {ConicTag::StationaryPoint, diam};

  const ConicFit fit = fit_conic(pts);
  const auto& k = fit.normalized;
  if (fit.rms_residual < residual_threshold) {
    if (std::abs(k.A - k.C) + std::abs(k.B) < 1e-8 * k.norm()) return {ConicTag::Circle, fit.rms_residual};
    if (k.discriminant() < 0.0) return {ConicTag::Ellipse, fit.rms_residual};
  }
  return {ConicTag::NonConic, fit.rms_residual};
}

}  // namespace ebl

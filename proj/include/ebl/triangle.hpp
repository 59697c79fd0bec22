#pragma once

// Triangle measurements, trilinear centres and derived triangles.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>

#include "ebl/error.hpp"
#include "ebl/geom.hpp"

namespace ebl {

struct Triangle {
  Point2 v1, v2, v3;

  const Point2& operator[](int i) const {
    switch (i % 3) {
      case 0: return v1;
      case 1: return v2;
      default: return v3;
    }
  }
  static Triangle from(std::span<const Point2> p) { return {p[0], p[1], p[2]}; }
  double signed_area() const { return 0.5 * cross(v2 - v1, v3 - v1); }
  double scale() const { return std::max({distance(v1, v2), distance(v2, v3), distance(v3, v1)}); }
};

/// Side s_i is opposite vertex v_i; angle theta_i is at v_i.
struct TriangleMetrics {
  std::array<double, 3> sides{};
  std::array<double, 3> angles{};
  double area = 0;
  double inradius = 0;
  double circumradius = 0;
  double nine_point_radius = 0;
  double semiperimeter = 0;
};

namespace detail {

inline void require_nondegenerate(const Triangle& t) {
  const double sc = t.scale();
  if (!(std::abs(t.signed_area()) > 1e-12 * sc * sc)) {
    throw Error(ErrorCode::DegenerateTriangle, "triangle has (near) zero area");
  }
}

inline double angle_between(Vec2 u, Vec2 v) { return std::atan2(std::abs(cross(u, v)), dot(u, v)); }

}  // namespace detail

inline TriangleMetrics metrics(const Triangle& t) {
  detail::require_nondegenerate(t);
  TriangleMetrics m;
  m.sides = {distance(t.v2, t.v3), distance(t.v3, t.v1), distance(t.v1, t.v2)};
  m.angles = {detail::angle_between(t.v2 - t.v1, t.v3 - t.v1), detail::angle_between(t.v3 - t.v2, t.v1 - t.v2),
              detail::angle_between(t.v1 - t.v3, t.v2 - t.v3)};
  m.area = std::abs(t.signed_area());
  m.semiperimeter = 0.5 * (m.sides[0] + m.sides[1] + m.sides[2]);
  m.inradius = m.area / m.semiperimeter;
  m.circumradius = m.sides[0] * m.sides[1] * m.sides[2] / (4.0 * m.area);
  m.nine_point_radius = 0.5 * m.circumradius;
  return m;
}

/// Homogeneous trilinear coordinates alpha : beta : gamma.
using TrilinearTriple = std::array<double, 3>;

/// A centre function maps metrics to trilinears.
using TrilinearFn = std::function<TrilinearTriple(const TriangleMetrics&)>;

/// Cartesian point with barycentric weights (alpha s1, beta s2, gamma s3).
inline Point2 center_from_barycentric(const Triangle& t, const std::array<double, 3>& w) {
  const double sum = w[0] + w[1] + w[2];
  const double mag = std::abs(w[0]) + std::abs(w[1]) + std::abs(w[2]);
  if (!(std::abs(sum) > 1e-12 * mag)) throw Error(ErrorCode::InfinitePoint, "weights sum to zero");
  return (w[0] * t.v1 + w[1] * t.v2 + w[2] * t.v3) / sum;
}

inline Point2 center_from_trilinear(const Triangle& t, const TriangleMetrics& m, const TrilinearTriple& tri) {
  return center_from_barycentric(t, {tri[0] * m.sides[0], tri[1] * m.sides[1], tri[2] * m.sides[2]});
}

inline Point2 center_from_trilinear(const Triangle& t, const TrilinearTriple& tri) {
  return center_from_trilinear(t, metrics(t), tri);
}

inline Point2 center_from_trilinear(const Triangle& t, const TrilinearFn& fn) {
  const auto m = metrics(t);
  return center_from_trilinear(t, m, fn(m));
}

inline constexpr std::array<int, 9> kSupportedCenters{1, 2, 3, 4, 5, 6, 9, 11, 100};

inline bool is_supported_center(int index) {
  return std::find(kSupportedCenters.begin(), kSupportedCenters.end(), index) != kSupportedCenters.end();
}

/// Standard trilinears for the supported Kimberling centres (X100 excluded:
/// it is the anticomplement of X11, not a trilinear formula here).
inline TrilinearTriple kimberling_trilinear(int index, const TriangleMetrics& m) {
  const auto& s = m.sides;
  const auto& th = m.angles;
  auto each = [](auto f) { return TrilinearTriple{f(0, 1, 2), f(1, 2, 0), f(2, 0, 1)}; };
  switch (index) {
    case 1: return {1.0, 1.0, 1.0};
    case 2: return {1.0 / s[0], 1.0 / s[1], 1.0 / s[2]};
    case 3: return {std::cos(th[0]), std::cos(th[1]), std::cos(th[2])};
    // sec(theta_i), scaled by the product of cosines so right angles stay finite.
    case 4: return each([&](int, int j, int k) { return std::cos(th[j]) * std::cos(th[k]); });
    case 5: return each([&](int, int j, int k) { return std::cos(th[j] - th[k]); });
    case 6: return s;
    case 9: return each([&](int i, int j, int k) { return s[j] + s[k] - s[i]; });
    // 1 - cos(x) written as 2 sin^2(x/2).
    case 11: return each([&](int, int j, int k) {
      const double h = std::sin(0.5 * (th[j] - th[k]));
      return 2.0 * h * h;
    });
    default: throw Error(ErrorCode::UnsupportedIndex, "no trilinear formula for X" + std::to_string(index));
  }
}

inline Point2 barycenter(const Triangle& t) { return (t.v1 + t.v2 + t.v3) / 3.0; }

/// Double-length reflection about the barycenter.
inline Point2 anticomplement(Point2 p, const Triangle& t) {
  const Point2 g = barycenter(t);
  return g + 2.0 * (g - p);
}

inline Point2 kimberling(const Triangle& t, int index) {
  if (!is_supported_center(index)) {
    throw Error(ErrorCode::UnsupportedIndex, "X" + std::to_string(index) + " is not supported");
  }
  const auto m = metrics(t);
  if (index == 2) return barycenter(t);
  if (index == 100) return anticomplement(center_from_trilinear(t, m, kimberling_trilinear(11, m)), t);
  return center_from_trilinear(t, m, kimberling_trilinear(index, m));
}

enum class DerivedKind { Excentral, Medial, Orthic, Intouch, Extouch, Feuerbach, Anticomplementary };

constexpr std::string_view to_string(DerivedKind k) {
  switch (k) {
    case DerivedKind::Excentral: return "excentral";
    case DerivedKind::Medial: return "medial";
    case DerivedKind::Orthic: return "orthic";
    case DerivedKind::Intouch: return "intouch";
    case DerivedKind::Extouch: return "extouch";
    case DerivedKind::Feuerbach: return "feuerbach";
    case DerivedKind::Anticomplementary: return "anticomplementary";
  }
  return "unknown";
}

/// Excenter opposite vertex i: barycentrics (-s_i : s_j : s_k).
inline Point2 excenter(const Triangle& t, const TriangleMetrics& m, int i) {
  std::array<double, 3> w = m.sides;
  w[static_cast<std::size_t>(i)] = -w[static_cast<std::size_t>(i)];
  return center_from_barycentric(t, w);
}

namespace detail {

inline bool has_right_angle(const TriangleMetrics& m) {
  for (double th : m.angles) {
    if (std::abs(std::cos(th)) < 1e-12) return true;
  }
  return false;
}

/// Point on side v_j -> v_k at distance `dist` from v_j.
inline Point2 along(Point2 from, Point2 to, double dist) { return from + dist * normalized(to - from); }

}  // namespace detail

/// Vertex i of the derived triangle is associated with vertex i of t
/// (opposite side, excenter, or image of v_i).
inline Triangle derived_triangle(const Triangle& t, DerivedKind kind) {
  const auto m = metrics(t);
  const double s = m.semiperimeter;
  auto build = [&](auto f) { return Triangle{f(0, 1, 2), f(1, 2, 0), f(2, 0, 1)}; };
  switch (kind) {
    case DerivedKind::Excentral:
      return build([&](int i, int, int) { return excenter(t, m, i); });
    case DerivedKind::Medial:
      return build([&](int, int j, int k) { return midpoint(t[j], t[k]); });
    case DerivedKind::Orthic: {
      if (detail::has_right_angle(m)) throw Error(ErrorCode::DegenerateDerived, "orthic of a right triangle");
      return build([&](int i, int j, int k) { return Line2::between(t[j], t[k]).foot_of(t[i]); });
    }
    case DerivedKind::Intouch:
      // Tangent length from v_j to the incircle is s - s_j.
      return build([&](int, int j, int k) {
        return detail::along(t[j], t[k], s - m.sides[static_cast<std::size_t>(j)]);
      });
    case DerivedKind::Extouch:
      // Excircle opposite v_i touches side jk at s - s_k from v_j.
      return build([&](int, int j, int k) {
        return detail::along(t[j], t[k], s - m.sides[static_cast<std::size_t>(k)]);
      });
    case DerivedKind::Feuerbach: {
      if (detail::has_right_angle(m)) throw Error(ErrorCode::DegenerateDerived, "feuerbach of a right triangle");
      const Point2 x5 = center_from_trilinear(t, m, kimberling_trilinear(5, m));
      return build([&](int i, int, int) { return x5 + m.nine_point_radius * normalized(excenter(t, m, i) - x5); });
    }
    case DerivedKind::Anticomplementary:
      return build([&](int i, int j, int k) { return t[j] + t[k] - t[i]; });
  }
  throw Error(ErrorCode::InvalidArgument, "unknown derived triangle");
}

/// Excentral angles (pi - theta_i)/2.
inline std::array<double, 3> excentral_angles(const Triangle& t) {
  const auto m = metrics(t);
  return {(kPi - m.angles[0]) / 2, (kPi - m.angles[1]) / 2, (kPi - m.angles[2]) / 2};
}

}  // namespace ebl

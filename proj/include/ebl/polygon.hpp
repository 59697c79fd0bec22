#pragma once

// Constructions on N-periodic orbits: tangential polygon, generalized
// Mittenpunkt and extouchpoints, and the reflected-edge circular locus.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ebl/billiard.hpp"
#include "ebl/error.hpp"
#include "ebl/geom.hpp"

namespace ebl {

/// Vertex k is where the table tangents at orbit vertices k and k+1 meet.
struct TangentialPolygon {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point2& operator[](std::size_t i) const { return vertices[i % vertices.size()]; }
};

struct ConcurrencePoint {
  Point2 point;
  double residual = 0;  // max distance from point to any of the lines
};

inline TangentialPolygon tangential_polygon(const Ellipse& e, const Orbit& o) {
  TangentialPolygon tp;
  tp.vertices.reserve(o.size());
  for (std::size_t k = 0; k < o.size(); ++k) {
    const Line2 l1 = tangent_line_unchecked(e, o[k]);
    const Line2 l2 = tangent_line_unchecked(e, o[k + 1]);
    if (std::abs(cross(l1.d, l2.d)) <= 1e-12) {
      throw Error(ErrorCode::ParallelTangents, "consecutive orbit tangents are parallel");
    }
    tp.vertices.push_back(intersect_lines(l1, l2));
  }
  return tp;
}

/// Least-squares meeting point of lines; residual is the worst distance.
inline ConcurrencePoint least_squares_concurrence(std::span<const Line2> lines) {
  double sxx = 0, sxy = 0, syy = 0, bx = 0, by = 0;
  for (const auto& l : lines) {
    const Vec2 n = l.normal();
    const double c = dot(n, l.p);
    sxx += n.x * n.x;
    sxy += n.x * n.y;
    syy += n.y * n.y;
    bx += n.x * c;
    by += n.y * c;
  }
  const double det = sxx * syy - sxy * sxy;
  const double tr = sxx + syy;
  if (!(det > 1e-12 * tr * tr)) throw Error(ErrorCode::IllConditioned, "lines are (nearly) all parallel");
  ConcurrencePoint cp;
  cp.point = {(syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det};
  for (const auto& l : lines) cp.residual = std::max(cp.residual, l.distance_to(cp.point));
  return cp;
}

/// Lines from tangential vertex k through the midpoint of orbit side (k, k+1).
inline ConcurrencePoint generalized_mittenpunkt(const Orbit& o, const TangentialPolygon& tp) {
  std::vector<Line2> lines;
  lines.reserve(o.size());
  for (std::size_t k = 0; k < o.size(); ++k) {
    lines.push_back(Line2::between(tp[k], midpoint(o[k], o[k + 1])));
  }
  return least_squares_concurrence(lines);
}

/// Feet of the perpendiculars from tangential vertex k onto side (k, k+1).
inline std::vector<Point2> generalized_extouchpoints(const Orbit& o, const TangentialPolygon& tp) {
  std::vector<Point2> feet;
  feet.reserve(o.size());
  for (std::size_t k = 0; k < o.size(); ++k) {
    feet.push_back(Line2::between(o[k], o[k + 1]).foot_of(tp[k]));
  }
  return feet;
}

/// Tangential edge i (the tangent at orbit vertex i) meets the reflection
/// through the origin of edge i+1 (the tangent at -P_{i+1}). Edges follow the
/// counterclockwise traversal of the orbit.
inline Point2 circle_locus_point(const Ellipse& e, const Orbit& o, std::size_t i) {
  const Line2 edge = tangent_line_unchecked(e, o[i]);
  const Line2 mirrored = tangent_line_unchecked(e, -o[i + 1]);
  return intersect_lines(edge, mirrored);
}

inline Point2 circle_locus_point(const Ellipse& e, const Orbit& o, const TangentialPolygon& tp, std::size_t i) {
  if (tp.size() != o.size()) throw Error(ErrorCode::InvalidArgument, "tangential polygon does not match orbit");
  return circle_locus_point(e, o, i);
}

struct CosineCirclePoints {
  Point2 q1;  // on the excentral edge along the tangent at P2
  Point2 q2;  // on the excentral edge along the tangent at P3
  bool on_segments = true;  // false when a line extension was used
};

/// Q1, Q2: the tangent at P' = -P1 against the excentral edges it crosses.
/// The excentral edges of a 3-periodic orbit lie on the table tangents at
/// its vertices; the tangent at P' is parallel to the one at P1, so the
/// crossings are with the edges through P2 and P3.
inline CosineCirclePoints cosine_circle_q_points(const Ellipse& e, const Orbit& o) {
  if (o.size() != 3) throw Error(ErrorCode::WrongN, "cosine circle is defined for 3-periodic orbits");
  const TangentialPolygon tp = tangential_polygon(e, o);
  const Line2 t_prime = tangent_line_unchecked(e, -o[0]);
  CosineCirclePoints out;
  // Edge along the tangent at vertex k runs between tangential vertices k-1 and k.
  auto hit = [&](std::size_t k, Point2& q) {
    const Line2 edge = tangent_line_unchecked(e, o[k]);
    if (std::abs(cross(edge.d, t_prime.d)) <= 1e-12) {
      throw Error(ErrorCode::NoIntersection, "tangent at P' is parallel to an excentral edge");
    }
    q = intersect_lines(edge, t_prime);
    const Point2 from = tp[k + 2];  // tp[k-1] cyclically
    const Point2 to = tp[k];
    const double s = dot(q - from, to - from) / dot(to - from, to - from);
    if (s < -1e-12 || s > 1.0 + 1e-12) out.on_segments = false;
  };
  hit(1, out.q1);
  hit(2, out.q2);
  return out;
}

/// Interior angles of a closed polygon, each measured between the incident
/// edge directions, in (0, pi).
inline std::vector<double> interior_angles(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  std::vector<double> ang;
  ang.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = poly[(i + n - 1) % n] - poly[i];
    const Vec2 v = poly[(i + 1) % n] - poly[i];
    ang.push_back(std::atan2(std::abs(cross(u, v)), dot(u, v)));
  }
  return ang;
}

/// Unsigned shoelace area.
inline double polygon_area(std::span<const Point2> poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * std::abs(s);
}

}  // namespace ebl

#pragma once

// Sweeping a named point construction over an orbit family.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ebl/billiard.hpp"
#include "ebl/error.hpp"
#include "ebl/geom.hpp"
#include "ebl/polygon.hpp"
#include "ebl/triangle.hpp"

namespace ebl {

struct LocusPoint {
  std::size_t k = 0;  // family sample index
  double t0 = 0;
  Point2 p;
};

struct LocusSample {
  std::string center;
  std::vector<LocusPoint> points;
  std::size_t skipped = 0;  // degenerate family members
};

enum class SelectorKind { Center, DerivedVertices, TangentialVertices, GeneralizedExtouch, GeneralizedMittenpunkt,
                          CircleLocus, CosineCircle };

struct LocusSelector {
  SelectorKind kind = SelectorKind::Center;
  int center_index = 1;
  DerivedKind derived = DerivedKind::Medial;
  bool needs_triangle = true;
};

/// Parses "X<k>", "<derived>-vertices", "tangential-vertices",
/// "generalized-extouch", "generalized-mittenpunkt", "circle-locus",
/// "cosine-circle".
inline std::optional<LocusSelector> parse_selector(const std::string& name) {
  LocusSelector s;
  if (name.size() > 1 && (name[0] == 'X' || name[0] == 'x')) {
    try {
      std::size_t pos = 0;
      const int idx = std::stoi(name.substr(1), &pos);
      if (pos + 1 != name.size() || !is_supported_center(idx)) return std::nullopt;
      s.center_index = idx;
      return s;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  for (auto k : {DerivedKind::Excentral, DerivedKind::Medial, DerivedKind::Orthic, DerivedKind::Intouch,
                 DerivedKind::Extouch, DerivedKind::Feuerbach, DerivedKind::Anticomplementary}) {
    if (name == std::string(to_string(k)) + "-vertices") {
      s.kind = SelectorKind::DerivedVertices;
      s.derived = k;
      return s;
    }
  }
  s.needs_triangle = false;
  if (name == "tangential-vertices") s.kind = SelectorKind::TangentialVertices;
  else if (name == "generalized-extouch") s.kind = SelectorKind::GeneralizedExtouch;
  else if (name == "generalized-mittenpunkt") s.kind = SelectorKind::GeneralizedMittenpunkt;
  else if (name == "circle-locus") s.kind = SelectorKind::CircleLocus;
  else if (name == "cosine-circle") { s.kind = SelectorKind::CosineCircle; s.needs_triangle = true; }
  else return std::nullopt;
  return s;
}

inline std::vector<Point2> locus_points_of(const Ellipse& e, const Orbit& o, const LocusSelector& s) {
  if (s.needs_triangle && o.size() != 3) throw Error(ErrorCode::WrongN, "selector needs a 3-periodic family");
  switch (s.kind) {
    case SelectorKind::Center:
      return {kimberling(Triangle::from(o.vertices), s.center_index)};
    case SelectorKind::DerivedVertices: {
      const auto t = derived_triangle(Triangle::from(o.vertices), s.derived);
      return {t.v1, t.v2, t.v3};
    }
    case SelectorKind::TangentialVertices:
      return tangential_polygon(e, o).vertices;
    case SelectorKind::GeneralizedExtouch:
      return generalized_extouchpoints(o, tangential_polygon(e, o));
    case SelectorKind::GeneralizedMittenpunkt:
      return {generalized_mittenpunkt(o, tangential_polygon(e, o)).point};
    case SelectorKind::CircleLocus: {
      std::vector<Point2> pts;
      for (std::size_t i = 0; i < o.size(); ++i) pts.push_back(circle_locus_point(e, o, i));
      return pts;
    }
    case SelectorKind::CosineCircle: {
      const auto q = cosine_circle_q_points(e, o);
      return {q.q1, q.q2};
    }
  }
  return {};
}

/// Degenerate members (right-angled orbits, undefined centres) are skipped
/// and counted.
inline LocusSample sweep_locus(const OrbitFamily& fam, const std::string& name) {
  const auto sel = parse_selector(name);
  if (!sel) throw Error(ErrorCode::UnsupportedIndex, "unknown locus selector '" + name + "'");
  if (sel->needs_triangle && fam.n != 3) throw Error(ErrorCode::WrongN, "selector '" + name + "' needs n = 3");
  LocusSample out;
  out.center = name;
  for (std::size_t k = 0; k < fam.samples.size(); ++k) {
    const auto& o = fam.samples[k];
    try {
      for (const auto& p : locus_points_of(fam.ellipse, o, *sel)) out.points.push_back({k, o.t0, p});
    } catch (const Error& err) {
      if (err.code() != ErrorCode::InfinitePoint && err.code() != ErrorCode::DegenerateDerived &&
          err.code() != ErrorCode::DegenerateTriangle) {
        throw;
      }
      ++out.skipped;
    }
  }
  return out;
}

inline std::vector<Point2> positions(const LocusSample& s) {
  std::vector<Point2> pts;
  pts.reserve(s.points.size());
  for (const auto& lp : s.points) pts.push_back(lp.p);
  return pts;
}

}  // namespace ebl

#pragma once

// Billiard map, Joachimsthal invariant, confocal caustics and N-periodic
// orbit families built by the caustic tangent construction.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "ebl/error.hpp"
#include "ebl/geom.hpp"

namespace ebl {

struct BilliardState {
  Point2 p;  // on the boundary
  Vec2 v;    // outgoing unit direction
};

/// Ellipse confocal with the table, with semi-axes sqrt(a^2 - lambda) and
/// sqrt(b^2 - lambda).
class ConfocalCaustic {
 public:
  ConfocalCaustic(const Ellipse& table, double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0 && lambda < table.b() * table.b())) {
      throw Error(ErrorCode::InvalidArgument, "confocal parameter must lie in (0, b^2)");
    }
    a_ = std::sqrt(table.a() * table.a() - lambda);
    b_ = std::sqrt(table.b() * table.b() - lambda);
  }

  double lambda() const { return lambda_; }
  double a() const { return a_; }
  double b() const { return b_; }
  Ellipse ellipse() const { return Ellipse(a_, b_); }

 private:
  double lambda_;
  double a_ = 0;
  double b_ = 0;
};

struct Orbit {
  std::vector<Point2> vertices;
  int winding = 1;
  double t0 = 0.0;
  double lambda = 0.0;
  double closure_defect = 0.0;  // |return point - start|

  std::size_t size() const { return vertices.size(); }
  const Point2& operator[](std::size_t i) const { return vertices[i % vertices.size()]; }
  /// Unit direction of the chord arriving at vertex i.
  Vec2 incoming(std::size_t i) const {
    const std::size_t n = vertices.size();
    return normalized(vertices[i % n] - vertices[(i + n - 1) % n]);
  }
};

struct OrbitFamily {
  Ellipse ellipse;
  int n = 3;
  int winding = 1;
  ConfocalCaustic caustic;
  std::vector<Orbit> samples;
};

// ---------------------------------------------------------------------------

/// Next bounce: far crossing of the ray, then reflection about the normal.
inline BilliardState billiard_map(const Ellipse& e, const BilliardState& s) {
  const auto next = far_boundary_point(e, s.p, s.v);
  if (!next) throw Error(ErrorCode::TangentRay, "ray leaves the boundary tangentially");
  return {*next, reflect(s.v, gradient(e, *next))};
}

/// |1/2 v.grad f(p)| for the unit incoming direction v.
inline double joachimsthal(const Ellipse& e, Point2 p, Vec2 v) {
  require_on_boundary(e, p);
  return std::abs(0.5 * dot(v, gradient(e, p)));
}

/// The next vertex of a trajectory tangent to `c`: from p follow the tangent
/// to the caustic that keeps the caustic on the left (orientation +1) or on
/// the right (-1), and return the far boundary crossing.
inline Point2 next_tangent_vertex(const Ellipse& e, const ConfocalCaustic& c, Point2 p, int orientation) {
  const Ellipse ce = c.ellipse();
  if (!(ce.implicit(p) > 1.0 + 1e-12)) throw Error(ErrorCode::NoTangent, "point lies inside the caustic");
  const auto [t1, t2] = tangent_points_from_external(ce, p);
  const Vec2 d1 = normalized(t1 - p);
  const Vec2 d2 = normalized(t2 - p);
  const double side = orientation >= 0 ? 1.0 : -1.0;
  const Vec2 d = side * cross(d1, -p) > side * cross(d2, -p) ? d1 : d2;
  const auto q = far_boundary_point(e, p, d);
  if (!q) throw Error(ErrorCode::TangentRay, "tangent chord does not cross the boundary");
  return *q;
}

namespace detail {

/// Total eccentric-angle advance over `steps` tangent steps from t0.
inline double total_advance(const Ellipse& e, const ConfocalCaustic& c, double t0, int steps) {
  Point2 p = point_at(e, t0);
  double t = e.parameter_of(p);
  double total = 0.0;
  for (int k = 0; k < steps; ++k) {
    p = next_tangent_vertex(e, c, p, +1);
    const double tn = e.parameter_of(p);
    total += wrap_two_pi(tn - t);
    t = tn;
  }
  return total;
}

}  // namespace detail

/// Mean fraction of a full turn advanced per tangent step.
inline double rotation_number(const Ellipse& e, double lambda, int steps) {
  if (steps < 64) throw Error(ErrorCode::InvalidArgument, "rotation number needs at least 64 steps");
  const ConfocalCaustic c(e, lambda);
  return detail::total_advance(e, c, 0.0, steps) / (kTwoPi * steps);
}

struct CausticSearchOptions {
  bool allow_self_intersecting = false;
  int max_iterations = 200;
};

/// Confocal parameter whose n-step tangent map closes after `winding` turns.
/// Bisection on the signed advance mismatch; the advance is increasing in
/// lambda.
inline ConfocalCaustic find_caustic(const Ellipse& e, int n, int winding = 1,
                                    const CausticSearchOptions& opt = {}) {
  if (n < 3) throw Error(ErrorCode::InvalidN, "orbit needs at least 3 vertices");
  if (winding < 1 || std::gcd(n, winding) != 1 || 2 * winding >= n) {
    throw Error(ErrorCode::InvalidArgument, "winding must be coprime with n and below n/2");
  }
  if (winding > 1 && !opt.allow_self_intersecting) {
    throw Error(ErrorCode::SelfIntersecting, "winding > 1 requires the experimental flag");
  }
  const double b2 = e.b() * e.b();
  const double target = kTwoPi * winding;
  auto mismatch = [&](double lambda) {
    return detail::total_advance(e, ConfocalCaustic(e, lambda), 0.0, n) - target;
  };

  double lo = 1e-9 * b2;
  double hi = (1.0 - 1e-9) * b2;
  double flo = mismatch(lo);
  double fhi = mismatch(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw Error(ErrorCode::NoConvergence, "closure mismatch does not change sign on the bracket");
  }
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return ConfocalCaustic(e, mid);
    const double fm = mismatch(mid);
    if (fm == 0.0) return ConfocalCaustic(e, mid);
    (fm < 0.0 ? lo : hi) = mid;
  }
  if (hi - lo < 1e-14 * b2) return ConfocalCaustic(e, 0.5 * (lo + hi));
  throw Error(ErrorCode::NoConvergence, "bisection did not converge");
}

inline constexpr double kClosureTol = 1e-9;

/// Orbit tangent to `c` starting at point_at(e, t0).
inline Orbit orbit_at(const Ellipse& e, const ConfocalCaustic& c, double t0, int n, int winding = 1) {
  if (n < 3) throw Error(ErrorCode::InvalidN, "orbit needs at least 3 vertices");
  Orbit o;
  o.t0 = t0;
  o.winding = winding;
  o.lambda = c.lambda();
  o.vertices.reserve(static_cast<std::size_t>(n));
  Point2 p = point_at(e, t0);
  o.vertices.push_back(p);
  for (int k = 1; k < n; ++k) {
    p = next_tangent_vertex(e, c, p, +1);
    o.vertices.push_back(p);
  }
  const Point2 back = next_tangent_vertex(e, c, p, +1);
  o.closure_defect = distance(back, o.vertices.front());
  if (!(o.closure_defect < kClosureTol * e.a())) {
    throw Error(ErrorCode::ClosureFailure, "orbit does not close; caustic does not match n");
  }
  return o;
}

/// Orbits at t0 = 2 pi k / m sharing one caustic.
inline OrbitFamily family(const Ellipse& e, int n, int m, int winding = 1, const CausticSearchOptions& opt = {}) {
  if (m < 8) throw Error(ErrorCode::InvalidArgument, "family needs at least 8 samples");
  const ConfocalCaustic c = find_caustic(e, n, winding, opt);
  OrbitFamily fam{e, n, winding, c, {}};
  fam.samples.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    fam.samples.push_back(orbit_at(e, c, kTwoPi * k / m, n, winding));
  }
  return fam;
}

inline double perimeter(const Orbit& o) {
  double l = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) l += distance(o[i], o[i + 1]);
  return l;
}

/// Joachimsthal value at each vertex of an orbit.
inline std::vector<double> vertex_gammas(const Ellipse& e, const Orbit& o) {
  std::vector<double> g;
  g.reserve(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) {
    g.push_back(std::abs(0.5 * dot(o.incoming(i), gradient(e, o[i]))));
  }
  return g;
}

inline double mean_gamma(const Ellipse& e, const Orbit& o) {
  const auto g = vertex_gammas(e, o);
  return std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
}

/// Largest gap between an orbit chord line and the caustic.
inline double max_caustic_gap(const ConfocalCaustic& c, const Orbit& o) {
  const Ellipse ce = c.ellipse();
  double worst = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    worst = std::max(worst, tangency_gap(ce, Line2::between(o[i], o[i + 1])));
  }
  return worst;
}

/// Family-wide Joachimsthal value and perimeter, with their relative spreads.
struct GammaL {
  double gamma = 0;
  double perimeter = 0;
  double gamma_spread = 0;
  double perimeter_spread = 0;
};

inline GammaL gamma_and_perimeter(const OrbitFamily& fam) {
  double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin, gsum = 0;
  double lmin = gmin, lmax = -gmin, lsum = 0;
  std::size_t count = 0;
  for (const auto& o : fam.samples) {
    for (double g : vertex_gammas(fam.ellipse, o)) {
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
      gsum += g;
      ++count;
    }
    const double l = perimeter(o);
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
    lsum += l;
  }
  GammaL r;
  r.gamma = gsum / static_cast<double>(count);
  r.perimeter = lsum / static_cast<double>(fam.samples.size());
  r.gamma_spread = (gmax - gmin) / r.gamma;
  r.perimeter_spread = (lmax - lmin) / r.perimeter;
  return r;
}

}  // namespace ebl

#pragma once

// Named numerical checks of the conservation laws over an orbit family.
//
// A check collects one quantity per sample and passes when
//   rel_spread < tolerance and (no expected value or
//   |mean - expected| < tolerance * max(1, |expected|)).
// Bound checks (locus identities, stationarity) instead require every sample
// to stay below the tolerance; non-constancy checks require the spread to
// exceed a separate, much larger threshold.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ebl/billiard.hpp"
#include "ebl/error.hpp"
#include "ebl/geom.hpp"
#include "ebl/polygon.hpp"
#include "ebl/triangle.hpp"

namespace ebl {

enum class CheckMode { Constant, NonConstant, Bound };

struct InvariantCheck {
  std::string name;
  int n = 0;
  double aspect_ratio = 1.0;
  std::size_t samples = 0;
  std::vector<double> values;
  double mean = 0;
  double max_abs_dev = 0;
  double rel_spread = 0;
  std::optional<double> expected;
  std::string expected_source;
  double max_expected_defect = 0;  // max |value - expected|
  double tolerance = 0;
  CheckMode mode = CheckMode::Constant;
  bool asserted = true;  // false: recorded only, never fails a run
  bool pass = false;
  std::size_t skipped = 0;
  std::map<std::string, double> extra;
};

struct CheckOptions {
  double tolerance = 1e-8;
  double locus_tolerance = 1e-7;
  double nonconstancy_threshold = 1e-3;
  bool allow_self_intersecting = false;
};

inline double relative_spread(double lo, double hi, double mean) {
  const double denom = std::abs(mean) > 1e-9 ? std::abs(mean) : 1.0;
  return (hi - lo) / denom;
}

/// Fills the statistics and the pass flag from `values`.
inline void finalize(InvariantCheck& c) {
  c.samples = c.values.size();
  if (c.values.empty()) {
    c.pass = false;
    c.asserted = false;
    return;
  }
  const auto [lo, hi] = std::minmax_element(c.values.begin(), c.values.end());
  c.mean = std::accumulate(c.values.begin(), c.values.end(), 0.0) / static_cast<double>(c.values.size());
  c.max_abs_dev = 0;
  for (double v : c.values) c.max_abs_dev = std::max(c.max_abs_dev, std::abs(v - c.mean));
  c.rel_spread = relative_spread(*lo, *hi, c.mean);
  if (c.expected) {
    c.max_expected_defect = 0;
    for (double v : c.values) c.max_expected_defect = std::max(c.max_expected_defect, std::abs(v - *c.expected));
  }
  switch (c.mode) {
    case CheckMode::Constant:
      c.pass = c.rel_spread < c.tolerance &&
               (!c.expected || std::abs(c.mean - *c.expected) < c.tolerance * std::max(1.0, std::abs(*c.expected)));
      break;
    case CheckMode::NonConstant:
      c.pass = c.rel_spread > c.tolerance;
      break;
    case CheckMode::Bound:
      c.pass = *hi < c.tolerance;
      break;
  }
}

namespace detail {

inline InvariantCheck start_check(const std::string& name, const OrbitFamily& fam, double tol, CheckMode mode) {
  InvariantCheck c;
  c.name = name;
  c.n = fam.n;
  c.aspect_ratio = fam.ellipse.a() / fam.ellipse.b();
  c.tolerance = tol;
  c.mode = mode;
  return c;
}

inline void require_n3(const OrbitFamily& fam) {
  if (fam.n != 3) throw Error(ErrorCode::WrongN, "check is defined for 3-periodic families only");
}

/// Self-intersecting families are refused unless allowed; when allowed the
/// check is recorded without pass/fail semantics.
inline void guard_winding(const OrbitFamily& fam, const CheckOptions& opt, InvariantCheck& c) {
  if (fam.winding == 1) return;
  if (!opt.allow_self_intersecting) throw Error(ErrorCode::SelfIntersecting, "orbit family is self-intersecting");
  c.asserted = false;
}

inline Triangle triangle_of(const Orbit& o) { return Triangle::from(o.vertices); }

inline bool is_degenerate_sample(const Error& err) {
  return err.code() == ErrorCode::InfinitePoint || err.code() == ErrorCode::DegenerateDerived ||
         err.code() == ErrorCode::DegenerateTriangle;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Prerequisites

inline InvariantCheck check_gamma_constancy(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  auto c = detail::start_check("gamma_constancy", fam, opt.tolerance, CheckMode::Constant);
  for (const auto& o : fam.samples) {
    for (double g : vertex_gammas(fam.ellipse, o)) c.values.push_back(g);
  }
  finalize(c);
  return c;
}

inline InvariantCheck check_perimeter_constancy(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  auto c = detail::start_check("perimeter_constancy", fam, opt.tolerance, CheckMode::Constant);
  for (const auto& o : fam.samples) c.values.push_back(perimeter(o));
  finalize(c);
  return c;
}

// ---------------------------------------------------------------------------
// Angle and area invariants

inline InvariantCheck check_r_over_R(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  detail::require_n3(fam);
  auto c = detail::start_check("r_over_R", fam, opt.tolerance, CheckMode::Constant);
  const auto gl = gamma_and_perimeter(fam);
  for (const auto& o : fam.samples) {
    const auto m = metrics(detail::triangle_of(o));
    c.values.push_back(m.inradius / m.circumradius);
  }
  c.expected = gl.gamma * gl.perimeter - 4.0;
  c.expected_source = "gamma*L - 4";
  finalize(c);
  return c;
}

inline InvariantCheck check_cosine_sum(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  auto c = detail::start_check("cosine_sum", fam, opt.tolerance, CheckMode::Constant);
  detail::guard_winding(fam, opt, c);
  const auto gl = gamma_and_perimeter(fam);
  for (const auto& o : fam.samples) {
    double s = 0;
    for (double th : interior_angles(o.vertices)) s += std::cos(th);
    c.values.push_back(s);
  }
  c.expected = gl.gamma * gl.perimeter - fam.n;
  c.expected_source = "gamma*L - N";
  c.extra["gamma_L"] = gl.gamma * gl.perimeter;
  finalize(c);
  return c;
}

/// For N = 3, sum of cosines against 1 + r/R, sample by sample.
inline InvariantCheck check_cosine_sum_consistency(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  detail::require_n3(fam);
  auto c = detail::start_check("cosine_sum_consistency", fam, 1e-10, CheckMode::Bound);
  const auto gl = gamma_and_perimeter(fam);
  for (const auto& o : fam.samples) {
    const auto m = metrics(detail::triangle_of(o));
    double s = 0;
    for (double th : m.angles) s += std::cos(th);
    const double via_radii = 1.0 + m.inradius / m.circumradius;
    const double via_motion = gl.gamma * gl.perimeter - 3.0;
    c.values.push_back(std::max(std::abs(s - via_radii), std::abs(via_radii - via_motion)));
  }
  (void)opt;
  finalize(c);
  return c;
}

inline InvariantCheck check_excentral_cosine_product(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  auto c = detail::start_check("tangential_cosine_product", fam, opt.tolerance, CheckMode::Constant);
  detail::guard_winding(fam, opt, c);
  double r_over_4R = 0;
  for (const auto& o : fam.samples) {
    const auto tp = tangential_polygon(fam.ellipse, o);
    double prod = 1;
    for (double th : interior_angles(tp.vertices)) prod *= std::cos(th);
    c.values.push_back(prod);
    if (fam.n == 3) {
      const auto m = metrics(detail::triangle_of(o));
      r_over_4R += m.inradius / (4.0 * m.circumradius);
    }
  }
  if (fam.n == 3) {
    c.expected = r_over_4R / static_cast<double>(fam.samples.size());
    c.expected_source = "r/(4R)";
  } else if (fam.n == 4) {
    c.expected = 0.0;
    c.expected_source = "rectangle";
  }
  finalize(c);
  return c;
}

inline InvariantCheck check_area_ratio(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  const bool odd = fam.n % 2 == 1;
  auto c = detail::start_check("area_ratio", fam, odd ? opt.tolerance : opt.nonconstancy_threshold,
                               odd ? CheckMode::Constant : CheckMode::NonConstant);
  detail::guard_winding(fam, opt, c);
  double two_R_over_r = 0;
  for (const auto& o : fam.samples) {
    const auto tp = tangential_polygon(fam.ellipse, o);
    c.values.push_back(polygon_area(tp.vertices) / polygon_area(o.vertices));
    if (fam.n == 3) {
      const auto m = metrics(detail::triangle_of(o));
      two_R_over_r += 2.0 * m.circumradius / m.inradius;
    }
  }
  if (fam.n == 3) {
    c.expected = two_R_over_r / static_cast<double>(fam.samples.size());
    c.expected_source = "2R/r";
  }
  // A circular table turns every family into rigid rotations of one polygon.
  if (!odd && fam.ellipse.a() == fam.ellipse.b()) c.asserted = false;
  finalize(c);
  return c;
}

/// Per-orbit relative defect |L - 8 gamma sum 1/|grad f_i|^2| / L.
inline InvariantCheck check_perimeter_formula(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  auto c = detail::start_check("perimeter_formula", fam, opt.tolerance, CheckMode::Bound);
  detail::guard_winding(fam, opt, c);
  const auto gl = gamma_and_perimeter(fam);
  for (const auto& o : fam.samples) {
    double s = 0;
    for (const auto& p : o.vertices) {
      const Vec2 g = gradient(fam.ellipse, p);
      s += 1.0 / dot(g, g);
    }
    const double l = perimeter(o);
    c.values.push_back(std::abs(l - 8.0 * gl.gamma * s) / l);
  }
  c.expected = 0.0;
  c.expected_source = "8*gamma*sum(1/|grad f|^2) = L";
  finalize(c);
  return c;
}

// ---------------------------------------------------------------------------
// Locus identities

enum class LocusIdentity { X11Caustic, X100Billiard, ExtouchCaustic, AnticomplIntouchBilliard, GeneralizedFeetCaustic };

constexpr std::string_view to_string(LocusIdentity w) {
  switch (w) {
    case LocusIdentity::X11Caustic: return "X11_caustic";
    case LocusIdentity::X100Billiard: return "X100_billiard";
    case LocusIdentity::ExtouchCaustic: return "extouch_caustic";
    case LocusIdentity::AnticomplIntouchBilliard: return "anticompl_intouch_billiard";
    case LocusIdentity::GeneralizedFeetCaustic: return "generalized_feet_caustic";
  }
  return "unknown";
}

/// Max implicit-equation defect |f_target(p) - 1| of the swept points.
inline InvariantCheck check_locus_identity(const OrbitFamily& fam, LocusIdentity which, const CheckOptions& opt = {}) {
  if (which != LocusIdentity::GeneralizedFeetCaustic) detail::require_n3(fam);
  auto c = detail::start_check(std::string("locus_") + std::string(to_string(which)), fam, opt.locus_tolerance,
                               CheckMode::Bound);
  const Ellipse caustic = fam.caustic.ellipse();
  for (const auto& o : fam.samples) {
    try {
      std::vector<Point2> pts;
      const Ellipse* target = &caustic;
      switch (which) {
        case LocusIdentity::X11Caustic:
          pts.push_back(kimberling(detail::triangle_of(o), 11));
          break;
        case LocusIdentity::X100Billiard:
          pts.push_back(kimberling(detail::triangle_of(o), 100));
          target = &fam.ellipse;
          break;
        case LocusIdentity::ExtouchCaustic: {
          const auto t = derived_triangle(detail::triangle_of(o), DerivedKind::Extouch);
          pts = {t.v1, t.v2, t.v3};
          break;
        }
        case LocusIdentity::AnticomplIntouchBilliard: {
          const auto anti = derived_triangle(detail::triangle_of(o), DerivedKind::Anticomplementary);
          const auto t = derived_triangle(anti, DerivedKind::Intouch);
          pts = {t.v1, t.v2, t.v3};
          target = &fam.ellipse;
          break;
        }
        case LocusIdentity::GeneralizedFeetCaustic:
          pts = generalized_extouchpoints(o, tangential_polygon(fam.ellipse, o));
          break;
      }
      double worst = 0;
      for (const auto& p : pts) worst = std::max(worst, std::abs(target->defect(p)));
      c.values.push_back(worst);
    } catch (const Error& err) {
      if (!detail::is_degenerate_sample(err)) throw;
      ++c.skipped;
    }
  }
  c.expected = 0.0;
  c.expected_source = "on target conic";
  finalize(c);
  return c;
}

// ---------------------------------------------------------------------------
// Stationary points and circles

/// Sweeps centre X_index over a 3-periodic family. Only X9 is asserted: its
/// locus diameter must stay below 1e-8 a and its mean within 1e-9 a of the
/// origin. Other centres are recorded.
inline InvariantCheck check_stationary(const OrbitFamily& fam, int center_index, const CheckOptions& opt = {}) {
  detail::require_n3(fam);
  const double a = fam.ellipse.a();
  auto c = detail::start_check("stationary_X" + std::to_string(center_index), fam, 1e-8 * a, CheckMode::Bound);
  std::vector<Point2> pts;
  for (const auto& o : fam.samples) {
    try {
      pts.push_back(kimberling(detail::triangle_of(o), center_index));
      c.values.push_back(norm(pts.back()));
    } catch (const Error& err) {
      if (!detail::is_degenerate_sample(err)) throw;
      ++c.skipped;
    }
  }
  (void)opt;
  finalize(c);
  if (pts.empty()) return c;
  Point2 mean{};
  for (const auto& p : pts) mean += p;
  mean = mean / static_cast<double>(pts.size());
  const double diam = diameter(pts);
  c.extra["diameter"] = diam;
  c.extra["mean_x"] = mean.x;
  c.extra["mean_y"] = mean.y;
  c.pass = diam < 1e-8 * a && norm(mean) < 1e-9 * a;
  c.asserted = center_index == 9;
  return c;
}

/// Generalized Mittenpunkt for any N: concurrence residual < 1e-8 a and the
/// point within 1e-9 a of the origin.
inline InvariantCheck check_generalized_mittenpunkt(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  const double a = fam.ellipse.a();
  auto c = detail::start_check("generalized_mittenpunkt", fam, 1e-9 * a, CheckMode::Bound);
  detail::guard_winding(fam, opt, c);
  double worst_residual = 0;
  for (const auto& o : fam.samples) {
    const auto cp = generalized_mittenpunkt(o, tangential_polygon(fam.ellipse, o));
    c.values.push_back(norm(cp.point));
    worst_residual = std::max(worst_residual, cp.residual);
  }
  finalize(c);
  c.extra["max_residual"] = worst_residual;
  c.pass = c.pass && worst_residual < 1e-8 * a;
  return c;
}

/// Norms of the reflected-edge intersections; expected 1/gamma.
inline InvariantCheck check_circle_locus(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  auto c = detail::start_check("circle_locus", fam, opt.locus_tolerance, CheckMode::Constant);
  detail::guard_winding(fam, opt, c);
  const auto gl = gamma_and_perimeter(fam);
  for (const auto& o : fam.samples) {
    for (std::size_t i = 0; i < o.size(); ++i) c.values.push_back(norm(circle_locus_point(fam.ellipse, o, i)));
  }
  c.expected = 1.0 / gl.gamma;
  c.expected_source = "1/gamma";
  if (fam.n == 4) c.extra["orthoptic_radius"] = std::hypot(fam.ellipse.a(), fam.ellipse.b());
  finalize(c);
  return c;
}

/// N = 3: the Q points on the tangent at -P1; expected 1/gamma, which equals
/// L/(r/R + 4).
inline InvariantCheck check_cosine_circle(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  detail::require_n3(fam);
  auto c = detail::start_check("cosine_circle", fam, opt.locus_tolerance, CheckMode::Constant);
  const auto gl = gamma_and_perimeter(fam);
  std::size_t off_segment = 0;
  double via_radii = 0;
  for (const auto& o : fam.samples) {
    const auto q = cosine_circle_q_points(fam.ellipse, o);
    c.values.push_back(norm(q.q1));
    c.values.push_back(norm(q.q2));
    if (!q.on_segments) ++off_segment;
    const auto m = metrics(detail::triangle_of(o));
    via_radii += perimeter(o) / (m.inradius / m.circumradius + 4.0);
  }
  c.expected = 1.0 / gl.gamma;
  c.expected_source = "1/gamma";
  c.extra["off_segment_samples"] = static_cast<double>(off_segment);
  c.extra["L_over_rR_plus_4"] = via_radii / static_cast<double>(fam.samples.size());
  finalize(c);
  return c;
}

// ---------------------------------------------------------------------------
// Circumbilliard

struct Circumbilliard {
  Point2 center;
  Eigen::Matrix2d shape;  // (p - c)^T shape (p - c) = 1
  double semi_major = 0;
  double semi_minor = 0;
  double major_angle = 0;  // direction of the major axis, radians
};

/// Unique conic centred at the Mittenpunkt through the three vertices.
inline Circumbilliard circumbilliard(const Triangle& t) {
  Circumbilliard cb;
  cb.center = kimberling(t, 9);
  Eigen::Matrix3d m;
  const Eigen::Vector3d rhs = Eigen::Vector3d::Ones();
  for (int i = 0; i < 3; ++i) {
    const Vec2 d = t[i] - cb.center;
    m.row(i) << d.x * d.x, 2.0 * d.x * d.y, d.y * d.y;
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw Error(ErrorCode::NoConic, "centred conic system is singular");
  const Eigen::Vector3d k = lu.solve(rhs);
  cb.shape << k(0), k(1), k(1), k(2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cb.shape);
  const auto mu = eig.eigenvalues();
  if (!(mu(0) > 0.0 && mu(1) > 0.0)) throw Error(ErrorCode::NoConic, "centred conic is not an ellipse");
  cb.semi_major = 1.0 / std::sqrt(mu(0));
  cb.semi_minor = 1.0 / std::sqrt(mu(1));
  const Eigen::Vector2d axis = eig.eigenvectors().col(0);
  cb.major_angle = std::atan2(axis(1), axis(0));
  return cb;
}

/// Reflection defect at each vertex: sine of the angle between the chord
/// bisector and the circumbilliard normal.
inline InvariantCheck check_circumbilliard(const Triangle& t) {
  const auto cb = circumbilliard(t);
  InvariantCheck c;
  c.name = "circumbilliard";
  c.n = 3;
  c.tolerance = 1e-8;
  c.mode = CheckMode::Bound;
  for (int i = 0; i < 3; ++i) {
    const Vec2 d = t[i] - cb.center;
    const Eigen::Vector2d g = cb.shape * Eigen::Vector2d(d.x, d.y);
    const Vec2 nrm = normalized(Vec2{g(0), g(1)});
    const Vec2 bis = normalized(t[i + 2] - t[i]) + normalized(t[i + 1] - t[i]);
    c.values.push_back(std::abs(cross(normalized(bis), nrm)));
  }
  c.aspect_ratio = cb.semi_major / cb.semi_minor;
  c.extra["center_x"] = cb.center.x;
  c.extra["center_y"] = cb.center.y;
  c.extra["semi_major"] = cb.semi_major;
  c.extra["semi_minor"] = cb.semi_minor;
  finalize(c);
  return c;
}

// ---------------------------------------------------------------------------
// Suites

struct SweepConfig {
  int n = 3;
  std::vector<double> a_over_b{1.5};
  int samples = 256;
  CheckOptions options;
  int winding = 1;
};

/// All checks that apply to one family, ordered by name.
inline std::vector<InvariantCheck> run_family_checks(const OrbitFamily& fam, const CheckOptions& opt = {}) {
  std::vector<InvariantCheck> out;
  out.push_back(check_gamma_constancy(fam, opt));
  out.push_back(check_perimeter_constancy(fam, opt));
  out.push_back(check_cosine_sum(fam, opt));
  out.push_back(check_excentral_cosine_product(fam, opt));
  out.push_back(check_area_ratio(fam, opt));
  out.push_back(check_perimeter_formula(fam, opt));
  out.push_back(check_generalized_mittenpunkt(fam, opt));
  out.push_back(check_circle_locus(fam, opt));
  out.push_back(check_locus_identity(fam, LocusIdentity::GeneralizedFeetCaustic, opt));
  if (fam.n == 3) {
    out.push_back(check_r_over_R(fam, opt));
    out.push_back(check_cosine_sum_consistency(fam, opt));
    out.push_back(check_cosine_circle(fam, opt));
    out.push_back(check_stationary(fam, 9, opt));
    for (auto w : {LocusIdentity::X11Caustic, LocusIdentity::X100Billiard, LocusIdentity::ExtouchCaustic,
                   LocusIdentity::AnticomplIntouchBilliard}) {
      out.push_back(check_locus_identity(fam, w, opt));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.name < r.name; });
  return out;
}

/// Runs every applicable check for each aspect ratio (b = 1, a = ratio).
inline std::vector<InvariantCheck> run_suite(const SweepConfig& cfg) {
  if (cfg.samples < 32) throw Error(ErrorCode::InvalidArgument, "sweep needs at least 32 samples");
  std::vector<InvariantCheck> out;
  for (double ratio : cfg.a_over_b) {
    const Ellipse e(ratio, 1.0);
    CausticSearchOptions copt;
    copt.allow_self_intersecting = cfg.options.allow_self_intersecting;
    const auto fam = family(e, cfg.n, cfg.samples, cfg.winding, copt);
    auto checks = run_family_checks(fam, cfg.options);
    out.insert(out.end(), checks.begin(), checks.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.name < r.name; });
  return out;
}

inline bool all_asserted_pass(const std::vector<InvariantCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return !c.asserted || c.pass; });
}

}  // namespace ebl

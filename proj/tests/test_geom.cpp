#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ebl/billiard.hpp"
#include "ebl/geom.hpp"
#include "ebl/locus.hpp"

using namespace ebl;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt2 = std::sqrt(2.0);

std::vector<Point2> sample_ellipse(double a, double b, int m, double rot = 0.0, Point2 c = {}) {
  std::vector<Point2> pts;
  for (int k = 0; k < m; ++k) {
    const double t = kTwoPi * k / m;
    const Point2 p{a * std::cos(t), b * std::sin(t)};
    pts.push_back({c.x + std::cos(rot) * p.x - std::sin(rot) * p.y, c.y + std::sin(rot) * p.x + std::cos(rot) * p.y});
  }
  return pts;
}

void expect_point(Point2 p, double x, double y, double tol = 1e-14) {
  EXPECT_NEAR(p.x, x, tol);
  EXPECT_NEAR(p.y, y, tol);
}

}  // namespace

TEST(Ellipse, RejectsBadAxes) {
  EXPECT_THROW(Ellipse(1, 2), Error);
  EXPECT_THROW(Ellipse(1, 0), Error);
  EXPECT_NO_THROW(Ellipse(1, 1));
}

TEST(PointAt, AxisEndpointsAndCircle) {
  expect_point(point_at(Ellipse(2, 1), 0), 2, 0);
  expect_point(point_at(Ellipse(2, 1), kPi / 2), 0, 1);
  expect_point(point_at(Ellipse(1, 1), kPi / 3), 0.5, kSqrt3 / 2);
  const Ellipse e(3, 1.25);
  for (double t = -7; t < 7; t += 0.37) EXPECT_LT(std::abs(e.defect(point_at(e, t))), 1e-15);
}

TEST(Gradient, DirectSubstitution) {
  expect_point(gradient(Ellipse(1, 1), {1, 0}), 2, 0);
  expect_point(gradient(Ellipse(2, 1), {2, 0}), 1, 0);
  expect_point(gradient(Ellipse(2, 1), {0, 1}), 0, 2);
}

TEST(Reflect, Examples) {
  expect_point(reflect({1, 0}, {1, 0}), -1, 0);
  expect_point(reflect({1, 0}, {0, 1}), 1, 0);
  expect_point(reflect({kSqrt2 / 2, kSqrt2 / 2}, {0, 1}), kSqrt2 / 2, -kSqrt2 / 2);
}

TEST(Reflect, ZeroNormal) {
  try {
    reflect({1, 0}, {1e-15, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroNormal);
  }
}

TEST(Reflect, InvolutionAndUnitNorm) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const Vec2 v{std::cos(u(rng)), std::sin(u(rng))};
    const Vec2 vn = normalized(v);
    const Vec2 n{3 * std::cos(u(rng)), 0.5 + std::sin(u(rng))};
    const Vec2 r = reflect(vn, n);
    EXPECT_NEAR(norm(r), 1.0, 1e-15);
    const Vec2 back = reflect(r, n);
    EXPECT_LT(norm(back - vn), 1e-13);
  }
}

TEST(TangentLine, Examples) {
  const auto l1 = tangent_line_at(Ellipse(2, 1), {2, 0});
  EXPECT_NEAR(std::abs(l1.d.y), 1.0, 1e-15);
  EXPECT_NEAR(l1.d.x, 0.0, 1e-15);
  const auto l2 = tangent_line_at(Ellipse(1, 1), {0, 1});
  EXPECT_NEAR(std::abs(l2.d.x), 1.0, 1e-15);

  // grad f(p) = (sqrt2/2, sqrt2), so the tangent direction is along (-1, 1/2).
  const Ellipse e(2, 1);
  const Point2 p{kSqrt2, kSqrt2 / 2};
  const auto l3 = tangent_line_at(e, p);
  const Vec2 want = normalized(Vec2{-1, 0.5});
  EXPECT_NEAR(std::abs(cross(l3.d, want)), 0.0, 1e-15);
  for (double s : {-3.0, -0.5, 0.0, 1.0, 4.0}) EXPECT_NEAR(dot(l3.at(s), gradient(e, p)), 2.0, 1e-10);
}

TEST(TangentLine, NotOnBoundary) {
  try {
    tangent_line_at(Ellipse(2, 1), {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOnBoundary);
  }
}

TEST(TangentLine, PerpendicularToGradient) {
  const Ellipse e(2.7, 1.3);
  for (double t = 0; t < kTwoPi; t += 0.05) {
    const Point2 p = point_at(e, t);
    EXPECT_LT(std::abs(dot(tangent_line_at(e, p).d, gradient(e, p))), 1e-12);
  }
}

TEST(TangentPoints, CirclePolePolar) {
  const auto [p1, p2] = tangent_points_from_external(Ellipse(1, 1), {2, 0});
  expect_point(p1, 0.5, kSqrt3 / 2);
  expect_point(p2, 0.5, -kSqrt3 / 2);
  const auto [q1, q2] = tangent_points_from_external(Ellipse(1, 1), {kSqrt2, 0});
  expect_point(q1, std::cos(kPi / 4), std::sin(kPi / 4));
  expect_point(q2, std::cos(kPi / 4), -std::sin(kPi / 4));
}

TEST(TangentPoints, PolarLineOfExternalPoint) {
  // Polar of (4,0) for (2,1): x*4/4 = 1, so x = 1, y = +-sqrt(3)/2.
  const auto [p1, p2] = tangent_points_from_external(Ellipse(2, 1), {4, 0});
  expect_point(p1, 1, kSqrt3 / 2);
  expect_point(p2, 1, -kSqrt3 / 2);
}

TEST(TangentPoints, InsideRejected) {
  try {
    tangent_points_from_external(Ellipse(2, 1), {1, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsideEllipse);
  }
  EXPECT_THROW(tangent_points_from_external(Ellipse(2, 1), {2, 0}), Error);
}

TEST(TangentPoints, PolePolarConsistency) {
  const Ellipse e(1.8, 1.1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0, kTwoPi), rad(1.05, 6);
  for (int i = 0; i < 300; ++i) {
    const double t = ang(rng), s = rad(rng);
    const Point2 q{s * e.a() * std::cos(t), s * e.b() * std::sin(t)};
    const auto [p1, p2] = tangent_points_from_external(e, q);
    EXPECT_LT(std::abs(e.defect(p1)), 1e-14);
    EXPECT_LT(std::abs(e.defect(p2)), 1e-14);
    // Both lie on the polar of q, and q lies on both tangents.
    EXPECT_NEAR(dot(q, gradient(e, p1)), 2.0, 1e-10);
    EXPECT_NEAR(dot(q, gradient(e, p2)), 2.0, 1e-10);
    EXPECT_LT(tangent_line_at(e, p1).distance_to(q), 1e-10 * s);
    EXPECT_LE(e.parameter_of(p1), e.parameter_of(p2));
    EXPECT_GT(distance(p1, p2), 1e-6);
  }
}

TEST(IntersectLines, Examples) {
  expect_point(intersect_lines(Line2::through({0, 0}, {1, 0}), Line2::through({0, 0}, {0, 1})), 0, 0);
  expect_point(intersect_lines(Line2::through({0, 1}, {1, 0}), Line2::through({2, 0}, {0, 1})), 2, 1);
  expect_point(intersect_lines(Line2::through({0, 0}, {1, 1}), Line2::through({2, 0}, {-1, 1})), 1, 1);
}

TEST(IntersectLines, Parallel) {
  try {
    intersect_lines(Line2::through({0, 0}, {1, 0}), Line2::through({0, 1}, {-1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParallelLines);
  }
}

TEST(IntersectLineEllipse, Examples) {
  const auto two = intersect_line_ellipse(Ellipse(1, 1), Line2::through({0, 0}, {1, 0}));
  ASSERT_EQ(two.size(), 2u);
  expect_point(two[0], -1, 0);
  expect_point(two[1], 1, 0);
  const auto one = intersect_line_ellipse(Ellipse(2, 1), Line2::through({2, 0}, {0, 1}));
  ASSERT_EQ(one.size(), 1u);
  expect_point(one[0], 2, 0);
  EXPECT_TRUE(intersect_line_ellipse(Ellipse(2, 1), Line2::through({3, 0}, {0, 1})).empty());
}

TEST(IntersectLineEllipse, SortedAlongLine) {
  const Ellipse e(2, 1);
  const Line2 l = Line2::through({-5, -0.3}, {1, 0.2});
  const auto pts = intersect_line_ellipse(e, l);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_LT(dot(pts[0] - l.p, l.d), dot(pts[1] - l.p, l.d));
  for (const auto& p : pts) EXPECT_LT(std::abs(e.defect(p)), 1e-14);
}

TEST(FitConic, ExactEllipse) {
  const auto pts = sample_ellipse(2, 1, 64);
  const auto fit = fit_conic(pts);
  EXPECT_LT(fit.rms_residual, 1e-10);
  // proportional to (1/4, 0, 1, 0, 0, -1)
  const double s = fit.coeffs.C;
  EXPECT_NEAR(fit.coeffs.A / s, 0.25, 1e-10);
  EXPECT_NEAR(fit.coeffs.B / s, 0.0, 1e-10);
  EXPECT_NEAR(fit.coeffs.D / s, 0.0, 1e-10);
  EXPECT_NEAR(fit.coeffs.E / s, 0.0, 1e-10);
  EXPECT_NEAR(fit.coeffs.F / s, -1.0, 1e-10);
  EXPECT_NEAR(fit.coeffs.norm(), 1.0, 1e-14);
}

TEST(FitConic, UnitCircle) {
  const auto fit = fit_conic(sample_ellipse(1, 1, 64));
  EXPECT_NEAR(fit.coeffs.A, fit.coeffs.C, 1e-10);
  EXPECT_NEAR(fit.coeffs.B, 0.0, 1e-10);
  EXPECT_NEAR(fit.coeffs.D, 0.0, 1e-10);
  EXPECT_NEAR(fit.coeffs.E, 0.0, 1e-10);
}

TEST(FitConic, SymmedianLocusIsNotAConic) {
  const Ellipse e(2, 1);
  const auto fam = family(e, 3, 64);
  const auto pts = positions(sweep_locus(fam, "X6"));
  EXPECT_GT(fit_conic(pts).rms_residual, kConicResidualThreshold);
}

TEST(FitConic, DegenerateInput) {
  std::vector<Point2> same(10, Point2{0.3, 0.4});
  try {
    fit_conic(same);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
  }
  EXPECT_THROW(fit_conic(std::vector<Point2>(5, Point2{})), Error);
}

TEST(FitConic, ArbitraryEllipsesFitExactly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ax(0.2, 5), ang(0, kPi), off(-10, 10);
  for (int i = 0; i < 100; ++i) {
    double a = ax(rng), b = ax(rng);
    if (a < b) std::swap(a, b);
    const auto pts = sample_ellipse(a, b, 48, ang(rng), {off(rng), off(rng)});
    const auto fit = fit_conic(pts);
    EXPECT_LT(fit.rms_residual, 1e-9);
    for (const auto& p : pts) EXPECT_LT(std::abs(fit.coeffs.evaluate(p)), 1e-8);
    const auto cls = classify_locus(pts, a);
    EXPECT_TRUE(cls.tag == ConicTag::Ellipse || (a == b && cls.tag == ConicTag::Circle));
  }
}

TEST(ClassifyLocus, Tags) {
  EXPECT_EQ(classify_locus(sample_ellipse(1.3, 1.3, 40, 0, {0.5, -2}), 2).tag, ConicTag::Circle);
  EXPECT_EQ(classify_locus(sample_ellipse(1.3, 0.7, 40), 2).tag, ConicTag::Ellipse);
  EXPECT_EQ(classify_locus(std::vector<Point2>(20, Point2{1e-12, 0}), 1).tag, ConicTag::StationaryPoint);
  // A square outline is not a conic.
  std::vector<Point2> square;
  for (int k = 0; k < 40; ++k) {
    const double s = -1 + 2.0 * (k % 10) / 10;
    const int side = k / 10;
    square.push_back(side == 0 ? Point2{s, -1} : side == 1 ? Point2{1, s} : side == 2 ? Point2{-s, 1} : Point2{-1, -s});
  }
  EXPECT_EQ(classify_locus(square, 1).tag, ConicTag::NonConic);
}

TEST(ClassifyLocus, FamilyExamples) {
  const auto fam = family(Ellipse(1.5, 1), 3, 256);
  EXPECT_EQ(classify_locus(positions(sweep_locus(fam, "X9")), 1.5).tag, ConicTag::StationaryPoint);
  EXPECT_EQ(classify_locus(positions(sweep_locus(fam, "X1")), 1.5).tag, ConicTag::Ellipse);
  EXPECT_EQ(classify_locus(positions(sweep_locus(fam, "intouch-vertices")), 1.5).tag, ConicTag::NonConic);
}

TEST(ClassifyLocus, RotationInvariant) {
  const auto fam = family(Ellipse(1.5, 1), 3, 128);
  for (const char* sel : {"X1", "X6", "X9", "intouch-vertices", "extouch-vertices"}) {
    const auto pts = positions(sweep_locus(fam, sel));
    const auto base = classify_locus(pts, 1.5).tag;
    for (double rot : {0.3, 1.1, 2.5}) {
      std::vector<Point2> r;
      for (const auto& p : pts) r.push_back({std::cos(rot) * p.x - std::sin(rot) * p.y, std::sin(rot) * p.x + std::cos(rot) * p.y});
      EXPECT_EQ(classify_locus(r, 1.5).tag, base) << sel << " rot " << rot;
    }
  }
}

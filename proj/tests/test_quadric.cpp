#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace mlat;
using fixtures::vec;

namespace {

/// A random point on the sheet Q+ of the quadric (u, alpha, F): along the
/// unit direction d from F, |P - F| = r with r = l / (1 - <u, d>) whenever
/// that is positive.
std::optional<Vector> point_on_sheet(const FocalQuadric& q, const Vector& dir) {
  const Vector d = dir.normalized();
  const double denom = 1.0 - q.scaled_normal.dot(d);
  if (std::abs(denom) < 1e-3) return std::nullopt;
  const double r = q.semilatus / denom;
  if (r <= 0.0 || r > 1e3) return std::nullopt;
  return Vector(q.focus + r * d);
}

}  // namespace

TEST(ClassifyFocal, ConeAtOrigin) {
  const FocalQuadric q = classify_focal(vec({0, 0, std::sqrt(2.0)}), 0.0, vec({0, 0, 0}));
  EXPECT_EQ(q.kind, QuadricClass::Cone);
  EXPECT_NEAR(q.eccentricity, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(q.semilatus, 0.0);
  EXPECT_NEAR(q.semi_axis_a, 1.0, 1e-15);
  EXPECT_FALSE(second_focus(q).has_value());
}

TEST(ClassifyFocal, HyperbolaFromItsEquation) {
  // 16 y^2 - 9 x^2 = 1296: a = 9, b = 12, c = 15, e = 5/3, semilatus b^2 / a = 16.
  const double e = 5.0 / 3.0;
  const double alpha = e * 15.0 - 16.0;
  const FocalQuadric q = classify_focal(vec({0, e}), alpha, vec({0, 15}));
  EXPECT_EQ(q.kind, QuadricClass::TwoSheetHyperboloid);
  EXPECT_NEAR(q.semilatus, 16.0, 1e-12);
  EXPECT_NEAR(q.semi_axis_a, 9.0, 1e-12);
  EXPECT_NEAR(*q.semi_axis_b, 12.0, 1e-12);
  const auto f2 = second_focus(q);
  ASSERT_TRUE(f2.has_value());
  EXPECT_LE((f2->focus - vec({0, -15})).norm(), 1e-12);
  EXPECT_NEAR(f2->sheet_distance, 18.0, 1e-12);
  EXPECT_NEAR(f2->shift, -18.0, 1e-12);
  // The equation itself vanishes at the satellites.
  for (Eigen::Index i = 0; i < 5; ++i) {
    const Vector p = fixtures::hyperbola2d_satellites().row(i).transpose();
    EXPECT_NEAR(16 * p(1) * p(1) - 9 * p(0) * p(0), 1296.0, 1e-9);
    EXPECT_NEAR(q.defect(p), 0.0, 1e-12);
    EXPECT_GT(q.directrix_value(p), 0.0);
  }
}

TEST(ClassifyFocal, UnitSphere) {
  const FocalQuadric q = classify_focal(vec({0, 0}), -1.0, vec({0, 0}));
  EXPECT_EQ(q.kind, QuadricClass::Sphere);
  EXPECT_NEAR(q.semi_axis_a, 1.0, 1e-15);
  const auto f2 = second_focus(q);
  ASSERT_TRUE(f2.has_value());
  EXPECT_EQ(f2->focus, vec({0, 0}));
}

TEST(ClassifyFocal, SpheroidAndParaboloid) {
  const FocalQuadric s = classify_focal(vec({0.5, 0}), -1.0, vec({0, 0}));
  EXPECT_EQ(s.kind, QuadricClass::ProlateSpheroid);
  EXPECT_NEAR(s.semi_axis_a, 1.0 / 0.75, 1e-14);
  const FocalQuadric p = classify_focal(vec({1, 0}), -2.0, vec({0, 0}));
  EXPECT_EQ(p.kind, QuadricClass::Paraboloid);
  EXPECT_NEAR(p.semi_axis_a, std::sqrt(2.0), 1e-14);
  EXPECT_FALSE(second_focus(p).has_value());
}

TEST(ClassifyFocal, DegenerateCombinationsThrow) {
  EXPECT_THROW(classify_focal(vec({0.5, 0}), 0.0, vec({0, 0})), Error);
  EXPECT_THROW(classify_focal(vec({1, 0}), 0.0, vec({0, 0})), Error);
  EXPECT_THROW(classify_focal(vec({1, 0}), 0.0, vec({0, 0, 0})), Error);
}

TEST(ClassifyFocal, ThresholdsScaleWithLength) {
  const FocalQuadric small = classify_focal(vec({2, 0}), -1e-3, vec({0, 0}), {}, 1.0);
  EXPECT_EQ(small.kind, QuadricClass::TwoSheetHyperboloid);
  const FocalQuadric coarse = classify_focal(vec({2, 0}), -1e-3, vec({0, 0}), {}, 1e5);
  EXPECT_EQ(coarse.kind, QuadricClass::Cone);
}

TEST(ClassifyFocal, SignSwapKeepsClassAndSwapsSheets) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Vector u = rng.uniform_vector(n, -1.5, 1.5);
    const Vector f = rng.uniform_vector(n, -1, 1);
    const double alpha = rng.uniform(-2, 2);
    FocalQuadric a, b;
    try {
      a = classify_focal(u, alpha, f);
    } catch (const Error&) {
      continue;
    }
    b = classify_focal(-u, -alpha, f);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_NEAR(a.semilatus, -b.semilatus, 1e-12);
    const Vector p = rng.uniform_vector(n, -3, 3);
    EXPECT_NEAR(a.directrix_value(p), -b.directrix_value(p), 1e-12);
  }
}

TEST(FocusDirectrix, SampledPointsSatisfyTheIdentity) {
  Rng rng(43);
  int points = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Vector f = rng.uniform_vector(n, -1, 1);
    const Vector u = rng.uniform_vector(n, -1.5, 1.5);
    const double l = rng.uniform(0.1, 2.0);
    const FocalQuadric q = classify_focal(u, u.dot(f) - l, f);
    for (int k = 0; k < 10; ++k) {
      const auto p = point_on_sheet(q, rng.uniform_vector(n, -1, 1));
      if (!p) continue;
      EXPECT_NEAR((*p - q.focus).norm() - q.directrix_value(*p), 0.0,
                  1e-9 * std::max(1.0, p->norm()));
      EXPECT_NEAR(static_cast<double>(oracle::eval_quadric(focal_coefficients(q), *p)), 0.0,
                  1e-8 * std::max(1.0, p->squaredNorm()));
      ++points;
      const auto f2 = second_focus(q);
      if (!f2) continue;
      const double d1 = (*p - q.focus).norm(), d2 = (*p - f2->focus).norm();
      if (q.kind == QuadricClass::TwoSheetHyperboloid) {
        EXPECT_NEAR(std::abs(d1 - d2), f2->sheet_distance, 1e-8 * std::max(1.0, d1));
        EXPECT_LT(d1, d2);  // Q+ is the sheet around F
      } else if (q.kind == QuadricClass::ProlateSpheroid) {
        EXPECT_NEAR(d1 + d2, f2->sheet_distance, 1e-8 * std::max(1.0, d1));
      }
    }
  }
  EXPECT_GT(points, 1000);
}

TEST(Monomials, OrderAndCount) {
  EXPECT_EQ(monomial_count(2), 6u);
  EXPECT_EQ(monomial_count(3), 10u);
  EXPECT_EQ(monomials(vec({2, 3})), vec({1, 2, 3, 4, 9, 6}));
  EXPECT_EQ(monomials(vec({1, 0, 0})), vec({1, 1, 0, 0, 1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(monomials(vec({1, 2, 3})), vec({1, 1, 2, 3, 1, 4, 9, 2, 3, 6}));
  EXPECT_EQ(cross_index(4, 2, 3), 1 + 8 + 5u);
}

TEST(FocalCoefficients, AgreeWithDirectEvaluation) {
  Rng rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const Vector u = rng.uniform_vector(n, -2, 2), f = rng.uniform_vector(n, -2, 2);
    const double alpha = rng.uniform(-2, 2);
    const Vector p = rng.uniform_vector(n, -3, 3);
    const double direct = std::pow(u.dot(p) - alpha, 2) - (p - f).squaredNorm();
    EXPECT_NEAR(static_cast<double>(oracle::eval_quadric(focal_coefficients(u, alpha, f), p)),
                direct, 1e-10 * (1 + std::abs(direct)));
  }
}

TEST(Recover, UnitCircle) {
  const auto c = recover_focal_parameters(vec({-1, 0, 0, 1, 1, 0}), 2);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].kind, QuadricClass::Sphere);
  EXPECT_LE(c[0].focus.norm(), 1e-12);
  EXPECT_NEAR(c[0].semi_axis_a, 1.0, 1e-12);
}

TEST(Recover, HyperbolaFociFromEquation) {
  // 16 y^2 - 9 x^2 - 1296 = 0
  const auto c = recover_focal_parameters(vec({-1296, 0, 0, -9, 16, 0}), 2);
  ASSERT_EQ(c.size(), 2u);
  std::vector<double> ys;
  for (const auto& q : c) {
    EXPECT_EQ(q.kind, QuadricClass::TwoSheetHyperboloid);
    EXPECT_NEAR(q.eccentricity, 5.0 / 3.0, 1e-12);
    EXPECT_NEAR(q.focus(0), 0.0, 1e-12);
    ys.push_back(q.focus(1));
  }
  std::sort(ys.begin(), ys.end());
  EXPECT_NEAR(ys[0], -15, 1e-10);
  EXPECT_NEAR(ys[1], 15, 1e-10);
}

TEST(Recover, EveryEllipseCandidateSatisfiesTheIdentity) {
  // x^2 + 2 y^2 - 1 = 0
  const auto c = recover_focal_parameters(vec({-1, 0, 0, 1, 2, 0}), 2);
  ASSERT_FALSE(c.empty());
  for (const auto& q : c) {
    EXPECT_NEAR(q.eccentricity, 1 / std::sqrt(2.0), 1e-12);
    for (int k = 0; k < 20; ++k) {
      const double th = 0.1 + 0.31 * k;
      const Vector p = vec({std::cos(th), std::sin(th) / std::sqrt(2.0)});
      EXPECT_NEAR(q.defect(p), 0.0, 1e-12);
    }
  }
}

TEST(Recover, UnequalAxesInThreeDimensionsAreNotFocal) {
  EXPECT_TRUE(recover_focal_parameters(vec({-1, 0, 0, 0, 1, 2, 3, 0, 0, 0}), 3).empty());
}

TEST(Recover, PlaneIsNotFocal) {
  EXPECT_TRUE(recover_focal_parameters(vec({1, 1, 0, 0, 0, 0}), 2).empty());
  EXPECT_TRUE(recover_focal_parameters(Vector::Zero(6), 2).empty());
  EXPECT_THROW(recover_focal_parameters(Vector::Zero(5), 2), Error);
}

TEST(Recover, RoundTripFromRandomQuadrics) {
  Rng rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Vector f = rng.uniform_vector(n, -1, 1);
    Vector u = rng.uniform_vector(n, -1.5, 1.5);
    if (trial % 7 == 0) u.setZero();
    const double l = rng.uniform(0.1, 2.0);
    const FocalQuadric q = classify_focal(u, u.dot(f) - l, f);
    const double k = rng.uniform(0.5, 5.0) * (trial % 2 ? 1 : -1);
    const auto c = recover_focal_parameters(k * focal_coefficients(q), static_cast<std::size_t>(n));
    const bool found = std::any_of(c.begin(), c.end(), [&](const FocalQuadric& r) {
      return (r.focus - f).norm() <= 1e-6 && r.kind == q.kind;
    });
    EXPECT_TRUE(found) << "trial " << trial;
  }
}

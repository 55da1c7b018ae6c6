#include "ddlab/census.hpp"
#include "ddlab/constructions.hpp"
#include "ddlab/hyperbola.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>

using namespace ddlab;

namespace {

// Coefficients of the expanded defining equation (x^2, y^2 parts are fixed):
// Euclidean  x^2 - y^2 - 2 p_x x + 2 q_x y + (p_x^2 + p_y^2 - q_x^2 - q_y^2)
// rectangular k x^2 - k y^2 - (p_y + k p_x) x + (q_y + k q_x) y + (p_x p_y - q_x q_y)
std::array<Scalar, 3> coefficients(Metric m, const Point& p, const Point& q, const Scalar& k) {
  if (m == Metric::EuclideanSq) {
    return {Scalar(-2 * p.x), Scalar(2 * q.x), Scalar(p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y)};
  }
  return {Scalar(-(p.y + k * p.x)), Scalar(q.y + k * q.x), Scalar(p.x * p.y - q.x * q.y)};
}

PointSet on_axis(Rng& rng, std::size_t m, long bound) {
  std::set<Point> s;
  while (s.size() < m) s.insert(Point(rng.between(-bound, bound), 0L));
  return PointSet(std::vector<Point>(s.begin(), s.end()));
}

PointSet on_sloped(Rng& rng, std::size_t m, long bound, const Scalar& k) {
  std::set<Point> s;
  while (s.size() < m) {
    const Scalar x(rng.between(-bound, bound));
    s.insert(Point(x, Scalar(k * x)));
  }
  return PointSet(std::vector<Point>(s.begin(), s.end()));
}

std::vector<Point> as_vector(const PointSet& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(HyperbolaKey, EuclideanExamples) {
  const auto k = hyperbola_key(Metric::EuclideanSq, {1, 2}, {3, 4});
  ASSERT_TRUE(k);
  EXPECT_EQ(*k, (HyperbolaKey{Scalar(1), Scalar(3), Scalar(12)}));
  EXPECT_EQ(*hyperbola_key(Metric::EuclideanSq, {0, 1}, {0, 2}), *hyperbola_key(Metric::EuclideanSq, {0, -1}, {0, 2}));
  EXPECT_EQ(*hyperbola_key(Metric::EuclideanSq, {0, 1}, {0, 2}), (HyperbolaKey{Scalar(0), Scalar(0), Scalar(3)}));
  EXPECT_FALSE(hyperbola_key(Metric::EuclideanSq, {0, 1}, {1, 1}));
}

TEST(HyperbolaKey, MetricPreconditions) {
  EXPECT_THROW(hyperbola_key(Metric::Rectangular, {0, 1}, {1, 3}, Scalar(0)), std::invalid_argument);
  EXPECT_THROW(hyperbola_key(Metric::Rectangular, {0, 1}, {1, 3}), std::invalid_argument);
  EXPECT_THROW(hyperbola_key(Metric::MinkowskiSq, {0, 1}, {1, 3}), std::invalid_argument);
  EXPECT_THROW(build_family(grid(2, 2), Metric::Rectangular, Scalar(0)), std::invalid_argument);
}

TEST(HyperbolaKey, EqualKeysIffEqualCoefficients) {
  Rng rng(31);
  for (Metric m : {Metric::EuclideanSq, Metric::Rectangular}) {
    const Scalar k = make_scalar(1, 2);
    std::uint64_t equal_pairs = 0;
    for (int i = 0; i < 4000; ++i) {
      const Point p1 = oracle::random_point(rng, 2), q1 = oracle::random_point(rng, 2);
      const Point p2 = oracle::random_point(rng, 2), q2 = oracle::random_point(rng, 2);
      const auto k1 = hyperbola_key(m, p1, q1, k);
      const auto k2 = hyperbola_key(m, p2, q2, k);
      if (!k1 || !k2) continue;
      const bool same = *k1 == *k2;
      equal_pairs += same ? 1 : 0;
      EXPECT_EQ(same, coefficients(m, p1, q1, k) == coefficients(m, p2, q2, k));
    }
    EXPECT_GT(equal_pairs, 0u);
  }
}

TEST(CentredForm, MembershipIsTheDistanceEquation) {
  Rng rng(32);
  const Scalar k = Scalar(-3);
  for (int i = 0; i < 2000; ++i) {
    const Point p = oracle::random_point(rng, 3), q = oracle::random_point(rng, 3);
    const Scalar x(rng.between(-3, 3)), y(rng.between(-3, 3));
    if (auto key = hyperbola_key(Metric::EuclideanSq, p, q)) {
      const bool equal = euclid_sq(p, Point(x, Scalar(0))) == euclid_sq(q, Point(y, Scalar(0)));
      EXPECT_EQ(centred(Metric::EuclideanSq, *key).contains(x, y), equal);
    }
    if (auto key = hyperbola_key(Metric::Rectangular, p, q, k)) {
      const bool equal = rect_dist(p, Point(x, Scalar(k * x))) == rect_dist(q, Point(y, Scalar(k * y)));
      EXPECT_EQ(centred(Metric::Rectangular, *key, k).contains(x, y), equal);
    }
  }
}

TEST(Incidences, EqualCensusAndOracleEuclidean) {
  Rng rng(33);
  for (int trial = 0; trial < 25; ++trial) {
    const PointSet a = on_axis(rng, 4, 5);
    const PointSet p = oracle::random_points_with(rng, 10, 5, as_vector(a));
    const CurveFamily family = build_family(p, Metric::EuclideanSq);
    const std::uint64_t inc = incidences(a, family);
    EXPECT_EQ(inc, census_euclid(a, p).q2);
    EXPECT_EQ(inc, oracle::incidences(a, p, Metric::EuclideanSq));
  }
}

TEST(Incidences, EqualCensusAndOracleRectangular) {
  Rng rng(34);
  const Scalar k = make_scalar(1, 2);
  for (int trial = 0; trial < 25; ++trial) {
    const PointSet a = on_sloped(rng, 3, 6, k);
    const PointSet p = oracle::random_points_with(rng, 8, 6, as_vector(a));
    const CurveFamily family = build_family(p, Metric::Rectangular, k);
    const std::uint64_t inc = incidences(a, family);
    EXPECT_EQ(inc, census_rect(a, p, k).q2);
    EXPECT_EQ(inc, oracle::incidences(a, p, Metric::Rectangular, k));
  }
}

TEST(Incidences, EmptyFamilyAndWrongLine) {
  // Every pair degenerate: all points have |y| = 1.
  const PointSet p{{0, 1}, {1, -1}, {2, 1}};
  const CurveFamily family = build_family(p, Metric::EuclideanSq);
  EXPECT_EQ(family.total, 0u);
  EXPECT_EQ(incidences(PointSet{{0, 0}}, family), 0u);
  EXPECT_THROW(incidences(PointSet{{0, 1}}, family), std::invalid_argument);
}

TEST(Coincidence, VerticalLineExample) {
  const PointSet p{{0, 1}, {0, -1}, {0, 2}};
  const CurveFamily family = build_family(p, Metric::EuclideanSq);
  const CoincidenceReport r = coincidence_structure(family);
  EXPECT_GE(r.classes_checked, 1u);
  EXPECT_TRUE(r.lines_ok);
  EXPECT_TRUE(r.ok());
}

TEST(Coincidence, FourFoldExample) {
  const PointSet p{{0, 1}, {0, -1}, {0, 2}, {0, -2}};
  const CurveFamily family = build_family(p, Metric::EuclideanSq);
  EXPECT_EQ(family.k_max, 4u);
  const CoincidenceReport r = coincidence_structure(family);
  EXPECT_EQ(r.k_max, 4u);
  EXPECT_EQ(r.max_q_partners, 2u);
  EXPECT_EQ(r.max_p_partners, 2u);
  EXPECT_GE(2 * r.b_side_points, r.k_max);
  EXPECT_TRUE(r.ok());
}

TEST(Coincidence, MultiplicityOneIsVacuous) {
  const CurveFamily family = build_family(PointSet{{0, 1}, {1, 2}}, Metric::EuclideanSq);
  EXPECT_EQ(family.k_max, 1u);
  const CoincidenceReport r = coincidence_structure(family);
  EXPECT_EQ(r.classes_checked, 0u);
  EXPECT_TRUE(r.ok());
}

TEST(Coincidence, RandomFamiliesBothMetrics) {
  Rng rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    const PointSet p = random_set(14, 3, rng.next());
    EXPECT_TRUE(coincidence_structure(build_family(p, Metric::EuclideanSq)).ok());
    EXPECT_TRUE(coincidence_structure(build_family(p, Metric::Rectangular, Scalar(1))).ok());
    EXPECT_TRUE(coincidence_structure(build_family(p, Metric::Rectangular, Scalar(-2))).ok());
  }
}

TEST(CommonPoints, ParallelLevelSets) {
  const CentredHyperbola h1{Scalar(0), Scalar(0), Scalar(1)};
  const CentredHyperbola h2{Scalar(0), Scalar(0), Scalar(2)};
  EXPECT_EQ(common_points(h1, h2), 0);
  EXPECT_FALSE(common_points(h1, h1).has_value());
}

TEST(CommonPoints, AgreesWithEliminationOfX) {
  Rng rng(36);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 5000; ++i) {
    const CentredHyperbola h1{Scalar(rng.between(-3, 3)), Scalar(rng.between(-3, 3)), Scalar(rng.between(-5, 5))};
    const CentredHyperbola h2{Scalar(rng.between(-3, 3)), Scalar(rng.between(-3, 3)), Scalar(rng.between(-5, 5))};
    if (sgn(h1.c) == 0 || sgn(h2.c) == 0) continue;
    const auto mine = common_points(h1, h2);
    const auto ref = oracle::common_points(h1.cx, h1.cy, h1.c, h2.cx, h2.cy, h2.c);
    ASSERT_EQ(mine.has_value(), ref.has_value());
    if (mine) {
      EXPECT_EQ(*mine, *ref);
      ASSERT_LE(*mine, 2);
      ++counts[*mine];
    }
  }
  EXPECT_GT(counts[0], 0);
  EXPECT_GT(counts[1], 0);
  EXPECT_GT(counts[2], 0);
}

TEST(Pseudoparabola, RandomFamilies) {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const PointSet p = random_set(12, 5, rng.next());
    for (const auto& [m, k] : {std::pair{Metric::EuclideanSq, std::optional<Scalar>{}},
                               std::pair{Metric::Rectangular, std::optional<Scalar>{Scalar(2)}}}) {
      const PseudoparabolaReport r = pseudoparabola_check(build_family(p, m, k), 500, trial);
      EXPECT_TRUE(r.ok());
      EXPECT_EQ(r.pairs_checked, 500u);
      EXPECT_EQ(r.by_count[0] + r.by_count[1] + r.by_count[2], r.pairs_checked);
    }
  }
  // Few keys: every pair is checked.
  const CurveFamily small = build_family(PointSet{{0, 1}, {1, 2}, {2, 0}}, Metric::EuclideanSq);
  const PseudoparabolaReport all = pseudoparabola_check(small, 1000);
  EXPECT_EQ(all.pairs_checked, small.distinct() * (small.distinct() - 1) / 2);
}

TEST(IncidenceRatio, ReportsWithoutVerdict) {
  const PointSet p = grid(4, 4);
  const PointSet a = points_on_line(p, make_line(0, 1, 0));
  const CurveFamily family = build_family(p, Metric::EuclideanSq);
  const CheckReport r = incidence_ratio_report(a, p, family);
  EXPECT_EQ(r.verdict, Verdict::Measured);
  EXPECT_EQ(r.lhs, std::to_string(incidences(a, family)));
  EXPECT_EQ(r.details["log"], "natural");
  EXPECT_LE(std::stod(r.rhs_lo), std::stod(r.rhs_hi));

  const CurveFamily single = build_family(PointSet{{0, 0}, {0, 1}}, Metric::EuclideanSq);
  const CheckReport s = incidence_ratio_report(PointSet{{0, 0}}, PointSet{{0, 0}, {0, 1}}, single);
  EXPECT_TRUE(s.details.contains("ratio"));

  const PointSet flat{{0, 1}, {1, -1}, {2, 1}};
  const CheckReport v = incidence_ratio_report(PointSet{{0, 0}}, flat, build_family(flat, Metric::EuclideanSq));
  EXPECT_TRUE(v.details.contains("note"));
}

TEST(IncidenceRatio, BoundIsMonotoneInItsArguments) {
  const Interval small = incidence_bound(1, 16, 100, 128);
  const Interval large = incidence_bound(2, 16, 100, 128);
  EXPECT_TRUE(certainly_le(small, large));
}

TEST(Summary, Json) {
  const CurveFamily family = build_family(PointSet{{0, 1}, {0, -1}, {0, 2}, {0, -2}}, Metric::EuclideanSq);
  const nlohmann::json j = summary(family);
  EXPECT_EQ(j["k_max"], 4);
  EXPECT_EQ(j["gamma_with_multiplicity"], family.total);
  EXPECT_EQ(j["distinct_keys"], family.distinct());
}

#include "ddlab/energy.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ddlab;

namespace {

Integer as_integer(const EnergyValue& v) { return std::get<Integer>(v); }

}  // namespace

TEST(Rep, Examples) {
  const RepProfile r = rep_function(make_set({0, 1, 2}), make_set({0, 1, 2}));
  EXPECT_EQ(r.at(Scalar(0)), 3u);
  EXPECT_EQ(r.at(Scalar(1)), 2u);
  EXPECT_EQ(r.at(Scalar(-2)), 1u);
  EXPECT_EQ(r.at(Scalar(3)), 0u);
  EXPECT_EQ(r.total(), 9u);
  EXPECT_THROW(rep_function({}, make_set({1})), std::invalid_argument);
}

TEST(Rep, MatchesOracle) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarSet a = oracle::random_scalars(rng, 9, 12), b = oracle::random_scalars(rng, 9, 12);
    EXPECT_EQ(rep_function(a, b).rep, oracle::rep(a, b));
  }
}

TEST(Energy, Examples) {
  EXPECT_EQ(as_integer(energy(make_set({0, 1, 2}), std::nullopt, Scalar(2))), 19);
  EXPECT_EQ(as_integer(energy(make_set({0, 1}), std::nullopt, Scalar(3))), 10);
  const ScalarSet a = make_set({0, 3, 7}), b = make_set({1, 2});
  EXPECT_EQ(as_integer(energy(a, b, Scalar(1))), 6);
  EXPECT_THROW(energy(a, b, Scalar(0)), std::invalid_argument);
}

TEST(Energy, AgreesWithCountingDefinitions) {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const ScalarSet a = oracle::random_scalars(rng, 8, 10);
    EXPECT_EQ(as_integer(energy(a, std::nullopt, Scalar(2))), oracle::additive_quadruples(a));
    EXPECT_EQ(as_integer(energy(a, std::nullopt, Scalar(3))), oracle::energy3(a));
  }
}

TEST(Energy, ThreeHalvesEnclosure) {
  const Interval e = std::get<Interval>(energy(make_set({0, 1}), std::nullopt, make_scalar(3, 2)));
  const double exact = 2.0 * std::sqrt(2.0) + 2.0;
  EXPECT_LE(std::stod(e.lower_str()), exact + 1e-12);
  EXPECT_GE(std::stod(e.upper_str()), exact - 1e-12);
  EXPECT_NEAR(e.mid_double(), exact, 1e-12);
}

TEST(SumsetImage, Examples) {
  const ScalarSet u = make_set({1, 2}), v = make_set({0, 1});
  EXPECT_EQ(sumset_image(ConvexFn::square(), u, v), make_set({1, 2, 4, 5}));
  EXPECT_EQ(sumset_image(ConvexFn::square(), u, v, SumOp::Minus), make_set({0, 1, 3, 4}));
  // quad(2, 1): 2x^2 - x.
  EXPECT_EQ(sumset_image(ConvexFn::quad(Scalar(2), Scalar(1)), u, make_set({0})), make_set({1, 6}));
  EXPECT_THROW(ConvexFn::quadratic(Scalar(0), Scalar(1), Scalar(1)), std::invalid_argument);
}

TEST(LiInequality, HoldsOnRandomSets) {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const ScalarSet a = oracle::random_scalars(rng, 10, 12), b = oracle::random_scalars(rng, 10, 12);
    const CheckReport r = li_inequality_check(a, b);
    EXPECT_NE(r.verdict, Verdict::Violated) << signature(a) << " | " << signature(b);
    EXPECT_EQ(r.check, "li_inequality");
  }
  // Singletons: both sides equal 1, so enclosures overlap until the cap.
  const CheckReport s = li_inequality_check(make_set({0}), make_set({0}), 128);
  EXPECT_NE(s.verdict, Verdict::Violated);
}

TEST(HolderChain, Examples) {
  const HolderChainReport one = holder_chain_check(make_set({5}));
  EXPECT_EQ(one.integer_chain.lhs, "1");
  EXPECT_EQ(one.integer_chain.rhs_lo, "1");
  EXPECT_TRUE(one.ok());
  // U = {0, 1}: |U|^8 = 256, E3 = 10, E(U, U-U) = 10, |U-U| = 3.
  const HolderChainReport two = holder_chain_check(make_set({0, 1}));
  EXPECT_EQ(two.integer_chain.lhs, "256");
  EXPECT_EQ(two.integer_chain.rhs_lo, "300");
  EXPECT_EQ(two.integer_chain.verdict, Verdict::Holds);
  EXPECT_EQ(two.holder.verdict, Verdict::Holds);
  EXPECT_NEAR(two.slack, 300.0 / 256.0, 1e-12);
  EXPECT_THROW(holder_chain_check({}), std::invalid_argument);
}

TEST(HolderChain, HoldsOnRandomSets) {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const ScalarSet u = oracle::random_scalars(rng, 12, 20);
    EXPECT_TRUE(holder_chain_check(u).ok()) << signature(u);
  }
}

TEST(ShiftCurves, CrossingAgreesWithOracle) {
  Rng rng(45);
  for (const ConvexFn& f : {ConvexFn::square(), ConvexFn::quad(make_scalar(1, 2), Scalar(3)),
                            ConvexFn::quadratic(Scalar(-2), Scalar(1), Scalar(4))}) {
    const ShiftFamily family = convex_curve_family(f, make_set({0, 1, 3}), make_set({-1, 0, 2}), make_set({0, 5}));
    for (std::size_t i = 0; i < family.curves.size(); ++i) {
      for (std::size_t j = i + 1; j < family.curves.size(); ++j) {
        const ShiftCurve& l1 = family.curves[i];
        const ShiftCurve& l2 = family.curves[j];
        const auto mine = intersect(family, l1, l2);
        const auto ref = oracle::crossing(f, l1.s, l1.b, l2.s, l2.b);
        ASSERT_EQ(mine.has_value(), ref.has_value());
        if (mine) {
          EXPECT_EQ(mine->x, *ref);
          EXPECT_TRUE(family.contains(l2, *mine));
        }
      }
    }
    EXPECT_TRUE(pseudo_line_check(family, 10000).ok());
    EXPECT_EQ(pseudo_line_check(family, 50, 3).pairs_checked, 50u);
  }
}

TEST(ShiftCurves, FamilySize) {
  const ShiftFamily family =
      convex_curve_family(ConvexFn::square(), make_set({1, 2}), make_set({0, 1, 2}), make_set({0, 1}));
  // f(A) + C = {1, 2, 4, 5}.
  EXPECT_EQ(family.curves.size(), 12u);
  EXPECT_THROW(intersect(family, family.curves[0], family.curves[0]), std::invalid_argument);
}

TEST(RichPoints, MatchBruteForce) {
  Rng rng(46);
  for (int trial = 0; trial < 15; ++trial) {
    const ScalarSet a = oracle::random_scalars(rng, 5, 4), b = oracle::random_scalars(rng, 5, 4);
    const ScalarSet c = oracle::random_scalars(rng, 3, 4);
    const ShiftFamily family = convex_curve_family(ConvexFn::square(), a, b, c);
    std::set<Point> crossings;
    for (std::size_t i = 0; i < family.curves.size(); ++i) {
      for (std::size_t j = i + 1; j < family.curves.size(); ++j) {
        if (auto p = intersect(family, family.curves[i], family.curves[j])) crossings.insert(*p);
      }
    }
    for (std::uint64_t t : {2u, 3u}) {
      std::vector<RichPoint> expected;
      for (const Point& p : crossings) {
        std::uint64_t on = 0;
        for (const ShiftCurve& l : family.curves) on += family.contains(l, p) ? 1 : 0;
        if (on >= t) expected.push_back({p, on});
      }
      const std::vector<RichPoint> got = rich_points(family, t);
      ASSERT_EQ(got.size(), expected.size());
      for (std::size_t k = 0; k < got.size(); ++k) {
        EXPECT_EQ(got[k].point, expected[k].point);
        EXPECT_EQ(got[k].incident, expected[k].incident);
      }
    }
  }
}

TEST(RichContainment, Example) {
  const ScalarSet a = make_set({0, 1, 2}), c = make_set({0, 1});
  const CheckReport r = rich_containment_check(ConvexFn::square(), a, a, c, 2);
  EXPECT_EQ(r.lhs, "6");
  EXPECT_EQ(r.verdict, Verdict::Holds);
  EXPECT_EQ(r.details["missing_rich_points"], 0);
  EXPECT_THROW(rich_containment_check(ConvexFn::square(), a, a, c, 4), std::invalid_argument);
  EXPECT_THROW(rich_containment_check(ConvexFn::square(), a, a, {}, 2), std::invalid_argument);
}

TEST(RichContainment, HoldsOnRandomSets) {
  Rng rng(47);
  for (int trial = 0; trial < 15; ++trial) {
    const ScalarSet a = oracle::random_scalars(rng, 5, 5), b = oracle::random_scalars(rng, 5, 5);
    const ScalarSet c = oracle::random_scalars(rng, 3, 5);
    const std::uint64_t tmax = std::min(a.size(), b.size());
    for (std::uint64_t t = 2; t <= tmax; ++t) {
      EXPECT_NE(rich_containment_check(ConvexFn::quad(Scalar(3), Scalar(1)), a, b, c, t).verdict, Verdict::Violated);
    }
  }
}

TEST(Dyadic, E3BandsSumBack) {
  const DyadicReport r = dyadic_decomposition_check(make_set({0, 1}));
  EXPECT_EQ(r.e3, 10);
  ASSERT_EQ(r.e3_bands.size(), 2u);
  EXPECT_EQ(r.e3_bands[0].sum, 2);
  EXPECT_EQ(r.e3_bands[1].sum, 8);
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.pair_energy);
}

TEST(Dyadic, PairSplitAndThreshold) {
  Rng rng(48);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarSet a = oracle::random_scalars(rng, 12, 10), f = oracle::random_scalars(rng, 12, 10);
    const DyadicReport fixed = dyadic_decomposition_check(a, f, Scalar(2));
    ASSERT_TRUE(fixed.pair_identity);
    EXPECT_TRUE(fixed.ok());
    EXPECT_EQ(*fixed.delta_sq, Scalar(4));
    const ThresholdInputs th{ConvexFn::square(), make_set({0, 1})};
    const DyadicReport balanced = dyadic_decomposition_check(a, f, std::nullopt, th);
    EXPECT_TRUE(balanced.delta_star_ge_one);
    EXPECT_TRUE(balanced.ok());
  }
  EXPECT_THROW(dyadic_decomposition_check(make_set({0}), std::nullopt, make_scalar(1, 2)), std::invalid_argument);
  const nlohmann::json j = to_json(dyadic_decomposition_check(make_set({0, 1}), make_set({0, 1})));
  EXPECT_EQ(j["pair_energy"], "6");
  EXPECT_TRUE(j["pair_identity"].get<bool>());
}

TEST(LrRatio, Example) {
  const CheckReport r = lr_ratio_report(ConvexFn::square(), make_set({0, 1}), make_set({0}));
  EXPECT_EQ(r.lhs, "15552");
  EXPECT_EQ(r.verdict, Verdict::Measured);
  const double rhs = 2048.0 / (std::log(2.0) * std::log(2.0));
  EXPECT_NEAR(std::stod(r.rhs_lo), rhs, 1e-6);
  EXPECT_NEAR(r.details["ratio_mid"].get<double>(), 15552.0 / rhs, 1e-9);
  EXPECT_THROW(lr_ratio_report(ConvexFn::square(), make_set({0}), make_set({0})), std::invalid_argument);
}

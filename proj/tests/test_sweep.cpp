#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ranklash/sweep.hpp"

namespace ranklash {
namespace {

SweepSpec spec(SweepStrategy s, CostModel cost, double beta, int points = 401) {
  SweepSpec out;
  out.strategy = s;
  out.cost = cost;
  out.beta = beta;
  out.p_axis = {0.0, 1.0, points};
  out.delta_axis = {0.0, 1.0, points};
  return out;
}

TEST(Axis, CellCentres) {
  const Axis a{0.0, 1.0, 4};
  EXPECT_DOUBLE_EQ(a.at(0), 0.125);
  EXPECT_DOUBLE_EQ(a.at(3), 0.875);
  const Axis b{0.2, 0.6, 2};
  EXPECT_DOUBLE_EQ(b.at(0), 0.3);
  EXPECT_DOUBLE_EQ(b.at(1), 0.5);
}

TEST(Axis, Validation) {
  EXPECT_THROW((Axis{0.0, 1.0, 1}.validate("p")), DomainError);
  EXPECT_THROW((Axis{-0.1, 1.0, 5}.validate("p")), DomainError);
  EXPECT_THROW((Axis{0.6, 0.5, 5}.validate("p")), DomainError);
  EXPECT_THROW((Axis{0.0, 1.2, 5}.validate("p")), DomainError);
  EXPECT_NO_THROW((Axis{0.0, 1.0, 2}.validate("p")));
}

TEST(RegionSweep, HighCostMakesLowPColumnsCooperative) {
  const RegionGrid g =
      region_sweep(spec(SweepStrategy::Grim, CostModel::constant(0.25), 0.4));
  int checked = 0;
  for (int i = 0; i < g.p_points(); ++i) {
    if (g.spec.p_axis.at(i) > 0.5) continue;
    ++checked;
    for (int j = 0; j < g.delta_points(); ++j) ASSERT_TRUE(g.at(i, j));
    EXPECT_EQ(g.thresholds[i].regime, Regime::AlwaysCooperate);
  }
  EXPECT_EQ(checked, 201);  // p_200 = 0.5 exactly
}

TEST(RegionSweep, GrimAreaShrinksWithBeta) {
  const CostModel c = CostModel::constant(0.1);
  const double low = region_area(region_sweep(spec(SweepStrategy::Grim, c, 0.2)));
  const double high = region_area(region_sweep(spec(SweepStrategy::Grim, c, 0.8)));
  EXPECT_GT(low, high);
}

TEST(RegionSweep, GrimAreaStrictlyDecreasingForEveryCostModel) {
  for (double k : {0.0, 1.0, 2.0}) {
    double prev = 2.0;
    for (double beta : {0.2, 0.4, 0.6, 0.8}) {
      const double a = region_area(region_sweep(
          spec(SweepStrategy::Grim, CostModel::power(0.1, k), beta)));
      EXPECT_LT(a, prev) << "k=" << k << " beta=" << beta;
      prev = a;
    }
  }
}

TEST(RegionSweep, TftIndependentOfBeta) {
  const CostModel c = CostModel::constant(0.1);
  const RegionGrid ref = region_sweep(spec(SweepStrategy::TitForTat, c, 0.2));
  for (double beta : {0.4, 0.6, 0.8}) {
    EXPECT_EQ(region_sweep(spec(SweepStrategy::TitForTat, c, beta)).cells,
              ref.cells);
  }
}

TEST(RegionSweep, ColumnsAreMonotoneInDelta) {
  for (SweepStrategy s :
       {SweepStrategy::Grim, SweepStrategy::TitForTat, SweepStrategy::OneTimeGrim}) {
    const RegionGrid g = region_sweep(spec(s, CostModel::constant(0.1), 0.4, 101));
    for (int i = 0; i < g.p_points(); ++i) {
      for (int j = 1; j < g.delta_points(); ++j) {
        ASSERT_LE(g.at(i, j - 1), g.at(i, j)) << to_string(s) << " i=" << i;
      }
    }
  }
}

TEST(RegionSweep, ThreadCountDoesNotChangeOutput) {
  const SweepSpec s = spec(SweepStrategy::Grim, CostModel::linear(0.1), 0.3, 97);
  const RegionGrid one = region_sweep(s, 1);
  for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(region_sweep(s, t).cells, one.cells);
}

TEST(RegionSweep, OneTimeNeedsFixedCost) {
  EXPECT_THROW(
      region_sweep(spec(SweepStrategy::OneTimeGrim, CostModel::linear(0.1), 0.4)),
      DomainError);
}

TEST(RegionArea, AllTrueGridIsOne) {
  const RegionGrid g =
      region_sweep(spec(SweepStrategy::Grim, CostModel::constant(0.5), 0.4, 3));
  EXPECT_EQ(region_area(g), 1.0);
  EXPECT_EQ(region_area(RegionGrid{}), 0.0);
}

// Independent coarse grid from the enumerated payoff matrix.
double coarse_grim_area(double c, double beta, int n) {
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const double p = (i + 0.5) / n;
    const oracle::Matrix m = oracle::stage(p, c, p, beta);
    for (int j = 0; j < n; ++j) {
      const double d = (j + 0.5) / n;
      if (d * (m.T - m.Q) >= m.T - m.R) ++count;
    }
  }
  return double(count) / (double(n) * n);
}

TEST(RegionArea, GoldenValueAgainstCoarseOracle) {
  const double a =
      region_area(region_sweep(spec(SweepStrategy::Grim, CostModel::constant(0.1), 0.4)));
  EXPECT_NEAR(a, 0.6561, 5e-4);
  EXPECT_NEAR(a, coarse_grim_area(0.1, 0.4, 101), 0.01);
}

TEST(RegionArea, CostModelOrdering) {
  const auto area = [](double k) {
    return region_area(
        region_sweep(spec(SweepStrategy::Grim, CostModel::power(0.1, k), 0.4)));
  };
  const double constant = area(0), linear = area(1), quadratic = area(2);
  EXPECT_GT(constant, linear);
  EXPECT_GT(linear, quadratic);
}

TEST(RegionArea, OneTimeCostContractsRegion) {
  for (double beta : {0.2, 0.4, 0.6, 0.8}) {
    const CostModel c = CostModel::constant(0.1);
    EXPECT_LT(region_area(region_sweep(spec(SweepStrategy::OneTimeGrim, c, beta))),
              region_area(region_sweep(spec(SweepStrategy::Grim, c, beta))));
  }
  const CostModel free = CostModel::constant(0.0);
  EXPECT_EQ(region_sweep(spec(SweepStrategy::OneTimeGrim, free, 0.4, 101)).cells,
            region_sweep(spec(SweepStrategy::Grim, free, 0.4, 101)).cells);
}

TEST(RegionArea, RefinementStable) {
  const CostModel c = CostModel::constant(0.1);
  EXPECT_NEAR(region_area(region_sweep(spec(SweepStrategy::Grim, c, 0.4, 401))),
              region_area(region_sweep(spec(SweepStrategy::Grim, c, 0.4, 1601))),
              0.01);
}

TEST(Boundary, TftClosedForm) {
  const RegionGrid g =
      region_sweep(spec(SweepStrategy::TitForTat, CostModel::constant(0.1), 0.5));
  const auto line = boundary_extract(g);
  ASSERT_EQ(line.size(), 401u);
  for (const BoundaryPoint& b : line) {
    EXPECT_NEAR(b.delta_star, std::clamp(1.0 - 0.2 / b.p, 0.0, 1.0), 1e-12);
    EXPECT_NEAR(b.raw, 1.0 - 0.2 / b.p, 1e-12);
  }
}

TEST(Boundary, HalfPCostIsFlatZero) {
  const auto line = boundary_extract(
      region_sweep(spec(SweepStrategy::Grim, CostModel::linear(0.5), 0.3, 51)));
  for (const BoundaryPoint& b : line) {
    EXPECT_EQ(b.delta_star, 0.0);
    EXPECT_EQ(b.regime, Regime::AlwaysCooperate);
  }
}

TEST(Boundary, GrimHasInteriorMaximum) {
  const auto line = boundary_extract(
      region_sweep(spec(SweepStrategy::Grim, CostModel::constant(0.1), 0.2)));
  const auto top = std::max_element(
      line.begin(), line.end(),
      [](const BoundaryPoint& a, const BoundaryPoint& b) { return a.raw < b.raw; });
  // d/dp of (p - 0.2) / (p + 0.8 p^2) vanishes where -0.8p^2 + 0.32p + 0.2 = 0.
  const double stationary = (0.32 + std::sqrt(0.32 * 0.32 + 4 * 0.8 * 0.2)) / 1.6;
  EXPECT_NEAR(top->p, stationary, 1.0 / 401);
  EXPECT_GT(top->raw, line.back().raw);
  EXPECT_GT(top->raw, line[200].raw);
}

}  // namespace
}  // namespace ranklash

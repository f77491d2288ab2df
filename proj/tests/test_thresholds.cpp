#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ranklash/thresholds.hpp"

namespace ranklash {
namespace {

GameParams make(double p, double a, double beta, double k = 0.0) {
  return {p, CostModel::power(a, k), beta, CostTiming::Recurring};
}

GameParams one_time(double p, double a, double beta) {
  return {p, CostModel::constant(a), beta, CostTiming::OneTimeFixed};
}

// Root of V_C - V_D over delta, with both values summed from explicit
// payoff sequences.
double bisect_grim(double p, double c, double beta) {
  const oracle::Matrix m = oracle::stage(p, c, p, beta);
  return oracle::bisect(
      [&](double d) {
        return oracle::discounted({}, {m.R}, d) -
               oracle::discounted({m.T}, {m.Q}, d);
      },
      0.0, 1.0 - 1e-12);
}

TEST(GrimThreshold, ReferencePoint) {
  const ThresholdReport r = delta_star_grim(make(0.5, 0.1, 0.4));
  EXPECT_NEAR(r.delta_star, 0.3 / 0.65, 1e-15);
  EXPECT_NEAR(r.delta_star, 0.461538, 1e-6);
  EXPECT_EQ(r.regime, Regime::Interior);
  EXPECT_FALSE(r.degenerate);
  EXPECT_NEAR(r.delta_star, bisect_grim(0.5, 0.1, 0.4), 1e-9);
}

TEST(GrimThreshold, HalfPCostRemovesTemptation) {
  for (double beta : {0.0, 0.4, 1.0}) {
    const ThresholdReport r = delta_star_grim(make(0.5, 0.25, beta));
    EXPECT_EQ(r.delta_star, 0.0);
    EXPECT_EQ(r.regime, Regime::AlwaysCooperate);
  }
}

TEST(GrimThreshold, FreeUndegradedAttackNeverCooperates) {
  const ThresholdReport r = delta_star_grim(make(0.5, 0.0, 1.0));
  EXPECT_DOUBLE_EQ(r.delta_star, 1.0);
  EXPECT_EQ(r.regime, Regime::NeverCooperate);
  EXPECT_FALSE(r.sustains(0.999));
}

TEST(GrimThreshold, ZeroSuccessRateIsDegenerate) {
  for (double a : {0.0, 0.1}) {
    const ThresholdReport r = delta_star_grim(make(0.0, a, 0.4));
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.regime, Regime::AlwaysCooperate);
    EXPECT_TRUE(r.sustains(0.0));
  }
}

TEST(GrimThreshold, RejectsOneTimeTiming) {
  try {
    delta_star_grim(one_time(0.5, 0.1, 0.4));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("delta_star_one_time"),
              std::string::npos);
  }
}

TEST(GrimThreshold, MatchesBisectionOracle) {
  std::mt19937_64 rng(21);
  int interior = 0;
  for (int i = 0; i < 1000; ++i) {
    const double p = oracle::uniform(rng, 0.05, 0.95);
    const double beta = oracle::uniform(rng, 0.05, 0.95);
    const GameParams g = make(p, oracle::uniform(rng, 0, 0.3), beta, i % 3);
    const ThresholdReport r = delta_star_grim(g);
    if (r.regime != Regime::Interior) continue;
    ++interior;
    EXPECT_NEAR(r.delta_star, bisect_grim(p, g.attack_cost(), beta), 1e-6);
  }
  EXPECT_GT(interior, 300);
}

TEST(GrimThreshold, RegimeAgreesWithValue) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    const ThresholdReport r = delta_star_grim(make(
        oracle::uniform(rng, 0, 1), oracle::uniform(rng, 0, 0.6),
        oracle::uniform(rng, 0, 1), i % 3));
    if (r.delta_star <= 0.0) {
      EXPECT_EQ(r.regime, Regime::AlwaysCooperate);
    } else if (r.delta_star >= 1.0) {
      EXPECT_EQ(r.regime, Regime::NeverCooperate);
    } else {
      EXPECT_EQ(r.regime, Regime::Interior);
    }
  }
}

TEST(CostThreshold, ReferencePoint) {
  const CostThreshold t = cost_threshold_grim(0.5, 0.4, 0.6);
  EXPECT_NEAR(t.min_cost, 0.055, 1e-15);
  EXPECT_FALSE(t.clamped);
  // The cost at which delta* hits 0.6, solved numerically.
  const double c = oracle::bisect(
      [](double cc) { return delta_star_grim_raw(0.5, cc, 0.4) - 0.6; }, 0.0,
      0.25);
  EXPECT_NEAR(t.min_cost, c, 1e-12);
}

TEST(CostThreshold, PatientPlayersAcceptAnyCost) {
  const CostThreshold t = cost_threshold_grim(0.5, 0.4, 0.999999);
  EXPECT_LT(t.raw, 0.0);
  EXPECT_TRUE(t.clamped);
  EXPECT_EQ(t.min_cost, 0.0);
}

TEST(CostThreshold, MyopicPlayersNeedHalfP) {
  EXPECT_NEAR(cost_threshold_grim(0.5, 0.4, 0.0).min_cost, 0.25, 1e-15);
  EXPECT_NEAR(cost_threshold_tft(0.5, 0.0).min_cost, 0.25, 1e-15);
}

TEST(CostThreshold, RejectsUnitDiscount) {
  EXPECT_THROW(cost_threshold_grim(0.5, 0.4, 1.0), DomainError);
  EXPECT_THROW(cost_threshold_tft(0.5, 1.0), DomainError);
}

TEST(TftThreshold, Examples) {
  const ThresholdReport r = delta_star_tft(make(0.5, 0.1, 0.4));
  EXPECT_NEAR(r.delta_star, 0.6, 1e-15);
  EXPECT_TRUE(r.beta_independent);
  EXPECT_EQ(delta_star_tft(make(0.5, 0.25, 0.4)).regime,
            Regime::AlwaysCooperate);
  EXPECT_EQ(delta_star_tft(make(0.5, 0.25, 0.4)).delta_star, 0.0);
  const ThresholdReport free = delta_star_tft(make(0.5, 0.0, 0.4));
  EXPECT_EQ(free.delta_star, 1.0);
  EXPECT_EQ(free.regime, Regime::NeverCooperate);
}

TEST(TftThreshold, IndependentOfBeta) {
  for (double beta : {0.0, 0.2, 0.8, 1.0}) {
    EXPECT_EQ(delta_star_tft(make(0.7, 0.1, beta)).delta_star,
              delta_star_tft(make(0.7, 0.1, 0.4)).delta_star);
  }
}

TEST(TftThreshold, MatchesBisectionOfSingleDefection) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const double p = oracle::uniform(rng, 0.05, 0.95);
    const double beta = oracle::uniform(rng, 0.05, 0.95);
    const GameParams g = make(p, oracle::uniform(rng, 0, 0.3), beta, i % 3);
    const ThresholdReport r = delta_star_tft(g);
    if (r.regime != Regime::Interior) continue;
    const oracle::Matrix m = oracle::stage(p, g.attack_cost(), p, beta);
    const double root = oracle::bisect(
        [&](double d) {
          return oracle::discounted({}, {m.R}, d) -
                 oracle::discounted({m.T, m.S}, {m.R}, d);
        },
        0.0, 1.0 - 1e-12);
    EXPECT_NEAR(r.delta_star, root, 1e-6);
  }
}

TEST(TftK, Examples) {
  const TftKChoice a = tft_k_classify(make(0.5, 0.1, 0.4), 0.6);
  EXPECT_NEAR(a.threshold, 0.3, 1e-15);
  EXPECT_EQ(a.optimal_k, DefectionLength::One);
  EXPECT_EQ(tft_k_classify(make(0.5, 0.1, 0.4), 0.2).optimal_k,
            DefectionLength::Forever);
  const TftKChoice c = tft_k_classify(make(0.5, 0.0, 1.0), 0.99);
  EXPECT_DOUBLE_EQ(c.threshold, 1.0);
  EXPECT_EQ(c.optimal_k, DefectionLength::Forever);
  EXPECT_EQ(to_string(DefectionLength::Forever), "Infinity");
}

TEST(TftK, ThresholdIsPayoffRatio) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 200; ++i) {
    const double p = oracle::uniform(rng, 0.05, 1);
    const double beta = oracle::uniform(rng, 0, 1);
    const GameParams g = make(p, oracle::uniform(rng, 0, 0.3), beta, i % 3);
    const oracle::Matrix m = oracle::stage(p, g.attack_cost(), p, beta);
    EXPECT_NEAR(tft_k_classify(g, 0.5).threshold, (m.Q - m.S) / (m.R - m.S),
                1e-10);
  }
}

TEST(TftK, RejectsZeroSuccessRate) {
  EXPECT_THROW(tft_k_classify(make(0.0, 0.1, 0.4), 0.5), DomainError);
  EXPECT_THROW(tft_k_classify(make(0.5, 0.1, 0.4), 1.0), DomainError);
}

TEST(OneTime, Examples) {
  const ThresholdReport r = delta_star_one_time(one_time(0.5, 0.1, 0.4));
  EXPECT_NEAR(r.delta_star, 0.3 / 0.45, 1e-15);
  EXPECT_TRUE(r.exceeds_recurring.value());
  const ThresholdReport free = delta_star_one_time(one_time(0.5, 0.0, 0.4));
  EXPECT_EQ(free.delta_star, delta_star_grim(make(0.5, 0.0, 0.4)).delta_star);
  EXPECT_NEAR(free.delta_star, 0.769231, 1e-6);
  const ThresholdReport none = delta_star_one_time(one_time(0.5, 0.25, 0.7));
  EXPECT_EQ(none.delta_star, 0.0);
  EXPECT_EQ(none.regime, Regime::AlwaysCooperate);
}

TEST(OneTime, RejectsNonFixedCostOrWrongTiming) {
  GameParams g = one_time(0.5, 0.1, 0.4);
  g.cost.exponent = 1.0;
  EXPECT_THROW(delta_star_one_time(g), DomainError);
  EXPECT_THROW(delta_star_one_time(make(0.5, 0.1, 0.4)), DomainError);
}

TEST(OneTime, NeverBelowRecurring) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 1000; ++i) {
    const double p = oracle::uniform(rng, 0.05, 1);
    const double c = oracle::uniform(rng, 1e-6, p / 2);
    const double beta = oracle::uniform(rng, 0, 1);
    const double once = delta_star_one_time(one_time(p, c, beta)).delta_star;
    EXPECT_GE(once, delta_star_grim(make(p, c, beta)).delta_star);
  }
}

TEST(OneTime, MatchesBisectionOracle) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 300; ++i) {
    const double p = oracle::uniform(rng, 0.05, 0.95);
    const double c = oracle::uniform(rng, 0, 0.3);
    const double beta = oracle::uniform(rng, 0.05, 0.95);
    const ThresholdReport r = delta_star_one_time(one_time(p, c, beta));
    if (r.regime != Regime::Interior) continue;
    const oracle::Matrix m = oracle::stage(p, c, p, beta);
    const double root = oracle::bisect(
        [&](double d) {
          return oracle::discounted({}, {m.R}, d) -
                 oracle::discounted({m.T}, {m.Q + c}, d);
        },
        0.0, 1.0 - 1e-12);
    EXPECT_NEAR(r.delta_star, root, 1e-6);
  }
}

TEST(Asymmetric, SuccessRateGap) {
  const auto c = CostModel::constant(0.1);
  const AsymmetricThresholds t =
      thresholds_asymmetric({0.3, c, 0.9}, {0.7, c, 0.9}, 0.4, Strategy::Grim);
  EXPECT_NEAR(t.players[0].delta_star, 0.1 / 0.826, 1e-12);
  EXPECT_NEAR(t.players[1].delta_star, 0.5 / 0.426, 1e-12);
  EXPECT_EQ(t.players[1].regime, Regime::NeverCooperate);
  EXPECT_EQ(t.binding_player, 2);
  EXPECT_FALSE(t.sustained);
}

TEST(Asymmetric, IdenticalProfilesReduce) {
  const auto c = CostModel::constant(0.1);
  for (Strategy s : {Strategy::Grim, Strategy::TitForTat}) {
    const AsymmetricThresholds t =
        thresholds_asymmetric({0.5, c, 0.6}, {0.5, c, 0.6}, 0.4, s);
    const double sym = s == Strategy::Grim
                           ? delta_star_grim(make(0.5, 0.1, 0.4)).delta_star
                           : delta_star_tft(make(0.5, 0.1, 0.4)).delta_star;
    EXPECT_NEAR(t.players[0].delta_star, sym, 1e-12);
    EXPECT_NEAR(t.players[1].delta_star, sym, 1e-12);
    EXPECT_EQ(t.binding_player, 1);
  }
}

TEST(Asymmetric, CheaperAttackerBinds) {
  const AsymmetricThresholds t = thresholds_asymmetric(
      {0.5, CostModel::constant(0.05), 0.6},
      {0.5, CostModel::constant(0.2), 0.6}, 0.4, Strategy::Grim);
  EXPECT_NEAR(t.players[0].delta_star, 0.4 / 0.65, 1e-12);
  EXPECT_NEAR(t.players[1].delta_star, 0.1 / 0.65, 1e-12);
  EXPECT_EQ(t.binding_player, 1);
}

TEST(Asymmetric, ImpatientPlayerBinds) {
  const auto c = CostModel::constant(0.1);
  const AsymmetricThresholds t =
      thresholds_asymmetric({0.5, c, 0.3}, {0.5, c, 0.8}, 0.4, Strategy::Grim);
  EXPECT_EQ(t.binding_player, 1);
  EXPECT_FALSE(t.sustained);
  EXPECT_FALSE(sustained_with_discounts(0.5, 0.1, 0.4, 0.3, 0.8,
                                        Strategy::Grim));
  EXPECT_TRUE(sustained_with_discounts(0.5, 0.1, 0.4, 0.5, 0.8,
                                       Strategy::Grim));
}

TEST(Asymmetric, TftZeroOpponentSuccessIsDegenerate) {
  const auto c = CostModel::constant(0.1);
  const AsymmetricThresholds t = thresholds_asymmetric(
      {0.5, c, 0.6}, {0.0, c, 0.6}, 0.4, Strategy::TitForTat);
  EXPECT_TRUE(t.players[0].degenerate);
  EXPECT_EQ(t.players[0].regime, Regime::NeverCooperate);
  EXPECT_EQ(t.players[1].regime, Regime::AlwaysCooperate);
}

TEST(Asymmetric, MatchesPerPlayerBisection) {
  std::mt19937_64 rng(27);
  for (int i = 0; i < 300; ++i) {
    const double p1 = oracle::uniform(rng, 0.05, 0.95);
    const double p2 = oracle::uniform(rng, 0.05, 0.95);
    const double c1 = oracle::uniform(rng, 0, 0.2);
    const double c2 = oracle::uniform(rng, 0, 0.2);
    const double beta = oracle::uniform(rng, 0.05, 0.95);
    const PlayerProfile a{p1, CostModel::constant(c1), 0.5};
    const PlayerProfile b{p2, CostModel::constant(c2), 0.5};
    for (Strategy s : {Strategy::Grim, Strategy::TitForTat}) {
      const AsymmetricThresholds t = thresholds_asymmetric(a, b, beta, s);
      for (int i_player = 0; i_player < 2; ++i_player) {
        if (t.players[i_player].regime != Regime::Interior) continue;
        const double own_p = i_player == 0 ? p1 : p2;
        const double own_c = i_player == 0 ? c1 : c2;
        const double other_p = i_player == 0 ? p2 : p1;
        const oracle::Matrix m = oracle::stage(own_p, own_c, other_p, beta);
        const double root = oracle::bisect(
            [&](double d) {
              const double vd = s == Strategy::Grim
                                    ? oracle::discounted({m.T}, {m.Q}, d)
                                    : oracle::discounted({m.T, m.S}, {m.R}, d);
              return oracle::discounted({}, {m.R}, d) - vd;
            },
            0.0, 1.0 - 1e-12);
        EXPECT_NEAR(t.players[i_player].delta_star, root, 1e-6);
      }
    }
  }
}

TEST(Monotonicity, CostAndBeta) {
  const GameParams g = make(0.5, 0.1, 0.4);
  const MonotonicityProbe c = monotonicity_probe(g, ProbeVariable::Cost);
  EXPECT_EQ(c.sign, -1);
  EXPECT_NEAR(c.derivative, -2.0 / 0.65, 1e-6);
  EXPECT_EQ(monotonicity_probe(g, ProbeVariable::Beta).sign, 1);
}

TEST(Monotonicity, SuccessRateSignFlips) {
  EXPECT_EQ(monotonicity_probe(make(0.5, 0.1, 0.2), ProbeVariable::P).sign, 1);
  EXPECT_EQ(monotonicity_probe(make(0.95, 0.1, 0.2), ProbeVariable::P).sign,
            -1);
  EXPECT_NEAR(delta_star_grim(make(0.5, 0.1, 0.2)).delta_star, 0.428571, 1e-6);
  EXPECT_NEAR(delta_star_grim(make(1.0, 0.1, 0.2)).delta_star, 0.444444, 1e-6);
}

TEST(Monotonicity, RejectsBoundaryPoints) {
  EXPECT_THROW(monotonicity_probe(make(1.0, 0.1, 0.2), ProbeVariable::P),
               DomainError);
  EXPECT_THROW(monotonicity_probe(make(0.5, 0.1, 0.0), ProbeVariable::Beta),
               DomainError);
  EXPECT_THROW(monotonicity_probe(make(0.5, 0.0, 0.4), ProbeVariable::Cost),
               DomainError);
}

TEST(Monotonicity, SignsHoldAtRandomInteriorPoints) {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 1000; ++i) {
    const double p = oracle::uniform(rng, 0.05, 0.95);
    const double c = oracle::uniform(rng, 1e-3, p / 2 - 1e-3);
    const GameParams g = make(p, c, oracle::uniform(rng, 0.05, 0.95));
    EXPECT_EQ(monotonicity_probe(g, ProbeVariable::Cost).sign, -1);
    EXPECT_EQ(monotonicity_probe(g, ProbeVariable::Beta).sign, 1);
  }
}

}  // namespace
}  // namespace ranklash

#pragma once

// Critical discount factors and cost thresholds under grim trigger,
// tit-for-tat, one-time fixed cost and asymmetric players.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string_view>

#include "ranklash/core.hpp"
#include "ranklash/numerics.hpp"

namespace ranklash {

enum class Regime { AlwaysCooperate, Interior, NeverCooperate };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::AlwaysCooperate: return "AlwaysCooperate";
    case Regime::Interior: return "Interior";
    case Regime::NeverCooperate: return "NeverCooperate";
  }
  return "?";
}

enum class Strategy { Grim, TitForTat };

struct ThresholdReport {
  // Raw threshold; values outside [0,1] are kept, `regime` interprets them.
  double delta_star = 0.0;
  Regime regime = Regime::Interior;
  std::optional<int> binding_player;  // 1 or 2, asymmetric case only
  // The ratio had a non-positive denominator. delta_star is 0 or 1 to
  // signal the regime, or a true crossing when `inverted` is set.
  bool degenerate = false;
  // The threshold does not depend on beta (tit-for-tat).
  bool beta_independent = false;
  // Negative denominator with an interior crossing: cooperation holds for
  // delta <= delta_star instead of above it.
  bool inverted = false;
  // One-time cost only: delta_star >= the recurring-cost threshold.
  std::optional<bool> exceeds_recurring;

  // Cooperation holds at delta iff delta >= delta_star (weak inequality).
  bool sustains(double delta) const {
    return inverted ? delta <= delta_star : delta >= delta_star;
  }
};

namespace detail {

inline Regime regime_of(double delta_star) {
  if (delta_star <= 0.0) return Regime::AlwaysCooperate;
  if (delta_star >= 1.0) return Regime::NeverCooperate;
  return Regime::Interior;
}

// Threshold of the condition delta * denominator >= numerator over
// delta in [0,1). Rounding residue within 1e-12 of 0 or 1 is snapped.
inline ThresholdReport threshold_from_ratio(double numerator,
                                            double denominator) {
  ThresholdReport report;
  if (denominator > 0.0) {
    double d = numerator / denominator;
    if (std::abs(d) <= 1e-12) d = 0.0;
    if (std::abs(d - 1.0) <= 1e-12) d = 1.0;
    report.delta_star = d;
    report.regime = regime_of(d);
    return report;
  }
  // delta * den is non-increasing in delta, so the condition is hardest as
  // delta -> 1; with den == 0 it reduces to 0 >= numerator.
  report.degenerate = true;
  if (denominator >= numerator) {
    report.delta_star = 0.0;
    report.regime = Regime::AlwaysCooperate;
  } else if (numerator > 0.0) {
    report.delta_star = 1.0;
    report.regime = Regime::NeverCooperate;
  } else {
    report.delta_star = numerator / denominator;
    report.regime = Regime::Interior;
    report.inverted = true;
  }
  return report;
}

inline void require_recurring(const GameParams& params, const char* op) {
  if (params.cost_timing != CostTiming::Recurring) {
    throw DomainError(std::string("precondition violated: ") + op +
                      " needs recurring cost timing; use "
                      "delta_star_one_time for a one-time fixed cost");
  }
}

}  // namespace detail

// (p - 2c) / (p - beta p^2 + p^2), i.e. (T - R) / (T - Q).
inline double delta_star_grim_raw(double p, double cost, double beta) {
  return (p - 2.0 * cost) / (p - beta * p * p + p * p);
}

inline ThresholdReport delta_star_grim(const GameParams& params) {
  params.validate();
  detail::require_recurring(params, "delta_star_grim");
  const double p = params.p;
  const double c = params.attack_cost();
  return detail::threshold_from_ratio(p - 2.0 * c,
                                      p - params.beta * p * p + p * p);
}

struct CostThreshold {
  double min_cost = 0.0;  // clamped at 0
  double raw = 0.0;
  bool clamped = false;   // any nonnegative cost sustains cooperation
};

// Smallest recurring cost that sustains grim-trigger cooperation at delta.
inline CostThreshold cost_threshold_grim(double p, double beta, double delta) {
  require_probability(p);
  require_discount(delta);
  detail::require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0,1]", beta);
  CostThreshold out;
  out.raw = 0.5 * (p - delta * (p - beta * p * p + p * p));
  out.clamped = out.raw < 0.0;
  out.min_cost = out.clamped ? 0.0 : out.raw;
  return out;
}

// Same for tit-for-tat: c >= (1 - delta) p / 2.
inline CostThreshold cost_threshold_tft(double p, double delta) {
  require_probability(p);
  require_discount(delta);
  CostThreshold out;
  out.raw = 0.5 * (1.0 - delta) * p;
  out.clamped = out.raw < 0.0;
  out.min_cost = out.clamped ? 0.0 : out.raw;
  return out;
}

// 1 - 2c/p, shared by single retaliation and alternating defection.
inline ThresholdReport delta_star_tft(const GameParams& params) {
  params.validate();
  const double p = params.p;
  const double c = params.attack_cost();
  // (T - R) / (R - S) = (p/2 - c) / (p/2)
  ThresholdReport report = detail::threshold_from_ratio(p - 2.0 * c, p);
  report.beta_independent = true;
  return report;
}

enum class DefectionLength { One, Forever };

inline std::string_view to_string(DefectionLength k) {
  return k == DefectionLength::One ? "One" : "Infinity";
}

struct TftKChoice {
  double threshold = 0.0;  // (Q - S) / (R - S)
  DefectionLength optimal_k = DefectionLength::One;
};

// A deviator facing tit-for-tat either defects once or forever: once when
// delta >= p beta + (1 - p) - 2c/p, forever otherwise.
inline TftKChoice tft_k_classify(const GameParams& params, double delta) {
  params.validate();
  require_discount(delta);
  if (params.p == 0.0) {
    throw DomainError(
        "precondition violated: tft-k threshold needs p > 0 (got 0)");
  }
  const double p = params.p;
  const double c = params.attack_cost();
  TftKChoice out;
  out.threshold = p * params.beta + (1.0 - p) - 2.0 * c / p;
  out.optimal_k =
      delta >= out.threshold ? DefectionLength::One : DefectionLength::Forever;
  return out;
}

// One-time fixed cost: (p - 2c) / (p - p^2 beta + p^2 - 2c).
inline ThresholdReport delta_star_one_time(const GameParams& params) {
  params.validate();
  if (params.cost_timing != CostTiming::OneTimeFixed) {
    throw DomainError(
        "precondition violated: delta_star_one_time needs one-time cost "
        "timing");
  }
  if (!params.cost.is_constant()) {
    throw DomainError(
        "precondition violated: one-time cost must be a fixed cost "
        "(exponent 0, got " +
        detail::format_value(params.cost.exponent) + ")");
  }
  const double p = params.p;
  const double c = params.attack_cost();
  ThresholdReport report = detail::threshold_from_ratio(
      p - 2.0 * c, p - p * p * params.beta + p * p - 2.0 * c);
  GameParams recurring = params;
  recurring.cost_timing = CostTiming::Recurring;
  report.exceeds_recurring =
      report.delta_star >= delta_star_grim(recurring).delta_star;
  return report;
}

struct AsymmetricThresholds {
  std::array<ThresholdReport, 2> players;
  int binding_player = 1;
  bool sustained = false;  // both players' discount factors clear their bar
};

// Per-player thresholds for players differing in success rate, cost and
// patience. Grim: (p_i - 2c_i) / ((1-beta) p_1 p_2 + p_j);
// tit-for-tat: (p_i - 2c_i) / p_j.
inline AsymmetricThresholds thresholds_asymmetric(const PlayerProfile& first,
                                                  const PlayerProfile& second,
                                                  double beta,
                                                  Strategy strategy) {
  first.validate();
  second.validate();
  detail::require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0,1]", beta);
  const std::array<const PlayerProfile*, 2> prof{&first, &second};
  AsymmetricThresholds out;
  for (int i = 0; i < 2; ++i) {
    const PlayerProfile& own = *prof[i];
    const PlayerProfile& other = *prof[1 - i];
    const double numerator = own.p - 2.0 * own.attack_cost();
    const double denominator =
        strategy == Strategy::Grim
            ? (1.0 - beta) * first.p * second.p + other.p
            : other.p;
    out.players[i] = detail::threshold_from_ratio(numerator, denominator);
    out.players[i].beta_independent = strategy == Strategy::TitForTat;
  }
  const double slack1 = out.players[0].delta_star - first.delta;
  const double slack2 = out.players[1].delta_star - second.delta;
  if (slack2 > slack1) {
    out.binding_player = 2;
  } else if (slack2 == slack1 &&
             out.players[1].delta_star > out.players[0].delta_star) {
    out.binding_player = 2;
  } else {
    out.binding_player = 1;
  }
  for (auto& r : out.players) r.binding_player = out.binding_player;
  out.sustained = out.players[0].sustains(first.delta) &&
                  out.players[1].sustains(second.delta);
  return out;
}

// Players that share p and c but differ in patience: cooperation holds iff
// the cost clears both players' cost thresholds.
inline bool sustained_with_discounts(double p, double cost, double beta,
                                     double delta1, double delta2,
                                     Strategy strategy) {
  auto bar = [&](double delta) {
    return strategy == Strategy::Grim ? cost_threshold_grim(p, beta, delta).raw
                                      : cost_threshold_tft(p, delta).raw;
  };
  return cost >= bar(delta1) && cost >= bar(delta2);
}

enum class ProbeVariable { Cost, Beta, P };

struct MonotonicityProbe {
  int sign = 0;
  double derivative = 0.0;
};

// Sign of d(delta*_grim)/d(variable) by central difference. For P the cost
// model is re-evaluated at the shifted p; for Cost the evaluated cost value
// is shifted directly.
inline MonotonicityProbe monotonicity_probe(const GameParams& params,
                                            ProbeVariable variable,
                                            double step = 1e-5) {
  params.validate();
  detail::require(step > 0.0, "probe step must be > 0", step);
  const double p = params.p;
  const double c = params.attack_cost();
  const double beta = params.beta;
  auto guard = [&](double x, double lo, double hi, const char* name) {
    if (x - step < lo || x + step > hi) {
      throw DomainError(std::string("precondition violated: probe point ") +
                        name + " = " + detail::format_value(x) +
                        " lies within step of the domain boundary");
    }
  };
  std::function<double(double)> f;
  double x = 0.0;
  switch (variable) {
    case ProbeVariable::Cost:
      guard(c, 0.0, HUGE_VAL, "c");
      guard(p, 0.0, 1.0, "p");  // delta* undefined at p = 0
      x = c;
      f = [&](double cc) { return delta_star_grim_raw(p, cc, beta); };
      break;
    case ProbeVariable::Beta:
      guard(beta, 0.0, 1.0, "beta");
      guard(p, 0.0, 1.0, "p");
      x = beta;
      f = [&](double b) { return delta_star_grim_raw(p, c, b); };
      break;
    case ProbeVariable::P:
      guard(p, 0.0, 1.0, "p");
      x = p;
      f = [&](double pp) {
        return delta_star_grim_raw(pp, eval_cost(params.cost, pp), beta);
      };
      break;
  }
  MonotonicityProbe out;
  out.derivative = numerics::central_difference(f, x, step);
  if (out.derivative > kTolerance) {
    out.sign = 1;
  } else if (out.derivative < -kTolerance) {
    out.sign = -1;
  }
  return out;
}

}  // namespace ranklash

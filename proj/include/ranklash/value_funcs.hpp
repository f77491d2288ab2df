#pragma once

// Discounted values of continued cooperation and of each defection path,
// payoff curves over the attack success rate, and futile-defense detection.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "ranklash/core.hpp"
#include "ranklash/numerics.hpp"

namespace ranklash {

enum class PatternKind {
  GrimPath,         // T, then Q forever
  TftSingle,        // T, S, then R forever
  TftAlternating,   // T, S, T, S, ...
  TftKRounds,       // T, Q x (k-1), S, then R forever
  OneTimeGrimPath,  // grim path with the attack cost charged once
};

struct DefectionPattern {
  PatternKind kind = PatternKind::GrimPath;
  int rounds = 1;  // TftKRounds only

  static DefectionPattern grim() { return {PatternKind::GrimPath, 1}; }
  static DefectionPattern tft_single() { return {PatternKind::TftSingle, 1}; }
  static DefectionPattern tft_alternating() {
    return {PatternKind::TftAlternating, 1};
  }
  static DefectionPattern tft_k(int k) { return {PatternKind::TftKRounds, k}; }
  static DefectionPattern one_time_grim() {
    return {PatternKind::OneTimeGrimPath, 1};
  }
};

inline std::string_view to_string(PatternKind k) {
  switch (k) {
    case PatternKind::GrimPath: return "grim";
    case PatternKind::TftSingle: return "tft-single";
    case PatternKind::TftAlternating: return "tft-alternating";
    case PatternKind::TftKRounds: return "tft-k";
    case PatternKind::OneTimeGrimPath: return "one-time-grim";
  }
  return "?";
}

// R / (1 - delta)
template <class Real>
Real cooperate_value(const BasicPayoffMatrix<Real>& m, const Real& delta) {
  return m.reward / (Real(1) - delta);
}

// Discounted value of the defection path for a player whose stage payoffs
// are `m`. For OneTimeGrimPath, `one_time_cost` is the fixed cost already
// subtracted in `m`; it is charged in the first round only.
template <class Real>
Real defect_value(const BasicPayoffMatrix<Real>& m, const Real& delta,
                  const DefectionPattern& pattern,
                  const Real& one_time_cost = Real(0)) {
  using std::pow;
  const Real one(1);
  switch (pattern.kind) {
    case PatternKind::GrimPath:
      return m.temptation + delta * m.mutual_attack / (one - delta);
    case PatternKind::TftSingle:
      return m.temptation + delta * m.sucker +
             delta * delta / (one - delta) * m.reward;
    case PatternKind::TftAlternating:
      return (m.temptation + delta * m.sucker) / (one - delta * delta);
    case PatternKind::TftKRounds: {
      const Real dk = pow(delta, pattern.rounds);
      return m.temptation + (delta - dk) / (one - delta) * m.mutual_attack +
             dk * m.sucker + dk * delta / (one - delta) * m.reward;
    }
    case PatternKind::OneTimeGrimPath:
      return m.temptation +
             delta * (m.mutual_attack + one_time_cost) / (one - delta);
  }
  return m.temptation;
}

namespace detail {

inline void check_pattern(const GameParams& params,
                          const DefectionPattern& pattern) {
  if (pattern.kind == PatternKind::TftKRounds && pattern.rounds < 1) {
    throw DomainError("precondition violated: defection rounds k must be >= 1"
                      " (got " + std::to_string(pattern.rounds) + ")");
  }
  if (pattern.kind == PatternKind::OneTimeGrimPath &&
      !params.cost.is_constant()) {
    throw DomainError(
        "precondition violated: one-time grim path needs a constant cost "
        "model (exponent 0)");
  }
}

}  // namespace detail

inline double v_cooperate(const GameParams& params, double delta) {
  params.validate();
  require_discount(delta);
  return cooperate_value(stage_payoffs(params), delta);
}

inline double v_defect(const GameParams& params, double delta,
                       const DefectionPattern& pattern) {
  params.validate();
  require_discount(delta);
  detail::check_pattern(params, pattern);
  return defect_value(stage_payoffs(params), delta, pattern,
                      params.attack_cost());
}

struct CurveSample {
  double p = 0.0;
  double v_c = 0.0;
  double v_d = 0.0;
  double gap = 0.0;  // v_d - v_c
};

inline std::vector<CurveSample> defection_curve(
    const GameParams& params_template, double delta,
    const std::vector<double>& p_grid, const DefectionPattern& pattern) {
  if (p_grid.empty()) {
    throw DomainError("precondition violated: p grid must not be empty");
  }
  std::vector<CurveSample> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    GameParams params = params_template;
    params.p = p;
    CurveSample s;
    s.p = p;
    s.v_c = v_cooperate(params, delta);
    s.v_d = v_defect(params, delta, pattern);
    s.gap = s.v_d - s.v_c;
    out.push_back(s);
  }
  return out;
}

struct DefectionPeak {
  double p_peak = 0.0;
  double v_d_max = 0.0;
};

inline constexpr int kPeakGridPoints = 1001;

// Maximum of V_D(p) over p in [0, cap]: coarse grid, then golden-section
// refinement around the best grid point (|dp| <= 1e-6). Ties go to the
// smallest p.
inline DefectionPeak capped_peak(const GameParams& params_template,
                                 double delta, const DefectionPattern& pattern,
                                 double cap, int grid_points = kPeakGridPoints) {
  require_probability(cap, "cap");
  detail::require(grid_points >= 2, "peak grid needs >= 2 points",
                  grid_points);
  auto value_at = [&](double p) {
    GameParams params = params_template;
    params.p = p;
    return v_defect(params, delta, pattern);
  };
  int best = 0;
  double best_value = value_at(0.0);
  const double h = cap / (grid_points - 1);
  for (int i = 1; i < grid_points; ++i) {
    const double v = value_at(i == grid_points - 1 ? cap : i * h);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  if (cap == 0.0) return {0.0, best_value};
  const double lo = std::max(0.0, (best - 1) * h);
  const double hi = std::min(cap, (best + 1) * h);
  const numerics::Extremum refined =
      numerics::golden_section_max(value_at, lo, hi, 1e-6);
  if (refined.value > best_value) return {refined.x, refined.value};
  return {best == grid_points - 1 ? cap : best * h, best_value};
}

// Lowering p can raise V_D. Locates the attacker's best p.
inline DefectionPeak peak_defection(const GameParams& params_template,
                                    double delta,
                                    const DefectionPattern& pattern) {
  detail::require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)", delta);
  return capped_peak(params_template, delta, pattern, 1.0);
}

struct FutileReport {
  double p_peak = 0.0;
  double v_d_max = 0.0;
  // Caps on the attainable p inside [lo, hi] leave max V_D unchanged.
  std::optional<std::pair<double, double>> futile_interval;
  bool exists = false;
};

// A cap c on p is futile when max_{p <= c} V_D = max_{p <= 1} V_D, which
// holds for every c >= p_peak. The interval exists iff the peak is interior.
inline FutileReport futile_defense(const GameParams& params_template,
                                   double delta,
                                   const DefectionPattern& pattern) {
  const DefectionPeak peak = peak_defection(params_template, delta, pattern);
  FutileReport report;
  report.p_peak = peak.p_peak;
  report.v_d_max = peak.v_d_max;
  report.exists = peak.p_peak < 1.0;
  if (report.exists) report.futile_interval = std::make_pair(peak.p_peak, 1.0);
  return report;
}

}  // namespace ranklash

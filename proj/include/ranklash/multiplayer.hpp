#pragma once

// N providers, M of whom attack. Successful attackers split the market;
// if all N succeed the market degrades to beta; if none succeeds it is
// split N ways.
//
// Two readings of the temptation and mutual-attack sums are provided:
//   AsWritten  sums C(M,k) p^k (1-p)^(M-k) / k over k (resp. C(N,k)), the
//              literal closed form; for N = 2 its Q disagrees with the
//              two-player table.
//   PerPlayer  the focal attacker's own expectation, where it must be one
//              of the k winners: C(M-1,k-1) (resp. C(N-1,k-1)).

#include <algorithm>
#include <cmath>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "ranklash/core.hpp"
#include "ranklash/thresholds.hpp"

namespace ranklash {

enum class MultiMode { AsWritten, PerPlayer };

inline std::string_view to_string(MultiMode m) {
  return m == MultiMode::AsWritten ? "as-written" : "per-player";
}

struct MultiParams {
  int n = 2;  // players
  int m = 1;  // attackers
  double p = 0.0;
  CostModel cost;
  double beta = 1.0;
  MultiMode mode = MultiMode::AsWritten;

  double attack_cost() const { return eval_cost(cost, p); }

  void validate() const {
    detail::require(n >= 2, "player count n must be >= 2", n);
    detail::require(m >= 1 && m < n, "attacker count m must satisfy 1 <= m < n",
                    m);
    require_probability(p);
    cost.validate();
    detail::require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0,1]",
                    beta);
  }
};

// C(n,k) p^k (1-p)^(n-k), evaluated in log space.
inline double binomial_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

namespace detail {

// Sums terms in descending magnitude.
inline double sum_descending(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

// sum_{k=lo}^{hi} C(trials, k) p^k (1-p)^(trials-k) / k, or with
// C(trials-1, k-1) in place of C(trials, k) when `focal`.
inline double share_sum(int trials, int lo, int hi, double p, bool focal) {
  std::vector<double> terms;
  terms.reserve(std::max(0, hi - lo + 1));
  for (int k = lo; k <= hi; ++k) {
    // C(n-1,k-1) p^k (1-p)^(n-k) = p * pmf(n-1, k-1)
    const double mass =
        focal ? p * binomial_pmf(trials - 1, k - 1, p) : binomial_pmf(trials, k, p);
    terms.push_back(mass / k);
  }
  return sum_descending(std::move(terms));
}

}  // namespace detail

inline PayoffMatrix multi_stage_payoffs(const MultiParams& mp) {
  mp.validate();
  const double n = mp.n;
  const double p = mp.p;
  const double c = mp.attack_cost();
  const bool focal = mp.mode == MultiMode::PerPlayer;
  const double none_m = std::pow(1.0 - p, mp.m);
  const double none_n = std::pow(1.0 - p, mp.n);
  PayoffMatrix out;
  out.reward = 1.0 / n;
  out.sucker = none_m / n;
  out.temptation = detail::share_sum(mp.m, 1, mp.m, p, focal) + none_m / n - c;
  out.mutual_attack = detail::share_sum(mp.n, 1, mp.n - 1, p, focal) +
                      std::pow(p, mp.n) * mp.beta / n + none_n / n - c;
  return out;
}

struct ModeDiscrepancy {
  PayoffMatrix as_written;
  PayoffMatrix per_player;
  double max_abs_difference = 0.0;
  bool flagged = false;  // the readings differ beyond tolerance
};

inline ModeDiscrepancy multi_mode_discrepancy(MultiParams mp) {
  ModeDiscrepancy out;
  mp.mode = MultiMode::AsWritten;
  out.as_written = multi_stage_payoffs(mp);
  mp.mode = MultiMode::PerPlayer;
  out.per_player = multi_stage_payoffs(mp);
  const auto& a = out.as_written;
  const auto& b = out.per_player;
  out.max_abs_difference = std::max(
      {std::abs(a.reward - b.reward), std::abs(a.temptation - b.temptation),
       std::abs(a.sucker - b.sucker),
       std::abs(a.mutual_attack - b.mutual_attack)});
  out.flagged = out.max_abs_difference > kTolerance;
  return out;
}

// Grim: (T - R) / (T - Q); tit-for-tat: (T - R) / (R - S).
inline ThresholdReport multi_delta_star(const MultiParams& mp,
                                        Strategy strategy) {
  const PayoffMatrix m = multi_stage_payoffs(mp);
  const double numerator = m.temptation - m.reward;
  const double denominator = strategy == Strategy::Grim
                                 ? m.temptation - m.mutual_attack
                                 : m.reward - m.sucker;
  ThresholdReport report = detail::threshold_from_ratio(numerator, denominator);
  report.beta_independent = strategy == Strategy::TitForTat;
  return report;
}

struct MultiTrend {
  std::vector<std::pair<int, double>> points;  // (M, delta*)
  bool tail_monotone_decreasing = false;       // over M >= ceil(N/2)
};

inline MultiTrend multi_trend(int n, double p, const CostModel& cost,
                              double beta, Strategy strategy, MultiMode mode) {
  detail::require(n >= 3, "trend needs n >= 3 players", n);
  MultiTrend out;
  for (int m = 1; m < n; ++m) {
    MultiParams mp{n, m, p, cost, beta, mode};
    out.points.emplace_back(m, multi_delta_star(mp, strategy).delta_star);
  }
  const int first = (n + 1) / 2;
  out.tail_monotone_decreasing = true;
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
    if (out.points[i].first < first) continue;
    if (!(out.points[i + 1].second < out.points[i].second)) {
      out.tail_monotone_decreasing = false;
    }
  }
  return out;
}

}  // namespace ranklash

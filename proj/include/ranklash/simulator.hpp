#pragma once

// Monte Carlo repeated-game engine. Automata observe the opponent's actions
// only, never attack outcomes, so every joint action path is deterministic
// and randomness enters solely through per-round attack success draws.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranklash/core.hpp"
#include "ranklash/multiplayer.hpp"
#include "ranklash/numerics.hpp"
#include "ranklash/parallel.hpp"
#include "ranklash/rng.hpp"

namespace ranklash {

enum class Action : std::uint8_t { Cooperate, Attack };

enum class AutomatonKind {
  AllCooperate,
  AllDefect,
  GrimTrigger,
  TitForTat,
  DefectKThenCooperate,
};

class StrategyAutomaton {
 public:
  struct State {
    bool triggered = false;                  // grim: opponent has attacked
    Action last_opponent = Action::Cooperate;
    int rounds_played = 0;                   // saturates once irrelevant
    bool operator==(const State&) const = default;
  };

  static StrategyAutomaton all_cooperate() {
    return StrategyAutomaton(AutomatonKind::AllCooperate);
  }
  static StrategyAutomaton all_defect() {
    return StrategyAutomaton(AutomatonKind::AllDefect);
  }
  static StrategyAutomaton grim_trigger() {
    return StrategyAutomaton(AutomatonKind::GrimTrigger);
  }
  static StrategyAutomaton tit_for_tat(Action opening = Action::Cooperate) {
    StrategyAutomaton a(AutomatonKind::TitForTat);
    a.opening_ = opening;
    return a;
  }
  // Attacks in rounds 1..k, then cooperates forever.
  static StrategyAutomaton defect_k(int k) {
    if (k < 1) {
      throw DomainError("precondition violated: defect-k needs k >= 1 (got " +
                        std::to_string(k) + ")");
    }
    StrategyAutomaton a(AutomatonKind::DefectKThenCooperate);
    a.k_ = k;
    return a;
  }

  Action next() const {
    switch (kind_) {
      case AutomatonKind::AllCooperate: return Action::Cooperate;
      case AutomatonKind::AllDefect: return Action::Attack;
      case AutomatonKind::GrimTrigger:
        return state_.triggered ? Action::Attack : Action::Cooperate;
      case AutomatonKind::TitForTat:
        return state_.rounds_played == 0 ? opening_ : state_.last_opponent;
      case AutomatonKind::DefectKThenCooperate:
        return state_.rounds_played < k_ ? Action::Attack : Action::Cooperate;
    }
    return Action::Cooperate;
  }

  void observe(Action opponent) {
    if (opponent == Action::Attack) state_.triggered = true;
    state_.last_opponent = opponent;
    const int cap = kind_ == AutomatonKind::DefectKThenCooperate ? k_ : 1;
    if (state_.rounds_played < cap) ++state_.rounds_played;
    // Only the state each kind reads is kept, so equal futures compare equal.
    if (kind_ != AutomatonKind::GrimTrigger) state_.triggered = false;
    if (kind_ != AutomatonKind::TitForTat) {
      state_.last_opponent = Action::Cooperate;
    }
    if (kind_ == AutomatonKind::AllCooperate ||
        kind_ == AutomatonKind::AllDefect ||
        kind_ == AutomatonKind::GrimTrigger) {
      state_.rounds_played = 0;
    }
  }

  void reset() { state_ = State{}; }

  const State& state() const { return state_; }
  AutomatonKind kind() const { return kind_; }
  Action opening() const { return opening_; }
  int k() const { return k_; }

  std::string name() const {
    switch (kind_) {
      case AutomatonKind::AllCooperate: return "all-cooperate";
      case AutomatonKind::AllDefect: return "all-defect";
      case AutomatonKind::GrimTrigger: return "grim";
      case AutomatonKind::TitForTat:
        return opening_ == Action::Cooperate ? "tft" : "tft-open-d";
      case AutomatonKind::DefectKThenCooperate:
        return "defect-k(" + std::to_string(k_) + ")";
    }
    return "?";
  }

 private:
  explicit StrategyAutomaton(AutomatonKind kind) : kind_(kind) {}

  AutomatonKind kind_;
  Action opening_ = Action::Cooperate;
  int k_ = 1;
  State state_;
};

struct Contestant {
  double p = 0.0;
  CostModel cost;
  double attack_cost() const { return eval_cost(cost, p); }
};

// Both players' attack technology plus the shared degradation and timing.
struct Matchup {
  std::array<Contestant, 2> players;
  double beta = 1.0;
  CostTiming cost_timing = CostTiming::Recurring;

  static Matchup symmetric(const GameParams& params) {
    params.validate();
    const Contestant c{params.p, params.cost};
    return {{c, c}, params.beta, params.cost_timing};
  }

  static Matchup asymmetric(const PlayerProfile& first,
                            const PlayerProfile& second, double beta,
                            CostTiming timing = CostTiming::Recurring) {
    first.validate();
    second.validate();
    return {{Contestant{first.p, first.cost}, Contestant{second.p, second.cost}},
            beta,
            timing};
  }

  void validate() const {
    for (const auto& c : players) {
      require_probability(c.p);
      c.cost.validate();
    }
    detail::require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0,1]",
                    beta);
  }
};

struct StageOutcome {
  std::array<Action, 2> actions{};
  std::array<bool, 2> successes{};
  std::array<double, 2> payoffs{};
  std::array<double, 2> cost_charged{};
};

// Realized stage payoffs. Only attackers carry a success draw. Under a
// one-time cost, `already_paid[i]` waives player i's charge.
inline StageOutcome resolve_stage(
    const std::array<Action, 2>& actions, const Matchup& matchup,
    const std::array<std::optional<bool>, 2>& success_draws,
    const std::array<bool, 2>& already_paid = {false, false}) {
  StageOutcome out;
  out.actions = actions;
  for (int i = 0; i < 2; ++i) {
    const bool attacks = actions[i] == Action::Attack;
    if (!attacks && success_draws[i].has_value()) {
      throw DomainError("precondition violated: success draw given for a "
                        "cooperating player " + std::to_string(i + 1));
    }
    if (attacks && !success_draws[i].has_value()) {
      throw DomainError("precondition violated: attacking player " +
                        std::to_string(i + 1) + " needs a success draw");
    }
    out.successes[i] = attacks && *success_draws[i];
    const bool waived =
        matchup.cost_timing == CostTiming::OneTimeFixed && already_paid[i];
    out.cost_charged[i] =
        attacks && !waived ? matchup.players[i].attack_cost() : 0.0;
  }
  // Nobody wins: even split. Both win: degraded split. One wins: monopoly.
  const int winners = int(out.successes[0]) + int(out.successes[1]);
  for (int i = 0; i < 2; ++i) {
    double share;
    if (winners == 0) {
      share = 0.5;
    } else if (winners == 2) {
      share = 0.5 * matchup.beta;
    } else {
      share = out.successes[i] ? 1.0 : 0.0;
    }
    out.payoffs[i] = share - out.cost_charged[i];
  }
  return out;
}

// Expected stage payoffs, summing resolve_stage over the success outcomes.
inline std::array<double, 2> expected_stage(
    const std::array<Action, 2>& actions, const Matchup& matchup,
    const std::array<bool, 2>& already_paid = {false, false}) {
  std::array<double, 2> total{0.0, 0.0};
  const bool a0 = actions[0] == Action::Attack;
  const bool a1 = actions[1] == Action::Attack;
  for (int s0 = 0; s0 <= int(a0); ++s0) {
    for (int s1 = 0; s1 <= int(a1); ++s1) {
      double w = 1.0;
      std::array<std::optional<bool>, 2> draws;
      if (a0) {
        draws[0] = s0 == 1;
        w *= s0 ? matchup.players[0].p : 1.0 - matchup.players[0].p;
      }
      if (a1) {
        draws[1] = s1 == 1;
        w *= s1 ? matchup.players[1].p : 1.0 - matchup.players[1].p;
      }
      const StageOutcome o = resolve_stage(actions, matchup, draws, already_paid);
      total[0] += w * o.payoffs[0];
      total[1] += w * o.payoffs[1];
    }
  }
  return total;
}

struct SimConfig {
  Matchup matchup;
  std::array<double, 2> delta{0.0, 0.0};  // per-player discount factor
  long long episodes = 1;
  double horizon_epsilon = 1e-9;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0 = hardware; RANKLASH_THREADS caps it

  static SimConfig symmetric(const GameParams& params, double delta,
                             long long episodes, std::uint64_t seed = 0) {
    SimConfig cfg;
    cfg.matchup = Matchup::symmetric(params);
    cfg.delta = {delta, delta};
    cfg.episodes = episodes;
    cfg.master_seed = seed;
    return cfg;
  }

  void validate() const {
    matchup.validate();
    require_discount(delta[0], "delta1");
    require_discount(delta[1], "delta2");
    detail::require(episodes >= 1, "episodes must be >= 1",
                    static_cast<double>(episodes));
    detail::require(horizon_epsilon > 0.0 && horizon_epsilon < 1.0,
                    "horizon epsilon must lie in (0,1)", horizon_epsilon);
  }

  // Rounds played: delta^T_max * (1 + c_max) < epsilon.
  int horizon() const {
    const double d = std::max(delta[0], delta[1]);
    if (d == 0.0) return 1;
    const double c_max = std::max(matchup.players[0].attack_cost(),
                                  matchup.players[1].attack_cost());
    const double t =
        std::ceil(std::log(horizon_epsilon / (1.0 + c_max)) / std::log(d));
    return std::max(1, static_cast<int>(t));
  }
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

namespace detail {

// Sample mean and standard error, reduced in a fixed order. A constant
// sample has exactly zero error.
inline MeanEstimate summarize(std::vector<double>& values) {
  const double n = double(values.size());
  MeanEstimate e;
  e.mean = numerics::pairwise_sum(values) / n;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    e.mean = *lo;
    return e;
  }
  for (double& v : values) v = (v - e.mean) * (v - e.mean);
  const double var = values.size() > 1 ? numerics::pairwise_sum(values) / (n - 1)
                                       : 0.0;
  e.std_error = std::sqrt(var / n);
  return e;
}

}  // namespace detail

struct EpisodeResult {
  std::array<double, 2> payoffs{0.0, 0.0};       // discounted
  std::array<double, 2> cost_charged{0.0, 0.0};  // undiscounted total
  std::array<int, 2> attacks{0, 0};
};

inline EpisodeResult run_episode(StrategyAutomaton first,
                                 StrategyAutomaton second,
                                 const SimConfig& config,
                                 std::uint64_t episode_index) {
  first.reset();
  second.reset();
  const CounterRng::Episode stream =
      CounterRng(config.master_seed).episode(episode_index);
  const int horizon = config.horizon();
  const Matchup& mu = config.matchup;
  EpisodeResult out;
  std::array<double, 2> weight{1.0, 1.0};
  std::array<bool, 2> paid{false, false};
  for (int t = 0; t < horizon; ++t) {
    const std::array<Action, 2> actions{first.next(), second.next()};
    std::array<std::optional<bool>, 2> draws;
    for (int i = 0; i < 2; ++i) {
      if (actions[i] == Action::Attack) {
        draws[i] = stream.uniform(t, i) < mu.players[i].p;
      }
    }
    const StageOutcome o = resolve_stage(actions, mu, draws, paid);
    for (int i = 0; i < 2; ++i) {
      out.payoffs[i] += weight[i] * o.payoffs[i];
      out.cost_charged[i] += o.cost_charged[i];
      if (actions[i] == Action::Attack) {
        ++out.attacks[i];
        paid[i] = true;
      }
      weight[i] *= config.delta[i];
    }
    first.observe(actions[1]);
    second.observe(actions[0]);
  }
  return out;
}

struct SimReport {
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 2> std_error{0.0, 0.0};
  long long episodes = 0;
  int horizon = 0;
  std::uint64_t seed = 0;

  bool operator==(const SimReport&) const = default;
};

// Monte Carlo means over independent episodes. Per-episode results land in
// index-addressed slots and are reduced in a fixed order, so the report is
// bit-identical for a given seed at any thread count.
inline SimReport estimate_values(const StrategyAutomaton& first,
                                 const StrategyAutomaton& second,
                                 const SimConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.episodes);
  std::array<std::vector<double>, 2> values{std::vector<double>(n),
                                            std::vector<double>(n)};
  parallel_for_blocks(n, worker_count(config.threads),
                      [&](std::size_t begin, std::size_t end) {
                        for (std::size_t e = begin; e < end; ++e) {
                          const EpisodeResult r =
                              run_episode(first, second, config, e);
                          values[0][e] = r.payoffs[0];
                          values[1][e] = r.payoffs[1];
                        }
                      });
  SimReport report;
  report.episodes = config.episodes;
  report.horizon = config.horizon();
  report.seed = config.master_seed;
  for (int i = 0; i < 2; ++i) {
    const MeanEstimate e = detail::summarize(values[i]);
    report.mean[i] = e.mean;
    report.std_error[i] = e.std_error;
  }
  return report;
}

// Exact expected discounted payoffs. The joint action path is unrolled
// until the joint automaton state repeats; the cycle is summed in closed
// form.
inline std::array<double, 2> analytic_pair_value(
    StrategyAutomaton first, StrategyAutomaton second, const Matchup& matchup,
    const std::array<double, 2>& delta) {
  matchup.validate();
  require_discount(delta[0], "delta1");
  require_discount(delta[1], "delta2");
  first.reset();
  second.reset();
  struct Joint {
    StrategyAutomaton::State a, b;
    std::array<bool, 2> paid;
    bool operator==(const Joint&) const = default;
  };
  std::vector<Joint> seen;
  std::vector<std::array<double, 2>> stage;
  std::array<bool, 2> paid{false, false};
  std::size_t cycle_start = 0;
  for (;;) {
    const Joint j{first.state(), second.state(), paid};
    bool repeated = false;
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i] == j) {
        cycle_start = i;
        repeated = true;
        break;
      }
    }
    if (repeated) break;
    if (seen.size() > 10000) {
      throw std::logic_error("analytic_pair_value: no cycle found");
    }
    seen.push_back(j);
    const std::array<Action, 2> actions{first.next(), second.next()};
    stage.push_back(expected_stage(actions, matchup, paid));
    for (int i = 0; i < 2; ++i) paid[i] = paid[i] || actions[i] == Action::Attack;
    first.observe(actions[1]);
    second.observe(actions[0]);
  }
  std::array<double, 2> out{0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    double w = 1.0;
    double prefix = 0.0, cycle = 0.0, cycle_weight = 1.0;
    for (std::size_t t = 0; t < stage.size(); ++t) {
      if (t < cycle_start) {
        prefix += w * stage[t][i];
      } else {
        if (t == cycle_start) cycle_weight = w;
        cycle += w * stage[t][i];
      }
      w *= delta[i];
    }
    // w / cycle_weight = delta^(cycle length)
    out[i] = prefix + cycle / (1.0 - w / cycle_weight);
  }
  return out;
}

inline std::array<double, 2> analytic_pair_value(
    const StrategyAutomaton& first, const StrategyAutomaton& second,
    const GameParams& params, double delta) {
  return analytic_pair_value(first, second, Matchup::symmetric(params),
                             {delta, delta});
}

struct MultiStageSample {
  MeanEstimate temptation;     // focal attacker among M attackers
  MeanEstimate sucker;         // a cooperator facing M attackers
  MeanEstimate mutual_attack;  // focal player when all N attack
  long long samples = 0;
};

// Samples one stage of the N-player game and records the focal players'
// realized payoffs: winners split the market, nobody winning splits it N
// ways, everyone winning degrades it to beta.
inline MultiStageSample sample_multi_stage(const MultiParams& mp,
                                           long long samples,
                                           std::uint64_t seed,
                                           unsigned threads = 0) {
  mp.validate();
  detail::require(samples >= 1, "samples must be >= 1", double(samples));
  const auto n = static_cast<std::size_t>(samples);
  std::vector<double> t(n), s(n), q(n);
  const CounterRng rng(seed);
  const double c = mp.attack_cost();
  const double players = mp.n;
  parallel_for_blocks(n, worker_count(threads), [&](std::size_t b,
                                                    std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const CounterRng::Episode stream = rng.episode(i);
      // M attackers, focal attacker is player 0.
      int wins = 0;
      bool focal_won = false;
      for (int j = 0; j < mp.m; ++j) {
        const bool won = stream.uniform(0, j) < mp.p;
        wins += won;
        if (j == 0) focal_won = won;
      }
      if (wins == 0) {
        t[i] = 1.0 / players - c;
        s[i] = 1.0 / players;
      } else {
        t[i] = (focal_won ? 1.0 / wins : 0.0) - c;
        s[i] = 0.0;
      }
      // All N attack.
      wins = 0;
      for (int j = 0; j < mp.n; ++j) {
        const bool won = stream.uniform(1, j) < mp.p;
        wins += won;
        if (j == 0) focal_won = won;
      }
      double share;
      if (wins == 0) {
        share = 1.0 / players;
      } else if (wins == mp.n) {
        share = mp.beta / players;
      } else {
        share = focal_won ? 1.0 / wins : 0.0;
      }
      q[i] = share - c;
    }
  });
  MultiStageSample out;
  out.samples = samples;
  out.temptation = detail::summarize(t);
  out.sucker = detail::summarize(s);
  out.mutual_attack = detail::summarize(q);
  return out;
}

}  // namespace ranklash

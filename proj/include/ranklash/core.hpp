#pragma once

// Stage game for two content providers deciding whether to launch a ranking
// manipulation attack against an LLM-backed search engine. Market demand is
// normalized to 1; an attack succeeds with probability p and costs c.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ranklash {

// Absolute tolerance for equality comparisons between payoff quantities.
inline constexpr double kTolerance = 1e-9;

// A violated precondition on a domain value (p outside [0,1], delta >= 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string format_value(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

inline void require(bool ok, const std::string& what, double got) {
  if (!ok) {
    throw DomainError("precondition violated: " + what + " (got " +
                      format_value(got) + ")");
  }
}

}  // namespace detail

inline void require_probability(double p, const char* name = "p") {
  detail::require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
                  std::string(name) + " must lie in [0,1]", p);
}

inline void require_discount(double delta, const char* name = "delta") {
  detail::require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0,
                  std::string(name) + " must lie in [0,1)", delta);
}

// Attack cost as a function of the attack success rate: c(p) = a * p^k.
// k = 0 is a constant cost, k = 1 linear, k > 1 the super-linear family.
struct CostModel {
  double coefficient = 0.0;
  double exponent = 0.0;

  static CostModel constant(double a) { return {a, 0.0}; }
  static CostModel linear(double a) { return {a, 1.0}; }
  static CostModel power(double a, double k) { return {a, k}; }

  bool is_constant() const { return exponent == 0.0; }

  void validate() const {
    detail::require(std::isfinite(coefficient) && coefficient >= 0.0,
                    "cost coefficient must be >= 0", coefficient);
    detail::require(std::isfinite(exponent) && exponent >= 0.0,
                    "cost exponent must be >= 0", exponent);
  }

  bool operator==(const CostModel&) const = default;
};

// a * p^k, with k = 0 giving a for every p (including p = 0).
inline double eval_cost(const CostModel& model, double p) {
  if (model.exponent == 0.0) return model.coefficient;
  return model.coefficient * std::pow(p, model.exponent);
}

enum class CostTiming { Recurring, OneTimeFixed };

struct GameParams {
  double p = 0.0;
  CostModel cost;
  double beta = 1.0;
  CostTiming cost_timing = CostTiming::Recurring;

  double attack_cost() const { return eval_cost(cost, p); }

  void validate() const {
    require_probability(p);
    cost.validate();
    detail::require(std::isfinite(beta) && beta >= 0.0 && beta <= 1.0,
                    "beta must lie in [0,1]", beta);
  }
};

struct PlayerProfile {
  double p = 0.0;
  CostModel cost;
  double delta = 0.0;

  double attack_cost() const { return eval_cost(cost, p); }

  void validate() const {
    require_probability(p);
    cost.validate();
    require_discount(delta);
  }
};

// One player's stage payoffs: mutual cooperation, lone attacker, lone
// cooperator facing an attack, and mutual attack. Templated so value
// functions can be evaluated in extended precision.
template <class Real>
struct BasicPayoffMatrix {
  Real reward{};         // R: both cooperate
  Real temptation{};     // T: attack a cooperator
  Real sucker{};         // S: cooperate while attacked
  Real mutual_attack{};  // Q: both attack

  template <class Other>
  BasicPayoffMatrix<Other> cast() const {
    return {Other(reward), Other(temptation), Other(sucker),
            Other(mutual_attack)};
  }

  bool operator==(const BasicPayoffMatrix&) const = default;
};

using PayoffMatrix = BasicPayoffMatrix<double>;

// Expected payoffs of a player with success rate `own_p` and attack cost
// `own_cost` against an opponent with success rate `other_p`.
inline PayoffMatrix payoffs_against(double own_p, double own_cost,
                                    double other_p, double beta) {
  PayoffMatrix m;
  m.reward = 0.5;
  m.temptation = own_p + (1.0 - own_p) * 0.5 - own_cost;
  m.sucker = (1.0 - other_p) * 0.5;
  m.mutual_attack = own_p * other_p * (beta * 0.5) + own_p * (1.0 - other_p) +
                    (1.0 - own_p) * (1.0 - other_p) * 0.5 - own_cost;
  return m;
}

// Symmetric two-player stage payoffs. The matrix does not depend on cost
// timing; a one-time cost only changes how repeated play charges it.
inline PayoffMatrix stage_payoffs(const GameParams& params) {
  params.validate();
  return payoffs_against(params.p, params.attack_cost(), params.p,
                         params.beta);
}

inline std::pair<PayoffMatrix, PayoffMatrix> stage_payoffs_asymmetric(
    const PlayerProfile& first, const PlayerProfile& second, double beta) {
  first.validate();
  second.validate();
  detail::require(std::isfinite(beta) && beta >= 0.0 && beta <= 1.0,
                  "beta must lie in [0,1]", beta);
  return {payoffs_against(first.p, first.attack_cost(), second.p, beta),
          payoffs_against(second.p, second.attack_cost(), first.p, beta)};
}

struct OrderingReport {
  bool holds = false;                       // T > R > Q > S
  std::vector<std::string> violated_pairs;  // e.g. "T>R"
  double analytic_bound = 0.0;              // p/2 + (beta-1) p^2 / 2
  bool cost_below_bound = false;            // c < analytic_bound, i.e. Q > S
  bool cost_below_half_p = false;           // c < p/2, i.e. T > R
};

// Checks the Prisoner's Dilemma ordering. Violations are reported rather
// than rejected since sweeps routinely cross the PD boundary.
inline OrderingReport check_pd_ordering(const PayoffMatrix& m,
                                        const GameParams& params) {
  OrderingReport report;
  const auto& [r, t, s, q] = m;
  if (!(t > r)) report.violated_pairs.emplace_back("T>R");
  if (!(r > q)) report.violated_pairs.emplace_back("R>Q");
  if (!(q > s)) report.violated_pairs.emplace_back("Q>S");
  report.holds = report.violated_pairs.empty();
  const double p = params.p;
  const double c = params.attack_cost();
  report.analytic_bound = 0.5 * p + 0.5 * (params.beta - 1.0) * p * p;
  report.cost_below_bound = c < report.analytic_bound;
  report.cost_below_half_p = c < 0.5 * p;
  return report;
}

}  // namespace ranklash

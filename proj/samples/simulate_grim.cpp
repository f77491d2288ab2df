// Plays always-defect against grim trigger and compares the Monte Carlo
// estimate with the exact discounted value.

#include <cstdio>

#include "ranklash/simulator.hpp"

int main() {
  using namespace ranklash;
  const GameParams game{0.5, CostModel::constant(0.1), 0.4,
                        CostTiming::Recurring};
  const auto defector = StrategyAutomaton::all_defect();
  const auto grim = StrategyAutomaton::grim_trigger();
  for (double delta : {0.3, 0.6, 0.9}) {
    const SimConfig cfg = SimConfig::symmetric(game, delta, 50000, 42);
    const SimReport rep = estimate_values(defector, grim, cfg);
    const auto exact = analytic_pair_value(defector, grim, game, delta);
    std::printf("delta %.1f  mean %.5f +- %.5f  exact %.5f\n", delta,
                rep.mean[0], rep.std_error[0], exact[0]);
  }
}

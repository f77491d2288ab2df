// Prints the grim-trigger and tit-for-tat thresholds across success rates
// for the three cost models at a = 0.1.

#include <cstdio>

#include "ranklash/thresholds.hpp"

int main() {
  using namespace ranklash;
  const double beta = 0.4;
  std::printf("%5s  %10s %10s %10s  %10s\n", "p", "grim k=0", "grim k=1",
              "grim k=2", "tft k=0");
  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    double grim[3];
    for (int k = 0; k < 3; ++k) {
      grim[k] = delta_star_grim({p, CostModel::power(0.1, k), beta,
                                 CostTiming::Recurring})
                    .delta_star;
    }
    const ThresholdReport tft =
        delta_star_tft({p, CostModel::constant(0.1), beta, CostTiming::Recurring});
    std::printf("%5.2f  %10.6f %10.6f %10.6f  %10.6f\n", p, grim[0], grim[1],
                grim[2], tft.delta_star);
  }
}

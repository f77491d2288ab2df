#pragma once

// Cooperation-formation regions over the (p, delta) plane.

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ranklash/core.hpp"
#include "ranklash/parallel.hpp"
#include "ranklash/thresholds.hpp"

namespace ranklash {

enum class SweepStrategy { Grim, TitForTat, OneTimeGrim };

inline std::string_view to_string(SweepStrategy s) {
  switch (s) {
    case SweepStrategy::Grim: return "grim";
    case SweepStrategy::TitForTat: return "tft";
    case SweepStrategy::OneTimeGrim: return "one-time";
  }
  return "?";
}

// `points` samples at cell centres of [lo, hi], i.e. inset by half a cell
// from each end.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int points = 401;

  double at(int i) const { return lo + (i + 0.5) * (hi - lo) / points; }

  void validate(const char* name) const {
    detail::require(lo >= 0.0 && lo <= 1.0,
                    std::string(name) + " axis lower end must lie in [0,1]", lo);
    detail::require(hi >= lo && hi <= 1.0,
                    std::string(name) + " axis upper end must lie in [lo,1]",
                    hi);
    detail::require(points >= 2,
                    std::string(name) + " axis needs >= 2 points", points);
  }

  bool operator==(const Axis&) const = default;
};

struct SweepSpec {
  SweepStrategy strategy = SweepStrategy::Grim;
  CostModel cost;
  double beta = 0.4;
  Axis p_axis;
  Axis delta_axis;

  void validate() const {
    cost.validate();
    detail::require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0,1]", beta);
    p_axis.validate("p");
    delta_axis.validate("delta");
    if (strategy == SweepStrategy::OneTimeGrim && !cost.is_constant()) {
      throw DomainError(
          "precondition violated: one-time sweep needs a fixed cost "
          "(exponent 0)");
    }
  }
};

struct RegionGrid {
  SweepSpec spec;
  // cells[i * delta_points + j]: cooperation sustained at (p_i, delta_j).
  std::vector<std::uint8_t> cells;
  std::vector<ThresholdReport> thresholds;  // one per p sample

  int p_points() const { return spec.p_axis.points; }
  int delta_points() const { return spec.delta_axis.points; }
  bool at(int i, int j) const { return cells[std::size_t(i) * delta_points() + j] != 0; }
};

inline ThresholdReport sweep_threshold(const SweepSpec& spec, double p) {
  GameParams params{p, spec.cost, spec.beta, CostTiming::Recurring};
  switch (spec.strategy) {
    case SweepStrategy::Grim: return delta_star_grim(params);
    case SweepStrategy::TitForTat: return delta_star_tft(params);
    case SweepStrategy::OneTimeGrim:
      params.cost_timing = CostTiming::OneTimeFixed;
      return delta_star_one_time(params);
  }
  return {};
}

inline RegionGrid region_sweep(const SweepSpec& spec, unsigned threads = 0) {
  spec.validate();
  RegionGrid grid;
  grid.spec = spec;
  const int np = spec.p_axis.points;
  const int nd = spec.delta_axis.points;
  grid.cells.assign(std::size_t(np) * nd, 0);
  grid.thresholds.resize(np);
  // Columns (fixed p) are independent.
  parallel_for_blocks(std::size_t(np), worker_count(threads),
                      [&](std::size_t begin, std::size_t end) {
                        for (std::size_t i = begin; i < end; ++i) {
                          const ThresholdReport r =
                              sweep_threshold(spec, spec.p_axis.at(int(i)));
                          grid.thresholds[i] = r;
                          for (int j = 0; j < nd; ++j) {
                            grid.cells[i * nd + j] =
                                r.sustains(spec.delta_axis.at(j)) ? 1 : 0;
                          }
                        }
                      });
  return grid;
}

// Fraction of cells where cooperation is sustained.
inline double region_area(const RegionGrid& grid) {
  if (grid.cells.empty()) return 0.0;
  const auto count = std::count(grid.cells.begin(), grid.cells.end(), 1);
  return double(count) / double(grid.cells.size());
}

struct BoundaryPoint {
  double p = 0.0;
  double delta_star = 0.0;  // clamped to [0,1]
  double raw = 0.0;
  Regime regime = Regime::Interior;
};

inline std::vector<BoundaryPoint> boundary_extract(const RegionGrid& grid) {
  std::vector<BoundaryPoint> out;
  out.reserve(grid.thresholds.size());
  for (int i = 0; i < grid.p_points(); ++i) {
    const ThresholdReport& r = grid.thresholds[i];
    out.push_back({grid.spec.p_axis.at(i), std::clamp(r.delta_star, 0.0, 1.0),
                   r.delta_star, r.regime});
  }
  return out;
}

}  // namespace ranklash

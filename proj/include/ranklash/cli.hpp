#pragma once

// Command-line front end. run_cli() parses, dispatches to one analysis,
// and writes the result as CSV, JSON or SVG.
//
// Exit codes: 0 success, 2 usage error, 3 domain or output error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ranklash/core.hpp"
#include "ranklash/export.hpp"
#include "ranklash/multiplayer.hpp"
#include "ranklash/simulator.hpp"
#include "ranklash/sweep.hpp"
#include "ranklash/thresholds.hpp"
#include "ranklash/value_funcs.hpp"

namespace ranklash::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

inline constexpr std::uint64_t kDefaultSeed = 0;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every flag value, with the defaults shown in --help.
struct Options {
  double p = 0.5;
  double cost = 0.1;
  double cost_exp = 0.0;
  double beta = 0.4;
  double delta = 0.6;
  std::string timing = "recurring";
  std::string strategy = "grim";
  std::string rule = "grim";
  double p1 = 0.5, p2 = 0.5;
  double cost1 = 0.1, cost2 = 0.1;
  double delta1 = 0.6, delta2 = 0.6;
  std::string pattern = "grim";
  int k = 1;
  int p_points = 101;
  std::vector<double> p_values;
  int grid_p = 401, grid_delta = 401;
  double p_lo = 0.0, p_hi = 1.0, delta_lo = 0.0, delta_hi = 1.0;
  int n = 3, m = 1;
  std::string mode = "as-written";
  std::string s1 = "all-defect", s2 = "grim";
  int k1 = 1, k2 = 1;
  long long episodes = 100000;
  std::uint64_t seed = kDefaultSeed;
  double epsilon = 1e-9;
  unsigned threads = 0;
  std::string format = "json";
  std::string out = "-";
};

struct Result {
  Table table;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  std::optional<std::string> svg;
  std::optional<std::uint64_t> seed;
};

// Registers a subcommand's options and records them so the exact inputs
// can be written back out.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    entries_.push_back({name, [&var] { return to_json(var); },
                        [&var] { return to_text(var); }});
    return app_->add_option("--" + name, var, help)
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  CLI::Option* choice(const std::string& name, std::string& var,
                      std::vector<std::string> allowed,
                      const std::string& help) {
    return add(name, var, help)->check(CLI::IsMember(std::move(allowed)));
  }

  nlohmann::ordered_json inputs() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& e : entries_) j[e.name] = e.json();
    return j;
  }

  // Subcommand plus every flag, enough to reproduce the run.
  std::vector<std::string> argv() const {
    std::vector<std::string> out{app_->get_name()};
    for (const auto& e : entries_) {
      std::string text = e.text();
      if (text.empty()) continue;  // unset list option
      out.push_back("--" + e.name);
      out.push_back(std::move(text));
    }
    return out;
  }

  CLI::App* app() const { return app_; }

 private:
  struct Entry {
    std::string name;
    std::function<nlohmann::ordered_json()> json;
    std::function<std::string()> text;
  };

  template <class T>
  static nlohmann::ordered_json to_json(const T& v) {
    return v;
  }
  template <class T>
  static std::string to_text(const T& v) {
    if constexpr (std::is_same_v<T, double>) {
      return format_exact(v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_exact(v[i]);
      }
      return s;
    } else {
      return std::to_string(v);
    }
  }

  CLI::App* app_;
  std::vector<Entry> entries_;
};

namespace detail {

inline CostModel cost_model(double coefficient, double exponent) {
  return CostModel::power(coefficient, exponent);
}

inline GameParams game(const Options& o) {
  GameParams g{o.p, cost_model(o.cost, o.cost_exp), o.beta,
               CostTiming::Recurring};
  g.validate();
  return g;
}

inline Strategy rule_of(const std::string& s) {
  return s == "tft" ? Strategy::TitForTat : Strategy::Grim;
}

inline MultiMode mode_of(const std::string& s) {
  return s == "as-written" ? MultiMode::AsWritten : MultiMode::PerPlayer;
}

inline DefectionPattern pattern_of(const Options& o) {
  if (o.pattern == "tft-single") return DefectionPattern::tft_single();
  if (o.pattern == "tft-alternating") return DefectionPattern::tft_alternating();
  if (o.pattern == "tft-k") return DefectionPattern::tft_k(o.k);
  if (o.pattern == "one-time-grim") return DefectionPattern::one_time_grim();
  return DefectionPattern::grim();
}

inline StrategyAutomaton automaton_of(const std::string& name, int k) {
  if (name == "all-cooperate") return StrategyAutomaton::all_cooperate();
  if (name == "all-defect") return StrategyAutomaton::all_defect();
  if (name == "tft") return StrategyAutomaton::tit_for_tat();
  if (name == "tft-open-d") return StrategyAutomaton::tit_for_tat(Action::Attack);
  if (name == "defect-k") return StrategyAutomaton::defect_k(k);
  return StrategyAutomaton::grim_trigger();
}

inline std::vector<Cell> matrix_cells(const PayoffMatrix& m) {
  return {m.reward, m.temptation, m.sucker, m.mutual_attack};
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Result run_payoffs(const Options& o) {
  const GameParams g = detail::game(o);
  const PayoffMatrix m = stage_payoffs(g);
  Result r;
  r.table.columns = {"p", "cost", "beta", "R", "T", "S", "Q"};
  std::vector<Cell> row{g.p, g.attack_cost(), g.beta};
  for (auto& c : detail::matrix_cells(m)) row.push_back(c);
  r.table.rows.push_back(std::move(row));
  return r;
}

inline Result run_ordering(const Options& o) {
  const GameParams g = detail::game(o);
  const PayoffMatrix m = stage_payoffs(g);
  const OrderingReport rep = check_pd_ordering(m, g);
  Result r;
  r.table.columns = {"holds",    "violated",          "cost",
                     "analytic_bound", "cost_below_bound", "cost_below_half_p",
                     "R",        "T",                 "S",
                     "Q"};
  std::vector<Cell> row{rep.holds, detail::join(rep.violated_pairs, ';'),
                        g.attack_cost(), rep.analytic_bound,
                        rep.cost_below_bound, rep.cost_below_half_p};
  for (auto& c : detail::matrix_cells(m)) row.push_back(c);
  r.table.rows.push_back(std::move(row));
  return r;
}

inline Result run_threshold(const Options& o) {
  Result r;
  if (o.strategy == "asym") {
    const CostModel c1 = detail::cost_model(o.cost1, o.cost_exp);
    const CostModel c2 = detail::cost_model(o.cost2, o.cost_exp);
    const PlayerProfile a{o.p1, c1, o.delta1}, b{o.p2, c2, o.delta2};
    const AsymmetricThresholds t =
        thresholds_asymmetric(a, b, o.beta, detail::rule_of(o.rule));
    r.table.columns = {"player", "p",         "cost",   "delta",
                       "delta_star", "regime", "sustains"};
    const std::array<const PlayerProfile*, 2> prof{&a, &b};
    for (int i = 0; i < 2; ++i) {
      const ThresholdReport& rep = t.players[i];
      r.table.rows.push_back(
          {(long long)(i + 1), prof[i]->p, prof[i]->attack_cost(),
           prof[i]->delta, rep.delta_star, std::string(to_string(rep.regime)),
           rep.sustains(prof[i]->delta)});
    }
    r.extra["binding_player"] = t.binding_player;
    r.extra["sustained"] = t.sustained;
    return r;
  }
  GameParams g = detail::game(o);
  if (o.strategy == "tft-k") {
    const TftKChoice choice = tft_k_classify(g, o.delta);
    r.table.columns = {"delta", "threshold", "optimal_k"};
    r.table.rows.push_back(
        {o.delta, choice.threshold, std::string(to_string(choice.optimal_k))});
    return r;
  }
  require_discount(o.delta);
  ThresholdReport rep;
  std::optional<CostThreshold> bar;
  if (o.strategy == "grim") {
    rep = delta_star_grim(g);
    bar = cost_threshold_grim(g.p, g.beta, o.delta);
  } else if (o.strategy == "tft") {
    rep = delta_star_tft(g);
    bar = cost_threshold_tft(g.p, o.delta);
  } else {
    g.cost_timing = CostTiming::OneTimeFixed;
    rep = delta_star_one_time(g);
  }
  r.table.columns = {"delta_star", "regime", "degenerate", "inverted", "delta",
                     "sustained"};
  r.table.rows.push_back({rep.delta_star, std::string(to_string(rep.regime)),
                          rep.degenerate, rep.inverted, o.delta,
                          rep.sustains(o.delta)});
  auto& row = r.table.rows.back();
  if (bar) {
    r.table.columns.push_back("min_cost");
    r.table.columns.push_back("min_cost_raw");
    row.push_back(bar->min_cost);
    row.push_back(bar->raw);
  }
  if (rep.beta_independent) {
    r.table.columns.push_back("beta_independent");
    row.push_back(true);
  }
  if (rep.exceeds_recurring) {
    r.table.columns.push_back("exceeds_recurring");
    row.push_back(*rep.exceeds_recurring);
  }
  return r;
}

inline std::vector<double> curve_grid(const Options& o) {
  if (!o.p_values.empty()) return o.p_values;
  ranklash::detail::require(o.p_points >= 2, "p-points must be >= 2",
                            o.p_points);
  std::vector<double> grid(o.p_points);
  for (int i = 0; i < o.p_points; ++i) {
    grid[i] = i == o.p_points - 1 ? 1.0 : double(i) / (o.p_points - 1);
  }
  return grid;
}

inline Result run_curves(const Options& o) {
  const GameParams g = detail::game(o);
  const DefectionPattern pattern = detail::pattern_of(o);
  const auto samples = defection_curve(g, o.delta, curve_grid(o), pattern);
  Result r;
  r.table = curve_table(samples);
  r.svg = curves_svg(samples, "V_C and V_D (" + o.pattern +
                                  ", beta=" + format_number(o.beta) +
                                  ", delta=" + format_number(o.delta) + ")");
  return r;
}

inline Result run_futile(const Options& o) {
  const GameParams g = detail::game(o);
  const FutileReport rep = futile_defense(g, o.delta, detail::pattern_of(o));
  Result r;
  r.table.columns = {"p_peak", "v_d_max", "exists", "interval_lo",
                     "interval_hi"};
  r.table.rows.push_back({rep.p_peak, rep.v_d_max, rep.exists,
                          rep.exists ? Cell(rep.futile_interval->first)
                                     : Cell(std::monostate{}),
                          rep.exists ? Cell(rep.futile_interval->second)
                                     : Cell(std::monostate{})});
  return r;
}

inline Result run_region(const Options& o) {
  SweepSpec spec;
  spec.strategy = o.strategy == "tft"        ? SweepStrategy::TitForTat
                  : o.strategy == "one-time" ? SweepStrategy::OneTimeGrim
                                             : SweepStrategy::Grim;
  spec.cost = detail::cost_model(o.cost, o.cost_exp);
  spec.beta = o.beta;
  spec.p_axis = {o.p_lo, o.p_hi, o.grid_p};
  spec.delta_axis = {o.delta_lo, o.delta_hi, o.grid_delta};
  const RegionGrid grid = region_sweep(spec, o.threads);
  Result r;
  r.table = region_table(grid);
  r.extra["area"] = round12(region_area(grid));
  auto boundary = nlohmann::ordered_json::array();
  for (const auto& b : boundary_extract(grid)) {
    boundary.push_back({{"p", round12(b.p)},
                        {"delta_star", round12(b.delta_star)},
                        {"raw", std::isfinite(b.raw)
                                    ? nlohmann::ordered_json(round12(b.raw))
                                    : nlohmann::ordered_json(nullptr)},
                        {"regime", std::string(to_string(b.regime))}});
  }
  r.extra["boundary"] = std::move(boundary);
  r.svg = region_svg(grid);
  return r;
}

inline Result run_multi(const Options& o) {
  const MultiParams mp{o.n, o.m, o.p, detail::cost_model(o.cost, o.cost_exp),
                       o.beta, detail::mode_of(o.mode)};
  mp.validate();
  const PayoffMatrix m = multi_stage_payoffs(mp);
  const ThresholdReport rep = multi_delta_star(mp, detail::rule_of(o.strategy));
  const ModeDiscrepancy diff = multi_mode_discrepancy(mp);
  Result r;
  r.table.columns = {"R", "T", "S", "Q", "delta_star", "regime",
                     "mode_difference", "modes_disagree"};
  auto row = detail::matrix_cells(m);
  row.push_back(rep.delta_star);
  row.push_back(std::string(to_string(rep.regime)));
  row.push_back(diff.max_abs_difference);
  row.push_back(diff.flagged);
  r.table.rows.push_back(std::move(row));
  return r;
}

inline Result run_multi_trend(const Options& o) {
  const MultiTrend trend =
      multi_trend(o.n, o.p, detail::cost_model(o.cost, o.cost_exp), o.beta,
                  detail::rule_of(o.strategy), detail::mode_of(o.mode));
  Result r;
  r.table.columns = {"m", "delta_star"};
  for (const auto& [m, d] : trend.points) {
    r.table.rows.push_back({(long long)m, d});
  }
  r.extra["tail_start"] = (o.n + 1) / 2;
  r.extra["tail_monotone_decreasing"] = trend.tail_monotone_decreasing;
  return r;
}

inline Result run_simulate(const Options& o) {
  GameParams g = detail::game(o);
  if (o.timing == "one-time") g.cost_timing = CostTiming::OneTimeFixed;
  const StrategyAutomaton a = detail::automaton_of(o.s1, o.k1);
  const StrategyAutomaton b = detail::automaton_of(o.s2, o.k2);
  SimConfig cfg = SimConfig::symmetric(g, o.delta, o.episodes, o.seed);
  cfg.horizon_epsilon = o.epsilon;
  cfg.threads = o.threads;
  const SimReport rep = estimate_values(a, b, cfg);
  const auto exact = analytic_pair_value(a, b, cfg.matchup, cfg.delta);
  Result r;
  r.seed = o.seed;
  r.table.columns = {"player", "strategy", "mean", "std_error", "analytic",
                     "z"};
  const std::array<const StrategyAutomaton*, 2> autos{&a, &b};
  for (int i = 0; i < 2; ++i) {
    const double z = rep.std_error[i] > 0.0
                         ? (rep.mean[i] - exact[i]) / rep.std_error[i]
                         : 0.0;
    r.table.rows.push_back({(long long)(i + 1), autos[i]->name(), rep.mean[i],
                            rep.std_error[i], exact[i], z});
  }
  r.extra["episodes"] = rep.episodes;
  r.extra["horizon"] = rep.horizon;
  return r;
}

// Reads `key = value` lines ('#' starts a comment) into flag arguments.
inline std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::vector<std::string> args;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(number) +
                       ": expected key = value");
    }
    std::string key = detail::trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    if (key.empty()) {
      throw UsageError("config line " + std::to_string(number) + ": empty key");
    }
    args.push_back("--" + key);
    args.push_back(detail::trim(line.substr(eq + 1)));
  }
  return args;
}

// Pulls --config out of the argument list and splices the file's flags in
// right after the subcommand, so flags given on the command line win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> config_args;
  for (std::size_t i = 0; i < args.size();) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
      continue;
    }
    auto more = read_config(path);
    config_args.insert(config_args.end(), more.begin(), more.end());
  }
  if (config_args.empty()) return args;
  auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return !a.empty() && a.front() != '-';
  });
  if (sub == args.end()) throw UsageError("config given without a subcommand");
  args.insert(sub + 1, config_args.begin(), config_args.end());
  return args;
}

inline std::string render(const Result& r, const std::string& format,
                          const std::string& command, const FlagSet& flags) {
  if (format == "csv") return to_csv(r.table);
  if (format == "svg") {
    if (!r.svg) {
      throw UsageError("svg output is only available for region and curves");
    }
    return *r.svg;
  }
  nlohmann::ordered_json doc;
  doc["meta"]["command"] = command;
  doc["meta"]["tool_version"] = kToolVersion;
  doc["meta"]["seed"] = r.seed ? nlohmann::ordered_json(*r.seed)
                               : nlohmann::ordered_json(nullptr);
  doc["meta"]["inputs"] = flags.inputs();
  doc["meta"]["argv"] = flags.argv();
  nlohmann::ordered_json data = table_json(r.table);
  for (auto it = r.extra.begin(); it != r.extra.end(); ++it) {
    data[it.key()] = it.value();
  }
  doc["data"] = std::move(data);
  return doc.dump(2) + "\n";
}

// `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  Options o;
  CLI::App app{"Repeated-game analysis of ranking manipulation attacks",
               "ranklash"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  struct Command {
    std::unique_ptr<FlagSet> flags;
    std::function<Result(const Options&)> run;
  };
  std::vector<Command> commands;

  auto make = [&](const std::string& name, const std::string& help,
                  std::function<Result(const Options&)> run) -> FlagSet& {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--format", o.format, "csv, json or svg")
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    sub->add_option("--out", o.out, "output file, - for stdout")
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    commands.push_back({std::make_unique<FlagSet>(sub), std::move(run)});
    return *commands.back().flags;
  };
  auto game = [&](FlagSet& f) {
    f.add("p", o.p, "attack success rate");
    f.add("cost", o.cost, "cost coefficient a in c(p) = a p^k");
    f.add("cost-exp", o.cost_exp, "cost exponent k (0 = constant)");
    f.add("beta", o.beta, "market degradation factor");
  };
  auto threads = [&](FlagSet& f) {
    f.app()
        ->add_option("--threads", o.threads,
                     "worker threads, 0 = all cores; RANKLASH_THREADS caps it")
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };
  const std::vector<std::string> patterns{
      "grim", "tft-single", "tft-alternating", "tft-k", "one-time-grim"};

  {
    FlagSet& f = make("payoffs", "stage payoffs R, T, S, Q", run_payoffs);
    game(f);
  }
  {
    FlagSet& f =
        make("ordering", "check the Prisoner's Dilemma ordering", run_ordering);
    game(f);
  }
  {
    FlagSet& f =
        make("threshold", "critical discount factor", run_threshold);
    f.choice("strategy", o.strategy, {"grim", "tft", "tft-k", "one-time", "asym"},
             "threshold family");
    game(f);
    f.add("delta", o.delta, "discount factor");
    f.choice("rule", o.rule, {"grim", "tft"}, "asym: punishment rule");
    f.add("p1", o.p1, "asym: player 1 success rate");
    f.add("p2", o.p2, "asym: player 2 success rate");
    f.add("cost1", o.cost1, "asym: player 1 cost coefficient");
    f.add("cost2", o.cost2, "asym: player 2 cost coefficient");
    f.add("delta1", o.delta1, "asym: player 1 discount factor");
    f.add("delta2", o.delta2, "asym: player 2 discount factor");
  }
  {
    FlagSet& f = make("curves", "V_C and V_D over p", run_curves);
    game(f);
    f.add("delta", o.delta, "discount factor");
    f.choice("pattern", o.pattern, patterns, "defection path");
    f.add("k", o.k, "tft-k: rounds of defection");
    f.add("p-points", o.p_points, "evenly spaced p samples on [0,1]");
    f.add("p-values", o.p_values, "explicit p samples (overrides p-points)")
        ->delimiter(',');
  }
  {
    FlagSet& f = make("futile", "defection peak and futile caps", run_futile);
    game(f);
    f.add("delta", o.delta, "discount factor");
    f.choice("pattern", o.pattern, patterns, "defection path");
    f.add("k", o.k, "tft-k: rounds of defection");
  }
  {
    FlagSet& f = make("region", "cooperation region over (p, delta)",
                      run_region);
    f.choice("strategy", o.strategy, {"grim", "tft", "one-time"},
             "threshold family");
    f.add("cost", o.cost, "cost coefficient a in c(p) = a p^k");
    f.add("cost-exp", o.cost_exp, "cost exponent k (0 = constant)");
    f.add("beta", o.beta, "market degradation factor");
    f.add("p-points", o.grid_p, "grid points along p");
    f.add("delta-points", o.grid_delta, "grid points along delta");
    f.add("p-lo", o.p_lo, "p axis lower end");
    f.add("p-hi", o.p_hi, "p axis upper end");
    f.add("delta-lo", o.delta_lo, "delta axis lower end");
    f.add("delta-hi", o.delta_hi, "delta axis upper end");
    threads(f);
  }
  {
    FlagSet& f = make("multi", "N-player payoffs and threshold", run_multi);
    f.add("n", o.n, "players");
    f.add("m", o.m, "attackers");
    game(f);
    f.choice("mode", o.mode, {"as-written", "per-player"}, "payoff reading");
    f.choice("strategy", o.strategy, {"grim", "tft"}, "punishment rule");
  }
  {
    FlagSet& f = make("multi-trend", "threshold against attacker count",
                      run_multi_trend);
    f.add("n", o.n, "players");
    game(f);
    f.choice("mode", o.mode, {"as-written", "per-player"}, "payoff reading");
    f.choice("strategy", o.strategy, {"grim", "tft"}, "punishment rule");
  }
  {
    FlagSet& f = make("simulate", "Monte Carlo repeated play", run_simulate);
    const std::vector<std::string> automata{
        "all-cooperate", "all-defect", "grim", "tft", "tft-open-d", "defect-k"};
    f.choice("s1", o.s1, automata, "player 1 strategy");
    f.choice("s2", o.s2, automata, "player 2 strategy");
    f.add("k1", o.k1, "player 1 defect-k rounds");
    f.add("k2", o.k2, "player 2 defect-k rounds");
    game(f);
    f.add("delta", o.delta, "discount factor");
    f.choice("timing", o.timing, {"recurring", "one-time"}, "cost timing");
    f.add("episodes", o.episodes, "Monte Carlo episodes");
    f.add("seed", o.seed, "master seed");
    f.add("epsilon", o.epsilon, "horizon truncation tolerance");
    threads(f);
  }

  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.flags->app()->parsed()) chosen = &c;
  }
  const std::string command = chosen->flags->app()->get_name();
  try {
    const Result result = chosen->run(o);
    const std::string text = render(result, o.format, command, *chosen->flags);
    if (o.out.empty() || o.out == "-") {
      out << text;
      out.flush();
    } else {
      write_atomic(o.out, text);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ExportError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

inline int run_cli(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                 std::cerr);
}

}  // namespace ranklash::cli

#include "marl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "marl/oracles.hpp"

namespace marl {
namespace experiments {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check(j.is_object(), "config: expected a JSON object");
  ExperimentConfig config;
  if (j.contains("game")) {
    const json& g = j.at("game");
    if (g.contains("file")) config.game.file = g.at("file").get<std::string>();
    if (g.contains("builtin")) config.game.builtin = g.at("builtin").get<std::string>();
    if (g.contains("S")) config.game.num_states = g.at("S").get<int>();
    if (g.contains("H")) config.game.horizon = g.at("H").get<int>();
    if (g.contains("A")) config.game.action_counts = g.at("A").get<std::vector<int>>();
    if (g.contains("seed")) config.game.seed = g.at("seed").get<std::uint64_t>();
    check(!config.game.file.empty() || !config.game.builtin.empty(),
          "config: game needs 'file' or 'builtin'");
  } else {
    throw std::invalid_argument("config: missing 'game'");
  }
  if (j.contains("distribution")) config.distribution = j.at("distribution");
  if (j.contains("n_values")) config.n_values = j.at("n_values").get<std::vector<int>>();
  if (j.contains("seeds")) config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("solvers")) {
    if (j.at("solvers").is_string()) {
      config.solvers = {j.at("solvers").get<std::string>()};
    } else {
      config.solvers = j.at("solvers").get<std::vector<std::string>>();
    }
  } else if (j.contains("solver")) {
    config.solvers = {j.at("solver").get<std::string>()};
  }
  for (const std::string& solver : config.solvers) {
    check(solver == "sbmm" || solver == "sbsm" || solver == "sbmm_pointwise",
          "config: unknown solver '" + solver + "'");
  }
  if (j.contains("bonus")) {
    const json& b = j.at("bonus");
    if (b.contains("delta")) config.bonus.delta = b.at("delta").get<double>();
    if (b.contains("mode")) config.bonus.mode = b.at("mode").get<std::string>();
    if (b.contains("iota")) config.bonus.iota_override = b.at("iota").get<double>();
    if (b.contains("log_cov")) config.bonus.log_cov_override = b.at("log_cov").get<double>();
    check(config.bonus.mode == "strategy_wise" || config.bonus.mode == "point_wise" ||
              config.bonus.mode == "disabled",
          "config: unknown bonus mode '" + config.bonus.mode + "'");
  }
  if (j.contains("class")) {
    const json& c = j.at("class");
    if (c.contains("kind")) config.strategy_class.kind = c.at("kind").get<std::string>();
    if (c.contains("file")) config.strategy_class.file = c.at("file").get<std::string>();
    if (c.contains("epsilon_cover")) {
      config.strategy_class.epsilon_cover = c.at("epsilon_cover").get<double>();
    }
  }
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    if (o.contains("eps_opt")) config.optimizer.eps_opt = o.at("eps_opt").get<double>();
    if (o.contains("max_iters")) config.optimizer.max_iters = o.at("max_iters").get<long long>();
    if (o.contains("seed")) config.optimizer.seed = o.at("seed").get<std::uint64_t>();
  }
  if (j.contains("dataset_file")) config.dataset_file = j.at("dataset_file").get<std::string>();
  if (j.contains("enumeration_cap")) {
    config.enumeration_cap = j.at("enumeration_cap").get<long long>();
  }
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json game;
  if (!config.game.file.empty()) game["file"] = config.game.file;
  if (!config.game.builtin.empty()) {
    game["builtin"] = config.game.builtin;
    game["S"] = config.game.num_states;
    game["H"] = config.game.horizon;
    game["A"] = config.game.action_counts;
    game["seed"] = config.game.seed;
  }
  json bonus{{"delta", config.bonus.delta}, {"mode", config.bonus.mode}};
  if (config.bonus.iota_override) bonus["iota"] = *config.bonus.iota_override;
  if (config.bonus.log_cov_override) bonus["log_cov"] = *config.bonus.log_cov_override;
  json cls{{"kind", config.strategy_class.kind}};
  if (!config.strategy_class.file.empty()) cls["file"] = config.strategy_class.file;
  if (config.strategy_class.epsilon_cover) {
    cls["epsilon_cover"] = *config.strategy_class.epsilon_cover;
  }
  json out{{"game", std::move(game)},
           {"distribution", config.distribution},
           {"n_values", config.n_values},
           {"seeds", config.seeds},
           {"solvers", config.solvers},
           {"bonus", std::move(bonus)},
           {"class", std::move(cls)},
           {"optimizer",
            json{{"eps_opt", config.optimizer.eps_opt},
                 {"max_iters", config.optimizer.max_iters},
                 {"seed", config.optimizer.seed}}},
           {"enumeration_cap", config.enumeration_cap}};
  if (!config.dataset_file.empty()) out["dataset_file"] = config.dataset_file;
  return out;
}

GameSpec resolve_game(const GameSource& source) {
  if (!source.file.empty()) return io::load_game(source.file);
  const auto& a = source.action_counts;
  check(!a.empty(), "game: empty action counts");
  if (source.builtin == "matching_pennies") return builtins::matching_pennies();
  if (source.builtin == "matching_pennies_markov") {
    return builtins::matching_pennies_markov(source.horizon);
  }
  if (source.builtin == "identity_zero_sum") return builtins::identity_zero_sum(a[0]);
  if (source.builtin == "random_zero_sum") {
    check(a.size() == 2, "random_zero_sum: need two action counts");
    return builtins::random_zero_sum(source.num_states, source.horizon, a[0], a[1], source.seed);
  }
  if (source.builtin == "random_general_sum") {
    return builtins::random_general_sum(source.num_states, source.horizon, a, source.seed);
  }
  if (source.builtin == "turn_based") {
    return builtins::turn_based(source.num_states, source.horizon, a[0], source.seed);
  }
  throw std::invalid_argument("game: unknown builtin '" + source.builtin + "'");
}

DataDistribution resolve_distribution(const json& spec, const GameShape& shape) {
  check(spec.is_object() && spec.contains("kind"), "distribution: missing 'kind'");
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "uniform") return DataDistribution::uniform(shape);
  if (kind == "explicit") {
    DataDistribution dist = io::distribution_from_json(spec);
    check(dist.shape == shape, "distribution: shape does not match the game");
    return dist;
  }
  throw std::invalid_argument("distribution: unknown kind '" + kind + "'");
}

StrategyClass resolve_class(const ClassSpec& spec, const GameShape& shape, int n) {
  const double epsilon =
      spec.epsilon_cover ? *spec.epsilon_cover : default_epsilon_cover(shape, n);
  if (!spec.file.empty()) {
    StrategyClass cls = io::strategy_class_from_json(json::parse(io::read_text_file(spec.file)));
    return cls;
  }
  if (spec.kind == "full") return StrategyClass::full(epsilon);
  if (spec.kind == "deterministic") return StrategyClass::deterministic(epsilon);
  throw std::invalid_argument("class: kind '" + spec.kind + "' needs an explicit file");
}

BonusMode resolve_mode(const std::string& solver, const BonusSpec& bonus) {
  if (solver == "sbmm_pointwise") return BonusMode::kPointWise;
  if (bonus.mode == "point_wise") return BonusMode::kPointWise;
  if (bonus.mode == "disabled") return BonusMode::kDisabled;
  return BonusMode::kStrategyWise;
}

BonusParams resolve_params(const std::string& solver, const BonusSpec& bonus,
                           const StrategyClass& cls, const GameShape& shape, int n) {
  const double log_cov = bonus.log_cov_override ? *bonus.log_cov_override
                                                : cls.log_covering_number(shape);
  const BonusMode mode = resolve_mode(solver, bonus);
  BonusParams params;
  if (solver == "sbsm") {
    params = BonusParams::multi_player(shape, n, bonus.delta, log_cov, mode);
  } else {
    check(shape.num_players == 2, "sbmm: game must have two players");
    params = BonusParams::zero_sum(shape.action_counts[0], shape.action_counts[1],
                                   shape.num_states, shape.horizon, n, bonus.delta, log_cov, mode);
  }
  if (bonus.iota_override) params.iota = *bonus.iota_override;
  return params;
}

namespace {

struct SolveArtifacts {
  Strategy output;
  double surrogate = 0.0;
  json details;  // solver-specific report section
};

json sbmm_report_details(const SbmmReport& report, const GameShape& shape) {
  json lower = json::array(), upper = json::array();
  for (int h = 0; h < shape.horizon; ++h) {
    json lrow = json::array(), urow = json::array();
    for (int s = 0; s < shape.num_states; ++s) {
      lrow.push_back(report.lower_value(h, s, shape.num_states));
      urow.push_back(report.upper_value(h, s, shape.num_states));
    }
    lower.push_back(std::move(lrow));
    upper.push_back(std::move(urow));
  }
  json stages = json::array();
  for (const SbmmStageDiagnostics& d : report.stages) {
    stages.push_back(json{{"h", d.h},
                          {"s", d.s},
                          {"lower_value", d.lower_value},
                          {"upper_value", d.upper_value},
                          {"maximin_value", d.maximin_value},
                          {"minimax_value", d.minimax_value},
                          {"maximin_iterations", d.maximin_iterations},
                          {"minimax_iterations", d.minimax_iterations},
                          {"bonus_lower", d.bonus_lower},
                          {"bonus_upper", d.bonus_upper},
                          {"uncertainty_lower", d.uncertainty_lower},
                          {"uncertainty_upper", d.uncertainty_upper}});
  }
  return json{{"values", json{{"lower", std::move(lower)}, {"upper", std::move(upper)}}},
              {"stages", std::move(stages)},
              {"auxiliary_strategy", io::strategy_to_json(report.auxiliary)},
              {"eps_opt", report.resolved_opt.eps_opt}};
}

SolveArtifacts run_solver(const std::string& solver, const GameSpec& game,
                          const EmpiricalModel& model, const StrategyClass& cls,
                          const BonusParams& params, const ExperimentConfig& config,
                          std::uint64_t cell_seed) {
  SolveArtifacts artifacts;
  if (solver == "sbsm") {
    const SbsmReport report =
        solve_sbsm(model, cls, params, game.initial_state, config.enumeration_cap);
    artifacts.output = report.output;
    artifacts.surrogate = report.best_surrogate;
    artifacts.details = json{{"output_index", report.output_index},
                             {"best_surrogate", report.best_surrogate},
                             {"lower_values_at_output", report.lower_values_at_output},
                             {"upper_br_values_at_output", report.upper_br_values_at_output}};
    if (report.surrogates.size() <= 10'000) {
      artifacts.details["surrogates"] = report.surrogates;
    }
    return artifacts;
  }
  check(is_zero_sum_convention(game),
        solver + ": game does not satisfy the zero-sum reward convention");
  OptimizerConfig opt;
  opt.eps_opt = config.optimizer.eps_opt;
  opt.max_iters = config.optimizer.max_iters;
  opt.seed = mix(config.optimizer.seed, cell_seed);
  const SbmmReport report = solve_sbmm(model, cls, params, opt);
  artifacts.output = report.output;
  const GameShape shape = game.shape();
  artifacts.surrogate =
      report.upper_value(0, game.initial_state, shape.num_states) -
      report.lower_value(0, game.initial_state, shape.num_states);
  artifacts.details = sbmm_report_details(report, shape);
  return artifacts;
}

}  // namespace

CellResult run_cell(const GameSpec& game, const DataDistribution& dist,
                    const ExperimentConfig& config, const std::string& solver, int n,
                    std::uint64_t seed, bool timings) {
  CellResult result;
  result.solver = solver;
  result.n = n;
  result.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const OfflineDataset dataset = sample_dataset(game, dist, n, seed);
    const EmpiricalModel model = build_empirical(dataset);
    const GameShape shape = game.shape();
    const StrategyClass cls = resolve_class(config.strategy_class, shape, n);
    const BonusParams params = resolve_params(solver, config.bonus, cls, shape, n);
    SolveArtifacts artifacts = run_solver(solver, game, model, cls, params, config, seed);
    result.output = artifacts.output;
    result.surrogate = artifacts.surrogate;
    result.gap = gap(game, artifacts.output).gap;
    result.c_hat = empirical_coefficient(model, game, artifacts.output);
    result.c_pop = population_coefficient(dist, game, artifacts.output);
    result.ok = true;
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
    result.gap = std::nan("");
    result.surrogate = std::nan("");
    result.c_hat = std::nan("");
    result.c_pop = std::nan("");
  }
  if (timings) {
    result.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  }
  return result;
}

std::vector<CellResult> run_sweep(const ExperimentConfig& config, int workers, bool timings) {
  check(!config.solvers.empty(), "sweep: no solvers configured");
  check(!config.n_values.empty(), "sweep: no n values configured");
  check(!config.seeds.empty(), "sweep: no seeds configured");
  const GameSpec game = resolve_game(config.game);
  const DataDistribution dist = resolve_distribution(config.distribution, game.shape());

  struct Cell {
    std::string solver;
    int n;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  std::vector<std::string> solvers = config.solvers;
  std::sort(solvers.begin(), solvers.end());
  solvers.erase(std::unique(solvers.begin(), solvers.end()), solvers.end());
  std::vector<int> n_values = config.n_values;
  std::sort(n_values.begin(), n_values.end());
  std::vector<std::uint64_t> seeds = config.seeds;
  std::sort(seeds.begin(), seeds.end());
  for (const std::string& solver : solvers) {
    for (int n : n_values) {
      for (std::uint64_t seed : seeds) cells.push_back({solver, n, seed});
    }
  }

  std::vector<CellResult> results(cells.size());
  const auto worker = [&](std::atomic<std::size_t>& cursor) {
    while (true) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= cells.size()) break;
      const Cell& cell = cells[index];
      results[index] = run_cell(game, dist, config, cell.solver, cell.n, cell.seed, timings);
    }
  };
  if (workers <= 1) {
    std::atomic<std::size_t> cursor{0};
    worker(cursor);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    const int count = std::min<int>(workers, static_cast<int>(cells.size()));
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back([&] { worker(cursor); });
    for (std::thread& t : pool) t.join();
  }
  return results;
}

std::string sweep_csv(const std::vector<CellResult>& cells) {
  std::ostringstream out;
  out << "# marl sweep v1\n";
  out << "solver,n,seed,gap,surrogate,C_hat,C_pop,runtime_ms\n";
  for (const CellResult& cell : cells) {
    out << cell.solver << ',' << cell.n << ',' << cell.seed << ',' << format_double(cell.gap)
        << ',' << format_double(cell.surrogate) << ',' << format_double(cell.c_hat) << ','
        << format_double(cell.c_pop) << ',' << cell.runtime_ms << '\n';
  }
  return out.str();
}

namespace {

json empirical_to_json(const EmpiricalModel& model) {
  return json{{"n", model.samples_per_step},
              {"counts", model.counts},
              {"r_hat", model.mean_rewards},
              {"p_hat", model.transitions}};
}

EmpiricalModel empirical_from_json(const json& j, const GameShape& shape) {
  EmpiricalModel model;
  model.shape = shape;
  model.samples_per_step = j.at("n").get<int>();
  model.counts = j.at("counts").get<std::vector<int>>();
  model.mean_rewards = j.at("r_hat").get<std::vector<double>>();
  model.transitions = j.at("p_hat").get<std::vector<double>>();
  const std::size_t cells = static_cast<std::size_t>(shape.horizon) * shape.num_states *
                            shape.joint_count();
  check(model.counts.size() == cells, "report: empirical counts have wrong size");
  check(model.mean_rewards.size() == cells * shape.num_players,
        "report: empirical rewards have wrong size");
  check(model.transitions.size() == cells * shape.num_states,
        "report: empirical transitions have wrong size");
  return model;
}

json params_to_json(const BonusParams& params) {
  const char* mode = params.mode == BonusMode::kStrategyWise  ? "strategy_wise"
                     : params.mode == BonusMode::kPointWise ? "point_wise"
                                                              : "disabled";
  return json{{"mode", mode},     {"iota", params.iota},       {"log_cov", params.log_cov},
              {"n", params.n},    {"H", params.horizon},       {"S", params.num_states},
              {"delta", params.delta}};
}

BonusParams params_from_json(const json& j) {
  BonusParams params;
  const std::string mode = j.at("mode").get<std::string>();
  params.mode = mode == "strategy_wise" ? BonusMode::kStrategyWise
                : mode == "point_wise" ? BonusMode::kPointWise
                                        : BonusMode::kDisabled;
  params.iota = j.at("iota").get<double>();
  params.log_cov = j.at("log_cov").get<double>();
  params.n = j.at("n").get<int>();
  params.horizon = j.at("H").get<int>();
  params.num_states = j.at("S").get<int>();
  params.delta = j.at("delta").get<double>();
  return params;
}

}  // namespace

json solve_to_report(const ExperimentConfig& config, const GameSpec& game,
                     const OfflineDataset& dataset) {
  check(!config.solvers.empty(), "solve: no solver configured");
  const std::string& solver = config.solvers.front();
  const EmpiricalModel model = build_empirical(dataset);
  const GameShape shape = game.shape();
  const StrategyClass cls = resolve_class(config.strategy_class, shape, dataset.samples_per_step);
  const BonusParams params =
      resolve_params(solver, config.bonus, cls, shape, dataset.samples_per_step);
  SolveArtifacts artifacts =
      run_solver(solver, game, model, cls, params, config, dataset.seed);

  const ValueTable values = evaluate(game, artifacts.output);
  const GapReport gap_report = gap(game, artifacts.output);
  const DataDistribution dist = resolve_distribution(config.distribution, shape);
  std::vector<double> exact_values(shape.num_players);
  for (int j = 0; j < shape.num_players; ++j) {
    exact_values[j] = values.v(0, j, game.initial_state);
  }

  json report{{"version", 1},
              {"solver", solver},
              {"config", config_to_json(config)},
              {"game", io::game_to_json(game)},
              {"game_hash", io::game_hash(game)},
              {"dataset", json{{"n", dataset.samples_per_step}, {"seed", dataset.seed}}},
              {"empirical", empirical_to_json(model)},
              {"params", params_to_json(params)},
              {"output_strategy", io::strategy_to_json(artifacts.output)},
              {"details", artifacts.details},
              {"surrogate", artifacts.surrogate},
              {"exact", json{{"values", exact_values},
                             {"best_response_values", gap_report.best_response_values},
                             {"gap", gap_report.gap},
                             {"c_hat", empirical_coefficient(model, game, artifacts.output)},
                             {"c_pop", population_coefficient(dist, game, artifacts.output)}}}};
  return report;
}

namespace {

constexpr double kVerifyTol = 1e-9;

void record(VerifyOutcome& outcome, const std::string& name, bool pass,
            const std::string& detail = "") {
  ++outcome.checks_run;
  if (!pass) ++outcome.checks_failed;
  outcome.lines.push_back(std::string(pass ? "[PASS] " : "[FAIL] ") + name +
                          (detail.empty() ? "" : " — " + detail));
}

void skip(VerifyOutcome& outcome, const std::string& name, const std::string& why) {
  ++outcome.checks_skipped;
  outcome.lines.push_back("[SKIP] " + name + " — " + why);
}

}  // namespace

VerifyOutcome verify_report(const json& report, const oracles::OracleBudget& budget) {
  VerifyOutcome outcome;
  const GameSpec game = io::game_from_json(report.at("game"));
  const GameShape shape = game.shape();
  const Strategy output = io::strategy_from_json(report.at("output_strategy"));
  const std::string solver = report.at("solver").get<std::string>();
  const BonusParams params = params_from_json(report.at("params"));
  const EmpiricalModel model = empirical_from_json(report.at("empirical"), shape);

  record(outcome, "game_hash", io::game_hash(game) == report.at("game_hash").get<std::string>());

  bool strategy_ok = true;
  try {
    output.validate();
    check(output.shape() == shape, "shape");
  } catch (const std::exception&) {
    strategy_ok = false;
  }
  record(outcome, "output_strategy_valid", strategy_ok);

  const auto exact = report.at("exact");
  const auto reported_values = exact.at("values").get<std::vector<double>>();
  const ValueTable values = evaluate(game, output);
  bool values_ok = reported_values.size() == static_cast<std::size_t>(shape.num_players);
  for (int j = 0; values_ok && j < shape.num_players; ++j) {
    values_ok = std::abs(values.v(0, j, game.initial_state) - reported_values[j]) <= kVerifyTol;
  }
  record(outcome, "value_consistency", values_ok);

  if (oracles::trajectory_count(game) >= 0 &&
      oracles::trajectory_count(game) <= budget.max_trajectories) {
    const auto enumerated = oracles::enumerate_values(game, output, budget);
    bool ok = true;
    for (int j = 0; j < shape.num_players; ++j) {
      ok = ok && std::abs(enumerated[j] - reported_values[j]) <= kVerifyTol;
    }
    record(outcome, "trajectory_enumeration", ok);
  } else {
    skip(outcome, "trajectory_enumeration", "trajectory budget exceeded");
  }

  const double reported_gap = exact.at("gap").get<double>();
  record(outcome, "gap_consistency", std::abs(gap(game, output).gap - reported_gap) <= kVerifyTol);

  if (solver == "sbsm") {
    bool feasible = true;
    for (int j = 0; j < shape.num_players && feasible; ++j) {
      feasible = oracles::deterministic_policy_count(shape, j) >= 0 &&
                 oracles::deterministic_policy_count(shape, j) <= 4096;
    }
    if (feasible) {
      bool equal = true;
      for (int j = 0; j < shape.num_players && equal; ++j) {
        const EvalTables br = optimistic_best_response(model, j, output, params);
        double enumerated = -kInfinity;
        oracles::for_each_deterministic_policy(
            shape, j, budget, [&](const DeterministicPolicy& policy) {
              const Strategy candidate = with_policy(output, policy);
              const EvalTables tables = evaluate_optimistic(model, j, candidate, params);
              enumerated = std::max(enumerated, tables.at(0, game.initial_state));
            });
        equal = std::abs(br.at(0, game.initial_state) - enumerated) <= kVerifyTol;
      }
      record(outcome, "best_response_equality", equal);
    } else {
      skip(outcome, "best_response_equality", "deterministic-policy budget exceeded");
    }
    const double best_surrogate = report.at("details").at("best_surrogate").get<double>();
    record(outcome, "surrogate_consistency",
           std::abs(surrogate(model, output, params, game.initial_state) - best_surrogate) <=
               kVerifyTol);
  } else {
    // Replay the per-stage maximin against the grid reference where the
    // grid is tractable.
    if (shape.action_counts[0] <= 3 && shape.action_counts[1] <= 3) {
      const json& details = report.at("details");
      const json& lower = details.at("values").at("lower");
      const double eps_opt = details.at("eps_opt").get<double>();
      const double lipschitz = lipschitz_constant(params);
      bool ok = true;
      for (const json& stage_json : details.at("stages")) {
        const int h = stage_json.at("h").get<int>();
        const int s = stage_json.at("s").get<int>();
        StageProblem stage;
        stage.num_a = shape.action_counts[0];
        stage.num_b = shape.action_counts[1];
        stage.params = params;
        const auto counts = model.count_block(h, s);
        stage.counts.assign(counts.begin(), counts.end());
        stage.payoff.resize(static_cast<std::size_t>(stage.num_a) * stage.num_b);
        for (int ja = 0; ja < shape.joint_count(); ++ja) {
          double q = model.reward(h, 0, s, ja);
          const auto row = model.transition_row(h, s, ja);
          if (h + 1 < shape.horizon) {
            for (int next = 0; next < shape.num_states; ++next) {
              q += row[next] * lower.at(h + 1).at(next).get<double>();
            }
          }
          stage.payoff[ja] = q;
        }
        const auto reference = oracles::grid_maximin(
            [&](std::span<const double> mu) { return maximin_objective(stage, mu); },
            stage.num_a, budget.grid_step);
        const double certified = stage_json.at("maximin_value").get<double>();
        ok = ok && std::abs(certified - reference.value) <=
                       eps_opt + 2.0 * lipschitz * budget.grid_step + kVerifyTol;
        if (!ok) break;
      }
      record(outcome, "grid_maximin_replay", ok);
    } else {
      skip(outcome, "grid_maximin_replay", "grid budget exceeded (actions > 3)");
    }
  }
  return outcome;
}

}  // namespace experiments
}  // namespace marl

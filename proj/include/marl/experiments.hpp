#ifndef MARL_EXPERIMENTS_HPP
#define MARL_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "marl/builtins.hpp"
#include "marl/io.hpp"
#include "marl/oracles.hpp"
#include "marl/sbmm.hpp"
#include "marl/sbsm.hpp"

namespace marl {
namespace experiments {

using nlohmann::json;

struct GameSource {
  std::string builtin;  // matching_pennies | random_zero_sum | random_general_sum | turn_based
  std::string file;
  int num_states = 1;
  int horizon = 1;
  std::vector<int> action_counts = {2, 2};
  std::uint64_t seed = 0;
};

struct BonusSpec {
  double delta = 0.1;
  std::string mode = "strategy_wise";  // strategy_wise | point_wise | disabled
  std::optional<double> iota_override;
  std::optional<double> log_cov_override;
};

struct ClassSpec {
  std::string kind = "full";  // full | deterministic | finite | per_slot
  std::string file;           // explicit class JSON overrides `kind`
  std::optional<double> epsilon_cover;
};

struct OptimizerSpec {
  double eps_opt = 0.0;
  long long max_iters = 0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  GameSource game;
  json distribution = json{{"kind", "uniform"}};
  std::vector<int> n_values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> solvers;  // sbmm | sbsm | sbmm_pointwise
  BonusSpec bonus;
  ClassSpec strategy_class;
  OptimizerSpec optimizer;
  std::string dataset_file;  // cmd_solve input; sampled in-memory when empty
  long long enumeration_cap = kDefaultEnumerationCap;
};

ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& config);

GameSpec resolve_game(const GameSource& source);
DataDistribution resolve_distribution(const json& spec, const GameShape& shape);
StrategyClass resolve_class(const ClassSpec& spec, const GameShape& shape, int n);
BonusMode resolve_mode(const std::string& solver, const BonusSpec& bonus);

/// Bonus parameters for a solver run: zero-sum constants for the SBMM
/// variants, multi-player constants for SBSM.
BonusParams resolve_params(const std::string& solver, const BonusSpec& bonus,
                           const StrategyClass& cls, const GameShape& shape, int n);

struct CellResult {
  std::string solver;
  int n = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double gap = 0.0;
  double surrogate = 0.0;
  double c_hat = 0.0;
  double c_pop = 0.0;
  long long runtime_ms = 0;
  Strategy output;
};

/// One generate -> solve -> exact-gap evaluation. Failures are captured in
/// the result, not thrown. Timing is recorded only when `timings` is set;
/// otherwise the field stays zero so outputs are bit-reproducible.
CellResult run_cell(const GameSpec& game, const DataDistribution& dist,
                    const ExperimentConfig& config, const std::string& solver, int n,
                    std::uint64_t seed, bool timings);

/// All sweep cells, ordered by (solver, n, seed), computed with `workers`
/// threads; results are identical for any worker count.
std::vector<CellResult> run_sweep(const ExperimentConfig& config, int workers, bool timings);

std::string sweep_csv(const std::vector<CellResult>& cells);

/// Report written by cmd_solve; `exact` diagnostics are computed on the
/// true game so cmd_verify can replay them.
json solve_to_report(const ExperimentConfig& config, const GameSpec& game,
                     const OfflineDataset& dataset);

struct VerifyOutcome {
  int checks_run = 0;
  int checks_failed = 0;
  int checks_skipped = 0;
  std::vector<std::string> lines;
};

VerifyOutcome verify_report(const json& report, const oracles::OracleBudget& budget = {});

}  // namespace experiments
}  // namespace marl

#endif  // MARL_EXPERIMENTS_HPP

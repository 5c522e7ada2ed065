#ifndef MARL_SBMM_HPP
#define MARL_SBMM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "marl/bonus.hpp"
#include "marl/offline_data.hpp"
#include "marl/strategy_class.hpp"

namespace marl {

/// Euclidean projection onto the probability simplex (sort-and-threshold).
std::vector<double> project_simplex(std::span<const double> v);

struct OptimizerConfig {
  double eps_opt = 0.0;      // 0 -> 1 / sqrt(n)
  long long max_iters = 0;   // 0 -> ceil(L^2 / eps_opt^2)
  std::uint64_t seed = 0;    // random start
  bool early_stopping = true;
};

/// One (h, s) stage of the empirical zero-sum game: payoff block and count
/// block, both row-major over (a, b).
struct StageProblem {
  int num_a = 0;
  int num_b = 0;
  std::vector<double> payoff;  // Q_lower or Q_upper, A x B
  std::vector<int> counts;     // n_h(s, a, b), zero marks cells outside K
  BonusParams params;
};

struct StageOutcome {
  std::vector<double> outer;  // the optimized mixed strategy
  int inner_index = 0;        // inner deterministic reply, lowest-index ties
  double value = 0.0;         // exact objective at `outer` (certified)
  long long iterations = 0;
  double bonus = 0.0;         // stage bonus at (outer, inner)
  double uncertainty = 0.0;
};

/// Exact inner minimum over deterministic columns of the pessimistic stage
/// objective E_{mu,nu} payoff - bonus, at the given mu.
double maximin_objective(const StageProblem& problem, std::span<const double> mu);
/// Exact inner maximum over deterministic rows of the optimistic stage
/// objective E_{mu,nu} payoff + bonus, at the given nu.
double minimax_objective(const StageProblem& problem, std::span<const double> nu);

/// max over mu of min over deterministic columns, by projected subgradient
/// ascent with uniform iterate averaging when `slot` is null (full simplex),
/// or by exact enumeration of the slot's candidates otherwise.
StageOutcome maximin_stage(const StageProblem& problem,
                           const std::vector<std::vector<double>>* slot,
                           const OptimizerConfig& opt);

/// Mirror image on the convex optimistic objective.
StageOutcome minimax_stage(const StageProblem& problem,
                           const std::vector<std::vector<double>>* slot,
                           const OptimizerConfig& opt);

struct SbmmStageDiagnostics {
  int h = 0;
  int s = 0;
  double lower_value = 0.0;  // clipped stored pessimistic value
  double upper_value = 0.0;
  double maximin_value = 0.0;  // certified, before clipping
  double minimax_value = 0.0;
  long long maximin_iterations = 0;
  long long minimax_iterations = 0;
  double bonus_lower = 0.0;
  double bonus_upper = 0.0;
  double uncertainty_lower = 0.0;
  double uncertainty_upper = 0.0;
};

struct SbmmReport {
  Strategy output;     // (mu_lower, nu_upper)
  Strategy auxiliary;  // (mu_upper, nu_lower): the inner certificates
  std::vector<double> lower_values;  // [h][s]
  std::vector<double> upper_values;  // [h][s]
  std::vector<SbmmStageDiagnostics> stages;
  OptimizerConfig resolved_opt;
  BonusParams params;

  double lower_value(int h, int s, int num_states) const {
    return lower_values[static_cast<std::size_t>(h) * num_states + s];
  }
  double upper_value(int h, int s, int num_states) const {
    return upper_values[static_cast<std::size_t>(h) * num_states + s];
  }
};

/// Backward induction over the empirical two-player model: per (h, s),
/// solve the pessimistic maximin and the optimistic minimax, clip values to
/// [0, H - h + 1], and emit (mu_lower, nu_upper) with diagnostics.
SbmmReport solve_sbmm(const EmpiricalModel& model, const StrategyClass& strategy_class,
                      const BonusParams& params, const OptimizerConfig& opt);

}  // namespace marl

#endif  // MARL_SBMM_HPP

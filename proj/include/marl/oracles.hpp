#ifndef MARL_ORACLES_HPP
#define MARL_ORACLES_HPP

#include <functional>
#include <vector>

#include "marl/game.hpp"

namespace marl {
namespace oracles {

/// Limits guarding the exponential-time references below.
struct OracleBudget {
  long long max_trajectories = 2'000'000;
  long long max_policies = 1'000'000;
  double grid_step = 1e-3;
};

/// Exact per-player values at the initial state, computed as a sum over all
/// length-H trajectories of probability times return. Shares no code with
/// evaluate(): forward recursion over trajectory prefixes, no DP tables.
std::vector<double> enumerate_values(const GameSpec& game, const Strategy& strategy,
                                     const OracleBudget& budget = {});

/// Number of trajectories enumerate_values would visit.
long long trajectory_count(const GameSpec& game);

/// Number of deterministic policies for one player (A_j^(S*H)), or -1 on
/// overflow past the budget scale.
long long deterministic_policy_count(const GameShape& shape, int player);

/// Invokes `fn` for every deterministic policy of `player`, in lexicographic
/// order over (h, s) slots with the last slot varying fastest.
void for_each_deterministic_policy(const GameShape& shape, int player,
                                   const OracleBudget& budget,
                                   const std::function<void(const DeterministicPolicy&)>& fn);

struct GridMaximinResult {
  std::vector<double> point;
  double value = -kInfinity;
};

/// Exhaustive simplex-grid search for max_mu objective(mu); the objective
/// must already contain its exact inner minimization. dim <= 3.
GridMaximinResult grid_maximin(const std::function<double(std::span<const double>)>& objective,
                               int dim, double grid_step);

/// Central finite differences per coordinate.
std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> point,
    double step);

}  // namespace oracles
}  // namespace marl

#endif  // MARL_ORACLES_HPP

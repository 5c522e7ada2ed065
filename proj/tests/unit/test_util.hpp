#ifndef MARL_TESTS_TEST_UTIL_HPP
#define MARL_TESTS_TEST_UTIL_HPP

#include <vector>

#include "marl/game.hpp"
#include "marl/offline_data.hpp"

namespace marl {
namespace testing {

/// One-step zero-sum game from a player-1 payoff matrix in [0, 1]
/// (player 2 stored rebased per the reward convention).
inline GameSpec zero_sum_bandit(const std::vector<std::vector<double>>& payoff) {
  const int num_a = static_cast<int>(payoff.size());
  const int num_b = static_cast<int>(payoff[0].size());
  GameSpec game;
  game.num_players = 2;
  game.horizon = 1;
  game.num_states = 1;
  game.action_counts = {num_a, num_b};
  game.initial_state = 0;
  game.transitions.assign(static_cast<std::size_t>(num_a) * num_b, 1.0);
  game.mean_rewards.resize(2 * static_cast<std::size_t>(num_a) * num_b);
  for (int a = 0; a < num_a; ++a) {
    for (int b = 0; b < num_b; ++b) {
      game.mean_rewards[a * num_b + b] = payoff[a][b];
      game.mean_rewards[num_a * num_b + a * num_b + b] = 1.0 - payoff[a][b];
    }
  }
  game.validate();
  return game;
}

inline Strategy random_strategy(const GameShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  Strategy strategy(shape);
  for (int h = 0; h < shape.horizon; ++h) {
    for (int s = 0; s < shape.num_states; ++s) {
      for (int j = 0; j < shape.num_players; ++j) {
        const auto point = rng.simplex_point(shape.action_counts[j]);
        std::copy(point.begin(), point.end(), strategy.dist(h, s, j).begin());
      }
    }
  }
  return strategy;
}

/// Oracle configuration: empirical model equal to the true model with full
/// coverage, so solvers with disabled bonuses reproduce exact planning.
inline EmpiricalModel exact_model(const GameSpec& game, int count_per_cell = 1000) {
  const GameShape sh = game.shape();
  EmpiricalModel model;
  model.shape = sh;
  const std::size_t cells = static_cast<std::size_t>(sh.horizon) * sh.num_states *
                            sh.joint_count();
  model.samples_per_step =
      count_per_cell * sh.num_states * sh.joint_count();
  model.counts.assign(cells, count_per_cell);
  model.mean_rewards = game.mean_rewards;
  model.transitions = game.transitions;
  return model;
}

/// Point-mass data distribution on (s, joint) for every h.
inline DataDistribution point_mass_distribution(const GameShape& shape, int s, int joint) {
  DataDistribution dist{shape, {}};
  dist.probs.assign(
      static_cast<std::size_t>(shape.horizon) * shape.num_states * shape.joint_count(), 0.0);
  for (int h = 0; h < shape.horizon; ++h) dist.at(h, s, joint) = 1.0;
  return dist;
}

}  // namespace testing
}  // namespace marl

#endif  // MARL_TESTS_TEST_UTIL_HPP

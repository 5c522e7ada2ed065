#ifndef MARL_BUILTINS_HPP
#define MARL_BUILTINS_HPP

#include <cstdint>

#include "marl/game.hpp"

namespace marl {
namespace builtins {

/// S=1, H=1, A=B=2, player-1 rewards [[1,0],[0,1]], zero-sum convention.
GameSpec matching_pennies();

/// Zero-sum game with the uniform mixed equilibrium: player 1 scores on
/// matching actions (the A x A identity payoff), rebased per the reward
/// convention.
GameSpec identity_zero_sum(int num_actions);

/// Two-timestep, two-state matching-pennies chain: matched actions lead to
/// state 0 (pennies payoff), mismatched to state 1 (payoff flipped).
GameSpec matching_pennies_markov(int horizon = 2);

/// i.i.d. uniform[0,1] player-1 mean rewards (player 2 rebased),
/// Dirichlet(1..1) transition rows.
GameSpec random_zero_sum(int num_states, int horizon, int num_a, int num_b, std::uint64_t seed);

/// i.i.d. uniform[0,1] mean rewards per player, Dirichlet(1..1) rows.
GameSpec random_general_sum(int num_states, int horizon, std::vector<int> action_counts,
                            std::uint64_t seed);

/// Zero-sum game where effectively one player moves per (h, s): rewards and
/// transitions ignore the other player's action. Admits a deterministic
/// equilibrium.
GameSpec turn_based(int num_states, int horizon, int num_actions, std::uint64_t seed);

}  // namespace builtins
}  // namespace marl

#endif  // MARL_BUILTINS_HPP

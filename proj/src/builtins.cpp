#include "marl/builtins.hpp"

#include <cmath>

namespace marl {
namespace builtins {

namespace {

GameSpec blank_game(int num_players, int horizon, int num_states, std::vector<int> action_counts) {
  GameSpec game;
  game.num_players = num_players;
  game.horizon = horizon;
  game.num_states = num_states;
  game.action_counts = std::move(action_counts);
  game.initial_state = 0;
  const GameShape sh = game.shape();
  game.transitions.assign(static_cast<std::size_t>(horizon) * num_states * sh.joint_count() *
                              num_states,
                          0.0);
  game.mean_rewards.assign(
      static_cast<std::size_t>(horizon) * num_players * num_states * sh.joint_count(), 0.0);
  return game;
}

void set_reward_pair(GameSpec& game, int h, int s, int joint, double r1) {
  game.mean_rewards[game.reward_index(h, 0, s, joint)] = r1;
  game.mean_rewards[game.reward_index(h, 1, s, joint)] = 1.0 - r1;
}

void set_uniform_self_loop(GameSpec& game, int h, int s, int joint) {
  // Terminal-ish rows still must sum to one; stay in place.
  game.transitions[game.transition_index(h, s, joint, s)] = 1.0;
}

void fill_dirichlet_rows(GameSpec& game, Rng& rng) {
  const GameShape sh = game.shape();
  for (int h = 0; h < game.horizon; ++h) {
    for (int s = 0; s < game.num_states; ++s) {
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        double total = 0.0;
        std::vector<double> row(game.num_states);
        for (int next = 0; next < game.num_states; ++next) {
          double u = rng.uniform();
          if (u <= 0.0) u = 1e-300;
          row[next] = -std::log(u);
          total += row[next];
        }
        for (int next = 0; next < game.num_states; ++next) {
          game.transitions[game.transition_index(h, s, ja, next)] = row[next] / total;
        }
      }
    }
  }
}

}  // namespace

GameSpec matching_pennies() {
  GameSpec game = blank_game(2, 1, 1, {2, 2});
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      set_reward_pair(game, 0, 0, a * 2 + b, a == b ? 1.0 : 0.0);
      set_uniform_self_loop(game, 0, 0, a * 2 + b);
    }
  }
  game.validate();
  return game;
}

GameSpec identity_zero_sum(int num_actions) {
  GameSpec game = blank_game(2, 1, 1, {num_actions, num_actions});
  for (int a = 0; a < num_actions; ++a) {
    for (int b = 0; b < num_actions; ++b) {
      set_reward_pair(game, 0, 0, a * num_actions + b, a == b ? 1.0 : 0.0);
      set_uniform_self_loop(game, 0, 0, a * num_actions + b);
    }
  }
  game.validate();
  return game;
}

GameSpec matching_pennies_markov(int horizon) {
  GameSpec game = blank_game(2, horizon, 2, {2, 2});
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int ja = a * 2 + b;
          // State 0 pays on matches, state 1 on mismatches.
          const bool match = a == b;
          set_reward_pair(game, h, s, ja, (s == 0) == match ? 1.0 : 0.0);
          game.transitions[game.transition_index(h, s, ja, match ? 0 : 1)] = 1.0;
        }
      }
    }
  }
  game.validate();
  return game;
}

GameSpec random_zero_sum(int num_states, int horizon, int num_a, int num_b, std::uint64_t seed) {
  GameSpec game = blank_game(2, horizon, num_states, {num_a, num_b});
  Rng rng(seed);
  const GameShape sh = game.shape();
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        set_reward_pair(game, h, s, ja, rng.uniform());
      }
    }
  }
  fill_dirichlet_rows(game, rng);
  game.validate();
  return game;
}

GameSpec random_general_sum(int num_states, int horizon, std::vector<int> action_counts,
                            std::uint64_t seed) {
  const int num_players = static_cast<int>(action_counts.size());
  GameSpec game = blank_game(num_players, horizon, num_states, std::move(action_counts));
  Rng rng(seed);
  const GameShape sh = game.shape();
  for (int h = 0; h < horizon; ++h) {
    for (int j = 0; j < num_players; ++j) {
      for (int s = 0; s < num_states; ++s) {
        for (int ja = 0; ja < sh.joint_count(); ++ja) {
          game.mean_rewards[game.reward_index(h, j, s, ja)] = rng.uniform();
        }
      }
    }
  }
  fill_dirichlet_rows(game, rng);
  game.validate();
  return game;
}

GameSpec turn_based(int num_states, int horizon, int num_actions, std::uint64_t seed) {
  GameSpec game = blank_game(2, horizon, num_states, {num_actions, num_actions});
  Rng rng(seed);
  const GameShape sh = game.shape();
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      const int mover = (h + s) % 2;
      // One reward and one transition row per mover action; the other
      // player's action is ignored.
      std::vector<double> reward(num_actions);
      std::vector<std::vector<double>> rows(num_actions);
      for (int a = 0; a < num_actions; ++a) {
        reward[a] = rng.uniform();
        rows[a].resize(num_states);
        double total = 0.0;
        for (int next = 0; next < num_states; ++next) {
          double u = rng.uniform();
          if (u <= 0.0) u = 1e-300;
          rows[a][next] = -std::log(u);
          total += rows[a][next];
        }
        for (double& v : rows[a]) v /= total;
      }
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        const int a = sh.decode_action(ja, mover);
        set_reward_pair(game, h, s, ja, reward[a]);
        for (int next = 0; next < num_states; ++next) {
          game.transitions[game.transition_index(h, s, ja, next)] = rows[a][next];
        }
      }
    }
  }
  game.validate();
  return game;
}

}  // namespace builtins
}  // namespace marl

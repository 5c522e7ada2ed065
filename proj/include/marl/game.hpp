#ifndef MARL_GAME_HPP
#define MARL_GAME_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "marl/common.hpp"

namespace marl {

/// Dimensions of a tabular Markov game plus joint-action indexing helpers.
/// Joint actions are flattened in row-major order over (a_1, ..., a_m):
/// the last player's action varies fastest.
class GameShape {
 public:
  GameShape() = default;
  GameShape(int num_players, int horizon, int num_states, std::vector<int> action_counts);

  int num_players = 0;
  int horizon = 0;
  int num_states = 0;
  std::vector<int> action_counts;

  int joint_count() const { return joint_count_; }
  int sum_actions() const { return sum_actions_; }
  int action_offset(int player) const { return action_offsets_[player]; }

  int decode_action(int joint, int player) const {
    return (joint / strides_[player]) % action_counts[player];
  }
  int encode_joint(std::span<const int> actions) const;

  bool operator==(const GameShape& other) const {
    return num_players == other.num_players && horizon == other.horizon &&
           num_states == other.num_states && action_counts == other.action_counts;
  }

 private:
  int joint_count_ = 0;
  int sum_actions_ = 0;
  std::vector<int> strides_;
  std::vector<int> action_offsets_;
};

enum class RewardKind { kBernoulli, kDeterministic };

/// Full tabular general-sum Markov game. Transition rows and mean rewards
/// are dense; every (h, s, joint) cell must be populated.
struct GameSpec {
  int num_players = 0;
  int horizon = 0;
  int num_states = 0;
  std::vector<int> action_counts;
  int initial_state = 0;
  RewardKind reward_kind = RewardKind::kBernoulli;
  /// P[h][s][joint][s'], flattened.
  std::vector<double> transitions;
  /// r[h][j][s][joint], flattened, entries in [0, 1].
  std::vector<double> mean_rewards;

  GameShape shape() const { return GameShape(num_players, horizon, num_states, action_counts); }

  std::size_t transition_index(int h, int s, int joint, int next) const;
  std::size_t reward_index(int h, int player, int s, int joint) const;

  std::span<const double> transition_row(int h, int s, int joint) const;
  double mean_reward(int h, int player, int s, int joint) const;

  /// Throws std::invalid_argument if any invariant fails (row sums,
  /// reward range, tensor sizes).
  void validate() const;
};

/// Per-(timestep, state, player) action distributions.
class Strategy {
 public:
  Strategy() = default;
  explicit Strategy(const GameShape& shape);
  static Strategy uniform(const GameShape& shape);

  std::span<double> dist(int h, int s, int player);
  std::span<const double> dist(int h, int s, int player) const;

  /// Probability of the joint action: product over players.
  double joint_prob(int h, int s, int joint) const;

  void set_point_mass(int h, int s, int player, int action);
  void validate() const;

  const GameShape& shape() const { return shape_; }
  std::vector<double>& raw() { return probs_; }
  const std::vector<double>& raw() const { return probs_; }

  bool operator==(const Strategy& other) const {
    return shape_ == other.shape_ && probs_ == other.probs_;
  }

 private:
  GameShape shape_;
  std::vector<double> probs_;  // [h][s][sum_actions]
};

/// One player's deterministic policy: an action per (h, s).
struct DeterministicPolicy {
  int player = 0;
  std::vector<int> actions;  // [h][s]
  int action(int h, int s, int num_states) const { return actions[h * num_states + s]; }
};

/// Installs a deterministic policy for `policy.player` on top of `base`.
Strategy with_policy(const Strategy& base, const DeterministicPolicy& policy);

/// State values V[h][j][s] for h in [0, H] (terminal row is zero) and,
/// when requested, joint-action values Q[h][j][s][joint].
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(const GameShape& shape, bool with_q);

  double v(int h, int player, int s) const { return v_[v_index(h, player, s)]; }
  double& v(int h, int player, int s) { return v_[v_index(h, player, s)]; }
  double q(int h, int player, int s, int joint) const { return q_[q_index(h, player, s, joint)]; }
  double& q(int h, int player, int s, int joint) { return q_[q_index(h, player, s, joint)]; }
  bool has_q() const { return !q_.empty(); }

 private:
  std::size_t v_index(int h, int player, int s) const {
    return (static_cast<std::size_t>(h) * shape_.num_players + player) * shape_.num_states + s;
  }
  std::size_t q_index(int h, int player, int s, int joint) const {
    return ((static_cast<std::size_t>(h) * shape_.num_players + player) * shape_.num_states + s) *
               shape_.joint_count() +
           joint;
  }
  GameShape shape_;
  std::vector<double> v_, q_;
};

struct GapReport {
  std::vector<double> best_response_values;  // V^{*,pi_{-j}}_1(s_1) per player
  std::vector<double> strategy_values;       // V^pi_{1,j}(s_1) per player
  double gap = 0.0;
};

/// Occupancy measures d_h(s, joint) under a strategy.
struct Occupancy {
  GameShape shape;
  std::vector<double> d;  // [h][s][joint]
  double at(int h, int s, int joint) const {
    return d[(static_cast<std::size_t>(h) * shape.num_states + s) * shape.joint_count() + joint];
  }
};

ValueTable evaluate(const GameSpec& game, const Strategy& strategy);

/// Best response of one player against the others' fixed strategy,
/// solved by backward induction on the marginalized single-agent MDP.
/// Argmax ties break toward the lowest action index.
std::pair<DeterministicPolicy, ValueTable> best_response(const GameSpec& game,
                                                         const Strategy& strategy, int player);

GapReport gap(const GameSpec& game, const Strategy& strategy);

Occupancy occupancy(const GameSpec& game, const Strategy& strategy);

/// Exact mixed equilibrium of a zero-sum matrix game (row player maximizes
/// `matrix`, column player minimizes) found by square-support enumeration.
struct MatrixNash {
  std::vector<double> row;
  std::vector<double> col;
  double value = 0.0;
};
MatrixNash solve_stage_nash_zero_sum(const std::vector<double>& matrix, int rows, int cols);

/// Read-only zero-sum interpretation of a two-player GameSpec. The stored
/// rewards must satisfy r_2 = 1 - r_1 entrywise (the shared-reward
/// convention rebased so both stored rows stay in [0, 1]); player 2's
/// objective is to minimize the player-1 reward.
class ZeroSumView {
 public:
  explicit ZeroSumView(const GameSpec& game);

  const GameSpec& game() const { return *game_; }
  int num_max_actions() const { return game_->action_counts[0]; }
  int num_min_actions() const { return game_->action_counts[1]; }
  double reward(int h, int s, int a, int b) const {
    return game_->mean_reward(h, 0, s, a * game_->action_counts[1] + b);
  }

 private:
  const GameSpec* game_;
};

/// Whether a two-player game satisfies the zero-sum reward convention.
bool is_zero_sum_convention(const GameSpec& game, double tolerance = 1e-9);

/// Markov-perfect equilibrium of a zero-sum game on the true model, built
/// by backward induction with solve_stage_nash_zero_sum at every (h, s).
/// Second element is the equilibrium value V*_h(s) table (player-1 rewards).
std::pair<Strategy, ValueTable> backward_induction_nash(const ZeroSumView& view);

/// min-player best response value V^{mu,*} (in player-1 rewards) and the
/// maximizing counterpart V^{*,nu}; thin zero-sum specializations used by
/// diagnostics.
ValueTable zero_sum_best_response_min(const ZeroSumView& view, const Strategy& strategy);
ValueTable zero_sum_best_response_max(const ZeroSumView& view, const Strategy& strategy);

}  // namespace marl

#endif  // MARL_GAME_HPP

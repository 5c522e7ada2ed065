#include "marl/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace marl {

GameShape::GameShape(int num_players_in, int horizon_in, int num_states_in,
                     std::vector<int> action_counts_in)
    : num_players(num_players_in),
      horizon(horizon_in),
      num_states(num_states_in),
      action_counts(std::move(action_counts_in)) {
  check(num_players >= 1, "shape: need at least one player");
  check(horizon >= 1, "shape: horizon must be positive");
  check(num_states >= 1, "shape: need at least one state");
  check(static_cast<int>(action_counts.size()) == num_players,
        "shape: action_counts size must equal num_players");
  strides_.assign(num_players, 1);
  for (int j = num_players - 2; j >= 0; --j) {
    strides_[j] = strides_[j + 1] * action_counts[j + 1];
  }
  joint_count_ = 1;
  sum_actions_ = 0;
  action_offsets_.assign(num_players, 0);
  for (int j = 0; j < num_players; ++j) {
    check(action_counts[j] >= 1, "shape: action counts must be positive");
    action_offsets_[j] = sum_actions_;
    sum_actions_ += action_counts[j];
    joint_count_ *= action_counts[j];
  }
}

int GameShape::encode_joint(std::span<const int> actions) const {
  check(static_cast<int>(actions.size()) == num_players, "encode_joint: wrong arity");
  int joint = 0;
  for (int j = 0; j < num_players; ++j) {
    check(actions[j] >= 0 && actions[j] < action_counts[j], "encode_joint: action out of range");
    joint += actions[j] * strides_[j];
  }
  return joint;
}

std::size_t GameSpec::transition_index(int h, int s, int joint, int next) const {
  const GameShape sh = shape();
  return ((static_cast<std::size_t>(h) * num_states + s) * sh.joint_count() + joint) * num_states +
         next;
}

std::size_t GameSpec::reward_index(int h, int player, int s, int joint) const {
  const GameShape sh = shape();
  return ((static_cast<std::size_t>(h) * num_players + player) * num_states + s) *
             sh.joint_count() +
         joint;
}

std::span<const double> GameSpec::transition_row(int h, int s, int joint) const {
  return std::span<const double>(transitions.data() + transition_index(h, s, joint, 0),
                                 static_cast<std::size_t>(num_states));
}

double GameSpec::mean_reward(int h, int player, int s, int joint) const {
  return mean_rewards[reward_index(h, player, s, joint)];
}

void GameSpec::validate() const {
  const GameShape sh = shape();
  check(initial_state >= 0 && initial_state < num_states, "game: initial state out of range");
  const std::size_t p_size = static_cast<std::size_t>(horizon) * num_states * sh.joint_count() *
                             num_states;
  const std::size_t r_size =
      static_cast<std::size_t>(horizon) * num_players * num_states * sh.joint_count();
  check(transitions.size() == p_size, "game: transition tensor has wrong size");
  check(mean_rewards.size() == r_size, "game: reward tensor has wrong size");
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        double total = 0.0;
        for (int next = 0; next < num_states; ++next) {
          const double p = transitions[transition_index(h, s, ja, next)];
          check(p >= 0.0, "game: negative transition probability");
          total += p;
        }
        check(std::abs(total - 1.0) <= kProbTolerance, "game: transition row does not sum to 1");
      }
    }
  }
  for (double r : mean_rewards) {
    check(r >= 0.0 && r <= 1.0, "game: mean reward outside [0, 1]");
  }
}

Strategy::Strategy(const GameShape& shape)
    : shape_(shape),
      probs_(static_cast<std::size_t>(shape.horizon) * shape.num_states * shape.sum_actions(),
             0.0) {}

Strategy Strategy::uniform(const GameShape& shape) {
  Strategy out(shape);
  for (int h = 0; h < shape.horizon; ++h) {
    for (int s = 0; s < shape.num_states; ++s) {
      for (int j = 0; j < shape.num_players; ++j) {
        auto row = out.dist(h, s, j);
        const double p = 1.0 / shape.action_counts[j];
        std::fill(row.begin(), row.end(), p);
      }
    }
  }
  return out;
}

std::span<double> Strategy::dist(int h, int s, int player) {
  const std::size_t base =
      (static_cast<std::size_t>(h) * shape_.num_states + s) * shape_.sum_actions() +
      shape_.action_offset(player);
  return std::span<double>(probs_.data() + base,
                           static_cast<std::size_t>(shape_.action_counts[player]));
}

std::span<const double> Strategy::dist(int h, int s, int player) const {
  const std::size_t base =
      (static_cast<std::size_t>(h) * shape_.num_states + s) * shape_.sum_actions() +
      shape_.action_offset(player);
  return std::span<const double>(probs_.data() + base,
                                 static_cast<std::size_t>(shape_.action_counts[player]));
}

double Strategy::joint_prob(int h, int s, int joint) const {
  double p = 1.0;
  for (int j = 0; j < shape_.num_players; ++j) {
    p *= dist(h, s, j)[shape_.decode_action(joint, j)];
    if (p == 0.0) return 0.0;
  }
  return p;
}

void Strategy::set_point_mass(int h, int s, int player, int action) {
  auto row = dist(h, s, player);
  std::fill(row.begin(), row.end(), 0.0);
  row[action] = 1.0;
}

void Strategy::validate() const {
  for (int h = 0; h < shape_.horizon; ++h) {
    for (int s = 0; s < shape_.num_states; ++s) {
      for (int j = 0; j < shape_.num_players; ++j) {
        check(is_distribution(dist(h, s, j)), "strategy: row is not a distribution");
      }
    }
  }
}

Strategy with_policy(const Strategy& base, const DeterministicPolicy& policy) {
  Strategy out = base;
  const GameShape& sh = base.shape();
  for (int h = 0; h < sh.horizon; ++h) {
    for (int s = 0; s < sh.num_states; ++s) {
      out.set_point_mass(h, s, policy.player, policy.action(h, s, sh.num_states));
    }
  }
  return out;
}

ValueTable::ValueTable(const GameShape& shape, bool with_q) : shape_(shape) {
  v_.assign(static_cast<std::size_t>(shape.horizon + 1) * shape.num_players * shape.num_states,
            0.0);
  if (with_q) {
    q_.assign(static_cast<std::size_t>(shape.horizon) * shape.num_players * shape.num_states *
                  shape.joint_count(),
              0.0);
  }
}

namespace {

void check_compatible(const GameSpec& game, const Strategy& strategy) {
  check(strategy.shape() == game.shape(), "strategy dimensions do not match game");
}

}  // namespace

ValueTable evaluate(const GameSpec& game, const Strategy& strategy) {
  check_compatible(game, strategy);
  const GameShape sh = game.shape();
  ValueTable table(sh, /*with_q=*/true);
  for (int h = sh.horizon - 1; h >= 0; --h) {
    for (int j = 0; j < sh.num_players; ++j) {
      for (int s = 0; s < sh.num_states; ++s) {
        double v = 0.0;
        for (int ja = 0; ja < sh.joint_count(); ++ja) {
          double q = game.mean_reward(h, j, s, ja);
          const auto row = game.transition_row(h, s, ja);
          for (int next = 0; next < sh.num_states; ++next) {
            q += row[next] * table.v(h + 1, j, next);
          }
          table.q(h, j, s, ja) = q;
          v += strategy.joint_prob(h, s, ja) * q;
        }
        table.v(h, j, s) = v;
      }
    }
  }
  return table;
}

std::pair<DeterministicPolicy, ValueTable> best_response(const GameSpec& game,
                                                         const Strategy& strategy, int player) {
  check_compatible(game, strategy);
  const GameShape sh = game.shape();
  check(player >= 0 && player < sh.num_players, "best_response: player index out of range");
  DeterministicPolicy policy;
  policy.player = player;
  policy.actions.assign(static_cast<std::size_t>(sh.horizon) * sh.num_states, 0);
  ValueTable table(sh, /*with_q=*/false);
  const int num_actions = sh.action_counts[player];
  for (int h = sh.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < sh.num_states; ++s) {
      double best = -kInfinity;
      int best_action = 0;
      for (int a = 0; a < num_actions; ++a) {
        // Marginalize the other players' strategy over joint actions with
        // player's action fixed to a.
        double q = 0.0;
        for (int ja = 0; ja < sh.joint_count(); ++ja) {
          if (sh.decode_action(ja, player) != a) continue;
          double opp = 1.0;
          for (int k = 0; k < sh.num_players; ++k) {
            if (k == player) continue;
            opp *= strategy.dist(h, s, k)[sh.decode_action(ja, k)];
          }
          if (opp == 0.0) continue;
          double cell = game.mean_reward(h, player, s, ja);
          const auto row = game.transition_row(h, s, ja);
          for (int next = 0; next < sh.num_states; ++next) {
            cell += row[next] * table.v(h + 1, player, next);
          }
          q += opp * cell;
        }
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      table.v(h, player, s) = best;
      policy.actions[static_cast<std::size_t>(h) * sh.num_states + s] = best_action;
    }
  }
  return {std::move(policy), std::move(table)};
}

GapReport gap(const GameSpec& game, const Strategy& strategy) {
  check_compatible(game, strategy);
  const GameShape sh = game.shape();
  const ValueTable values = evaluate(game, strategy);
  GapReport report;
  report.best_response_values.resize(sh.num_players);
  report.strategy_values.resize(sh.num_players);
  for (int j = 0; j < sh.num_players; ++j) {
    const auto [policy, br_values] = best_response(game, strategy, j);
    report.best_response_values[j] = br_values.v(0, j, game.initial_state);
    report.strategy_values[j] = values.v(0, j, game.initial_state);
    report.gap += report.best_response_values[j] - report.strategy_values[j];
  }
  return report;
}

Occupancy occupancy(const GameSpec& game, const Strategy& strategy) {
  check_compatible(game, strategy);
  const GameShape sh = game.shape();
  Occupancy occ{sh, std::vector<double>(static_cast<std::size_t>(sh.horizon) * sh.num_states *
                                            sh.joint_count(),
                                        0.0)};
  std::vector<double> state_dist(sh.num_states, 0.0);
  state_dist[game.initial_state] = 1.0;
  for (int h = 0; h < sh.horizon; ++h) {
    std::vector<double> next_dist(sh.num_states, 0.0);
    for (int s = 0; s < sh.num_states; ++s) {
      if (state_dist[s] == 0.0) continue;
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        const double mass = state_dist[s] * strategy.joint_prob(h, s, ja);
        if (mass == 0.0) continue;
        occ.d[(static_cast<std::size_t>(h) * sh.num_states + s) * sh.joint_count() + ja] = mass;
        const auto row = game.transition_row(h, s, ja);
        for (int next = 0; next < sh.num_states; ++next) {
          next_dist[next] += mass * row[next];
        }
      }
    }
    state_dist = std::move(next_dist);
  }
  return occ;
}

namespace {

// Solves the square linear system M x = rhs in place by Gaussian elimination
// with partial pivoting. Returns false when the pivot is numerically zero.
bool solve_linear(std::vector<double> m, std::vector<double> rhs, int dim,
                  std::vector<double>& out) {
  for (int col = 0; col < dim; ++col) {
    int pivot = col;
    for (int r = col + 1; r < dim; ++r) {
      if (std::abs(m[r * dim + col]) > std::abs(m[pivot * dim + col])) pivot = r;
    }
    if (std::abs(m[pivot * dim + col]) < 1e-12) return false;
    if (pivot != col) {
      for (int c = 0; c < dim; ++c) std::swap(m[pivot * dim + c], m[col * dim + c]);
      std::swap(rhs[pivot], rhs[col]);
    }
    const double inv = 1.0 / m[col * dim + col];
    for (int r = 0; r < dim; ++r) {
      if (r == col) continue;
      const double factor = m[r * dim + col] * inv;
      if (factor == 0.0) continue;
      for (int c = col; c < dim; ++c) m[r * dim + c] -= factor * m[col * dim + c];
      rhs[r] -= factor * rhs[col];
    }
  }
  out.resize(dim);
  for (int i = 0; i < dim; ++i) out[i] = rhs[i] / m[i * dim + i];
  return true;
}

// Enumerates all k-subsets of {0..n-1} in lexicographic order.
bool next_subset(std::vector<int>& subset, int n) {
  const int k = static_cast<int>(subset.size());
  for (int i = k - 1; i >= 0; --i) {
    if (subset[i] < n - (k - i)) {
      ++subset[i];
      for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> first_subset(int k) {
  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  return subset;
}

}  // namespace

MatrixNash solve_stage_nash_zero_sum(const std::vector<double>& matrix, int rows, int cols) {
  check(rows >= 1 && cols >= 1, "stage nash: empty matrix");
  check(rows <= 8 && cols <= 8, "stage nash: support enumeration handles at most 8x8");
  check(static_cast<int>(matrix.size()) == rows * cols, "stage nash: size mismatch");
  constexpr double kFeasTol = 1e-10;
  const auto at = [&](int r, int c) { return matrix[r * cols + c]; };

  // Shapley-Snow: some equilibrium is supported on a square subkernel, so
  // enumerating equal-size supports is exhaustive for the zero-sum case.
  for (int k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<int> rs = first_subset(k);
    do {
      std::vector<int> cs = first_subset(k);
      do {
        // Unknowns: mu over rs plus the value v. Row player mixes so every
        // support column yields v; columns of cs mix so support rows yield v.
        const int dim = k + 1;
        std::vector<double> m(dim * dim, 0.0), rhs(dim, 0.0), mu_sol, nu_sol;
        for (int ci = 0; ci < k; ++ci) {
          for (int ri = 0; ri < k; ++ri) m[ci * dim + ri] = at(rs[ri], cs[ci]);
          m[ci * dim + k] = -1.0;
        }
        for (int ri = 0; ri < k; ++ri) m[k * dim + ri] = 1.0;
        rhs[k] = 1.0;
        if (!solve_linear(m, rhs, dim, mu_sol)) continue;

        std::vector<double> mt(dim * dim, 0.0), rhs2(dim, 0.0);
        for (int ri = 0; ri < k; ++ri) {
          for (int ci = 0; ci < k; ++ci) mt[ri * dim + ci] = at(rs[ri], cs[ci]);
          mt[ri * dim + k] = -1.0;
        }
        for (int ci = 0; ci < k; ++ci) mt[k * dim + ci] = 1.0;
        rhs2[k] = 1.0;
        if (!solve_linear(mt, rhs2, dim, nu_sol)) continue;

        const double value = mu_sol[k];
        bool feasible = std::abs(nu_sol[k] - value) <= kFeasTol;
        for (int i = 0; i < k && feasible; ++i) {
          feasible = mu_sol[i] >= -kFeasTol && nu_sol[i] >= -kFeasTol;
        }
        if (!feasible) continue;

        MatrixNash out;
        out.row.assign(rows, 0.0);
        out.col.assign(cols, 0.0);
        for (int i = 0; i < k; ++i) {
          out.row[rs[i]] = std::max(0.0, mu_sol[i]);
          out.col[cs[i]] = std::max(0.0, nu_sol[i]);
        }
        out.value = value;

        // No pure deviation may improve either side.
        for (int c = 0; c < cols && feasible; ++c) {
          double got = 0.0;
          for (int r = 0; r < rows; ++r) got += out.row[r] * at(r, c);
          feasible = got >= value - kFeasTol;
        }
        for (int r = 0; r < rows && feasible; ++r) {
          double got = 0.0;
          for (int c = 0; c < cols; ++c) got += out.col[c] * at(r, c);
          feasible = got <= value + kFeasTol;
        }
        if (feasible) return out;
      } while (next_subset(cs, cols));
    } while (next_subset(rs, rows));
  }
  throw std::runtime_error("stage nash: support enumeration failed (bug)");
}

bool is_zero_sum_convention(const GameSpec& game, double tolerance) {
  if (game.num_players != 2) return false;
  const GameShape sh = game.shape();
  for (int h = 0; h < game.horizon; ++h) {
    for (int s = 0; s < game.num_states; ++s) {
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        const double r1 = game.mean_reward(h, 0, s, ja);
        const double r2 = game.mean_reward(h, 1, s, ja);
        if (std::abs(r1 + r2 - 1.0) > tolerance) return false;
      }
    }
  }
  return true;
}

ZeroSumView::ZeroSumView(const GameSpec& game) : game_(&game) {
  check(game.num_players == 2, "zero-sum view: game must have two players");
  check(is_zero_sum_convention(game),
        "zero-sum view: game does not satisfy the zero-sum reward convention");
}

std::pair<Strategy, ValueTable> backward_induction_nash(const ZeroSumView& view) {
  const GameSpec& game = view.game();
  const GameShape sh = game.shape();
  const int num_a = view.num_max_actions();
  const int num_b = view.num_min_actions();
  Strategy strategy(sh);
  ValueTable values(sh, /*with_q=*/false);
  for (int h = sh.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < sh.num_states; ++s) {
      std::vector<double> stage(num_a * num_b);
      for (int a = 0; a < num_a; ++a) {
        for (int b = 0; b < num_b; ++b) {
          const int ja = a * num_b + b;
          double q = view.reward(h, s, a, b);
          const auto row = game.transition_row(h, s, ja);
          for (int next = 0; next < sh.num_states; ++next) {
            q += row[next] * values.v(h + 1, 0, next);
          }
          stage[ja] = q;
        }
      }
      const MatrixNash nash = solve_stage_nash_zero_sum(stage, num_a, num_b);
      values.v(h, 0, s) = nash.value;
      std::copy(nash.row.begin(), nash.row.end(), strategy.dist(h, s, 0).begin());
      std::copy(nash.col.begin(), nash.col.end(), strategy.dist(h, s, 1).begin());
    }
  }
  return {std::move(strategy), std::move(values)};
}

namespace {

// Backward induction for one zero-sum player with the other fixed;
// `minimize` selects the min player's response (values are player-1 rewards).
ValueTable zero_sum_response(const ZeroSumView& view, const Strategy& strategy, bool minimize) {
  const GameSpec& game = view.game();
  const GameShape sh = game.shape();
  const int num_a = view.num_max_actions();
  const int num_b = view.num_min_actions();
  ValueTable values(sh, /*with_q=*/false);
  for (int h = sh.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < sh.num_states; ++s) {
      double best = minimize ? kInfinity : -kInfinity;
      const int own_count = minimize ? num_b : num_a;
      const int other_count = minimize ? num_a : num_b;
      const auto other = strategy.dist(h, s, minimize ? 0 : 1);
      for (int own = 0; own < own_count; ++own) {
        double q = 0.0;
        for (int oth = 0; oth < other_count; ++oth) {
          const int a = minimize ? oth : own;
          const int b = minimize ? own : oth;
          double cell = view.reward(h, s, a, b);
          const auto row = game.transition_row(h, s, a * num_b + b);
          for (int next = 0; next < sh.num_states; ++next) {
            cell += row[next] * values.v(h + 1, 0, next);
          }
          q += other[oth] * cell;
        }
        if (minimize ? (q < best) : (q > best)) best = q;
      }
      values.v(h, 0, s) = best;
    }
  }
  return values;
}

}  // namespace

ValueTable zero_sum_best_response_min(const ZeroSumView& view, const Strategy& strategy) {
  return zero_sum_response(view, strategy, /*minimize=*/true);
}

ValueTable zero_sum_best_response_max(const ZeroSumView& view, const Strategy& strategy) {
  return zero_sum_response(view, strategy, /*minimize=*/false);
}

}  // namespace marl

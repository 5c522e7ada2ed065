#include "marl/oracles.hpp"

#include <cmath>

namespace marl {
namespace oracles {

long long trajectory_count(const GameSpec& game) {
  const GameShape sh = game.shape();
  long long count = 1;
  for (int h = 0; h < sh.horizon; ++h) {
    count *= static_cast<long long>(sh.joint_count()) * sh.num_states;
    if (count < 0 || count > (1LL << 62)) return -1;
  }
  return count;
}

namespace {

// Walks every trajectory prefix, accumulating probability and partial
// return; leaves of the recursion contribute probability * return.
void walk(const GameSpec& game, const Strategy& strategy, int h, int s, double prob,
          const std::vector<double>& partial_return, std::vector<double>& totals) {
  const GameShape sh = game.shape();
  if (h == sh.horizon) {
    for (int j = 0; j < sh.num_players; ++j) totals[j] += prob * partial_return[j];
    return;
  }
  for (int ja = 0; ja < sh.joint_count(); ++ja) {
    const double p_act = strategy.joint_prob(h, s, ja);
    if (p_act == 0.0) continue;
    std::vector<double> ret = partial_return;
    for (int j = 0; j < sh.num_players; ++j) ret[j] += game.mean_reward(h, j, s, ja);
    const auto row = game.transition_row(h, s, ja);
    if (h + 1 == sh.horizon) {
      // Next state does not matter at the last step; fold the whole row.
      for (int j = 0; j < sh.num_players; ++j) totals[j] += prob * p_act * ret[j];
      continue;
    }
    for (int next = 0; next < sh.num_states; ++next) {
      if (row[next] == 0.0) continue;
      walk(game, strategy, h + 1, next, prob * p_act * row[next], ret, totals);
    }
  }
}

}  // namespace

std::vector<double> enumerate_values(const GameSpec& game, const Strategy& strategy,
                                     const OracleBudget& budget) {
  const long long count = trajectory_count(game);
  check(count >= 0 && count <= budget.max_trajectories, "oracle: trajectory budget exceeded");
  std::vector<double> totals(game.num_players, 0.0);
  std::vector<double> zero(game.num_players, 0.0);
  walk(game, strategy, 0, game.initial_state, 1.0, zero, totals);
  return totals;
}

long long deterministic_policy_count(const GameShape& shape, int player) {
  long long count = 1;
  const long long slots = static_cast<long long>(shape.horizon) * shape.num_states;
  for (long long i = 0; i < slots; ++i) {
    count *= shape.action_counts[player];
    if (count < 0 || count > (1LL << 62)) return -1;
  }
  return count;
}

void for_each_deterministic_policy(const GameShape& shape, int player,
                                   const OracleBudget& budget,
                                   const std::function<void(const DeterministicPolicy&)>& fn) {
  const long long count = deterministic_policy_count(shape, player);
  check(count >= 0 && count <= budget.max_policies, "oracle: policy budget exceeded");
  const int slots = shape.horizon * shape.num_states;
  DeterministicPolicy policy;
  policy.player = player;
  policy.actions.assign(slots, 0);
  while (true) {
    fn(policy);
    int i = slots - 1;
    while (i >= 0 && policy.actions[i] == shape.action_counts[player] - 1) {
      policy.actions[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++policy.actions[i];
  }
}

GridMaximinResult grid_maximin(const std::function<double(std::span<const double>)>& objective,
                               int dim, double grid_step) {
  check(dim >= 1 && dim <= 3, "grid_maximin: dimension too large");
  check(grid_step > 0.0 && grid_step <= 1.0, "grid_maximin: bad step");
  const int ticks = static_cast<int>(std::llround(1.0 / grid_step));
  GridMaximinResult best;
  std::vector<double> point(dim, 0.0);
  const auto consider = [&]() {
    const double value = objective(point);
    if (value > best.value) {
      best.value = value;
      best.point = point;
    }
  };
  if (dim == 1) {
    point[0] = 1.0;
    consider();
    return best;
  }
  if (dim == 2) {
    for (int i = 0; i <= ticks; ++i) {
      point[0] = static_cast<double>(i) / ticks;
      point[1] = 1.0 - point[0];
      consider();
    }
    return best;
  }
  for (int i = 0; i <= ticks; ++i) {
    for (int j = 0; j <= ticks - i; ++j) {
      point[0] = static_cast<double>(i) / ticks;
      point[1] = static_cast<double>(j) / ticks;
      point[2] = 1.0 - point[0] - point[1];
      if (point[2] < 0.0) point[2] = 0.0;
      consider();
    }
  }
  return best;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::span<const double> point,
    double step) {
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f(x);
    x[i] = saved - step;
    const double down = f(x);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

}  // namespace oracles
}  // namespace marl

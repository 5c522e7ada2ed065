#include "marl/bonus.hpp"

#include <cmath>

namespace marl {

double iota_zero_sum(int num_a, int num_b, int num_states, int horizon, int n, double delta) {
  check(delta > 0.0 && delta < 1.0, "iota: delta must be in (0, 1)");
  return 32.0 * std::log(2.0 * num_a * num_b * num_states * horizon * n / delta);
}

double iota_multi_player(const GameShape& shape, int n, double delta) {
  check(delta > 0.0 && delta < 1.0, "iota: delta must be in (0, 1)");
  double joint = 1.0;
  for (int a : shape.action_counts) joint *= a;
  return 32.0 *
         std::log(16.0 * joint * shape.num_players * shape.num_states * shape.horizon * n / delta);
}

BonusParams BonusParams::zero_sum(int num_a, int num_b, int num_states, int horizon, int n,
                                  double delta, double log_cov, BonusMode mode) {
  BonusParams params;
  params.mode = mode;
  params.iota = iota_zero_sum(num_a, num_b, num_states, horizon, n, delta);
  params.log_cov = log_cov;
  params.n = n;
  params.horizon = horizon;
  params.num_states = num_states;
  params.delta = delta;
  return params;
}

BonusParams BonusParams::multi_player(const GameShape& shape, int n, double delta, double log_cov,
                                      BonusMode mode) {
  BonusParams params;
  params.mode = mode;
  params.iota = iota_multi_player(shape, n, delta);
  params.log_cov = log_cov;
  params.n = n;
  params.horizon = shape.horizon;
  params.num_states = shape.num_states;
  params.delta = delta;
  return params;
}

double strategy_bonus_2p(const BonusParams& params, std::span<const int> counts, int num_a,
                         int num_b, std::span<const double> mu, std::span<const double> nu) {
  double weighted = 0.0;
  for (int a = 0; a < num_a; ++a) {
    if (mu[a] == 0.0) continue;
    for (int b = 0; b < num_b; ++b) {
      const int c = counts[a * num_b + b];
      if (c <= 0) continue;
      weighted += mu[a] * mu[a] * nu[b] * nu[b] / c;
    }
  }
  return params.horizon * std::sqrt(weighted * params.log_cov * params.iota) +
         std::sqrt(params.iota) / params.n;
}

double point_bonus_2p(const BonusParams& params, std::span<const int> counts, int num_a, int num_b,
                      std::span<const double> mu, std::span<const double> nu) {
  double total = 0.0;
  for (int a = 0; a < num_a; ++a) {
    if (mu[a] == 0.0) continue;
    for (int b = 0; b < num_b; ++b) {
      const int c = counts[a * num_b + b];
      if (c <= 0) continue;
      total += mu[a] * nu[b] * std::sqrt(params.iota / c);
    }
  }
  return params.horizon * total;
}

double stage_bonus_2p(const BonusParams& params, std::span<const int> counts, int num_a, int num_b,
                      std::span<const double> mu, std::span<const double> nu) {
  switch (params.mode) {
    case BonusMode::kStrategyWise:
      return strategy_bonus_2p(params, counts, num_a, num_b, mu, nu);
    case BonusMode::kPointWise:
      return point_bonus_2p(params, counts, num_a, num_b, mu, nu);
    case BonusMode::kDisabled:
      return 0.0;
  }
  return 0.0;
}

namespace {

double joint_sq_prob(const GameShape& shape, const std::vector<std::span<const double>>& dists,
                     int joint) {
  double p = 1.0;
  for (int j = 0; j < shape.num_players; ++j) {
    const double v = dists[j][shape.decode_action(joint, j)];
    p *= v * v;
    if (p == 0.0) return 0.0;
  }
  return p;
}

double joint_prob(const GameShape& shape, const std::vector<std::span<const double>>& dists,
                  int joint) {
  double p = 1.0;
  for (int j = 0; j < shape.num_players; ++j) {
    p *= dists[j][shape.decode_action(joint, j)];
    if (p == 0.0) return 0.0;
  }
  return p;
}

}  // namespace

double strategy_bonus_mp(const BonusParams& params, const GameShape& shape,
                         std::span<const int> counts,
                         const std::vector<std::span<const double>>& dists) {
  double weighted = 0.0;
  for (int ja = 0; ja < shape.joint_count(); ++ja) {
    const int c = counts[ja];
    if (c <= 0) continue;
    weighted += joint_sq_prob(shape, dists, ja) / c;
  }
  return params.horizon *
             std::sqrt(weighted * params.num_states * params.log_cov * params.iota) +
         std::sqrt(params.iota) / params.n;
}

double point_bonus_mp(const BonusParams& params, const GameShape& shape,
                      std::span<const int> counts,
                      const std::vector<std::span<const double>>& dists) {
  double total = 0.0;
  for (int ja = 0; ja < shape.joint_count(); ++ja) {
    const int c = counts[ja];
    if (c <= 0) continue;
    total += joint_prob(shape, dists, ja) * std::sqrt(params.iota / c);
  }
  return params.horizon * total;
}

double stage_bonus_mp(const BonusParams& params, const GameShape& shape,
                      std::span<const int> counts,
                      const std::vector<std::span<const double>>& dists) {
  switch (params.mode) {
    case BonusMode::kStrategyWise:
      return strategy_bonus_mp(params, shape, counts, dists);
    case BonusMode::kPointWise:
      return point_bonus_mp(params, shape, counts, dists);
    case BonusMode::kDisabled:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> bonus_gradient_2p(const BonusParams& params, std::span<const int> counts,
                                      int num_a, int num_b, std::span<const double> mu,
                                      std::span<const double> nu, int player) {
  check(player == 0 || player == 1, "bonus gradient: player must be 0 or 1");
  const int own = player == 0 ? num_a : num_b;
  std::vector<double> grad(own, 0.0);
  if (params.mode == BonusMode::kDisabled) return grad;
  if (params.mode == BonusMode::kPointWise) {
    // Linear in the chosen player's distribution.
    for (int a = 0; a < num_a; ++a) {
      for (int b = 0; b < num_b; ++b) {
        const int c = counts[a * num_b + b];
        if (c <= 0) continue;
        const double w = std::sqrt(params.iota / c);
        if (player == 0) {
          grad[a] += params.horizon * nu[b] * w;
        } else {
          grad[b] += params.horizon * mu[a] * w;
        }
      }
    }
    return grad;
  }
  double root = 0.0;
  for (int a = 0; a < num_a; ++a) {
    for (int b = 0; b < num_b; ++b) {
      const int c = counts[a * num_b + b];
      if (c <= 0) continue;
      root += mu[a] * mu[a] * nu[b] * nu[b] / c;
    }
  }
  root = std::sqrt(root);
  if (root == 0.0) return grad;  // 0/0 convention
  const double prefactor = params.horizon * std::sqrt(params.log_cov * params.iota);
  for (int a = 0; a < num_a; ++a) {
    for (int b = 0; b < num_b; ++b) {
      const int c = counts[a * num_b + b];
      if (c <= 0) continue;
      if (player == 0) {
        grad[a] += nu[b] * nu[b] / c * mu[a];
      } else {
        grad[b] += mu[a] * mu[a] / c * nu[b];
      }
    }
  }
  for (double& g : grad) g *= prefactor / root;
  return grad;
}

std::vector<double> bonus_gradient_mp(const BonusParams& params, const GameShape& shape,
                                      std::span<const int> counts,
                                      const std::vector<std::span<const double>>& dists,
                                      int player) {
  const int own = shape.action_counts[player];
  std::vector<double> grad(own, 0.0);
  if (params.mode == BonusMode::kDisabled) return grad;
  if (params.mode == BonusMode::kPointWise) {
    for (int ja = 0; ja < shape.joint_count(); ++ja) {
      const int c = counts[ja];
      if (c <= 0) continue;
      double others = 1.0;
      for (int k = 0; k < shape.num_players; ++k) {
        if (k == player) continue;
        others *= dists[k][shape.decode_action(ja, k)];
      }
      grad[shape.decode_action(ja, player)] +=
          params.horizon * others * std::sqrt(params.iota / c);
    }
    return grad;
  }
  double root = 0.0;
  for (int ja = 0; ja < shape.joint_count(); ++ja) {
    const int c = counts[ja];
    if (c <= 0) continue;
    root += joint_sq_prob(shape, dists, ja) / c;
  }
  root = std::sqrt(root);
  if (root == 0.0) return grad;
  const double prefactor =
      params.horizon * std::sqrt(params.num_states * params.log_cov * params.iota);
  for (int ja = 0; ja < shape.joint_count(); ++ja) {
    const int c = counts[ja];
    if (c <= 0) continue;
    double others_sq = 1.0;
    for (int k = 0; k < shape.num_players; ++k) {
      if (k == player) continue;
      const double v = dists[k][shape.decode_action(ja, k)];
      others_sq *= v * v;
    }
    const int a = shape.decode_action(ja, player);
    grad[a] += others_sq / c * dists[player][a];
  }
  for (double& g : grad) g *= prefactor / root;
  return grad;
}

double lipschitz_constant(const BonusParams& params) {
  return params.horizon + params.horizon * std::sqrt(params.log_cov * params.iota);
}

double uncertainty_2p(const BonusParams& params, std::span<const int> counts, int num_a, int num_b,
                      std::span<const double> mu, std::span<const double> nu) {
  double missing = 0.0;
  for (int a = 0; a < num_a; ++a) {
    for (int b = 0; b < num_b; ++b) {
      if (counts[a * num_b + b] <= 0) missing += mu[a] * nu[b];
    }
  }
  return 2.0 * stage_bonus_2p(params, counts, num_a, num_b, mu, nu) + params.horizon * missing;
}

double uncertainty_mp(const BonusParams& params, const GameShape& shape,
                      std::span<const int> counts,
                      const std::vector<std::span<const double>>& dists) {
  double missing = 0.0;
  for (int ja = 0; ja < shape.joint_count(); ++ja) {
    if (counts[ja] <= 0) missing += joint_prob(shape, dists, ja);
  }
  return 2.0 * stage_bonus_mp(params, shape, counts, dists) + params.horizon * missing;
}

}  // namespace marl

#ifndef MARL_BONUS_HPP
#define MARL_BONUS_HPP

#include <span>
#include <vector>

#include "marl/game.hpp"

namespace marl {

enum class BonusMode { kStrategyWise, kPointWise, kDisabled };

/// Constants entering the concentration bonuses. `iota` and `log_cov` are
/// normally derived from the shapes via the factory functions but stay
/// overridable so oracle configurations can switch the bonus off.
struct BonusParams {
  BonusMode mode = BonusMode::kStrategyWise;
  double iota = 0.0;
  double log_cov = 0.0;
  int n = 1;
  int horizon = 1;
  int num_states = 1;  // enters the multi-player prefactor only
  double delta = 0.1;

  static BonusParams zero_sum(int num_a, int num_b, int num_states, int horizon, int n,
                              double delta, double log_cov, BonusMode mode);
  static BonusParams multi_player(const GameShape& shape, int n, double delta, double log_cov,
                                  BonusMode mode);
};

/// iota = 32 log(2 A B S H n / delta).
double iota_zero_sum(int num_a, int num_b, int num_states, int horizon, int n, double delta);
/// iota = 32 log(16 prod_j A_j m S H n / delta).
double iota_multi_player(const GameShape& shape, int n, double delta);

/// Two-player stage bonus for the distributions (mu, nu) given the count
/// block n_h(s, a, b) (zero counts mark cells outside K_h(s)).
/// Strategy-wise: H sqrt(sum_K mu(a)^2 nu(b)^2 / n_h * logN * iota) + sqrt(iota)/n.
double strategy_bonus_2p(const BonusParams& params, std::span<const int> counts, int num_a,
                         int num_b, std::span<const double> mu, std::span<const double> nu);

/// Point-wise baseline: H sum_K mu(a) nu(b) sqrt(iota / n_h).
double point_bonus_2p(const BonusParams& params, std::span<const int> counts, int num_a, int num_b,
                      std::span<const double> mu, std::span<const double> nu);

/// Mode-dispatching stage bonus (disabled -> 0).
double stage_bonus_2p(const BonusParams& params, std::span<const int> counts, int num_a, int num_b,
                      std::span<const double> mu, std::span<const double> nu);

/// Multi-player strategy-wise bonus with the extra S factor:
/// H sqrt(sum_K prod_j pi_j(a_j)^2 / n_h * S * logN * iota) + sqrt(iota)/n.
/// Not a generalization of the two-player formula; the two are kept apart.
double strategy_bonus_mp(const BonusParams& params, const GameShape& shape,
                         std::span<const int> counts,
                         const std::vector<std::span<const double>>& dists);

double point_bonus_mp(const BonusParams& params, const GameShape& shape,
                      std::span<const int> counts,
                      const std::vector<std::span<const double>>& dists);

double stage_bonus_mp(const BonusParams& params, const GameShape& shape,
                      std::span<const int> counts,
                      const std::vector<std::span<const double>>& dists);

/// Exact (sub)gradient of the two-player stage bonus with respect to one
/// player's distribution, with the 0/0 -> 0 convention at boundary points.
std::vector<double> bonus_gradient_2p(const BonusParams& params, std::span<const int> counts,
                                      int num_a, int num_b, std::span<const double> mu,
                                      std::span<const double> nu, int player);

std::vector<double> bonus_gradient_mp(const BonusParams& params, const GameShape& shape,
                                      std::span<const int> counts,
                                      const std::vector<std::span<const double>>& dists,
                                      int player);

/// L = H + H sqrt(logN * iota); sizes the projected-gradient steps.
double lipschitz_constant(const BonusParams& params);

/// Uncertainty functional b_hat = 2 b + H * (strategy mass outside K).
double uncertainty_2p(const BonusParams& params, std::span<const int> counts, int num_a, int num_b,
                      std::span<const double> mu, std::span<const double> nu);

double uncertainty_mp(const BonusParams& params, const GameShape& shape,
                      std::span<const int> counts,
                      const std::vector<std::span<const double>>& dists);

}  // namespace marl

#endif  // MARL_BONUS_HPP

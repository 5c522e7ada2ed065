#ifndef MARL_OFFLINE_DATA_HPP
#define MARL_OFFLINE_DATA_HPP

#include <cstdint>
#include <vector>

#include "marl/game.hpp"

namespace marl {

/// Per-timestep sampling distribution d_h over (state, joint action).
struct DataDistribution {
  GameShape shape;
  std::vector<double> probs;  // [h][s][joint]

  static DataDistribution uniform(const GameShape& shape);

  double at(int h, int s, int joint) const {
    return probs[(static_cast<std::size_t>(h) * shape.num_states + s) * shape.joint_count() +
                 joint];
  }
  double& at(int h, int s, int joint) {
    return probs[(static_cast<std::size_t>(h) * shape.num_states + s) * shape.joint_count() +
                 joint];
  }

  /// Smallest positive entry over all timesteps.
  double p_min() const;
  void validate() const;
};

/// One logged interaction: (h, s, joint action, per-player rewards, s').
struct DataTuple {
  int h = 0;
  int state = 0;
  std::vector<int> actions;
  std::vector<double> rewards;
  int next_state = 0;
};

struct OfflineDataset {
  GameShape shape;
  int samples_per_step = 0;  // n
  std::uint64_t seed = 0;
  std::vector<DataTuple> tuples;  // grouped by h, n per timestep

  void validate() const;
};

/// Counts, empirical rewards/transitions and the known-action sets derived
/// from a dataset. Cells outside K_h(s) keep the zero convention
/// (r_hat = 0, P_hat identically 0).
struct EmpiricalModel {
  GameShape shape;
  int samples_per_step = 0;
  std::vector<int> counts;            // [h][s][joint]
  std::vector<double> mean_rewards;   // [h][j][s][joint]
  std::vector<double> transitions;    // [h][s][joint][s']

  int count(int h, int s, int joint) const {
    return counts[(static_cast<std::size_t>(h) * shape.num_states + s) * shape.joint_count() +
                  joint];
  }
  bool known(int h, int s, int joint) const { return count(h, s, joint) > 0; }
  double reward(int h, int player, int s, int joint) const {
    return mean_rewards[((static_cast<std::size_t>(h) * shape.num_players + player) *
                             shape.num_states +
                         s) *
                            shape.joint_count() +
                        joint];
  }
  std::span<const double> transition_row(int h, int s, int joint) const {
    return std::span<const double>(
        transitions.data() +
            ((static_cast<std::size_t>(h) * shape.num_states + s) * shape.joint_count() + joint) *
                shape.num_states,
        static_cast<std::size_t>(shape.num_states));
  }
  /// Empirical dataset distribution n_h(s, a) / n.
  double empirical_prob(int h, int s, int joint) const {
    return static_cast<double>(count(h, s, joint)) / samples_per_step;
  }
  std::span<const int> count_block(int h, int s) const {
    return std::span<const int>(
        counts.data() + (static_cast<std::size_t>(h) * shape.num_states + s) * shape.joint_count(),
        static_cast<std::size_t>(shape.joint_count()));
  }
};

/// Draws n i.i.d. (s, a) ~ d_h per timestep, then rewards and next states
/// from the game. Fully deterministic given the seed.
OfflineDataset sample_dataset(const GameSpec& game, const DataDistribution& dist, int n,
                              std::uint64_t seed);

EmpiricalModel build_empirical(const OfflineDataset& dataset);

/// Empirical unilateral coefficient: the worst occupancy ratio of any
/// single-player deviation against the empirical dataset distribution, the
/// inner max over the deviating policy computed exactly by a max-reach DP.
/// Returns +inf when a deviation reaches mass outside the support.
double empirical_coefficient(const EmpiricalModel& model, const GameSpec& game,
                             const Strategy& strategy);

/// Same with the population data distribution in the denominator.
double population_coefficient(const DataDistribution& dist, const GameSpec& game,
                              const Strategy& strategy);

/// Max over deviating policies of P(s_h = s) for the deviating player, with
/// all other players following `strategy`. Exposed for the enumeration
/// cross-checks.
double max_reach(const GameSpec& game, const Strategy& strategy, int player, int h, int s);

struct CoverageReport {
  double empirical = kInfinity;   // C_hat(pi)
  double population = kInfinity;  // C(pi)
  double p_min = 0.0;
  double warmup_n = 0.0;  // 8 log(S prod_j A_j H / delta) / p_min
};

CoverageReport coverage_report(const EmpiricalModel& model, const DataDistribution& dist,
                               const GameSpec& game, const Strategy& strategy, double delta);

/// The warm-up sample threshold from the 2C >= C_hat proposition.
double warmup_threshold(const GameShape& shape, double p_min, double delta);

}  // namespace marl

#endif  // MARL_OFFLINE_DATA_HPP

#include "marl/offline_data.hpp"

#include <algorithm>
#include <cmath>

namespace marl {

DataDistribution DataDistribution::uniform(const GameShape& shape) {
  DataDistribution dist{shape, {}};
  const std::size_t cells = static_cast<std::size_t>(shape.num_states) * shape.joint_count();
  dist.probs.assign(static_cast<std::size_t>(shape.horizon) * cells, 1.0 / cells);
  return dist;
}

double DataDistribution::p_min() const {
  double out = kInfinity;
  for (double p : probs) {
    if (p > 0.0) out = std::min(out, p);
  }
  return out;
}

void DataDistribution::validate() const {
  const std::size_t cells = static_cast<std::size_t>(shape.num_states) * shape.joint_count();
  check(probs.size() == static_cast<std::size_t>(shape.horizon) * cells,
        "data distribution: wrong tensor size");
  for (int h = 0; h < shape.horizon; ++h) {
    double total = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double p = probs[h * cells + i];
      check(p >= 0.0, "data distribution: negative probability");
      total += p;
    }
    check(std::abs(total - 1.0) <= kProbTolerance, "data distribution: timestep does not sum to 1");
  }
}

void OfflineDataset::validate() const {
  check(samples_per_step >= 1, "dataset: n must be positive");
  check(tuples.size() ==
            static_cast<std::size_t>(samples_per_step) * static_cast<std::size_t>(shape.horizon),
        "dataset: expected exactly n tuples per timestep");
  for (const DataTuple& t : tuples) {
    check(t.h >= 0 && t.h < shape.horizon, "dataset: timestep out of range");
    check(t.state >= 0 && t.state < shape.num_states, "dataset: state out of range");
    check(t.next_state >= 0 && t.next_state < shape.num_states, "dataset: next state out of range");
    check(static_cast<int>(t.actions.size()) == shape.num_players, "dataset: wrong action arity");
    for (int j = 0; j < shape.num_players; ++j) {
      check(t.actions[j] >= 0 && t.actions[j] < shape.action_counts[j],
            "dataset: action out of range");
    }
    check(static_cast<int>(t.rewards.size()) == shape.num_players, "dataset: wrong reward arity");
    for (double r : t.rewards) check(r >= 0.0 && r <= 1.0, "dataset: reward outside [0, 1]");
  }
}

OfflineDataset sample_dataset(const GameSpec& game, const DataDistribution& dist, int n,
                              std::uint64_t seed) {
  const GameShape sh = game.shape();
  check(dist.shape == sh, "sample_dataset: distribution shape mismatch");
  dist.validate();
  check(n >= 1, "sample_dataset: n must be positive");
  OfflineDataset data{sh, n, seed, {}};
  data.tuples.reserve(static_cast<std::size_t>(n) * sh.horizon);
  Rng rng(seed);
  const std::size_t cells = static_cast<std::size_t>(sh.num_states) * sh.joint_count();
  for (int h = 0; h < sh.horizon; ++h) {
    const std::span<const double> d_h(dist.probs.data() + h * cells, cells);
    for (int k = 0; k < n; ++k) {
      const int cell = rng.categorical(d_h);
      DataTuple t;
      t.h = h;
      t.state = cell / sh.joint_count();
      const int joint = cell % sh.joint_count();
      t.actions.resize(sh.num_players);
      for (int j = 0; j < sh.num_players; ++j) t.actions[j] = sh.decode_action(joint, j);
      t.rewards.resize(sh.num_players);
      for (int j = 0; j < sh.num_players; ++j) {
        const double mean = game.mean_reward(h, j, t.state, joint);
        t.rewards[j] =
            game.reward_kind == RewardKind::kBernoulli ? (rng.bernoulli(mean) ? 1.0 : 0.0) : mean;
      }
      t.next_state = rng.categorical(game.transition_row(h, t.state, joint));
      data.tuples.push_back(std::move(t));
    }
  }
  return data;
}

EmpiricalModel build_empirical(const OfflineDataset& dataset) {
  dataset.validate();
  const GameShape& sh = dataset.shape;
  EmpiricalModel model;
  model.shape = sh;
  model.samples_per_step = dataset.samples_per_step;
  const std::size_t cells = static_cast<std::size_t>(sh.num_states) * sh.joint_count();
  model.counts.assign(static_cast<std::size_t>(sh.horizon) * cells, 0);
  model.mean_rewards.assign(static_cast<std::size_t>(sh.horizon) * sh.num_players * cells, 0.0);
  model.transitions.assign(static_cast<std::size_t>(sh.horizon) * cells * sh.num_states, 0.0);
  for (const DataTuple& t : dataset.tuples) {
    const int joint = sh.encode_joint(t.actions);
    const std::size_t cell = (static_cast<std::size_t>(t.h) * sh.num_states + t.state) *
                                 sh.joint_count() +
                             joint;
    ++model.counts[cell];
    for (int j = 0; j < sh.num_players; ++j) {
      model.mean_rewards[((static_cast<std::size_t>(t.h) * sh.num_players + j) * sh.num_states +
                          t.state) *
                             sh.joint_count() +
                         joint] += t.rewards[j];
    }
    model.transitions[cell * sh.num_states + t.next_state] += 1.0;
  }
  for (int h = 0; h < sh.horizon; ++h) {
    for (int s = 0; s < sh.num_states; ++s) {
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        const std::size_t cell =
            (static_cast<std::size_t>(h) * sh.num_states + s) * sh.joint_count() + ja;
        const int c = model.counts[cell];
        if (c == 0) continue;
        for (int j = 0; j < sh.num_players; ++j) {
          model.mean_rewards[((static_cast<std::size_t>(h) * sh.num_players + j) * sh.num_states +
                              s) *
                                 sh.joint_count() +
                             ja] /= c;
        }
        for (int next = 0; next < sh.num_states; ++next) {
          model.transitions[cell * sh.num_states + next] /= c;
        }
      }
    }
  }
  return model;
}

double max_reach(const GameSpec& game, const Strategy& strategy, int player, int h, int s) {
  const GameShape sh = game.shape();
  // g_t(x): best probability of standing at the target (h, s) at timestep h
  // when the deviating player controls its own actions from timestep t on.
  std::vector<double> g(sh.num_states, 0.0);
  g[s] = 1.0;
  for (int t = h - 1; t >= 0; --t) {
    std::vector<double> prev(sh.num_states, 0.0);
    for (int x = 0; x < sh.num_states; ++x) {
      double best = 0.0;
      for (int a = 0; a < sh.action_counts[player]; ++a) {
        double reach = 0.0;
        for (int ja = 0; ja < sh.joint_count(); ++ja) {
          if (sh.decode_action(ja, player) != a) continue;
          double opp = 1.0;
          for (int k = 0; k < sh.num_players; ++k) {
            if (k == player) continue;
            opp *= strategy.dist(t, x, k)[sh.decode_action(ja, k)];
          }
          if (opp == 0.0) continue;
          const auto row = game.transition_row(t, x, ja);
          double step = 0.0;
          for (int next = 0; next < sh.num_states; ++next) step += row[next] * g[next];
          reach += opp * step;
        }
        best = std::max(best, reach);
      }
      prev[x] = best;
    }
    g = std::move(prev);
  }
  return g[game.initial_state];
}

namespace {

// Shared implementation: denominator(h, s, joint) supplies either the
// empirical or the population distribution.
template <typename Denominator>
double unilateral_coefficient(const GameSpec& game, const Strategy& strategy,
                              const Denominator& denominator) {
  const GameShape sh = game.shape();
  double worst = 0.0;
  for (int j = 0; j < sh.num_players; ++j) {
    for (int h = 0; h < sh.horizon; ++h) {
      for (int s = 0; s < sh.num_states; ++s) {
        const double reach = max_reach(game, strategy, j, h, s);
        if (reach == 0.0) continue;
        for (int ja = 0; ja < sh.joint_count(); ++ja) {
          double opp = 1.0;
          for (int k = 0; k < sh.num_players; ++k) {
            if (k == j) continue;
            opp *= strategy.dist(h, s, k)[sh.decode_action(ja, k)];
          }
          const double numerator = reach * opp;
          if (numerator <= 0.0) continue;
          const double denom = denominator(h, s, ja);
          if (denom <= 0.0) return kInfinity;
          worst = std::max(worst, numerator / denom);
        }
      }
    }
  }
  return worst;
}

}  // namespace

double empirical_coefficient(const EmpiricalModel& model, const GameSpec& game,
                             const Strategy& strategy) {
  check(model.shape == game.shape(), "empirical_coefficient: shape mismatch");
  return unilateral_coefficient(game, strategy, [&](int h, int s, int ja) {
    return model.empirical_prob(h, s, ja);
  });
}

double population_coefficient(const DataDistribution& dist, const GameSpec& game,
                              const Strategy& strategy) {
  check(dist.shape == game.shape(), "population_coefficient: shape mismatch");
  return unilateral_coefficient(game, strategy,
                                [&](int h, int s, int ja) { return dist.at(h, s, ja); });
}

double warmup_threshold(const GameShape& shape, double p_min, double delta) {
  check(p_min > 0.0 && delta > 0.0, "warmup_threshold: need positive p_min and delta");
  double joint = 1.0;
  for (int a : shape.action_counts) joint *= a;
  return 8.0 * std::log(shape.num_states * joint * shape.horizon / delta) / p_min;
}

CoverageReport coverage_report(const EmpiricalModel& model, const DataDistribution& dist,
                               const GameSpec& game, const Strategy& strategy, double delta) {
  CoverageReport report;
  report.empirical = empirical_coefficient(model, game, strategy);
  report.population = population_coefficient(dist, game, strategy);
  report.p_min = dist.p_min();
  report.warmup_n = warmup_threshold(game.shape(), report.p_min, delta);
  return report;
}

}  // namespace marl

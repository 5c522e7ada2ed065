#include "marl/sbsm.hpp"

#include <algorithm>
#include <cmath>

namespace marl {

namespace {

std::vector<std::span<const double>> stage_dists(const Strategy& strategy, int h, int s) {
  const GameShape& sh = strategy.shape();
  std::vector<std::span<const double>> dists(sh.num_players);
  for (int j = 0; j < sh.num_players; ++j) dists[j] = strategy.dist(h, s, j);
  return dists;
}

// One backward policy-evaluation pass; `optimistic` flips the bonus sign
// and adds the out-of-support compensation.
EvalTables policy_evaluation(const EmpiricalModel& model, int player, const Strategy& strategy,
                             const BonusParams& params, bool optimistic) {
  const GameShape& sh = model.shape;
  check(strategy.shape() == sh, "policy evaluation: strategy shape mismatch");
  check(player >= 0 && player < sh.num_players, "policy evaluation: bad player index");
  EvalTables tables;
  tables.num_states = sh.num_states;
  tables.values.assign(static_cast<std::size_t>(sh.horizon + 1) * sh.num_states, 0.0);
  for (int h = sh.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < sh.num_states; ++s) {
      const auto counts = model.count_block(h, s);
      double expected = 0.0;
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        const double pi = strategy.joint_prob(h, s, ja);
        if (pi == 0.0) continue;
        double q = 0.0;
        if (counts[ja] > 0) {
          q = model.reward(h, player, s, ja);
          const auto row = model.transition_row(h, s, ja);
          for (int next = 0; next < sh.num_states; ++next) {
            q += row[next] * tables.values[static_cast<std::size_t>(h + 1) * sh.num_states + next];
          }
        } else if (optimistic) {
          q = params.horizon;  // compensation for the zeroed estimates
        }
        expected += pi * q;
      }
      const double bonus = stage_bonus_mp(params, sh, counts, stage_dists(strategy, h, s));
      const double raw = optimistic ? expected + bonus : expected - bonus;
      tables.values[static_cast<std::size_t>(h) * sh.num_states + s] =
          clamp_to(raw, 0.0, static_cast<double>(sh.horizon - h));
    }
  }
  return tables;
}

}  // namespace

EvalTables evaluate_pessimistic(const EmpiricalModel& model, int player, const Strategy& strategy,
                                const BonusParams& params) {
  return policy_evaluation(model, player, strategy, params, /*optimistic=*/false);
}

EvalTables evaluate_optimistic(const EmpiricalModel& model, int player, const Strategy& strategy,
                               const BonusParams& params) {
  return policy_evaluation(model, player, strategy, params, /*optimistic=*/true);
}

EvalTables optimistic_best_response(const EmpiricalModel& model, int player,
                                    const Strategy& strategy, const BonusParams& params) {
  const GameShape& sh = model.shape;
  check(strategy.shape() == sh, "best response estimation: strategy shape mismatch");
  check(player >= 0 && player < sh.num_players, "best response estimation: bad player index");
  EvalTables tables;
  tables.num_states = sh.num_states;
  tables.values.assign(static_cast<std::size_t>(sh.horizon + 1) * sh.num_states, 0.0);
  for (int h = sh.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < sh.num_states; ++s) {
      const auto counts = model.count_block(h, s);
      auto dists = stage_dists(strategy, h, s);
      std::vector<double> point(sh.action_counts[player], 0.0);
      double best = -kInfinity;
      for (int action = 0; action < sh.action_counts[player]; ++action) {
        double expected = 0.0;
        for (int ja = 0; ja < sh.joint_count(); ++ja) {
          if (sh.decode_action(ja, player) != action) continue;
          double others = 1.0;
          for (int k = 0; k < sh.num_players; ++k) {
            if (k == player) continue;
            others *= strategy.dist(h, s, k)[sh.decode_action(ja, k)];
          }
          if (others == 0.0) continue;
          double q = 0.0;
          if (counts[ja] > 0) {
            q = model.reward(h, player, s, ja);
            const auto row = model.transition_row(h, s, ja);
            for (int next = 0; next < sh.num_states; ++next) {
              q += row[next] *
                   tables.values[static_cast<std::size_t>(h + 1) * sh.num_states + next];
            }
          } else {
            q = params.horizon;
          }
          expected += others * q;
        }
        point.assign(sh.action_counts[player], 0.0);
        point[action] = 1.0;
        dists[player] = point;
        expected += stage_bonus_mp(params, sh, counts, dists);
        if (expected > best) best = expected;
      }
      tables.values[static_cast<std::size_t>(h) * sh.num_states + s] =
          clamp_to(best, 0.0, static_cast<double>(sh.horizon - h));
    }
  }
  return tables;
}

double surrogate(const EmpiricalModel& model, const Strategy& strategy, const BonusParams& params,
                 int initial_state) {
  const GameShape& sh = model.shape;
  double total = 0.0;
  for (int j = 0; j < sh.num_players; ++j) {
    const EvalTables upper = optimistic_best_response(model, j, strategy, params);
    const EvalTables lower = evaluate_pessimistic(model, j, strategy, params);
    total += upper.at(0, initial_state) - lower.at(0, initial_state);
  }
  return total;
}

SbsmReport solve_sbsm(const EmpiricalModel& model, const StrategyClass& strategy_class,
                      const BonusParams& params, int initial_state, long long cap) {
  const GameShape& sh = model.shape;
  check(initial_state >= 0 && initial_state < sh.num_states, "sbsm: bad initial state");
  check(strategy_class.enumerable(), "sbsm: class not enumerable");
  SbsmReport report;
  report.params = params;
  long long index = 0;
  strategy_class.enumerate_members(sh, cap, [&](const Strategy& member) {
    const double value = surrogate(model, member, params, initial_state);
    report.surrogates.push_back(value);
    if (value < report.best_surrogate) {
      report.best_surrogate = value;
      report.output = member;
      report.output_index = index;
    }
    ++index;
  });
  check(report.output_index >= 0, "sbsm: empty enumeration");
  report.lower_values_at_output.resize(sh.num_players);
  report.upper_br_values_at_output.resize(sh.num_players);
  for (int j = 0; j < sh.num_players; ++j) {
    report.lower_values_at_output[j] =
        evaluate_pessimistic(model, j, report.output, params).at(0, initial_state);
    report.upper_br_values_at_output[j] =
        optimistic_best_response(model, j, report.output, params).at(0, initial_state);
  }
  return report;
}

}  // namespace marl

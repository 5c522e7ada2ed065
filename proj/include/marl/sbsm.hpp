#ifndef MARL_SBSM_HPP
#define MARL_SBSM_HPP

#include <vector>

#include "marl/bonus.hpp"
#include "marl/offline_data.hpp"
#include "marl/strategy_class.hpp"

namespace marl {

/// State-value estimates for one player from a policy-evaluation pass;
/// rows h = 0..H with the terminal row zero, all values clipped to
/// [0, H - h].
struct EvalTables {
  int num_states = 0;
  std::vector<double> values;  // [h][s]
  double at(int h, int s) const {
    return values[static_cast<std::size_t>(h) * num_states + s];
  }
};

/// Pessimistic policy evaluation: Q_lower = r_hat + <P_hat, V_lower>,
/// V_lower = clip(E_pi Q_lower - b_h(s, pi_h^s)).
EvalTables evaluate_pessimistic(const EmpiricalModel& model, int player, const Strategy& strategy,
                                const BonusParams& params);

/// Optimistic mirror with +b and the H * 1{a not in K} compensation.
EvalTables evaluate_optimistic(const EmpiricalModel& model, int player, const Strategy& strategy,
                               const BonusParams& params);

/// Optimistic best-response DP over the player's deterministic point
/// masses (the optimistic objective is convex in the player's own
/// distribution, so vertices suffice). Only the opponents' rows of
/// `strategy` are read. Argmax ties break toward the lowest action.
EvalTables optimistic_best_response(const EmpiricalModel& model, int player,
                                    const Strategy& strategy, const BonusParams& params);

/// sum_j [ optimistic best-response value - pessimistic value ] at the
/// initial state: the upper bound on Gap minimized by the solver.
double surrogate(const EmpiricalModel& model, const Strategy& strategy, const BonusParams& params,
                 int initial_state);

struct SbsmReport {
  Strategy output;
  long long output_index = -1;
  double best_surrogate = kInfinity;
  std::vector<double> surrogates;              // in enumeration order
  std::vector<double> lower_values_at_output;  // V_lower_{1,j}(s_1) per player
  std::vector<double> upper_br_values_at_output;
  BonusParams params;
};

inline constexpr long long kDefaultEnumerationCap = 1'000'000;

/// Enumerates the class and returns the member with the smallest surrogate;
/// ties go to the first enumerated minimizer.
SbsmReport solve_sbsm(const EmpiricalModel& model, const StrategyClass& strategy_class,
                      const BonusParams& params, int initial_state,
                      long long cap = kDefaultEnumerationCap);

}  // namespace marl

#endif  // MARL_SBSM_HPP

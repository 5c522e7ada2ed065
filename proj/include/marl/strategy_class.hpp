#ifndef MARL_STRATEGY_CLASS_HPP
#define MARL_STRATEGY_CLASS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "marl/game.hpp"

namespace marl {

enum class ClassKind { kFull, kDeterministic, kFinite, kPerSlot };

/// Distributions available in one (h, s, player) slot.
using SlotChoices = std::vector<std::vector<double>>;
/// Explicit slot table indexed [h][s][player].
using SlotTable = std::vector<std::vector<std::vector<SlotChoices>>>;

/// Pre-specified strategy class. Slots are the per-(h, s, player) simplex
/// subsets; the covering number follows the slot-product definition.
class StrategyClass {
 public:
  static StrategyClass full(double epsilon_cover);
  static StrategyClass deterministic(double epsilon_cover);
  static StrategyClass finite(std::vector<Strategy> members, double epsilon_cover);
  /// slots[h][s][j] is the explicit list of distributions for that slot.
  static StrategyClass per_slot(GameShape shape, SlotTable slots, double epsilon_cover);

  ClassKind kind() const { return kind_; }
  double epsilon_cover() const { return epsilon_cover_; }
  const std::vector<Strategy>& members() const { return members_; }

  /// Distributions available in one slot. Full classes have no finite slot
  /// list and throw.
  SlotChoices slot(const GameShape& shape, int h, int s, int player) const;

  /// Greedy L1 cover of one slot, in list order. An upper bound on the
  /// minimal cover; full classes use the constructive grid bound instead
  /// and throw here.
  SlotChoices slot_cover(const GameShape& shape, int h, int s, int player) const;

  /// log N(Pi, epsilon_cover) with N summed over (s, h) and multiplied over
  /// players, in log space.
  double log_covering_number(const GameShape& shape) const;

  /// Nearest member of the class per slot in L1; identity for full classes.
  Strategy project(const GameShape& shape, const Strategy& strategy) const;
  std::vector<double> project_slot(const GameShape& shape, int h, int s, int player,
                                   std::span<const double> dist) const;

  bool enumerable() const { return kind_ != ClassKind::kFull; }

  /// Number of joint strategies enumerate_members would yield, or -1 when
  /// it overflows the cap scale.
  long long member_count(const GameShape& shape) const;

  /// Deterministic enumeration in lexicographic slot order (h, s, player),
  /// the last slot varying fastest. Throws for full classes or when the
  /// count exceeds `cap`.
  void enumerate_members(const GameShape& shape, long long cap,
                         const std::function<void(const Strategy&)>& fn) const;

 private:
  StrategyClass() = default;
  ClassKind kind_ = ClassKind::kFull;
  double epsilon_cover_ = 0.0;
  std::vector<Strategy> members_;
  GameShape slot_shape_;
  SlotTable slots_;
};

/// The default covering resolution 1 / (sum_j A_j * m * H^2 * n^2).
double default_epsilon_cover(const GameShape& shape, int n);

/// Nearest point of the constructive simplex grid used by the full-class
/// covering bound; the result is within epsilon of `dist` in L1.
std::vector<double> round_to_simplex_grid(std::span<const double> dist, double epsilon);

}  // namespace marl

#endif  // MARL_STRATEGY_CLASS_HPP

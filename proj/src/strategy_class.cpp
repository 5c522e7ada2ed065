#include "marl/strategy_class.hpp"

#include <algorithm>
#include <cmath>

namespace marl {

namespace {

double log_sum_exp(const std::vector<double>& xs) {
  double m = -kInfinity;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInfinity) return m;
  double total = 0.0;
  for (double x : xs) total += std::exp(x - m);
  return m + std::log(total);
}

SlotChoices greedy_cover(const SlotChoices& dists, double epsilon) {
  SlotChoices cover;
  for (const auto& d : dists) {
    bool covered = false;
    for (const auto& c : cover) {
      if (l1_distance(d, c) <= epsilon) {
        covered = true;
        break;
      }
    }
    if (!covered) cover.push_back(d);
  }
  return cover;
}

}  // namespace

StrategyClass StrategyClass::full(double epsilon_cover) {
  StrategyClass out;
  out.kind_ = ClassKind::kFull;
  out.epsilon_cover_ = epsilon_cover;
  check(epsilon_cover > 0.0, "strategy class: epsilon_cover must be positive");
  return out;
}

StrategyClass StrategyClass::deterministic(double epsilon_cover) {
  StrategyClass out;
  out.kind_ = ClassKind::kDeterministic;
  out.epsilon_cover_ = epsilon_cover;
  check(epsilon_cover > 0.0, "strategy class: epsilon_cover must be positive");
  return out;
}

StrategyClass StrategyClass::finite(std::vector<Strategy> members, double epsilon_cover) {
  StrategyClass out;
  out.kind_ = ClassKind::kFinite;
  out.epsilon_cover_ = epsilon_cover;
  check(epsilon_cover > 0.0, "strategy class: epsilon_cover must be positive");
  check(!members.empty(), "strategy class: finite class must be nonempty");
  for (const Strategy& m : members) {
    check(m.shape() == members.front().shape(), "strategy class: member shapes differ");
    m.validate();
  }
  out.members_ = std::move(members);
  return out;
}

StrategyClass StrategyClass::per_slot(GameShape shape, SlotTable slots, double epsilon_cover) {
  StrategyClass out;
  out.kind_ = ClassKind::kPerSlot;
  out.epsilon_cover_ = epsilon_cover;
  check(epsilon_cover > 0.0, "strategy class: epsilon_cover must be positive");
  check(static_cast<int>(slots.size()) == shape.horizon, "per_slot: wrong horizon");
  for (int h = 0; h < shape.horizon; ++h) {
    check(static_cast<int>(slots[h].size()) == shape.num_states, "per_slot: wrong state count");
    for (int s = 0; s < shape.num_states; ++s) {
      check(static_cast<int>(slots[h][s].size()) == shape.num_players,
            "per_slot: wrong player count");
      for (int j = 0; j < shape.num_players; ++j) {
        check(!slots[h][s][j].empty(), "per_slot: empty slot");
        for (const auto& dist : slots[h][s][j]) {
          check(static_cast<int>(dist.size()) == shape.action_counts[j],
                "per_slot: distribution has wrong arity");
          check(is_distribution(dist), "per_slot: invalid distribution");
        }
      }
    }
  }
  out.slot_shape_ = shape;
  out.slots_ = std::move(slots);
  return out;
}

SlotChoices StrategyClass::slot(const GameShape& shape, int h, int s, int player) const {
  switch (kind_) {
    case ClassKind::kFull:
      throw std::invalid_argument("strategy class: full class has no finite slot list");
    case ClassKind::kDeterministic: {
      SlotChoices out;
      const int count = shape.action_counts[player];
      out.reserve(count);
      for (int a = 0; a < count; ++a) {
        std::vector<double> point(count, 0.0);
        point[a] = 1.0;
        out.push_back(std::move(point));
      }
      return out;
    }
    case ClassKind::kFinite: {
      check(members_.front().shape() == shape, "strategy class: shape mismatch");
      SlotChoices out;
      out.reserve(members_.size());
      for (const Strategy& m : members_) {
        const auto d = m.dist(h, s, player);
        out.emplace_back(d.begin(), d.end());
      }
      return out;
    }
    case ClassKind::kPerSlot:
      check(slot_shape_ == shape, "strategy class: shape mismatch");
      return slots_[h][s][player];
  }
  throw std::logic_error("strategy class: unknown kind");
}

SlotChoices StrategyClass::slot_cover(const GameShape& shape, int h, int s, int player) const {
  check(kind_ != ClassKind::kFull, "strategy class: full class cover is implicit");
  return greedy_cover(slot(shape, h, s, player), epsilon_cover_);
}

double StrategyClass::log_covering_number(const GameShape& shape) const {
  const double log_sh = std::log(static_cast<double>(shape.num_states) * shape.horizon);
  if (kind_ == ClassKind::kFull) {
    double out = log_sh;
    for (int a : shape.action_counts) {
      out += a * std::log(3.0 * a / epsilon_cover_);
    }
    return out;
  }
  if (kind_ == ClassKind::kDeterministic) {
    double out = log_sh;
    for (int a : shape.action_counts) out += std::log(static_cast<double>(a));
    return out;
  }
  std::vector<double> per_slot_logs;
  per_slot_logs.reserve(static_cast<std::size_t>(shape.horizon) * shape.num_states);
  for (int h = 0; h < shape.horizon; ++h) {
    for (int s = 0; s < shape.num_states; ++s) {
      double log_product = 0.0;
      for (int j = 0; j < shape.num_players; ++j) {
        log_product += std::log(static_cast<double>(slot_cover(shape, h, s, j).size()));
      }
      per_slot_logs.push_back(log_product);
    }
  }
  return log_sum_exp(per_slot_logs);
}

std::vector<double> StrategyClass::project_slot(const GameShape& shape, int h, int s, int player,
                                                std::span<const double> dist) const {
  if (kind_ == ClassKind::kFull) return std::vector<double>(dist.begin(), dist.end());
  const auto candidates = slot(shape, h, s, player);
  std::size_t best = 0;
  double best_distance = kInfinity;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double d = l1_distance(dist, candidates[i]);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return candidates[best];
}

Strategy StrategyClass::project(const GameShape& shape, const Strategy& strategy) const {
  if (kind_ == ClassKind::kFull) return strategy;
  Strategy out = strategy;
  for (int h = 0; h < shape.horizon; ++h) {
    for (int s = 0; s < shape.num_states; ++s) {
      for (int j = 0; j < shape.num_players; ++j) {
        const auto nearest = project_slot(shape, h, s, j, strategy.dist(h, s, j));
        std::copy(nearest.begin(), nearest.end(), out.dist(h, s, j).begin());
      }
    }
  }
  return out;
}

long long StrategyClass::member_count(const GameShape& shape) const {
  switch (kind_) {
    case ClassKind::kFull:
      return -1;
    case ClassKind::kFinite:
      return static_cast<long long>(members_.size());
    case ClassKind::kDeterministic: {
      long long count = 1;
      for (int h = 0; h < shape.horizon; ++h) {
        for (int s = 0; s < shape.num_states; ++s) {
          for (int j = 0; j < shape.num_players; ++j) {
            count *= shape.action_counts[j];
            (void)h;
            (void)s;
            if (count < 0 || count > (1LL << 62)) return -1;
          }
        }
      }
      return count;
    }
    case ClassKind::kPerSlot: {
      long long count = 1;
      for (const auto& per_state : slots_) {
        for (const auto& per_player : per_state) {
          for (const auto& choices : per_player) {
            count *= static_cast<long long>(choices.size());
            if (count < 0 || count > (1LL << 62)) return -1;
          }
        }
      }
      return count;
    }
  }
  return -1;
}

void StrategyClass::enumerate_members(const GameShape& shape, long long cap,
                                      const std::function<void(const Strategy&)>& fn) const {
  check(enumerable(), "strategy class: class not enumerable");
  const long long count = member_count(shape);
  check(count >= 0 && count <= cap, "strategy class: enumeration cap exceeded");
  if (kind_ == ClassKind::kFinite) {
    check(members_.front().shape() == shape, "strategy class: shape mismatch");
    for (const Strategy& m : members_) fn(m);
    return;
  }
  // Odometer over slots ordered (h, s, player), last slot fastest.
  const int slots = shape.horizon * shape.num_states * shape.num_players;
  std::vector<int> slot_sizes(slots);
  std::vector<SlotChoices> choices(slots);
  int index = 0;
  for (int h = 0; h < shape.horizon; ++h) {
    for (int s = 0; s < shape.num_states; ++s) {
      for (int j = 0; j < shape.num_players; ++j, ++index) {
        choices[index] = slot(shape, h, s, j);
        slot_sizes[index] = static_cast<int>(choices[index].size());
      }
    }
  }
  std::vector<int> odo(slots, 0);
  Strategy current(shape);
  while (true) {
    index = 0;
    for (int h = 0; h < shape.horizon; ++h) {
      for (int s = 0; s < shape.num_states; ++s) {
        for (int j = 0; j < shape.num_players; ++j, ++index) {
          const auto& pick = choices[index][odo[index]];
          std::copy(pick.begin(), pick.end(), current.dist(h, s, j).begin());
        }
      }
    }
    fn(current);
    int i = slots - 1;
    while (i >= 0 && odo[i] == slot_sizes[i] - 1) {
      odo[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++odo[i];
  }
}

double default_epsilon_cover(const GameShape& shape, int n) {
  check(n >= 1, "default_epsilon_cover: n must be positive");
  const double sum_a = shape.sum_actions();
  return 1.0 / (sum_a * shape.num_players * static_cast<double>(shape.horizon) * shape.horizon *
                static_cast<double>(n) * n);
}

std::vector<double> round_to_simplex_grid(std::span<const double> dist, double epsilon) {
  check(is_distribution(dist, 1e-9), "round_to_simplex_grid: input not a distribution");
  const int dim = static_cast<int>(dist.size());
  // Grid spacing eps' with A * eps' <= epsilon and 1/eps' integer; floor each
  // coordinate to the grid and hand the leftover ticks to the first few.
  const long long ticks = static_cast<long long>(std::ceil(dim / epsilon));
  const double spacing = 1.0 / static_cast<double>(ticks);
  std::vector<long long> base(dim);
  long long used = 0;
  for (int i = 0; i < dim; ++i) {
    base[i] = std::min<long long>(ticks, static_cast<long long>(std::floor(dist[i] / spacing)));
    used += base[i];
  }
  long long leftover = ticks - used;
  for (int i = 0; i < dim && leftover > 0; ++i) {
    ++base[i];
    --leftover;
  }
  for (int i = 0; i < dim && leftover < 0; ++i) {
    if (base[i] > 0) {
      --base[i];
      ++leftover;
    }
  }
  check(leftover == 0, "round_to_simplex_grid: internal rounding error");
  std::vector<double> out(dim);
  for (int i = 0; i < dim; ++i) out[i] = static_cast<double>(base[i]) * spacing;
  return out;
}

}  // namespace marl

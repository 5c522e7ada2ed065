#include <doctest.h>

#include <cmath>

#include "marl/builtins.hpp"
#include "marl/oracles.hpp"
#include "test_util.hpp"

using namespace marl;
using namespace marl::oracles;
using testing::random_strategy;

TEST_CASE("enumerate_values: deterministic chain is a single trajectory") {
  const GameSpec game = builtins::matching_pennies_markov(2);
  Strategy strategy(game.shape());
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 2; ++s) {
      strategy.set_point_mass(h, s, 0, 0);
      strategy.set_point_mass(h, s, 1, 0);  // matched actions, payoff in state 0
    }
  }
  const auto values = enumerate_values(game, strategy);
  CHECK(values[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("enumerate_values: matching pennies at uniform") {
  const GameSpec game = builtins::matching_pennies();
  const auto values = enumerate_values(game, Strategy::uniform(game.shape()));
  CHECK(values[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("enumerate_values rejects budget overruns") {
  const GameSpec game = builtins::random_general_sum(3, 3, {2, 2}, 1);
  OracleBudget budget;
  budget.max_trajectories = 10;
  CHECK_THROWS_AS(enumerate_values(game, Strategy::uniform(game.shape()), budget),
                  std::invalid_argument);
}

TEST_CASE("deterministic policy enumeration is lexicographic and complete") {
  const GameShape shape(2, 2, 2, {3, 2});
  CHECK(deterministic_policy_count(shape, 0) == 81);  // 3^(2*2)
  CHECK(deterministic_policy_count(shape, 1) == 16);
  std::vector<std::vector<int>> seen;
  for_each_deterministic_policy(shape, 1, {}, [&](const DeterministicPolicy& policy) {
    seen.push_back(policy.actions);
  });
  CHECK(seen.size() == 16);
  CHECK(seen.front() == std::vector<int>{0, 0, 0, 0});
  CHECK(seen[1] == std::vector<int>{0, 0, 0, 1});  // last slot varies fastest
  CHECK(seen.back() == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("grid_maximin: linear objective peaks at a vertex") {
  const auto linear = [](std::span<const double> mu) { return 2.0 * mu[0] + mu[1]; };
  const auto result = grid_maximin(linear, 2, 1e-3);
  CHECK(result.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(result.point[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid_maximin: matching pennies inner minimum peaks at uniform") {
  const auto objective = [](std::span<const double> mu) {
    return std::min(mu[0] - mu[1], mu[1] - mu[0]);
  };
  const auto result = grid_maximin(objective, 2, 1e-3);
  CHECK(result.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(result.point[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("grid_maximin covers the three-action simplex") {
  const auto objective = [](std::span<const double> mu) {
    // Concave with interior maximizer (1/3, 1/3, 1/3).
    return -(mu[0] - 1.0 / 3) * (mu[0] - 1.0 / 3) - (mu[1] - 1.0 / 3) * (mu[1] - 1.0 / 3) -
           (mu[2] - 1.0 / 3) * (mu[2] - 1.0 / 3);
  };
  const auto result = grid_maximin(objective, 3, 1e-2);
  CHECK(result.value >= -1e-3);
  CHECK(result.point[0] == doctest::Approx(1.0 / 3).epsilon(0.05));
  CHECK_THROWS_AS(grid_maximin(objective, 4, 1e-2), std::invalid_argument);
}

TEST_CASE("finite differences: quadratic and constant fields") {
  const auto quadratic = [](std::span<const double> x) {
    return 3.0 * x[0] * x[0] + 2.0 * x[0] * x[1];
  };
  const std::vector<double> point{0.4, 0.6};
  const auto grad = finite_difference_gradient(quadratic, point, 1e-6);
  CHECK(grad[0] == doctest::Approx(3.0 * 2 * 0.4 + 2.0 * 0.6).epsilon(1e-6));
  CHECK(grad[1] == doctest::Approx(2.0 * 0.4).epsilon(1e-6));

  const auto constant = [](std::span<const double>) { return 1.25; };
  const auto zero = finite_difference_gradient(constant, point, 1e-6);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
}

TEST_CASE("enumerate_values is self-consistent with evaluate across seeds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GameSpec game = builtins::random_zero_sum(2, 2, 2, 2, seed);
    const Strategy strategy = random_strategy(game.shape(), seed ^ 0xabcdef);
    const auto enumerated = enumerate_values(game, strategy);
    const ValueTable values = evaluate(game, strategy);
    CHECK(enumerated[0] ==
          doctest::Approx(values.v(0, 0, game.initial_state)).epsilon(1e-12));
  }
}

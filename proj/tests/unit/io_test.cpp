#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "marl/builtins.hpp"
#include "marl/io.hpp"
#include "test_util.hpp"

using namespace marl;
using testing::random_strategy;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("marl_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("game files round-trip exactly") {
  TempDir dir;
  const GameSpec game = builtins::random_general_sum(3, 2, {2, 3}, 5);
  io::save_game(game, dir.file("game.json"));
  const GameSpec loaded = io::load_game(dir.file("game.json"));
  CHECK(loaded.transitions == game.transitions);
  CHECK(loaded.mean_rewards == game.mean_rewards);
  CHECK(loaded.action_counts == game.action_counts);
  CHECK(loaded.reward_kind == game.reward_kind);
  CHECK(io::game_hash(loaded) == io::game_hash(game));
}

TEST_CASE("game loading validates probabilities") {
  TempDir dir;
  const GameSpec game = builtins::matching_pennies();
  io::json j = io::game_to_json(game);
  j["P"][0][0][0][0] = 0.25;  // row no longer sums to one
  io::write_text_file(dir.file("bad.json"), j.dump());
  CHECK_THROWS_AS(io::load_game(dir.file("bad.json")), std::invalid_argument);
  j = io::game_to_json(game);
  j.erase("s1");
  io::write_text_file(dir.file("bad2.json"), j.dump());
  CHECK_THROWS_AS(io::load_game(dir.file("bad2.json")), std::invalid_argument);
}

TEST_CASE("strategies round-trip and are validated") {
  const GameSpec game = builtins::random_general_sum(2, 2, {3, 2}, 6);
  const Strategy strategy = random_strategy(game.shape(), 7);
  const Strategy loaded = io::strategy_from_json(io::strategy_to_json(strategy));
  CHECK(loaded == strategy);

  io::json j = io::strategy_to_json(strategy);
  j["probs"][0][0][0][0] = 2.0;
  CHECK_THROWS_AS(io::strategy_from_json(j), std::invalid_argument);
}

TEST_CASE("datasets round-trip with their header") {
  TempDir dir;
  const GameSpec game = builtins::random_zero_sum(2, 2, 2, 2, 8);
  const DataDistribution dist = DataDistribution::uniform(game.shape());
  const OfflineDataset dataset = sample_dataset(game, dist, 32, 99);
  const std::string hash = io::game_hash(game);
  io::save_dataset(dataset, hash, dir.file("data.ndjson"));
  std::string stored;
  const OfflineDataset loaded = io::load_dataset(dir.file("data.ndjson"), game.shape(), &stored);
  CHECK(stored == hash);
  CHECK(loaded.samples_per_step == 32);
  CHECK(loaded.seed == 99);
  REQUIRE(loaded.tuples.size() == dataset.tuples.size());
  for (std::size_t i = 0; i < loaded.tuples.size(); ++i) {
    CHECK(loaded.tuples[i].actions == dataset.tuples[i].actions);
    CHECK(loaded.tuples[i].rewards == dataset.tuples[i].rewards);
    CHECK(loaded.tuples[i].next_state == dataset.tuples[i].next_state);
  }
  // Loading re-validates ranges.
  io::write_text_file(dir.file("bad.ndjson"),
                      "{\"n\":1,\"seed\":0,\"game_hash\":\"x\"}\n"
                      "{\"h\":0,\"s\":9,\"a\":[0,0],\"r\":[0,1],\"s_next\":0}\n");
  CHECK_THROWS_AS(io::load_dataset(dir.file("bad.ndjson"), game.shape(), nullptr),
                  std::invalid_argument);
}

TEST_CASE("strategy classes round-trip for every kind") {
  const GameShape shape(2, 1, 1, {2, 2});
  SUBCASE("full and deterministic") {
    for (const char* kind : {"full", "deterministic"}) {
      const io::json j{{"kind", kind}, {"epsilon_cover", 1e-5}};
      const StrategyClass cls = io::strategy_class_from_json(j);
      const io::json back = io::strategy_class_to_json(cls, &shape);
      CHECK(back.at("kind") == kind);
      CHECK(back.at("epsilon_cover") == 1e-5);
    }
  }
  SUBCASE("finite") {
    std::vector<Strategy> members{Strategy::uniform(shape), random_strategy(shape, 3)};
    const StrategyClass cls = StrategyClass::finite(members, 1e-4);
    const StrategyClass loaded =
        io::strategy_class_from_json(io::strategy_class_to_json(cls, &shape));
    CHECK(loaded.kind() == ClassKind::kFinite);
    CHECK(loaded.members().size() == 2);
    CHECK(loaded.members()[1] == members[1]);
  }
  SUBCASE("per_slot") {
    SlotTable slots(1);
    slots[0].resize(1);
    slots[0][0].resize(2);
    slots[0][0][0] = {{1.0, 0.0}, {0.5, 0.5}};
    slots[0][0][1] = {{0.25, 0.75}};
    const StrategyClass cls = StrategyClass::per_slot(shape, slots, 1e-4);
    const StrategyClass loaded =
        io::strategy_class_from_json(io::strategy_class_to_json(cls, &shape));
    CHECK(loaded.kind() == ClassKind::kPerSlot);
    CHECK(loaded.slot(shape, 0, 0, 0) == slots[0][0][0]);
    CHECK(loaded.slot(shape, 0, 0, 1) == slots[0][0][1]);
  }
  SUBCASE("unknown kinds are rejected") {
    CHECK_THROWS_AS(
        io::strategy_class_from_json(io::json{{"kind", "mystery"}, {"epsilon_cover", 1e-4}}),
        std::invalid_argument);
  }
}

TEST_CASE("distributions round-trip") {
  const GameShape shape(2, 2, 2, {2, 2});
  DataDistribution dist = DataDistribution::uniform(shape);
  dist.at(0, 0, 0) = 0.25;
  dist.at(0, 1, 2) = 0.0;
  dist.validate();
  const DataDistribution loaded = io::distribution_from_json(io::distribution_to_json(dist));
  CHECK(loaded.probs == dist.probs);
}

TEST_CASE("game hash changes with content") {
  const GameSpec a = builtins::random_zero_sum(2, 1, 2, 2, 1);
  const GameSpec b = builtins::random_zero_sum(2, 1, 2, 2, 2);
  CHECK(io::game_hash(a) != io::game_hash(b));
  CHECK(io::game_hash(a) == io::game_hash(a));
}

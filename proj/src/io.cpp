#include "marl/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace marl {
namespace io {

namespace {

json require(const json& j, const char* key) {
  check(j.is_object() && j.contains(key), std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json game_to_json(const GameSpec& game) {
  const GameShape sh = game.shape();
  json p = json::array();
  for (int h = 0; h < game.horizon; ++h) {
    json per_state = json::array();
    for (int s = 0; s < game.num_states; ++s) {
      json per_joint = json::array();
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        const auto row = game.transition_row(h, s, ja);
        per_joint.push_back(json(std::vector<double>(row.begin(), row.end())));
      }
      per_state.push_back(std::move(per_joint));
    }
    p.push_back(std::move(per_state));
  }
  json r = json::array();
  for (int h = 0; h < game.horizon; ++h) {
    json per_player = json::array();
    for (int j = 0; j < game.num_players; ++j) {
      json per_state = json::array();
      for (int s = 0; s < game.num_states; ++s) {
        std::vector<double> row(sh.joint_count());
        for (int ja = 0; ja < sh.joint_count(); ++ja) row[ja] = game.mean_reward(h, j, s, ja);
        per_state.push_back(json(row));
      }
      per_player.push_back(std::move(per_state));
    }
    r.push_back(std::move(per_player));
  }
  return json{{"m", game.num_players},
              {"H", game.horizon},
              {"S", game.num_states},
              {"A", game.action_counts},
              {"s1", game.initial_state},
              {"reward_kind", game.reward_kind == RewardKind::kBernoulli ? "bernoulli"
                                                                          : "deterministic"},
              {"P", std::move(p)},
              {"r", std::move(r)}};
}

GameSpec game_from_json(const json& j) {
  GameSpec game;
  game.num_players = require(j, "m").get<int>();
  game.horizon = require(j, "H").get<int>();
  game.num_states = require(j, "S").get<int>();
  game.action_counts = require(j, "A").get<std::vector<int>>();
  game.initial_state = require(j, "s1").get<int>();
  const std::string kind = require(j, "reward_kind").get<std::string>();
  if (kind == "bernoulli") {
    game.reward_kind = RewardKind::kBernoulli;
  } else if (kind == "deterministic") {
    game.reward_kind = RewardKind::kDeterministic;
  } else {
    throw std::invalid_argument("game: unknown reward_kind '" + kind + "'");
  }
  const GameShape sh = game.shape();
  const json& p = require(j, "P");
  const json& r = require(j, "r");
  check(static_cast<int>(p.size()) == game.horizon, "game: P has wrong horizon");
  check(static_cast<int>(r.size()) == game.horizon, "game: r has wrong horizon");
  game.transitions.reserve(static_cast<std::size_t>(game.horizon) * game.num_states *
                           sh.joint_count() * game.num_states);
  for (int h = 0; h < game.horizon; ++h) {
    check(static_cast<int>(p[h].size()) == game.num_states, "game: P has wrong state count");
    for (int s = 0; s < game.num_states; ++s) {
      check(static_cast<int>(p[h][s].size()) == sh.joint_count(),
            "game: P has wrong joint-action count");
      for (int ja = 0; ja < sh.joint_count(); ++ja) {
        const auto row = p[h][s][ja].get<std::vector<double>>();
        check(static_cast<int>(row.size()) == game.num_states, "game: P row has wrong length");
        game.transitions.insert(game.transitions.end(), row.begin(), row.end());
      }
    }
  }
  game.mean_rewards.reserve(static_cast<std::size_t>(game.horizon) * game.num_players *
                            game.num_states * sh.joint_count());
  for (int h = 0; h < game.horizon; ++h) {
    check(static_cast<int>(r[h].size()) == game.num_players, "game: r has wrong player count");
    for (int jp = 0; jp < game.num_players; ++jp) {
      check(static_cast<int>(r[h][jp].size()) == game.num_states, "game: r has wrong state count");
      for (int s = 0; s < game.num_states; ++s) {
        const auto row = r[h][jp][s].get<std::vector<double>>();
        check(static_cast<int>(row.size()) == sh.joint_count(), "game: r row has wrong length");
        game.mean_rewards.insert(game.mean_rewards.end(), row.begin(), row.end());
      }
    }
  }
  game.validate();
  return game;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  check(out.good(), "cannot open for writing: " + path);
  out << content;
  check(out.good(), "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), "cannot open: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void save_game(const GameSpec& game, const std::string& path) {
  write_text_file(path, game_to_json(game).dump(2) + "\n");
}

GameSpec load_game(const std::string& path) {
  return game_from_json(json::parse(read_text_file(path)));
}

std::string game_hash(const GameSpec& game) {
  const std::uint64_t h = fnv1a64(game_to_json(game).dump());
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

json strategy_to_json(const Strategy& strategy) {
  const GameShape& sh = strategy.shape();
  json probs = json::array();
  for (int h = 0; h < sh.horizon; ++h) {
    json per_state = json::array();
    for (int s = 0; s < sh.num_states; ++s) {
      json per_player = json::array();
      for (int j = 0; j < sh.num_players; ++j) {
        const auto d = strategy.dist(h, s, j);
        per_player.push_back(json(std::vector<double>(d.begin(), d.end())));
      }
      per_state.push_back(std::move(per_player));
    }
    probs.push_back(std::move(per_state));
  }
  return json{{"H", sh.horizon},
              {"S", sh.num_states},
              {"A", sh.action_counts},
              {"probs", std::move(probs)}};
}

Strategy strategy_from_json(const json& j) {
  const int horizon = require(j, "H").get<int>();
  const int num_states = require(j, "S").get<int>();
  const auto action_counts = require(j, "A").get<std::vector<int>>();
  const GameShape shape(static_cast<int>(action_counts.size()), horizon, num_states,
                        action_counts);
  Strategy strategy(shape);
  const json& probs = require(j, "probs");
  check(static_cast<int>(probs.size()) == horizon, "strategy: wrong horizon");
  for (int h = 0; h < horizon; ++h) {
    check(static_cast<int>(probs[h].size()) == num_states, "strategy: wrong state count");
    for (int s = 0; s < num_states; ++s) {
      check(static_cast<int>(probs[h][s].size()) == shape.num_players,
            "strategy: wrong player count");
      for (int jp = 0; jp < shape.num_players; ++jp) {
        const auto row = probs[h][s][jp].get<std::vector<double>>();
        check(static_cast<int>(row.size()) == action_counts[jp],
              "strategy: distribution has wrong arity");
        std::copy(row.begin(), row.end(), strategy.dist(h, s, jp).begin());
      }
    }
  }
  strategy.validate();
  return strategy;
}

json distribution_to_json(const DataDistribution& dist) {
  const GameShape& sh = dist.shape;
  json d = json::array();
  const std::size_t cells = static_cast<std::size_t>(sh.num_states) * sh.joint_count();
  for (int h = 0; h < sh.horizon; ++h) {
    json per_state = json::array();
    for (int s = 0; s < sh.num_states; ++s) {
      std::vector<double> row(sh.joint_count());
      for (int ja = 0; ja < sh.joint_count(); ++ja) row[ja] = dist.at(h, s, ja);
      per_state.push_back(json(row));
    }
    d.push_back(std::move(per_state));
    (void)cells;
  }
  return json{{"m", sh.num_players},
              {"H", sh.horizon},
              {"S", sh.num_states},
              {"A", sh.action_counts},
              {"d", std::move(d)}};
}

DataDistribution distribution_from_json(const json& j) {
  const auto action_counts = require(j, "A").get<std::vector<int>>();
  const GameShape shape(static_cast<int>(action_counts.size()), require(j, "H").get<int>(),
                        require(j, "S").get<int>(), action_counts);
  DataDistribution dist{shape, {}};
  dist.probs.reserve(static_cast<std::size_t>(shape.horizon) * shape.num_states *
                     shape.joint_count());
  const json& d = require(j, "d");
  check(static_cast<int>(d.size()) == shape.horizon, "distribution: wrong horizon");
  for (int h = 0; h < shape.horizon; ++h) {
    check(static_cast<int>(d[h].size()) == shape.num_states, "distribution: wrong state count");
    for (int s = 0; s < shape.num_states; ++s) {
      const auto row = d[h][s].get<std::vector<double>>();
      check(static_cast<int>(row.size()) == shape.joint_count(),
            "distribution: row has wrong length");
      dist.probs.insert(dist.probs.end(), row.begin(), row.end());
    }
  }
  dist.validate();
  return dist;
}

void save_dataset(const OfflineDataset& dataset, const std::string& expected_game_hash,
                  const std::string& path) {
  std::ostringstream out;
  out << json{{"n", dataset.samples_per_step},
              {"seed", dataset.seed},
              {"game_hash", expected_game_hash}}
             .dump()
      << "\n";
  for (const DataTuple& t : dataset.tuples) {
    out << json{{"h", t.h},
                {"s", t.state},
                {"a", t.actions},
                {"r", t.rewards},
                {"s_next", t.next_state}}
               .dump()
        << "\n";
  }
  write_text_file(path, out.str());
}

OfflineDataset load_dataset(const std::string& path, const GameShape& shape,
                            std::string* stored_game_hash) {
  std::istringstream in(read_text_file(path));
  std::string line;
  check(static_cast<bool>(std::getline(in, line)), "dataset: missing header line");
  const json header = json::parse(line);
  OfflineDataset dataset;
  dataset.shape = shape;
  dataset.samples_per_step = require(header, "n").get<int>();
  dataset.seed = require(header, "seed").get<std::uint64_t>();
  if (stored_game_hash != nullptr) {
    *stored_game_hash = require(header, "game_hash").get<std::string>();
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json record = json::parse(line);
    DataTuple t;
    t.h = require(record, "h").get<int>();
    t.state = require(record, "s").get<int>();
    t.actions = require(record, "a").get<std::vector<int>>();
    t.rewards = require(record, "r").get<std::vector<double>>();
    t.next_state = require(record, "s_next").get<int>();
    dataset.tuples.push_back(std::move(t));
  }
  dataset.validate();
  return dataset;
}

json strategy_class_to_json(const StrategyClass& cls, const GameShape* shape) {
  json out;
  out["epsilon_cover"] = cls.epsilon_cover();
  switch (cls.kind()) {
    case ClassKind::kFull:
      out["kind"] = "full";
      break;
    case ClassKind::kDeterministic:
      out["kind"] = "deterministic";
      break;
    case ClassKind::kFinite: {
      out["kind"] = "finite";
      json members = json::array();
      for (const Strategy& m : cls.members()) members.push_back(strategy_to_json(m));
      out["members"] = std::move(members);
      break;
    }
    case ClassKind::kPerSlot: {
      out["kind"] = "per_slot";
      check(shape != nullptr, "class: per_slot serialization needs a shape");
      out["m"] = shape->num_players;
      out["H"] = shape->horizon;
      out["S"] = shape->num_states;
      out["A"] = shape->action_counts;
      json slots = json::array();
      for (int h = 0; h < shape->horizon; ++h) {
        json per_state = json::array();
        for (int s = 0; s < shape->num_states; ++s) {
          json per_player = json::array();
          for (int j = 0; j < shape->num_players; ++j) {
            per_player.push_back(json(cls.slot(*shape, h, s, j)));
          }
          per_state.push_back(std::move(per_player));
        }
        slots.push_back(std::move(per_state));
      }
      out["slots"] = std::move(slots);
      break;
    }
  }
  return out;
}

StrategyClass strategy_class_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  const double epsilon = require(j, "epsilon_cover").get<double>();
  if (kind == "full") return StrategyClass::full(epsilon);
  if (kind == "deterministic") return StrategyClass::deterministic(epsilon);
  if (kind == "finite") {
    std::vector<Strategy> members;
    for (const json& m : require(j, "members")) members.push_back(strategy_from_json(m));
    return StrategyClass::finite(std::move(members), epsilon);
  }
  if (kind == "per_slot") {
    const auto action_counts = require(j, "A").get<std::vector<int>>();
    const GameShape shape(static_cast<int>(action_counts.size()), require(j, "H").get<int>(),
                          require(j, "S").get<int>(), action_counts);
    SlotTable slots;
    const json& raw = require(j, "slots");
    check(static_cast<int>(raw.size()) == shape.horizon, "class: slots have wrong horizon");
    slots.resize(shape.horizon);
    for (int h = 0; h < shape.horizon; ++h) {
      check(static_cast<int>(raw[h].size()) == shape.num_states,
            "class: slots have wrong state count");
      slots[h].resize(shape.num_states);
      for (int s = 0; s < shape.num_states; ++s) {
        check(static_cast<int>(raw[h][s].size()) == shape.num_players,
              "class: slots have wrong player count");
        slots[h][s].resize(shape.num_players);
        for (int jp = 0; jp < shape.num_players; ++jp) {
          for (const json& dist : raw[h][s][jp]) {
            slots[h][s][jp].push_back(dist.get<std::vector<double>>());
          }
        }
      }
    }
    return StrategyClass::per_slot(shape, std::move(slots), epsilon);
  }
  throw std::invalid_argument("class: unknown kind '" + kind + "'");
}

}  // namespace io
}  // namespace marl

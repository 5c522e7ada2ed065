#ifndef MARL_IO_HPP
#define MARL_IO_HPP

#include <string>

#include <json.hpp>

#include "marl/game.hpp"
#include "marl/offline_data.hpp"
#include "marl/strategy_class.hpp"

namespace marl {
namespace io {

using nlohmann::json;

/// Game files: {m, H, S, A[], P[h][s][joint][s'], r[h][j][s][joint], s1,
/// reward_kind}. Probabilities are re-validated on load.
json game_to_json(const GameSpec& game);
GameSpec game_from_json(const json& j);
void save_game(const GameSpec& game, const std::string& path);
GameSpec load_game(const std::string& path);

/// Fingerprint of the canonical serialization, stored in dataset headers.
std::string game_hash(const GameSpec& game);

json strategy_to_json(const Strategy& strategy);
Strategy strategy_from_json(const json& j);

json distribution_to_json(const DataDistribution& dist);
DataDistribution distribution_from_json(const json& j);

/// Dataset files: one JSON header line {n, seed, game_hash}, then one
/// record {h, s, a[], r[], s_next} per line.
void save_dataset(const OfflineDataset& dataset, const std::string& expected_game_hash,
                  const std::string& path);
OfflineDataset load_dataset(const std::string& path, const GameShape& shape,
                            std::string* stored_game_hash = nullptr);

json strategy_class_to_json(const StrategyClass& cls, const GameShape* shape);
StrategyClass strategy_class_from_json(const json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace io
}  // namespace marl

#endif  // MARL_IO_HPP

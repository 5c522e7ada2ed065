// Python bindings for the core operations: game construction and exact
// evaluation, dataset generation, bonuses, and the two solvers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "marl/experiments.hpp"
#include "marl/oracles.hpp"

namespace py = pybind11;
using namespace marl;

namespace {

Strategy strategy_from_nested(const GameShape& shape,
                              const std::vector<std::vector<std::vector<std::vector<double>>>>&
                                  probs) {
  Strategy strategy(shape);
  check(static_cast<int>(probs.size()) == shape.horizon, "strategy: wrong horizon");
  for (int h = 0; h < shape.horizon; ++h) {
    check(static_cast<int>(probs[h].size()) == shape.num_states, "strategy: wrong state count");
    for (int s = 0; s < shape.num_states; ++s) {
      check(static_cast<int>(probs[h][s].size()) == shape.num_players,
            "strategy: wrong player count");
      for (int j = 0; j < shape.num_players; ++j) {
        check(static_cast<int>(probs[h][s][j].size()) == shape.action_counts[j],
              "strategy: wrong action arity");
        std::copy(probs[h][s][j].begin(), probs[h][s][j].end(),
                  strategy.dist(h, s, j).begin());
      }
    }
  }
  strategy.validate();
  return strategy;
}

std::vector<std::vector<std::vector<std::vector<double>>>> strategy_to_nested(
    const Strategy& strategy) {
  const GameShape& shape = strategy.shape();
  std::vector<std::vector<std::vector<std::vector<double>>>> out(shape.horizon);
  for (int h = 0; h < shape.horizon; ++h) {
    out[h].resize(shape.num_states);
    for (int s = 0; s < shape.num_states; ++s) {
      out[h][s].resize(shape.num_players);
      for (int j = 0; j < shape.num_players; ++j) {
        const auto d = strategy.dist(h, s, j);
        out[h][s][j].assign(d.begin(), d.end());
      }
    }
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(marlkit, m) {
  m.doc() = "Tabular offline multi-agent RL: strategy-wise bonuses, SBMM and SBSM solvers";

  py::class_<GameShape>(m, "GameShape")
      .def(py::init<int, int, int, std::vector<int>>(), py::arg("num_players"),
           py::arg("horizon"), py::arg("num_states"), py::arg("action_counts"))
      .def_readonly("num_players", &GameShape::num_players)
      .def_readonly("horizon", &GameShape::horizon)
      .def_readonly("num_states", &GameShape::num_states)
      .def_readonly("action_counts", &GameShape::action_counts)
      .def("joint_count", &GameShape::joint_count);

  py::class_<GameSpec>(m, "GameSpec")
      .def_readonly("num_players", &GameSpec::num_players)
      .def_readonly("horizon", &GameSpec::horizon)
      .def_readonly("num_states", &GameSpec::num_states)
      .def_readonly("action_counts", &GameSpec::action_counts)
      .def_readonly("initial_state", &GameSpec::initial_state)
      .def("shape", &GameSpec::shape)
      .def("mean_reward", &GameSpec::mean_reward, py::arg("h"), py::arg("player"), py::arg("s"),
           py::arg("joint"))
      .def_static("from_json", [](const std::string& text) {
        return io::game_from_json(io::json::parse(text));
      })
      .def("to_json", [](const GameSpec& game) { return io::game_to_json(game).dump(); });

  py::class_<Strategy>(m, "Strategy")
      .def(py::init([](const GameShape& shape,
                       const std::vector<std::vector<std::vector<std::vector<double>>>>& probs) {
             return strategy_from_nested(shape, probs);
           }),
           py::arg("shape"), py::arg("probs"))
      .def_static("uniform", &Strategy::uniform, py::arg("shape"))
      .def("probs", &strategy_to_nested);

  py::class_<ValueTable>(m, "ValueTable")
      .def("v", py::overload_cast<int, int, int>(&ValueTable::v, py::const_), py::arg("h"),
           py::arg("player"), py::arg("s"));

  py::class_<GapReport>(m, "GapReport")
      .def_readonly("best_response_values", &GapReport::best_response_values)
      .def_readonly("strategy_values", &GapReport::strategy_values)
      .def_readonly("gap", &GapReport::gap);

  m.def("matching_pennies", &builtins::matching_pennies);
  m.def("identity_zero_sum", &builtins::identity_zero_sum, py::arg("num_actions"));
  m.def("matching_pennies_markov", &builtins::matching_pennies_markov, py::arg("horizon") = 2);
  m.def("random_zero_sum", &builtins::random_zero_sum, py::arg("num_states"), py::arg("horizon"),
        py::arg("num_a"), py::arg("num_b"), py::arg("seed"));
  m.def("random_general_sum", &builtins::random_general_sum, py::arg("num_states"),
        py::arg("horizon"), py::arg("action_counts"), py::arg("seed"));
  m.def("turn_based", &builtins::turn_based, py::arg("num_states"), py::arg("horizon"),
        py::arg("num_actions"), py::arg("seed"));

  m.def("evaluate", &evaluate, py::arg("game"), py::arg("strategy"));
  m.def("gap", &gap, py::arg("game"), py::arg("strategy"));
  m.def(
      "best_response_value",
      [](const GameSpec& game, const Strategy& strategy, int player) {
        const auto [policy, table] = best_response(game, strategy, player);
        return table.v(0, player, game.initial_state);
      },
      py::arg("game"), py::arg("strategy"), py::arg("player"));
  m.def(
      "enumerate_values",
      [](const GameSpec& game, const Strategy& strategy) {
        return oracles::enumerate_values(game, strategy);
      },
      py::arg("game"), py::arg("strategy"));

  m.def(
      "solve",
      [](const std::string& config_text) {
        const auto config =
            experiments::config_from_json(io::json::parse(config_text));
        const GameSpec game = experiments::resolve_game(config.game);
        const DataDistribution dist =
            experiments::resolve_distribution(config.distribution, game.shape());
        check(!config.n_values.empty() && !config.seeds.empty(),
              "solve: need n_values and seeds");
        const OfflineDataset dataset =
            sample_dataset(game, dist, config.n_values.front(), config.seeds.front());
        return experiments::solve_to_report(config, game, dataset).dump();
      },
      py::arg("config_json"),
      "Run one solve from an ExperimentConfig JSON string; returns the report JSON");

  m.def(
      "sweep_csv",
      [](const std::string& config_text, int workers) {
        const auto config =
            experiments::config_from_json(io::json::parse(config_text));
        return experiments::sweep_csv(experiments::run_sweep(config, workers, false));
      },
      py::arg("config_json"), py::arg("workers") = 1);
}

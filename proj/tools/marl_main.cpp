// Command-line harness: generate games and offline datasets, run the
// solvers, sweep over (n, seed) grids into CSV, and re-verify reports
// against the exact oracles.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "marl/experiments.hpp"
#include "marl/oracles.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;
constexpr int kExitVerifyFailure = 4;

using marl::experiments::ExperimentConfig;
namespace fs = std::filesystem;

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig config = marl::experiments::config_from_json(
      marl::io::json::parse(marl::io::read_text_file(path)));
  if (const char* env_seed = std::getenv("MARL_SEED")) {
    config.seeds = {static_cast<std::uint64_t>(std::strtoull(env_seed, nullptr, 10))};
  }
  return config;
}

std::string dataset_filename(int n, std::uint64_t seed) {
  return "dataset_n" + std::to_string(n) + "_seed" + std::to_string(seed) + ".ndjson";
}

int cmd_generate(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig config;
  marl::GameSpec game;
  marl::DataDistribution dist;
  try {
    config = load_config(config_path);
    game = marl::experiments::resolve_game(config.game);
    dist = marl::experiments::resolve_distribution(config.distribution, game.shape());
    marl::check(!config.n_values.empty(), "generate: no n values configured");
    marl::check(!config.seeds.empty(), "generate: no seeds configured");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    fs::create_directories(out_dir);
    const std::string game_path = (fs::path(out_dir) / "game.json").string();
    marl::io::save_game(game, game_path);
    const std::string hash = marl::io::game_hash(game);
    std::cout << "game: " << game_path << " (hash " << hash << ")\n";
    const double p_min = dist.p_min();
    std::printf("p_min: %.12g\n", p_min);
    std::printf("warmup_n: %.12g\n",
                marl::warmup_threshold(game.shape(), p_min, config.bonus.delta));
    for (int n : config.n_values) {
      for (std::uint64_t seed : config.seeds) {
        const marl::OfflineDataset dataset = marl::sample_dataset(game, dist, n, seed);
        const std::string path = (fs::path(out_dir) / dataset_filename(n, seed)).string();
        marl::io::save_dataset(dataset, hash, path);
        std::cout << "dataset: " << path << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "generate failed: " << e.what() << "\n";
    return kExitSolverError;
  }
  return kExitOk;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig config;
  marl::GameSpec game;
  marl::OfflineDataset dataset;
  try {
    config = load_config(config_path);
    game = marl::experiments::resolve_game(config.game);
    marl::check(!config.solvers.empty(), "solve: no solver configured");
    if (!config.dataset_file.empty()) {
      std::string stored_hash;
      dataset = marl::io::load_dataset(config.dataset_file, game.shape(), &stored_hash);
      marl::check(stored_hash == marl::io::game_hash(game),
                  "solve: dataset was generated from a different game");
    } else {
      marl::check(!config.n_values.empty() && !config.seeds.empty(),
                  "solve: need dataset_file or (n_values, seeds)");
      const marl::DataDistribution dist =
          marl::experiments::resolve_distribution(config.distribution, game.shape());
      dataset = marl::sample_dataset(game, dist, config.n_values.front(), config.seeds.front());
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    const marl::io::json report = marl::experiments::solve_to_report(config, game, dataset);
    fs::create_directories(out_dir);
    const std::string path =
        (fs::path(out_dir) / ("report_" + config.solvers.front() + ".json")).string();
    marl::io::write_text_file(path, report.dump(2) + "\n");
    std::cout << "report: " << path << "\n";
    std::printf("exact_gap: %.12g\n", report.at("exact").at("gap").get<double>());
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int workers,
              bool timings) {
  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    const auto cells = marl::experiments::run_sweep(config, workers, timings);
    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / "sweep.csv").string();
    marl::io::write_text_file(path, marl::experiments::sweep_csv(cells));
    int failures = 0;
    for (const auto& cell : cells) {
      if (!cell.ok) {
        ++failures;
        std::cerr << "cell (" << cell.solver << ", n=" << cell.n << ", seed=" << cell.seed
                  << ") failed: " << cell.error << "\n";
      }
    }
    std::cout << "sweep: " << path << " (" << cells.size() << " rows, " << failures
              << " failed)\n";
  } catch (const std::exception& e) {
    std::cerr << "sweep error: " << e.what() << "\n";
    return kExitSolverError;
  }
  return kExitOk;
}

int cmd_verify(const std::string& report_path) {
  marl::io::json report;
  try {
    report = marl::io::json::parse(marl::io::read_text_file(report_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    const auto outcome = marl::experiments::verify_report(report);
    for (const std::string& line : outcome.lines) std::cout << line << "\n";
    std::cout << outcome.checks_run << " checks, " << outcome.checks_failed << " failed, "
              << outcome.checks_skipped << " skipped\n";
    return outcome.checks_failed == 0 ? kExitOk : kExitVerifyFailure;
  } catch (const std::exception& e) {
    std::cerr << "verify error: " << e.what() << "\n";
    return kExitVerifyFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline multi-agent RL toolkit: strategy-wise bonuses, SBMM and SBSM solvers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string report_path;
  int workers = 1;
  bool timings = false;

  auto* generate = app.add_subcommand("generate", "Write a game file and offline datasets");
  generate->add_option("--config", config_path, "Experiment config JSON")->required();
  generate->add_option("--out", out_dir, "Output directory");

  auto* solve = app.add_subcommand("solve", "Run a solver and write its report");
  solve->add_option("--config", config_path, "Experiment config JSON")->required();
  solve->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Run the (solver, n, seed) grid into a CSV");
  sweep->add_option("--config", config_path, "Experiment config JSON")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--workers", workers, "Worker threads (results are order-independent)");
  sweep->add_flag("--timings", timings,
                  "Record wall-clock runtime_ms (off by default to keep outputs bit-identical)");

  auto* verify = app.add_subcommand("verify", "Replay oracle checks against a solve report");
  verify->add_option("report", report_path, "Report JSON produced by solve");
  verify->add_option("--config", config_path, "Alternative way to pass the report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (generate->parsed()) return cmd_generate(config_path, out_dir);
  if (solve->parsed()) return cmd_solve(config_path, out_dir);
  if (sweep->parsed()) return cmd_sweep(config_path, out_dir, workers, timings);
  if (verify->parsed()) {
    const std::string& path = !report_path.empty() ? report_path : config_path;
    if (path.empty()) {
      std::cerr << "config error: verify needs a report path\n";
      return kExitConfigError;
    }
    return cmd_verify(path);
  }
  return kExitConfigError;
}

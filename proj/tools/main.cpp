#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qess/cli.hpp"

namespace {

qess::GameFile load_or_die(const std::string& path) {
  try {
    return qess::load_game_file(path);
  } catch (const qess::ParseError& e) {
    if (e.line > 0) {
      std::cerr << "error: " << path << ":" << e.line << ": " << e.what()
                << "\n";
    } else {
      std::cerr << "error: " << path << ": " << e.what() << "\n";
    }
    std::exit(qess::cli::kExitUsage);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::exit(qess::cli::kExitUsage);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary stability of symmetric games played through an "
               "entangled initial state"};
  app.require_subcommand(1);

  std::string game_path;
  double b2 = 0.0;
  double b2_min = 0.0;
  double b2_max = 1.0;
  int steps = 101;
  std::string out_path;
  int samples = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-12;
  double incumbent = 0.0;
  double mutant = 0.0;
  double epsilon = 0.01;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Classify the symmetric NE/ESS at one entanglement value");
  analyze->add_option("--game", game_path, "game definition file")->required();
  analyze->add_option("--b2", b2, "entanglement parameter |b|^2 in [0,1]")
      ->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep b2 and write a CSV of candidate classifications");
  sweep->add_option("--game", game_path, "game definition file")->required();
  sweep->add_option("--b2-min", b2_min, "sweep start (default 0)");
  sweep->add_option("--b2-max", b2_max, "sweep end (default 1)");
  sweep->add_option("--steps", steps, "number of grid points (default 101)");
  sweep->add_option("--out", out_path, "CSV output path")->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "Compare the closed-form payoffs with the density-matrix "
                "oracle on seeded random profiles");
  verify->add_option("--game", game_path, "game definition file")->required();
  verify->add_option("--samples", samples, "number of samples (default 1000)");
  verify->add_option("--seed", seed, "RNG seed (default 42)");
  verify->add_option("--tol", tol, "max allowed deviation (default 1e-12)");

  CLI::App* invade = app.add_subcommand(
      "invade", "Run a replicator-dynamics invasion experiment");
  invade->add_option("--game", game_path, "game definition file")->required();
  invade->add_option("--b2", b2, "entanglement parameter |b|^2")->required();
  invade->add_option("--incumbent", incumbent, "incumbent strategy in [0,1]")
      ->required();
  invade->add_option("--mutant", mutant, "mutant strategy in [0,1]")
      ->required();
  invade->add_option("--epsilon", epsilon,
                     "initial mutant share (default 0.01)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    std::cerr << "error: " << e.what() << "\n";
    return qess::cli::kExitUsage;
  }

  try {
    const qess::GameFile game = load_or_die(game_path);
    if (analyze->parsed()) {
      return qess::cli::cmd_analyze(game, b2, std::cout);
    }
    if (sweep->parsed()) {
      return qess::cli::cmd_sweep_to_path(game, b2_min, b2_max, steps,
                                          out_path, std::cout);
    }
    if (verify->parsed()) {
      return qess::cli::cmd_verify(game, samples, seed, tol, std::cout);
    }
    return qess::cli::cmd_invade(game, b2, incumbent, mutant, epsilon,
                                 std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qess::cli::kExitUsage;
  }
}

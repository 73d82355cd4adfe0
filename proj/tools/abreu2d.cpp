#include "abreu/config.hpp"
#include "abreu/run.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

int main(int argc, char** argv) {
  CLI::App app{"Second boundary value problem for affine mean curvature type equations on planar domains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "Output directory (default: config \"output\")");
  app.add_option("--seed", seed, "Random seed for sampling");
  app.add_option("--threads", threads, "Worker thread count")->check(CLI::PositiveNumber);

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "Coupled system: u.csv, w.csv, report.json"},
      {"ma", "Monge-Ampere Dirichlet problem from the \"ma\" block"},
      {"lma", "Linearized Monge-Ampere problem from the \"lma\" block"},
      {"sections", "Section geometry diagnostics"},
      {"verify", "Solve, then run the regularity checks into verify.json"},
      {"converge", "Manufactured-solution refinement study"},
      {"fixture", "List fixtures or sample one (\"fixture.name\")"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : abreu::kExitInvalidInput;
  }

  abreu::RunConfig config;
  try {
    if (!config_path.empty()) config = abreu::load_config(config_path);
  } catch (const abreu::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return abreu::exit_code(e.kind());
  }
  if (seed) config.seed = *seed;
  if (threads) config.threads = *threads;
  if (out_dir.empty()) out_dir = config.output;

  return abreu::run(config, app.get_subcommands().front()->get_name(), out_dir);
}

// aclab: run one experiment subcommand per config file.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aclab/cli.hpp"
#include "aclab/config.hpp"
#include "aclab/error.hpp"
#include "aclab/parallel.hpp"

int main(int argc, char** argv) {
  namespace cli = aclab::cli;
  CLI::App app{"aclab: discrete experiments for vector Allen-Cahn minimizers"};
  std::string subcommand;
  std::vector<std::string> configs;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  unsigned jobs = 1;

  app.add_option("subcommand", subcommand, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(cli::subcommands()));
  app.add_option("--config", configs, "Experiment config (YAML); repeat for a batch")->required();
  app.add_option("--out", out, "Output directory (default: the config's output)");
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--threads", threads, "Worker threads for solver sweeps (0 = all cores)");
  app.add_option("--jobs", jobs, "Experiments run concurrently in a batch")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  aclab::parallel::set_thread_count(threads);

  std::vector<cli::BatchJob> batch;
  for (const auto& path : configs) {
    try {
      aclab::ExperimentConfig cfg = aclab::load_config(path);
      if (seed) cfg.seed = *seed;
      std::string dir = out.empty() ? cfg.output : out;
      // Batches get one subdirectory per config.
      if (configs.size() > 1) dir = (std::filesystem::path(dir) / std::filesystem::path(path).stem()).string();
      batch.push_back({std::move(cfg), subcommand, dir});
    } catch (const aclab::ConfigError& e) {
      std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
      return cli::kExitConfig;
    }
  }

  int status = cli::kExitOk;
  const auto results = cli::run_batch(batch, jobs);
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    for (const auto& a : r.artifacts) std::printf("%s\n", a.c_str());
    if (r.exit_code != cli::kExitOk) {
      std::fprintf(stderr, "%s: %s\n", configs[k].c_str(), r.message.c_str());
      if (status == cli::kExitOk) status = r.exit_code;
    }
  }
  return status;
}

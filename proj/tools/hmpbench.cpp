// hmpbench — dataset generation, pre-training, closed-loop trials and reports.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hmp/bench.hpp"

namespace fs = std::filesystem;
using namespace hmp;
using namespace hmp::bench;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;

  ExperimentConfig load() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed) c.master_seed = *seed;
    if (workers) c.workers = *workers;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "experiment config (JSON); defaults otherwise")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", common.seed, "override master_seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"human motion prediction benchmark"};
  app.require_subcommand(1);

  Common common;
  std::string out, data, models, logs;

  auto* gen = app.add_subcommand("gen-data", "simulate the human-motion training dataset");
  add_common(gen, common);
  gen->add_option("--out", out, "output directory")->required();

  auto* train = app.add_subcommand("train", "pre-train the linear and network predictors");
  add_common(train, common);
  train->add_option("--data", data, "dataset CSV written by gen-data")->required();
  train->add_option("--out", out, "model directory")->required();

  auto* run = app.add_subcommand("run", "execute the closed-loop trial grid");
  add_common(run, common);
  run->add_option("--models", models, "model directory written by train")->required();
  run->add_option("--out", out, "trial-log directory")->required();
  run->add_option("--workers", common.workers, "parallel trials");

  auto* report = app.add_subcommand("report", "aggregate trial logs into tables");
  report->add_option("--logs", logs, "trial-log directory")->required();
  report->add_option("--out", out, "report directory")->required();

  auto* pipeline = app.add_subcommand("pipeline", "gen-data, train, run and report in one go");
  add_common(pipeline, common);
  pipeline->add_option("--out", out, "root output directory")->required();
  pipeline->add_option("--workers", common.workers, "parallel trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error[usage]: %s\n", e.what());
    return ArgumentError("").exit_code();
  }

  try {
    if (gen->parsed()) {
      const fs::path path = fs::path(out) / "dataset.csv";
      cmd_gen_data(common.load(), path);
      std::printf("wrote %s\n", path.c_str());
    } else if (train->parsed()) {
      cmd_train(common.load(), data, out);
      std::printf("wrote models to %s\n", out.c_str());
    } else if (run->parsed()) {
      const int n = cmd_run(common.load(), models, out);
      std::printf("ran %d trials into %s\n", n, out.c_str());
    } else if (report->parsed()) {
      const int n = cmd_report(logs, out);
      std::printf("aggregated %d logs into %s\n", n, out.c_str());
    } else if (pipeline->parsed()) {
      run_pipeline(common.load(), out);
      std::printf("pipeline finished under %s\n", out.c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error[%s]: %s\n", e.category(), e.what());
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error[io]: %s\n", e.what());
    return IoError("").exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[internal]: %s\n", e.what());
    return 1;
  }
  return 0;
}

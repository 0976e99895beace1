// fuzzyid: fuzzy model identification experiments on the benchmark plant.
//
//   fuzzyid <gen-data|rank|sweep|fit|ga|all> [--config FILE] [--out DIR] [--seed N] [--quiet]
//   fuzzyid fit --kind tsk --rules 24

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fuzzyid/config.hpp"
#include "fuzzyid/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace fuzzyid;

  CLI::App app{"Fuzzy model identification: rule ranking, criterion sweeps and GA tuning"};
  app.set_version_flag("--version", pipeline::kVersion);
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "master seed (overrides seed)");
  app.add_flag("--quiet", quiet, "suppress progress output");

  const std::pair<const char*, const char*> commands[] = {
      {"gen-data", "simulate the plant and write train.csv and test.csv"},
      {"rank", "rank the grid rules of the B-spline partition"},
      {"sweep", "constant and TSK criterion sweeps over the ranked rules"},
      {"fit", "fit, save and plot models of chosen sizes"},
      {"ga", "evolve Gaussian membership functions for a TSK model"},
      {"all", "run every stage in order"},
  };
  std::string kind_text;
  int rules = 0;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (std::string(name) == "fit") {
      sub->add_option("--kind", kind_text, "constant or tsk")->check(CLI::IsMember({"constant", "tsk"}));
      sub->add_option("--rules", rules, "number of ranked rules")->check(CLI::PositiveNumber);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : pipeline::kConfigError;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed) cfg.set_seed(*seed);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();

    const std::string command = app.get_subcommands().front()->get_name();
    std::optional<FitRequest> fit;
    if (!kind_text.empty() || rules > 0) {
      if (kind_text.empty() || rules <= 0) throw ConfigError("fit needs both --kind and --rules");
      fit = parse_fit_request(kind_text + ":" + std::to_string(rules));
    }
    pipeline::run_command(command, cfg, quiet, std::cout, fit);
  } catch (...) {
    return pipeline::exit_code_for_current_exception(std::cerr);
  }
  return pipeline::kOk;
}

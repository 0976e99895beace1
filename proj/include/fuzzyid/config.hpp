#pragma once

// Flat `key = value` experiment configuration with '#' comments. Unknown or
// repeated keys are rejected before any computation starts.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyid/estimation.hpp"
#include "fuzzyid/ga.hpp"
#include "fuzzyid/plant.hpp"
#include "fuzzyid/selection.hpp"

namespace fuzzyid {

struct FitRequest {
  ModelKind kind = ModelKind::tsk;
  int rules = 24;
};

struct ExperimentConfig {
  // dataset
  int n_train = 1000;
  int n_test = 200;
  std::uint64_t seed = 1;
  plant::TargetKind target = plant::TargetKind::y;
  int test_period = 25;
  // partition and ranking
  std::vector<int> n_mf = {6, 6};
  int mf_order = 4;
  double domain_margin = 0.01;
  FiringMode firing = FiringMode::normalized;
  int rank_retained = 0;  // 0: numerical rank
  PivotRule rank_pivot = PivotRule::dominant_subspace;
  // sweep
  std::vector<std::string> criteria = {"aic", "bdic", "sric"};
  ParamMode param_mode = ParamMode::rules;
  double bdic_alpha = 3.0;
  // fit
  std::vector<FitRequest> fit_models = {{ModelKind::constant, 36}, {ModelKind::tsk, 24}};
  // genetic algorithm (ga.seed mirrors seed)
  ga::GaConfig ga;
  std::vector<int> ga_n_mf = {6, 6};
  // output
  std::string output_dir = "out";

  int grid_rules() const;
  void validate() const;
  void set_seed(std::uint64_t s);
  std::vector<CriterionKind> criterion_kinds() const;
  /// Every key with its resolved value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

FitRequest parse_fit_request(const std::string& s);

}  // namespace fuzzyid

#pragma once

// Experiment commands behind the CLI. Every command reads its inputs from
// and writes its outputs to cfg.output_dir, and finishes by writing
// manifest-<command>.json (resolved config, stage timings, output digests).

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fuzzyid/config.hpp"
#include "fuzzyid/estimation.hpp"
#include "fuzzyid/selection.hpp"

namespace fuzzyid::pipeline {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
  kIoError = 5,
};

/// Maps the exception currently being handled to an exit code.
int exit_code_for_current_exception(std::ostream& err);

struct OutputFile {
  std::string name;
  bool digested = true;  // CSV and model files; SVG plots are derived and not digested
};

/// Mutable state of one CLI invocation.
class RunContext {
 public:
  RunContext(ExperimentConfig cfg, std::string command, bool quiet, std::ostream& log);

  const ExperimentConfig& config() const { return cfg_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }
  std::filesystem::path path(const std::string& name) const { return out_dir_ / name; }

  void info(const std::string& message) const;
  void record_output(const std::string& name, bool digested = true);
  void begin_stage(const std::string& name);
  void end_stage();
  /// Writes manifest-<command>.json atomically.
  void write_manifest() const;

 private:
  ExperimentConfig cfg_;
  std::string command_;
  bool quiet_;
  std::ostream& log_;
  std::filesystem::path out_dir_;
  std::vector<OutputFile> outputs_;
  std::vector<std::pair<std::string, double>> stages_;
  std::string current_stage_;
  std::chrono::steady_clock::time_point stage_start_;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// Shared building blocks, exposed for tests.

/// Per-input domains covering the training inputs plus the configured margin.
std::vector<Domain<double>> input_domains(const Dataset<double>& train, double margin);

/// Complete grid of B-spline rules over the given domains.
RuleBase<double> bspline_grid(const ExperimentConfig& cfg, const std::vector<Domain<double>>& domains,
                              ModelKind kind = ModelKind::constant);

/// Model fitted as a standalone rule base of the top-m ranked rules.
struct FittedModel {
  RuleBase<double> model;
  double sweep_sigma2 = 0;  // column-subset fit of the full firing matrix
  double train_mse = 0;     // standalone model, inference path, covered rows
  bool rank_deficient = false;
  int uncovered_train_rows = 0;  // outside every kept rule's support
};

FittedModel fit_ranked_model(const RuleBase<double>& grid, const FiringMatrix<double>& P,
                             const RuleRanking<double>& ranking, const Dataset<double>& train,
                             ModelKind kind, int m);

/// Model output for every row of `inputs`, each clamped into the model's
/// domains first; `clamped` receives the number of rows that needed it.
/// Without `uncovered` a row that fires no rule throws ZeroFiring; with it
/// such rows yield NaN and are counted.
Eigen::VectorXd predict(const RuleBase<double>& model, const Eigen::MatrixXd& inputs,
                        int* clamped = nullptr, int* uncovered = nullptr);

/// Mean squared error over the entries where `fitted` is not NaN.
double covered_mse(const Eigen::VectorXd& fitted, const Eigen::VectorXd& targets);

// Commands.
void cmd_gen_data(RunContext& ctx);
void cmd_rank(RunContext& ctx);
void cmd_sweep(RunContext& ctx);
void cmd_fit(RunContext& ctx, const std::vector<FitRequest>& requests);
void cmd_ga(RunContext& ctx);
void cmd_all(RunContext& ctx);

/// Runs a named command (gen-data, rank, sweep, fit, ga, all) and writes its
/// manifest. Exceptions propagate.
void run_command(const std::string& command, const ExperimentConfig& cfg, bool quiet,
                 std::ostream& log, const std::optional<FitRequest>& fit_override = std::nullopt);

}  // namespace fuzzyid::pipeline

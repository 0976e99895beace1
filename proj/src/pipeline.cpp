#include "fuzzyid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "fuzzyid/csv.hpp"
#include "fuzzyid/ga.hpp"
#include "fuzzyid/plant.hpp"
#include "fuzzyid/rule_base_io.hpp"
#include "fuzzyid/svg.hpp"

namespace fs = std::filesystem;

namespace fuzzyid::pipeline {

using io::format_double;

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

RunContext::RunContext(ExperimentConfig cfg, std::string command, bool quiet, std::ostream& log)
    : cfg_(std::move(cfg)), command_(std::move(command)), quiet_(quiet), log_(log),
      out_dir_(cfg_.output_dir) {
  cfg_.validate();
  std::error_code ec;
  fs::create_directories(out_dir_, ec);
  if (ec || !fs::is_directory(out_dir_))
    throw IoError("cannot create output directory " + out_dir_.string() + ": " + ec.message());
}

void RunContext::info(const std::string& message) const {
  if (!quiet_) log_ << message << '\n';
}

void RunContext::record_output(const std::string& name, bool digested) {
  for (auto& o : outputs_)
    if (o.name == name) {
      o.digested = digested;
      return;
    }
  outputs_.push_back({name, digested});
}

void RunContext::begin_stage(const std::string& name) {
  current_stage_ = name;
  stage_start_ = std::chrono::steady_clock::now();
}

void RunContext::end_stage() {
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - stage_start_;
  stages_.emplace_back(current_stage_, dt.count());
  current_stage_.clear();
}

std::string sha256_file(const fs::path& path) {
  const std::string bytes = io::read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed for " + path.string());
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

void RunContext::write_manifest() const {
  nlohmann::ordered_json j;
  j["tool"] = "fuzzyid";
  j["version"] = kVersion;
  j["command"] = command_;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["finished_at"] = stamp;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg_.resolved()) config[k] = v;
  j["config"] = config;
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const auto& [name, seconds] : stages_) stages.push_back({{"stage", name}, {"seconds", seconds}});
  j["stages"] = stages;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& o : outputs_) {
    nlohmann::ordered_json entry;
    entry["file"] = o.name;
    entry["bytes"] = fs::file_size(path(o.name));
    if (o.digested)
      entry["sha256"] = sha256_file(path(o.name));
    else
      entry["sha256"] = nullptr;
    outputs.push_back(entry);
  }
  j["outputs"] = outputs;
  io::write_file_atomic(path("manifest-" + command_ + ".json"), j.dump(2) + "\n");
}

namespace {

void write_svg(RunContext& ctx, const std::string& name, const std::string& content) {
  io::write_file_atomic(ctx.path(name), content);
  ctx.record_output(name, false);
}

void write_table(RunContext& ctx, const std::string& name, const io::Table& table) {
  io::write_table(ctx.path(name), table);
  ctx.record_output(name);
}

plant::PlantDataset load_plant(const RunContext& ctx, const std::string& name) {
  const fs::path p = ctx.path(name);
  if (!fs::exists(p)) throw DataError(p.string() + " not found; run gen-data first");
  return io::read_plant_csv(p);
}

// Training data, partition and firing matrix shared by rank, sweep and fit.
struct GridSetup {
  plant::PlantDataset train_raw;
  Dataset<double> train;
  std::vector<Domain<double>> domains;
  std::optional<RuleBase<double>> grid;
  FiringMatrix<double> P;
};

GridSetup grid_setup(const RunContext& ctx) {
  const auto& cfg = ctx.config();
  GridSetup s;
  s.train_raw = load_plant(ctx, "train.csv");
  s.train = s.train_raw.dataset(cfg.target);
  if (s.train.dims() != static_cast<Eigen::Index>(cfg.n_mf.size()))
    throw ConfigError("n_mf lists " + std::to_string(cfg.n_mf.size()) + " inputs, data has " +
                      std::to_string(s.train.dims()));
  s.domains = input_domains(s.train, cfg.domain_margin);
  s.grid.emplace(bspline_grid(cfg, s.domains));
  s.P = assemble_firing_matrix(*s.grid, s.train, cfg.firing);
  return s;
}

RuleRanking<double> compute_ranking(const RunContext& ctx, const FiringMatrix<double>& P) {
  RankOptions opts;
  opts.pivot = ctx.config().rank_pivot;
  if (ctx.config().rank_retained > 0) opts.retained = ctx.config().rank_retained;
  return rank_rules(P, opts);
}

io::Table ranking_table(const RuleRanking<double>& r) {
  io::Table t;
  t.comments = {"retained=" + std::to_string(r.retained),
                "rule_position is 1-based in grid order (first input slowest)"};
  t.header = {"rank", "rule_position", "singular_value"};
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    t.rows.push_back({std::to_string(i + 1), std::to_string(r.order[i] + 1),
                      k < r.singular_values.size() ? format_double(r.singular_values(k)) : "0"});
  }
  return t;
}

// The ranking written by `rank`, or a fresh one when the file is absent.
RuleRanking<double> ranking_for(const RunContext& ctx, const FiringMatrix<double>& P) {
  const fs::path p = ctx.path("ranking.csv");
  if (!fs::exists(p)) {
    ctx.info("ranking.csv absent, ranking inline");
    return compute_ranking(ctx, P);
  }
  const io::Table t = io::read_table(p);
  RuleRanking<double> r;
  const std::size_t pos = t.column("rule_position"), sv = t.column("singular_value");
  r.singular_values.resize(static_cast<Eigen::Index>(t.rows.size()));
  std::vector<bool> seen(static_cast<std::size_t>(P.rules()), false);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const long long j = io::parse_int(t.rows[i].at(pos)) - 1;
    if (j < 0 || j >= P.rules() || seen[static_cast<std::size_t>(j)])
      throw DataError(p.string() + " is not a permutation of the current rule grid; rerun rank");
    seen[static_cast<std::size_t>(j)] = true;
    r.order.push_back(static_cast<int>(j));
    r.singular_values(static_cast<Eigen::Index>(i)) = io::parse_double(t.rows[i].at(sv));
  }
  if (static_cast<Eigen::Index>(r.order.size()) != P.rules())
    throw DataError(p.string() + " has " + std::to_string(r.order.size()) + " rules, grid has " +
                    std::to_string(P.rules()) + "; rerun rank");
  for (const auto& c : t.comments)
    if (c.rfind("retained=", 0) == 0) r.retained = io::parse_int(c.substr(9));
  return r;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

io::Table sweep_table(const SweepResult<double>& s, double alpha) {
  io::Table t;
  t.comments = {std::string("model=") + to_string(s.model),
                std::string("param_mode=") + to_string(s.mode),
                "bdic_alpha=" + format_double(alpha)};
  t.header = {"m", "sigma2"};
  for (const auto& k : s.kinds) t.header.push_back(criterion_name(k));
  t.header.push_back("chosen_by");
  for (const auto& row : s.rows) {
    std::vector<std::string> r = {std::to_string(row.m), format_double(row.sigma2)};
    for (double v : row.scores) r.push_back(format_double(v));
    r.push_back(join(s.chosen_by(row.m), ";"));
    t.rows.push_back(std::move(r));
  }
  return t;
}

svg::Chart criteria_chart(const SweepResult<double>& s) {
  svg::Chart c;
  c.title = std::string("Information criteria, ") + to_string(s.model) + " model";
  c.x_label = "number of rules";
  c.y_label = "criterion value";
  for (std::size_t k = 0; k < s.kinds.size(); ++k) {
    svg::Series series{criterion_name(s.kinds[k]), {}, {}, true, true};
    for (const auto& row : s.rows) {
      if (!std::isfinite(row.scores[k])) continue;
      series.x.push_back(static_cast<double>(row.m));
      series.y.push_back(row.scores[k]);
    }
    c.series.push_back(std::move(series));
  }
  return c;
}

double safe_log(double v) { return v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity(); }

std::vector<svg::Series> trajectory_series(const RuleBase<double>& model, const std::string& label) {
  const auto& d = model.domains();
  const std::vector<plant::PlantState> starts = {
      {d[0].lo + 0.8 * d[0].length(), d[1].lo + 0.8 * d[1].length()},
      {d[0].lo + 0.2 * d[0].length(), d[1].lo + 0.7 * d[1].length()}};
  std::vector<svg::Series> out;
  for (const auto& s0 : starts) {
    const std::string from = "(" + format_double(std::round(s0.y1 * 100) / 100) + ", " +
                             format_double(std::round(s0.y2 * 100) / 100) + ")";
    // Points are (y(k-2), y(k-1)) states along the unforced recursion.
    svg::Series truth{"plant from " + from, {s0.y2}, {s0.y1}, false, true};
    svg::Series approx{label + " from " + from, {s0.y2}, {s0.y1}, true, true};
    plant::PlantState a = s0, b = s0;
    Eigen::Vector2d x;
    for (int k = 0; k < 30; ++k) {
      const double ya = plant::unforced_f(a.y1, a.y2);
      a = {ya, a.y1};
      truth.x.push_back(a.y2);
      truth.y.push_back(a.y1);
      x << d[0].clamp(b.y1), d[1].clamp(b.y2);
      if (!(model.firing_strengths(x).sum() > 0)) break;  // left the kept rules' support
      const double yb = infer(model, x);
      b = {yb, b.y1};
      approx.x.push_back(b.y2);
      approx.y.push_back(b.y1);
    }
    out.push_back(std::move(truth));
    out.push_back(std::move(approx));
  }
  return out;
}

std::string fit_stem(ModelKind kind, int m) {
  return std::string("fit_") + to_string(kind) + "_" + std::to_string(m);
}

}  // namespace

std::vector<Domain<double>> input_domains(const Dataset<double>& train, double margin) {
  std::vector<Domain<double>> out;
  for (Eigen::Index j = 0; j < train.dims(); ++j) out.push_back(data_domain(train.inputs.col(j), margin));
  return out;
}

RuleBase<double> bspline_grid(const ExperimentConfig& cfg, const std::vector<Domain<double>>& domains,
                              ModelKind kind) {
  if (domains.size() != cfg.n_mf.size()) throw ConfigError("n_mf must list one count per input");
  std::vector<std::vector<MembershipFunction<double>>> terms;
  for (std::size_t j = 0; j < domains.size(); ++j)
    terms.push_back(build_bspline_partition(domains[j], cfg.n_mf[j], cfg.mf_order));
  return make_grid_rule_base(std::move(terms), domains, kind);
}

Eigen::VectorXd predict(const RuleBase<double>& model, const Eigen::MatrixXd& inputs, int* clamped,
                        int* uncovered) {
  Eigen::VectorXd out(inputs.rows());
  Eigen::VectorXd x(inputs.cols());
  int n_clamped = 0, n_uncovered = 0;
  for (Eigen::Index h = 0; h < inputs.rows(); ++h) {
    bool moved = false;
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
      const auto& d = model.domains()[static_cast<std::size_t>(j)];
      x(j) = d.clamp(inputs(h, j));
      moved = moved || x(j) != inputs(h, j);
    }
    n_clamped += moved;
    if (!uncovered) {
      try {
        out(h) = infer(model, x);
      } catch (const ZeroFiring&) {
        throw ZeroFiring(static_cast<std::size_t>(h));
      }
    } else if (model.firing_strengths(x).sum() > 0) {
      out(h) = infer(model, x);
    } else {
      out(h) = std::numeric_limits<double>::quiet_NaN();
      ++n_uncovered;
    }
  }
  if (clamped) *clamped = n_clamped;
  if (uncovered) *uncovered = n_uncovered;
  return out;
}

double covered_mse(const Eigen::VectorXd& fitted, const Eigen::VectorXd& targets) {
  if (fitted.size() != targets.size()) throw DimensionMismatch("covered_mse: length mismatch");
  double sum = 0;
  Eigen::Index n = 0;
  for (Eigen::Index h = 0; h < fitted.size(); ++h)
    if (!std::isnan(fitted(h))) sum += (fitted(h) - targets(h)) * (fitted(h) - targets(h)), ++n;
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

FittedModel fit_ranked_model(const RuleBase<double>& grid, const FiringMatrix<double>& P,
                             const RuleRanking<double>& ranking, const Dataset<double>& train,
                             ModelKind kind, int m) {
  detail::check_model_size(m, P.rules(), ranking.order.size());
  double sweep_sigma2 = 0;
  bool deficient = false;
  if (kind == ModelKind::constant) {
    const auto fit = solve_constant_consequents(P, train.targets, m, ranking);
    sweep_sigma2 = residual_variance(fit.fitted, train.targets);
  } else {
    const auto fit = solve_tsk_consequents(P, train, m, ranking);
    sweep_sigma2 = residual_variance(fit.fitted, train.targets);
  }

  // Standalone model: the kept rules renormalize among themselves, so the
  // consequents are refit on the model's own firing matrix.
  const std::span<const int> keep(ranking.order.data(), static_cast<std::size_t>(m));
  std::vector<Consequent<double>> zero;
  for (int i = 0; i < m; ++i) {
    if (kind == ModelKind::constant)
      zero.push_back(ConstantConsequent<double>{0.0});
    else
      zero.push_back(LinearConsequent<double>{0.0, Eigen::VectorXd::Zero(train.dims())});
  }
  const RuleBase<double> shell = select_rules(grid, keep, zero);
  // Training rows outside every kept rule's support carry no information
  // about the kept consequents and are left out of the refit.
  std::vector<Eigen::Index> rows;
  for (Eigen::Index h = 0; h < train.size(); ++h)
    if (shell.firing_strengths(Eigen::VectorXd(train.inputs.row(h).transpose())).sum() > 0) rows.push_back(h);
  if (rows.empty())
    throw DataError("the top " + std::to_string(m) + " rules cover no training sample; choose a larger m");
  Dataset<double> covered{train.inputs(rows, Eigen::all), train.targets(rows)};
  const FiringMatrix<double> own = assemble_firing_matrix(shell, covered, FiringMode::normalized);
  RuleRanking<double> identity;
  identity.order.resize(static_cast<std::size_t>(m));
  std::iota(identity.order.begin(), identity.order.end(), 0);
  std::vector<Consequent<double>> consequents;
  if (kind == ModelKind::constant) {
    const auto fit = solve_constant_consequents(own, covered.targets, m, identity);
    deficient = fit.rank_deficient;
    for (Eigen::Index i = 0; i < m; ++i) consequents.push_back(ConstantConsequent<double>{fit.consequents(i)});
  } else {
    const auto fit = solve_tsk_consequents(own, covered, m, identity);
    deficient = fit.rank_deficient;
    for (const auto& c : fit.consequents) consequents.push_back(c);
  }
  FittedModel out{select_rules(grid, keep, std::move(consequents)), sweep_sigma2, 0, deficient};
  out.uncovered_train_rows = static_cast<int>(train.size()) - static_cast<int>(rows.size());
  out.train_mse = residual_variance(predict(out.model, covered.inputs), covered.targets);
  return out;
}

void cmd_gen_data(RunContext& ctx) {
  const auto& cfg = ctx.config();
  ctx.begin_stage("gen-data");
  const auto train = plant::gen_training(cfg.n_train, cfg.seed);
  const auto test = plant::gen_test(cfg.n_test, cfg.test_period);
  io::write_plant_csv(ctx.path("train.csv"), train);
  ctx.record_output("train.csv");
  io::write_plant_csv(ctx.path("test.csv"), test);
  ctx.record_output("test.csv");
  ctx.end_stage();
  ctx.info("wrote train.csv (" + std::to_string(train.size()) + " rows) and test.csv (" +
           std::to_string(test.size()) + " rows)");
}

void cmd_rank(RunContext& ctx) {
  ctx.begin_stage("rank");
  const GridSetup s = grid_setup(ctx);
  const RuleRanking<double> r = compute_ranking(ctx, s.P);
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < s.P.rules(); ++i) labels.push_back("r" + std::to_string(i + 1));
  io::write_matrix_csv(ctx.path("firing_matrix.csv"), s.P.values, labels);
  ctx.record_output("firing_matrix.csv");
  write_table(ctx, "ranking.csv", ranking_table(r));

  std::vector<std::string> sv_labels;
  std::vector<double> sv;
  for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) {
    sv_labels.push_back(std::to_string(i + 1));
    sv.push_back(r.singular_values(i));
  }
  write_svg(ctx, "singular_values.svg",
            svg::bar_chart("Singular values of the firing matrix", "index", "singular value",
                           sv_labels, sv));
  ctx.end_stage();

  std::string top;
  for (std::size_t i = 0; i < std::min<std::size_t>(10, r.order.size()); ++i)
    top += (i ? " " : "") + std::to_string(r.order[i] + 1);
  ctx.info("ranked " + std::to_string(r.order.size()) + " rules (retained " +
           std::to_string(r.retained) + " singular vectors); top rules: " + top);
}

void cmd_sweep(RunContext& ctx) {
  const auto& cfg = ctx.config();
  ctx.begin_stage("sweep");
  const GridSetup s = grid_setup(ctx);
  const RuleRanking<double> r = ranking_for(ctx, s.P);
  const auto kinds = cfg.criterion_kinds();
  const auto constant = sweep_models(r, s.P, s.train, ModelKind::constant, kinds, cfg.param_mode);
  const auto tsk = sweep_models(r, s.P, s.train, ModelKind::tsk, kinds, cfg.param_mode);
  write_table(ctx, "sweep_constant.csv", sweep_table(constant, cfg.bdic_alpha));
  write_table(ctx, "sweep_tsk.csv", sweep_table(tsk, cfg.bdic_alpha));

  io::Table cmp;
  cmp.comments = {"natural log of training MSE"};
  cmp.header = {"m", "log_mse_constant", "log_mse_tsk"};
  svg::Series sc{"constant", {}, {}, true, true}, st{"TSK", {}, {}, true, true};
  for (std::size_t i = 0; i < constant.rows.size(); ++i) {
    const double lc = safe_log(constant.rows[i].sigma2), lt = safe_log(tsk.rows[i].sigma2);
    cmp.rows.push_back({std::to_string(constant.rows[i].m), format_double(lc), format_double(lt)});
    const double m = static_cast<double>(constant.rows[i].m);
    if (std::isfinite(lc)) sc.x.push_back(m), sc.y.push_back(lc);
    if (std::isfinite(lt)) st.x.push_back(m), st.y.push_back(lt);
  }
  write_table(ctx, "mse_comparison.csv", cmp);
  write_svg(ctx, "criteria_constant.svg", svg::line_chart(criteria_chart(constant)));
  write_svg(ctx, "criteria_tsk.svg", svg::line_chart(criteria_chart(tsk)));
  write_svg(ctx, "mse_comparison.svg",
            svg::line_chart({"Training MSE, constant vs TSK", "number of rules", "log MSE", {sc, st}}));
  ctx.end_stage();

  for (const auto* sw : {&constant, &tsk}) {
    std::string line = std::string(to_string(sw->model)) + " model, chosen m:";
    for (std::size_t k = 0; k < sw->kinds.size(); ++k)
      line += " " + criterion_name(sw->kinds[k]) + "=" + std::to_string(sw->chosen[k]);
    ctx.info(line);
  }
}

void cmd_fit(RunContext& ctx, const std::vector<FitRequest>& requests) {
  const auto& cfg = ctx.config();
  ctx.begin_stage("fit");
  const GridSetup s = grid_setup(ctx);
  const RuleRanking<double> r = ranking_for(ctx, s.P);
  const plant::PlantDataset test = load_plant(ctx, "test.csv");

  io::Table summary;
  summary.comments = {std::string("target=") + plant::to_string(cfg.target),
                      "test_mse compares the one-step plant output prediction model(x)+u(k) with y(k)",
                      "test_f_mse compares model(x) with f(x); both use inputs clamped into the model domains",
                      "rows outside every kept rule's support are uncovered: excluded from the MSEs, nan in the test CSV"};
  summary.header = {"kind",       "rules",      "sweep_sigma2",      "train_mse",
                    "test_mse",   "test_f_mse", "clamped_test_rows", "uncovered_train_rows",
                    "uncovered_test_rows", "rank_deficient"};
  for (const auto& req : requests) {
    const FittedModel fm = fit_ranked_model(*s.grid, s.P, r, s.train, req.kind, req.rules);
    const std::string stem = fit_stem(req.kind, req.rules);
    io::save_rule_base(ctx.path(stem + "_model.txt"), fm.model);
    ctx.record_output(stem + "_model.txt");

    int clamped = 0, uncovered = 0;
    const Eigen::VectorXd fhat = predict(fm.model, test.inputs, &clamped, &uncovered);
    const Eigen::VectorXd yhat = fhat + test.u;
    const double test_mse = covered_mse(yhat, test.y_targets);
    const double test_f_mse = covered_mse(fhat, test.f_targets);

    io::Table pred;
    pred.header = {"k", "y_km1", "y_km2", "u", "y", "y_model", "f", "f_model"};
    svg::Series plant_y{"plant", {}, {}, false, true}, model_y{"model", {}, {}, false, true};
    for (Eigen::Index h = 0; h < test.size(); ++h) {
      const double k = static_cast<double>(h + 2);
      pred.rows.push_back({std::to_string(h + 2), format_double(test.inputs(h, 0)),
                           format_double(test.inputs(h, 1)), format_double(test.u(h)),
                           format_double(test.y_targets(h)), format_double(yhat(h)),
                           format_double(test.f_targets(h)), format_double(fhat(h))});
      plant_y.x.push_back(k);
      plant_y.y.push_back(test.y_targets(h));
      if (std::isnan(yhat(h))) continue;
      model_y.x.push_back(k);
      model_y.y.push_back(yhat(h));
    }
    write_table(ctx, stem + "_test.csv", pred);
    const std::string title = std::string(req.kind == ModelKind::tsk ? "TSK" : "Constant") +
                              " model with " + std::to_string(req.rules) + " rules";
    write_svg(ctx, stem + "_overlay.svg",
              svg::line_chart({"Plant and " + title + " (test signal)", "k", "output", {plant_y, model_y}}));
    write_svg(ctx, stem + "_trajectory.svg",
              svg::line_chart({"Unforced trajectories, plant and " + title, "y(k-2)", "y(k-1)",
                               trajectory_series(fm.model, "model")}));

    summary.rows.push_back({to_string(req.kind), std::to_string(req.rules), format_double(fm.sweep_sigma2),
                            format_double(fm.train_mse), format_double(test_mse),
                            format_double(test_f_mse), std::to_string(clamped),
                            std::to_string(fm.uncovered_train_rows), std::to_string(uncovered),
                            fm.rank_deficient ? "1" : "0"});
    ctx.info(std::string(to_string(req.kind)) + " m=" + std::to_string(req.rules) +
             ": train MSE " + format_double(fm.train_mse) + " (sweep " +
             format_double(fm.sweep_sigma2) + "), test MSE " + format_double(test_mse) +
             ", test f MSE " + format_double(test_f_mse) +
             (clamped ? ", " + std::to_string(clamped) + " test rows clamped" : "") +
             (fm.uncovered_train_rows + uncovered
                  ? ", uncovered rows: " + std::to_string(fm.uncovered_train_rows) + " train, " +
                        std::to_string(uncovered) + " test"
                  : ""));
  }
  write_table(ctx, "fit_summary.csv", summary);
  ctx.end_stage();
}

void cmd_ga(RunContext& ctx) {
  const auto& cfg = ctx.config();
  ctx.begin_stage("ga");
  const plant::PlantDataset train_raw = load_plant(ctx, "train.csv");
  const Dataset<double> train = train_raw.dataset(cfg.target);
  ga::GenomeLayout layout{input_domains(train, cfg.domain_margin), cfg.ga_n_mf};
  const auto result = ga::evolve(train, cfg.ga, layout, [&](const ga::TraceRow& row) {
    if (row.generation == 1 || row.generation % 10 == 0)
      ctx.info("generation " + std::to_string(row.generation) + ": best fitness " +
               format_double(row.best_fitness) + ", lowest MSE seen " + format_double(row.best_mse));
  });
  ctx.end_stage();

  io::Table trace;
  trace.comments = {"best_fitness: best-ever fitness; best_mse: lowest MSE evaluated so far",
                    "best_penalty: overlap penalty of the best-ever individual; mean_fitness: current generation"};
  trace.header = {"generation", "best_fitness", "best_mse", "best_penalty", "mean_fitness"};
  for (const auto& row : result.trace)
    trace.rows.push_back({std::to_string(row.generation), format_double(row.best_fitness),
                          format_double(row.best_mse), format_double(row.best_penalty),
                          format_double(row.mean_fitness)});
  write_table(ctx, "ga_trace.csv", trace);
  const RuleBase<double> model = ga::model_from(result.best, layout);
  io::save_rule_base(ctx.path("ga_model.txt"), model);
  ctx.record_output("ga_model.txt");

  // Grid-rule TSK reference across rule counts.
  ctx.begin_stage("ga-compare");
  const auto grid = bspline_grid(cfg, layout.domains);
  const auto P = assemble_firing_matrix(grid, train, cfg.firing);
  const auto r = ranking_for(ctx, P);
  const auto tsk = sweep_models(r, P, train, ModelKind::tsk, {}, cfg.param_mode);
  const double ga_mse = residual_variance(predict(model, train.inputs), train.targets);
  const int ga_rules = static_cast<int>(model.size());

  io::Table cmp;
  cmp.comments = {"natural log of training MSE"};
  cmp.header = {"model", "rules", "log_mse"};
  svg::Series grid_series{"grid-rule TSK", {}, {}, true, true};
  for (const auto& row : tsk.rows) {
    cmp.rows.push_back({"grid_tsk", std::to_string(row.m), format_double(safe_log(row.sigma2))});
    if (row.sigma2 > 0) {
      grid_series.x.push_back(static_cast<double>(row.m));
      grid_series.y.push_back(std::log(row.sigma2));
    }
  }
  cmp.rows.push_back({"ga_tsk", std::to_string(ga_rules), format_double(safe_log(ga_mse))});
  write_table(ctx, "ga_comparison.csv", cmp);
  svg::Series ga_series{"evolutionary TSK", {static_cast<double>(ga_rules)}, {safe_log(ga_mse)}, true, false};
  write_svg(ctx, "ga_comparison.svg",
            svg::line_chart({"Grid-rule TSK vs evolutionary TSK", "number of rules", "log MSE",
                             {grid_series, ga_series}}));
  svg::Series trace_series{"best MSE", {}, {}, false, true};
  for (const auto& row : result.trace) {
    trace_series.x.push_back(row.generation);
    trace_series.y.push_back(row.best_mse);
  }
  write_svg(ctx, "ga_trace.svg", svg::line_chart({"GA best training MSE", "generation", "MSE", {trace_series}}));
  ctx.end_stage();

  const auto same = std::find_if(tsk.rows.begin(), tsk.rows.end(),
                                 [&](const auto& row) { return row.m == ga_rules; });
  std::string report = "GA TSK (" + std::to_string(ga_rules) + " rules, fittest individual) training MSE " + format_double(ga_mse);
  if (same != tsk.rows.end())
    report += std::string(", grid TSK with ") + std::to_string(ga_rules) + " rules " +
              format_double(same->sigma2) + (ga_mse < same->sigma2 ? ": GA below grid" : ": GA not below grid");
  ctx.info(report);
}

void cmd_all(RunContext& ctx) {
  cmd_gen_data(ctx);
  cmd_rank(ctx);
  cmd_sweep(ctx);
  cmd_fit(ctx, ctx.config().fit_models);
  cmd_ga(ctx);
}

void run_command(const std::string& command, const ExperimentConfig& cfg, bool quiet, std::ostream& log,
                 const std::optional<FitRequest>& fit_override) {
  RunContext ctx(cfg, command, quiet, log);
  if (command == "gen-data")
    cmd_gen_data(ctx);
  else if (command == "rank")
    cmd_rank(ctx);
  else if (command == "sweep")
    cmd_sweep(ctx);
  else if (command == "fit")
    cmd_fit(ctx, fit_override ? std::vector<FitRequest>{*fit_override} : cfg.fit_models);
  else if (command == "ga")
    cmd_ga(ctx);
  else if (command == "all")
    cmd_all(ctx);
  else
    throw ConfigError("unknown command " + command);
  ctx.write_manifest();
}

}  // namespace fuzzyid::pipeline

// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion with its
// measured runtime and budget; exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzyid/estimation.hpp"
#include "fuzzyid/ga.hpp"
#include "fuzzyid/linalg.hpp"
#include "fuzzyid/pipeline.hpp"
#include "fuzzyid/plant.hpp"
#include "fuzzyid/selection.hpp"

using namespace fuzzyid;
using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace fs = std::filesystem;
using LD = long double;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates relative-error checks and failure notes for one criterion.
struct Checker {
  int cases = 0;
  int failures = 0;
  double worst = 0;
  std::string first_failure;

  void rel(double got, LD want, double tol, const std::string& what) {
    ++cases;
    const double scale = std::max<double>(std::fabs(static_cast<double>(want)), 1e-300);
    const double err = std::fabs(static_cast<double>(got - want)) / scale;
    const bool ok = std::isfinite(got) && err <= tol;
    if (want != 0) worst = std::max(worst, err);
    if (!ok) fail(what + ": got " + fmt(got) + ", want " + fmt(static_cast<double>(want)));
  }
  void abs(double got, double want, double tol, const std::string& what) {
    ++cases;
    if (!(std::fabs(got - want) <= tol)) fail(what + ": got " + fmt(got) + ", want " + fmt(want));
  }
  void that(bool ok, const std::string& what) {
    ++cases;
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  static std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  }
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- AC1

LD oracle_f(LD a, LD b) { return a * b * (a - 0.5L) / (1 + a * a + b * b); }

LD gauss(LD x, LD c, LD w) {
  const LD z = (x - c) / w;
  return std::exp(-0.5L * z * z);
}

Outcome ac1() {
  Checker crit, plantf, inf, fit;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0, 1);

  // criterion_value against log(s2) + penalty * m / N
  crit.rel(criterion_value<double>(Aic{}, 0.25, 12, 1000), std::log(0.25L) + 0.024L, 1e-12, "AIC example");
  crit.abs(criterion_value<double>(Aic{}, 0.25, 12, 1000), -1.362294, 5e-7, "AIC example, 6 digits");
  for (int t = 0; t < 30; ++t) {
    const double s2 = std::exp(-6 + 8 * u(rng));
    const int m = 1 + static_cast<int>(u(rng) * 72);
    const int n = 10 + static_cast<int>(u(rng) * 5000);
    const double alpha = 0.5 + 5 * u(rng);
    const LD base = std::log(static_cast<LD>(s2));
    crit.rel(criterion_value<double>(Aic{}, s2, m, n), base + 2.0L * m / n, 1e-12, "AIC");
    crit.rel(criterion_value<double>(Bdic{alpha}, s2, m, n), base + static_cast<LD>(alpha) * m / n, 1e-12, "BDIC");
    crit.rel(criterion_value<double>(Sric{}, s2, m, n), base + std::log(static_cast<LD>(n)) * m / n, 1e-12,
             "SRIC");
  }

  // unforced component
  plantf.rel(plant::unforced_f(1, 1), 1.0L / 6, 1e-12, "f(1,1)");
  plantf.abs(plant::unforced_f(1, 1), 0.1666667, 5e-8, "f(1,1), 7 digits");
  plantf.that(plant::unforced_f(0.5, 3.7) == 0.0, "f(0.5, y2) = 0");
  plantf.that(plant::unforced_f(0, -2) == 0.0, "f(0, y2) = 0");
  for (int t = 0; t < 40; ++t) {
    const double a = -3 + 6 * u(rng), b = -3 + 6 * u(rng);
    plantf.rel(plant::unforced_f(a, b), oracle_f(a, b), 1e-12, "f(a,b)");
  }

  // constant and TSK inference on random two-input Gaussian rule bases
  {
    using MF = MembershipFunction<double>;
    const std::vector<MF> sym = {LeftTriangle<double>{0, 1}, RightTriangle<double>{0, 1}};
    const RuleBase<double> quarter({sym}, {Domain<double>{0, 1}},
                                   {{{0}, ConstantConsequent<double>{2}}, {{1}, ConstantConsequent<double>{-2}}});
    inf.rel(infer(quarter, VectorXd::Constant(1, 0.25)), 1.0L, 1e-12, "v=[0.75,0.25], c=[2,-2]");
    const std::vector<MF> same = {GaussianCW<double>{0, 10}, GaussianCW<double>{0, 10}};
    VectorXd one(1), minus(1);
    one << 1;
    minus << -1;
    const RuleBase<double> cancel({same}, {Domain<double>{-10, 10}},
                                  {{{0}, LinearConsequent<double>{0, one}}, {{1}, LinearConsequent<double>{0, minus}}});
    inf.abs(infer(cancel, VectorXd::Constant(1, 4.0)), 0.0, 1e-15, "symmetric cancellation");
  }
  for (int t = 0; t < 30; ++t) {
    const int n1 = 2 + t % 3, n2 = 1 + t % 4;
    std::vector<std::vector<MembershipFunction<double>>> terms(2);
    std::vector<std::vector<std::pair<double, double>>> cw(2);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < (j ? n2 : n1); ++k) {
        const double c = -1 + 2 * u(rng), w = 0.3 + u(rng);
        terms[j].push_back(GaussianCW<double>{c, w});
        cw[j].push_back({c, w});
      }
    const VectorXd x = VectorXd::Random(2);
    std::vector<Rule<double>> crules, trules;
    std::vector<LD> tau, cval, tval;
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n2; ++b) {
        const double c0 = -2 + 4 * u(rng), s1 = -2 + 4 * u(rng), s2 = -2 + 4 * u(rng);
        VectorXd slopes(2);
        slopes << s1, s2;
        crules.push_back({{a, b}, ConstantConsequent<double>{c0}});
        trules.push_back({{a, b}, LinearConsequent<double>{c0, slopes}});
        tau.push_back(gauss(x(0), cw[0][a].first, cw[0][a].second) * gauss(x(1), cw[1][b].first, cw[1][b].second));
        cval.push_back(c0);
        tval.push_back(c0 + static_cast<LD>(s1) * x(0) + static_cast<LD>(s2) * x(1));
      }
    LD sum = 0, cnum = 0, tnum = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) sum += tau[i], cnum += tau[i] * cval[i], tnum += tau[i] * tval[i];
    const std::vector<Domain<double>> doms = {{-3, 3}, {-3, 3}};
    inf.rel(infer(RuleBase<double>(terms, doms, crules), x), cnum / sum, 1e-12, "constant inference");
    inf.rel(infer(RuleBase<double>(terms, doms, trules), x), tnum / sum, 1e-12, "TSK inference");
  }

  // fitness 1 / (MSE + beta * PF + eps) with an independent TSK fit and an
  // analytic count of the overlap samples
  for (int t = 0; t < 25; ++t) {
    const int dims = 1 + t % 2;
    ga::GenomeLayout layout;
    for (int j = 0; j < dims; ++j) layout.domains.push_back({-1, 1}), layout.n_mf.push_back(2);
    ga::Chromosome ch;
    ch.genes.resize(layout.length());
    for (Eigen::Index i = 0; i < ch.genes.size(); i += 2) {
      ch.genes(i) = -1 + 2 * u(rng);
      ch.genes(i + 1) = 0.3 + 0.7 * u(rng);
    }
    const int n = 40;
    Dataset<double> ds{MatrixXd(n, dims), VectorXd(n)};
    for (int h = 0; h < n; ++h) {
      for (int j = 0; j < dims; ++j) ds.inputs(h, j) = -1 + 2 * u(rng);
      ds.targets(h) = std::sin(3 * ds.inputs(h, 0)) + (dims > 1 ? ds.inputs(h, 1) * ds.inputs(h, 0) : 0.0);
    }
    ga::GaConfig cfg;
    cfg.beta = 0.05 + 0.3 * u(rng);
    cfg.xi = 0.3 + 0.5 * u(rng);
    ga::Individual ind;
    ind.chromosome = ch;
    const auto e = ga::evaluate(ind, ds, cfg, layout);

    // normalized Gaussian firing, rule (a,b) in row-major grid order
    const int rules = dims == 1 ? 2 : 4, p = dims;
    Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic> R(n, rules * (p + 1));
    for (int h = 0; h < n; ++h) {
      std::vector<LD> w(static_cast<std::size_t>(rules));
      LD total = 0;
      for (int r = 0; r < rules; ++r) {
        const int a = dims == 1 ? r : r / 2, b = r % 2;
        LD v = gauss(ds.inputs(h, 0), ch.genes(2 * a), ch.genes(2 * a + 1));
        if (dims > 1) v *= gauss(ds.inputs(h, 1), ch.genes(4 + 2 * b), ch.genes(4 + 2 * b + 1));
        w[static_cast<std::size_t>(r)] = v;
        total += v;
      }
      for (int r = 0; r < rules; ++r) {
        const LD v = w[static_cast<std::size_t>(r)] / total;
        R(h, r * (p + 1)) = v;
        for (int j = 0; j < p; ++j) R(h, r * (p + 1) + 1 + j) = v * ds.inputs(h, j);
      }
    }
    const Eigen::Matrix<LD, Eigen::Dynamic, 1> y = ds.targets.cast<LD>();
    const Eigen::Matrix<LD, Eigen::Dynamic, 1> theta = (R.transpose() * R).ldlt().solve(R.transpose() * y);
    const LD mse = (R * theta - y).squaredNorm() / n;

    // both MFs >= xi exactly on an interval; count midpoints inside it
    LD pf = 0;
    const LD s = std::sqrt(-2 * std::log(static_cast<LD>(cfg.xi)));
    for (int j = 0; j < dims; ++j) {
      const LD c1 = ch.genes(4 * j), w1 = ch.genes(4 * j + 1), c2 = ch.genes(4 * j + 2), w2 = ch.genes(4 * j + 3);
      const LD lo = std::max({c1 - s * w1, c2 - s * w2, -1.0L}), hi = std::min({c1 + s * w1, c2 + s * w2, 1.0L});
      if (hi < lo) continue;
      const int samples = cfg.overlap_samples;
      const LD step = 2.0L / samples;
      // midpoint i sits at -1 + (i + 0.5) step
      const long first = std::max(0L, static_cast<long>(std::ceil((lo + 1) / step - 0.5L)));
      const long last = std::min<long>(samples - 1, static_cast<long>(std::floor((hi + 1) / step - 0.5L)));
      if (last >= first) pf += (last - first + 1) * step;
    }
    fit.that(e.valid, "individual valid");
    fit.rel(e.mse, mse, 1e-12, "fitness MSE");
    fit.rel(e.penalty, pf, 1e-12, "overlap penalty");
    fit.rel(e.fitness, 1 / (mse + static_cast<LD>(cfg.beta) * pf + static_cast<LD>(cfg.epsilon)), 1e-12,
            "fitness");
    // the formula itself at 1e-12, on the library's own terms
    fit.rel(e.fitness, 1 / (static_cast<LD>(e.mse) + static_cast<LD>(cfg.beta) * e.penalty + cfg.epsilon),
            1e-12, "fitness formula");
  }

  Outcome o;
  std::ostringstream d;
  const std::pair<const char*, Checker*> groups[] = {
      {"criterion", &crit}, {"unforced_f", &plantf}, {"inference", &inf}, {"fitness", &fit}};
  for (const auto& [name, c] : groups) {
    d << name << " " << c->cases - c->failures << "/" << c->cases << " (worst rel " << fmt(c->worst, 2) << ") ";
    if (c->failures || c->cases < 20) {
      o.pass = false;
      if (!c->first_failure.empty()) d << "[" << c->first_failure << "] ";
    }
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------- benchmark

struct Benchmark {
  Dataset<double> train;
  FiringMatrix<double> P;
  RuleRanking<double> ranking;
  SweepResult<double> constant;
  SweepResult<double> tsk;
};

Benchmark benchmark(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.set_seed(seed);
  Benchmark b;
  b.train = plant::gen_training(cfg.n_train, seed).dataset(cfg.target);
  const auto grid = pipeline::bspline_grid(cfg, pipeline::input_domains(b.train, cfg.domain_margin));
  b.P = assemble_firing_matrix(grid, b.train, cfg.firing);
  b.ranking = rank_rules(b.P);
  const auto kinds = cfg.criterion_kinds();
  b.constant = sweep_models(b.ranking, b.P, b.train, ModelKind::constant, kinds, cfg.param_mode);
  b.tsk = sweep_models(b.ranking, b.P, b.train, ModelKind::tsk, kinds, cfg.param_mode);
  return b;
}

const Benchmark& default_benchmark() {
  static const Benchmark b = benchmark(ExperimentConfig{}.seed);
  return b;
}

Outcome ac2() {
  const auto& s = default_benchmark().constant;
  Outcome o;
  double worst = 0;
  for (std::size_t i = 1; i < s.rows.size(); ++i) worst = std::max(worst, s.rows[i].sigma2 - s.rows[i - 1].sigma2);
  o.pass = s.rows.size() == 36 && worst <= 1e-9;
  o.detail = "m = 1.." + std::to_string(s.rows.size()) + ", largest increase " + fmt(worst, 3) +
             ", MSE " + fmt(s.rows.front().sigma2) + " -> " + fmt(s.rows.back().sigma2);
  return o;
}

Outcome ac3() {
  const auto& b = default_benchmark();
  Outcome o;
  double worst = -1e300;
  for (std::size_t i = 0; i < b.constant.rows.size(); ++i)
    worst = std::max(worst, b.tsk.rows[i].sigma2 - b.constant.rows[i].sigma2);
  o.pass = worst <= 1e-9;
  // smallest m at which TSK reaches the 36-rule constant model's MSE
  const double target = b.constant.rows.back().sigma2;
  std::size_t reach = 0;
  while (reach < b.tsk.rows.size() && b.tsk.rows[reach].sigma2 > target) ++reach;
  o.detail = "max(TSK - constant) " + fmt(worst, 3) + "; TSK matches constant-36 MSE at m = " +
             (reach < b.tsk.rows.size() ? std::to_string(reach + 1) : std::string("never"));
  return o;
}

Outcome ac4() {
  const double ref_c = 0.193603, ref_t = 0.158978;
  Outcome o;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Benchmark b = benchmark(seed);
    const double c = b.constant.rows.back().sigma2, t = b.tsk.rows.back().sigma2;
    const bool ok = c >= ref_c / 3 && c <= ref_c * 3 && t >= ref_t / 3 && t <= ref_t * 3 && t < c;
    o.pass = o.pass && ok;
    d << "seed " << seed << ": const " << fmt(c, 4) << " tsk " << fmt(t, 4) << (ok ? "" : " (out)") << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome ac5() {
  const auto& s = default_benchmark().constant;
  ExperimentConfig cfg;
  const auto kinds = cfg.criterion_kinds();
  Eigen::Index aic = 0, sric = 0;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    if (criterion_name(kinds[k]) == "aic") aic = s.chosen[k];
    if (criterion_name(kinds[k]) == "sric") sric = s.chosen[k];
  }
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0, 1);
  int held = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> a, r;
    for (int m = 1; m <= 36; ++m) {
      const double s2 = std::exp(-3 + 3 * u(rng));
      a.push_back(criterion_value<double>(Aic{}, s2, m, 1000));
      r.push_back(criterion_value<double>(Sric{}, s2, m, 1000));
    }
    held += argmin_first(r) <= argmin_first(a);
  }
  Outcome o;
  o.pass = sric < aic && held == 1000;
  o.detail = "benchmark constant sweep: SRIC m* = " + std::to_string(sric) + ", AIC m* = " + std::to_string(aic) +
             "; SRIC <= AIC on " + std::to_string(held) + "/1000 random sequences";
  return o;
}

Outcome ac6() {
  ExperimentConfig cfg;
  const std::vector<Domain<double>> doms = {{-2, 2}, {-2, 2}};
  const auto grid = pipeline::bspline_grid(cfg, doms);
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  VectorXd x(2);
  for (int t = 0; t < 10000; ++t) {
    x << u(rng), u(rng);
    worst = std::max(worst, std::fabs(normalize_firing<double>(grid.firing_strengths(x)).sum() - 1));
  }
  int raised = 0, wrong = 0;
  const std::vector<std::pair<double, double>> outside = {{2.5, 0}, {0, -3}, {-7, 7}, {100, 100}};
  for (const auto& [a, b] : outside) {
    x << a, b;
    try {
      normalize_firing<double>(grid.firing_strengths(x));
      ++wrong;
    } catch (const ZeroFiring&) {
      ++raised;
    } catch (...) {
      ++wrong;
    }
  }
  Outcome o;
  o.pass = worst <= 1e-12 && raised == static_cast<int>(outside.size()) && wrong == 0;
  o.detail = "max |sum v - 1| = " + fmt(worst, 3) + " on 10^4 inputs; ZeroFiring on " + std::to_string(raised) +
             "/" + std::to_string(outside.size()) + " outside inputs";
  return o;
}

double single_column_residual(const MatrixXd& P, int j) {
  const VectorXd p = P.col(j);
  const double pp = p.squaredNorm();
  if (pp == 0) return P.squaredNorm();
  return (P - p * (p.transpose() * P) / pp).squaredNorm();
}

Outcome ac7() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0, 1);
  int pair_last = 0, top = 0, classic_top = 0;
  RankOptions classic;
  classic.pivot = PivotRule::right_singular_vectors;
  for (int t = 0; t < 20; ++t) {
    MatrixXd P(8, 4);
    for (Eigen::Index i = 0; i < P.size(); ++i) P.data()[i] = u(rng);
    const int j = t % 4, k = (j + 1 + (t / 4) % 3) % 4;
    P.col(k) = P.col(j);
    P.array().colwise() /= P.rowwise().sum().array();  // rows of normalized firing strengths
    const FiringMatrix<double> fm{P, FiringMode::normalized};
    const auto r = rank_rules(fm);
    const auto pos = [&](int c) { return std::find(r.order.begin(), r.order.end(), c) - r.order.begin(); };
    pair_last += std::max(pos(j), pos(k)) == 3;

    // exhaustive single-rule subset selection
    double best = 1e300;
    for (int a = 0; a < 4; ++a) best = std::min(best, single_column_residual(P, a));
    const auto matches = [&](int c) { return single_column_residual(P, c) <= best * (1 + 1e-9) + 1e-15; };
    top += matches(r.order[0]);
    classic_top += matches(rank_rules(fm, classic).order[0]);
  }
  Outcome o;
  o.pass = pair_last == 20 && top >= 18;
  o.detail = "duplicate last in pair " + std::to_string(pair_last) + "/20; top-1 matches oracle " +
             std::to_string(top) + "/20 (right-singular-vector pivoting: " + std::to_string(classic_top) + "/20)";
  return o;
}

Outcome ac8() {
  ExperimentConfig cfg;  // N_p = 60, G_max = 100, Gaussian MFs
  const Dataset<double> train = plant::gen_training(cfg.n_train, cfg.seed).dataset(cfg.target);
  const ga::GenomeLayout layout{pipeline::input_domains(train, cfg.domain_margin), cfg.ga_n_mf};
  const auto run = ga::evolve(train, cfg.ga, layout);
  const auto again = ga::evolve(train, cfg.ga, layout);
  bool monotone = true;
  for (std::size_t g = 1; g < run.trace.size(); ++g)
    monotone = monotone && run.trace[g].best_fitness >= run.trace[g - 1].best_fitness;
  const double first = run.trace.front().best_mse;
  const double final_lowest = run.trace.back().best_mse;
  const double fittest = run.best.mse;
  bool identical = run.trace.size() == again.trace.size() && run.best.chromosome == again.best.chromosome;
  for (std::size_t g = 0; identical && g < run.trace.size(); ++g) {
    const auto &a = run.trace[g], &b = again.trace[g];
    identical = a.best_fitness == b.best_fitness && a.best_mse == b.best_mse && a.best_penalty == b.best_penalty &&
                a.mean_fitness == b.mean_fitness;
  }

  // report: GA-TSK against the grid TSK model with as many rules
  const int rules = cfg.ga_n_mf[0] * cfg.ga_n_mf[1];
  const auto& grid_tsk = default_benchmark().tsk.rows[static_cast<std::size_t>(rules - 1)].sigma2;

  Outcome o;
  o.pass = run.trace.size() == 100 && monotone && final_lowest <= first && fittest <= first && identical;
  o.detail = std::string("fitness non-decreasing: ") + (monotone ? "yes" : "no") + "; gen-1 best MSE " +
             fmt(first) + ", final lowest " + fmt(final_lowest) + ", fittest individual " + fmt(fittest) +
             "; rerun trace-identical: " + (identical ? "yes" : "no") + ". Report: GA-TSK " + fmt(fittest) +
             " vs grid TSK-" + std::to_string(rules) + " " + fmt(grid_tsk) +
             (fittest < grid_tsk ? " (GA below grid)" : " (GA not below grid)");
  return o;
}

Outcome ac9() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> rows(1, 64), cols(1, 36);
  double recon = 0, orth = 0, ls = 0;
  for (int t = 0; t < 100; ++t) {
    const int m = rows(rng), n = cols(rng);
    MatrixXd A = MatrixXd::Random(m, n);
    if (t % 10 == 0 && n > 1) A.col(n - 1) = A.col(0);  // some rank-deficient cases
    const auto s = jacobi_svd(A);
    const MatrixXd back = s.U * s.singular_values.asDiagonal() * s.V.transpose();
    recon = std::max(recon, (A - back).norm() / A.norm());
    const auto k = s.singular_values.size();
    orth = std::max(orth, (s.U.transpose() * s.U - MatrixXd::Identity(k, k)).norm());
    orth = std::max(orth, (s.V.transpose() * s.V - MatrixXd::Identity(k, k)).norm());

    const VectorXd b = VectorXd::Random(m);
    const auto sol = least_squares(A, b);
    const VectorXd r = b - A * sol.x;
    if (r.norm() > 1e-12 * b.norm()) ls = std::max(ls, (A.transpose() * r).norm() / (A.norm() * r.norm()));
  }
  Outcome o;
  o.pass = recon < 1e-10 && orth < 1e-10 && ls < 1e-8;
  o.detail = "max reconstruction " + fmt(recon, 3) + ", orthogonality " + fmt(orth, 3) +
             ", LS residual orthogonality " + fmt(ls, 3) + " over 100 matrices";
  return o;
}

#ifndef FUZZYID_CLI
#define FUZZYID_CLI "fuzzyid"
#endif

Outcome ac10() {
  const fs::path base = fs::temp_directory_path() / "fuzzyid_acceptance_ac10";
  fs::remove_all(base);
  Outcome o;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + FUZZYID_CLI + "\" all --seed 7 --quiet --out \"" +
                            (base / run).string() + "\"";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      o.pass = false;
      o.detail = "run " + std::string(run) + " exited with " + std::to_string(rc);
      return o;
    }
  }
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  int compared = 0, differing = 0;
  std::string first_diff;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    const fs::path other = base / "b" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      if (differing++ == 0) first_diff = entry.path().filename().string();
    }
  }
  int in_b = 0;
  for (const auto& entry : fs::directory_iterator(base / "b")) in_b += entry.path().extension() == ".csv";
  o.pass = compared > 0 && differing == 0 && in_b == compared;
  o.detail = std::to_string(compared - differing) + "/" + std::to_string(compared) + " CSV files byte-identical" +
             (first_diff.empty() ? "" : ", first difference in " + first_diff);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1", "formula oracle suite", 1, ac1},
      {"AC2", "nested-model monotonicity", 30, ac2},
      {"AC3", "TSK dominance", 60, ac3},
      {"AC4", "training MSE magnitude band over 5 seeds", 300, ac4},
      {"AC5", "criterion ordering", 60, ac5},
      {"AC6", "normalization invariant", 5, ac6},
      {"AC7", "rule-ranking oracle", 10, ac7},
      {"AC8", "GA properties (60 x 100)", 600, ac8},
      {"AC9", "SVD and least-squares correctness", 10, ac9},
      {"AC10", "pipeline determinism", 600, ac10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " (" << fmt(secs, 3) << " s, budget "
              << c.budget_s << " s" << (in_time ? "" : ", over budget") << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " acceptance criteria passed" << std::endl;
  return failed ? 1 : 0;
}

#include "fuzzyid/ga.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "fuzzyid/error.hpp"
#include "fuzzyid/linalg.hpp"

namespace fuzzyid::ga {

void GaConfig::validate() const {
  if (population_size < 2) throw ConfigError("population_size must be >= 2");
  if (max_generations < 1) throw ConfigError("max_generations must be >= 1");
  if (!(crossover_prob >= 0 && crossover_prob <= 1))
    throw ConfigError("crossover_prob must lie in [0, 1]");
  if (!(mutation_rho > 0)) throw ConfigError("mutation_rho must be positive");
  if (!(mutation_prob <= 1)) throw ConfigError("mutation_prob must be <= 1");
  if (!(beta >= 0)) throw ConfigError("beta must be non-negative");
  if (!(xi > 0 && xi < 1)) throw ConfigError("xi must lie in (0, 1)");
  if (!(elite_fraction > 0 && elite_fraction <= 1))
    throw ConfigError("elite_fraction must lie in (0, 1]");
  if (!(copy_share > 0 && copy_share <= 1)) throw ConfigError("copy_share must lie in (0, 1]");
  if (!(arithmetic_crossover_share >= 0 && arithmetic_crossover_share <= 1))
    throw ConfigError("arithmetic_crossover_share must lie in [0, 1]");
  if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
  if (overlap_samples < 1) throw ConfigError("overlap_samples must be >= 1");
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
}

Eigen::Index GenomeLayout::length() const {
  Eigen::Index total = 0;
  for (int n : n_mf) total += 2 * n;
  return total;
}

Eigen::Index GenomeLayout::offset(std::size_t input) const {
  Eigen::Index off = 0;
  for (std::size_t j = 0; j < input; ++j) off += 2 * n_mf[j];
  return off;
}

void GenomeLayout::validate() const {
  if (domains.empty() || domains.size() != n_mf.size())
    throw ConfigError("genome layout needs one domain and one MF count per input");
  for (int n : n_mf)
    if (n < 1) throw ConfigError("each input needs at least one membership function");
}

namespace {

// Input index of every gene.
std::vector<std::size_t> gene_inputs(const GenomeLayout& layout) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < layout.n_mf.size(); ++j)
    out.insert(out.end(), 2 * static_cast<std::size_t>(layout.n_mf[j]), j);
  return out;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

void check_lengths(const Chromosome& a, const Chromosome& b) {
  if (a.genes.size() != b.genes.size())
    throw DimensionMismatch("crossover parents differ in length (" +
                            std::to_string(a.genes.size()) + " vs " +
                            std::to_string(b.genes.size()) + ")");
}

}  // namespace

double min_width(const Domain<double>& domain) { return 1e-6 * domain.length(); }

Population init_population(const GaConfig& cfg, const GenomeLayout& layout) {
  cfg.validate();
  layout.validate();
  Population pop(static_cast<std::size_t>(cfg.population_size));
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Rng rng = make_rng(cfg.seed, "ga.init", i);
    Eigen::VectorXd genes(layout.length());
    Eigen::Index g = 0;
    for (std::size_t j = 0; j < layout.n_mf.size(); ++j) {
      const auto& d = layout.domains[j];
      std::uniform_real_distribution<double> center(d.lo, d.hi);
      std::uniform_real_distribution<double> width(0.05 * d.length(), 0.5 * d.length());
      for (int k = 0; k < layout.n_mf[j]; ++k) {
        genes(g++) = center(rng);
        genes(g++) = width(rng);
      }
    }
    pop[i].chromosome.genes = std::move(genes);
  }
  return pop;
}

bool satisfies_invariants(const Chromosome& c, const GenomeLayout& layout) {
  if (c.genes.size() != layout.length()) return false;
  for (std::size_t j = 0; j < layout.n_mf.size(); ++j) {
    const auto& d = layout.domains[j];
    for (int k = 0; k < layout.n_mf[j]; ++k) {
      const double center = c.center(layout, j, k);
      const double width = c.width(layout, j, k);
      if (!(center >= d.lo && center <= d.hi)) return false;
      if (!(width >= min_width(d)) || !std::isfinite(width)) return false;
    }
  }
  return true;
}

void clamp_to_layout(Chromosome& c, const GenomeLayout& layout) {
  for (std::size_t j = 0; j < layout.n_mf.size(); ++j) {
    const auto& d = layout.domains[j];
    const Eigen::Index off = layout.offset(j);
    for (int k = 0; k < layout.n_mf[j]; ++k) {
      double& center = c.genes(off + 2 * k);
      double& width = c.genes(off + 2 * k + 1);
      center = d.clamp(center);
      width = std::max(width, min_width(d));
    }
  }
}

std::vector<std::vector<MembershipFunction<double>>> decode_terms(const Chromosome& c,
                                                                 const GenomeLayout& layout) {
  std::vector<std::vector<MembershipFunction<double>>> terms(layout.n_mf.size());
  for (std::size_t j = 0; j < layout.n_mf.size(); ++j)
    for (int k = 0; k < layout.n_mf[j]; ++k)
      terms[j].emplace_back(
          gaussian_cw(c.center(layout, j, k), c.width(layout, j, k), layout.domains[j]));
  return terms;
}

RuleBase<double> rule_base_from(const Chromosome& c, const GenomeLayout& layout, ModelKind kind) {
  return make_grid_rule_base(decode_terms(c, layout), layout.domains, kind);
}

FiringMatrix<double> grid_firing(const Chromosome& c, const GenomeLayout& layout,
                                 const Eigen::MatrixXd& inputs) {
  const auto terms = decode_terms(c, layout);
  const std::size_t p = terms.size();
  if (inputs.cols() != static_cast<Eigen::Index>(p))
    throw DimensionMismatch("grid_firing: input dimension differs from genome layout");
  const Eigen::Index N = inputs.rows();

  std::vector<Eigen::MatrixXd> degrees(p);
  Eigen::Index n_rules = 1;
  for (std::size_t j = 0; j < p; ++j) {
    degrees[j].resize(N, static_cast<Eigen::Index>(terms[j].size()));
    for (std::size_t k = 0; k < terms[j].size(); ++k)
      for (Eigen::Index h = 0; h < N; ++h) degrees[j](h, k) = eval_mf(terms[j][k], inputs(h, j));
    n_rules *= static_cast<Eigen::Index>(terms[j].size());
  }

  FiringMatrix<double> P;
  P.values.resize(N, n_rules);
  std::vector<int> idx(p);
  for (Eigen::Index h = 0; h < N; ++h) {
    std::fill(idx.begin(), idx.end(), 0);
    double total = 0;
    for (Eigen::Index r = 0; r < n_rules; ++r) {
      double w = 1;
      for (std::size_t j = 0; j < p; ++j) w *= degrees[j](h, idx[j]);
      P.values(h, r) = w;
      total += w;
      for (std::size_t j = p; j-- > 0;) {
        if (++idx[j] < static_cast<int>(terms[j].size())) break;
        idx[j] = 0;
      }
    }
    if (!(total > 0)) throw ZeroFiring(static_cast<std::size_t>(h));
    for (Eigen::Index r = 0; r < n_rules; ++r) P.values(h, r) = P.values(h, r) / total;
  }
  return P;
}

double overlap_penalty(const Chromosome& c, const GenomeLayout& layout, double xi, bool normalize,
                       int samples) {
  double total = 0;
  for (std::size_t j = 0; j < layout.n_mf.size(); ++j) {
    const auto& d = layout.domains[j];
    std::vector<int> by_center(static_cast<std::size_t>(layout.n_mf[j]));
    std::iota(by_center.begin(), by_center.end(), 0);
    std::stable_sort(by_center.begin(), by_center.end(), [&](int a, int b) {
      return c.center(layout, j, a) < c.center(layout, j, b);
    });
    for (std::size_t k = 0; k + 1 < by_center.size(); ++k) {
      const MembershipFunction<double> a =
          gaussian_cw(c.center(layout, j, by_center[k]), c.width(layout, j, by_center[k]), d);
      const MembershipFunction<double> b = gaussian_cw(
          c.center(layout, j, by_center[k + 1]), c.width(layout, j, by_center[k + 1]), d);
      const double lambda = overlap_length(a, b, xi, d, samples);
      total += normalize ? lambda / d.length() : lambda;
    }
  }
  return total;
}

Individual evaluate(Individual ind, const Dataset<double>& ds, const GaConfig& cfg,
                    const GenomeLayout& layout) {
  ds.validate();
  ind.evaluated = true;
  ind.penalty = overlap_penalty(ind.chromosome, layout, cfg.xi, cfg.overlap_normalize,
                                cfg.overlap_samples);
  FiringMatrix<double> P;
  try {
    P = grid_firing(ind.chromosome, layout, ds.inputs);
  } catch (const ZeroFiring& e) {
    ind.valid = false;
    ind.fitness = 0;
    ind.mse = std::numeric_limits<double>::infinity();
    ind.consequents.clear();
    ind.diagnostic = e.what();
    return ind;
  }
  const Eigen::MatrixXd R = tsk_regressor<double>(P.values, ds.inputs);
  const auto ls = least_squares(R, ds.targets);
  ind.mse = residual_variance(R * ls.x, ds.targets);
  const Eigen::Index p = ds.dims();
  ind.consequents.clear();
  for (Eigen::Index i = 0; i < P.rules(); ++i)
    ind.consequents.push_back({ls.x(i * (p + 1)), ls.x.segment(i * (p + 1) + 1, p)});
  ind.fitness = 1.0 / (ind.mse + cfg.beta * ind.penalty + cfg.epsilon);
  ind.valid = true;
  ind.diagnostic = ls.rank_deficient ? "rank-deficient regressor" : "";
  return ind;
}

std::pair<Chromosome, Chromosome> bitwise_crossover_at(const Chromosome& a, const Chromosome& b,
                                                       Eigen::Index k) {
  check_lengths(a, b);
  const Eigen::Index L = a.genes.size();
  if (k < 1 || k > L - 1) throw ConfigError("crossover cut must lie in 1..L-1");
  Chromosome c1 = a, c2 = b;
  c1.genes.tail(L - k) = b.genes.tail(L - k);
  c2.genes.tail(L - k) = a.genes.tail(L - k);
  return {std::move(c1), std::move(c2)};
}

std::pair<Chromosome, Chromosome> bitwise_crossover(const Chromosome& a, const Chromosome& b,
                                                    Rng& rng) {
  check_lengths(a, b);
  const Eigen::Index L = a.genes.size();
  if (L < 2) return {a, b};
  std::uniform_int_distribution<Eigen::Index> cut(1, L - 1);
  return bitwise_crossover_at(a, b, cut(rng));
}

std::pair<Chromosome, Chromosome> arithmetic_crossover_with(const Chromosome& a,
                                                            const Chromosome& b, double alpha) {
  check_lengths(a, b);
  return {Chromosome{alpha * a.genes + (1.0 - alpha) * b.genes},
          Chromosome{alpha * b.genes + (1.0 - alpha) * a.genes}};
}

std::pair<Chromosome, Chromosome> arithmetic_crossover(const Chromosome& a, const Chromosome& b,
                                                       Rng& rng) {
  return arithmetic_crossover_with(a, b, uniform01(rng));
}

Chromosome mutate(const Chromosome& c, const GaConfig& cfg, const GenomeLayout& layout, Rng& rng) {
  const auto inputs = gene_inputs(layout);
  const double prob = cfg.mutation_prob >= 0 ? cfg.mutation_prob
                                            : 1.0 / static_cast<double>(c.genes.size());
  Chromosome out = c;
  std::normal_distribution<double> noise(0.0, 1.0);
  for (Eigen::Index g = 0; g < out.genes.size(); ++g) {
    if (!(uniform01(rng) < prob)) continue;
    out.genes(g) += noise(rng) * cfg.mutation_rho * layout.domains[inputs[g]].length();
  }
  clamp_to_layout(out, layout);
  return out;
}

Population reproduce(const Population& pop, const GaConfig& cfg, const GenomeLayout& layout,
                     Rng& rng) {
  const auto n = pop.size();
  if (n == 0) throw DataError("reproduce: empty population");
  std::vector<std::size_t> ranked(n);
  std::iota(ranked.begin(), ranked.end(), std::size_t{0});
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].fitness > pop[b].fitness;
  });

  const auto n_copy = std::min<std::size_t>(
      n, std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.copy_share * n - 1e-9))));
  const auto n_pool = std::min<std::size_t>(
      n, std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.elite_fraction * n - 1e-9))));

  Population next;
  next.reserve(n);
  for (std::size_t s = 0; s < n_copy; ++s) next.push_back(pop[ranked[s % n_pool]]);

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto tournament = [&]() {
    std::size_t best = pick(rng);
    for (int t = 1; t < cfg.tournament_size; ++t) best = std::min(best, pick(rng));
    return pop[ranked[best]].chromosome;
  };
  while (next.size() < n) {
    Chromosome a = tournament();
    Chromosome b = tournament();
    std::pair<Chromosome, Chromosome> kids{a, b};
    if (uniform01(rng) < cfg.crossover_prob) {
      kids = uniform01(rng) < cfg.arithmetic_crossover_share ? arithmetic_crossover(a, b, rng)
                                                            : bitwise_crossover(a, b, rng);
    }
    for (Chromosome* kid : {&kids.first, &kids.second}) {
      if (next.size() == n) break;
      Individual child;
      child.chromosome = mutate(*kid, cfg, layout, rng);
      next.push_back(std::move(child));
    }
  }
  return next;
}

void evaluate_population(Population& pop, const Dataset<double>& ds, const GaConfig& cfg,
                         const GenomeLayout& layout) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.size(); ++i)
    if (!pop[i].evaluated) todo.push_back(i);
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(todo.size()));
  if (threads <= 1) {
    for (auto i : todo) pop[i] = evaluate(std::move(pop[i]), ds, cfg, layout);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&] {
        for (std::size_t k; (k = cursor.fetch_add(1)) < todo.size();) {
          try {
            pop[todo[k]] = evaluate(std::move(pop[todo[k]]), ds, cfg, layout);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

EvolveResult evolve(const Dataset<double>& ds, const GaConfig& cfg, const GenomeLayout& layout,
                    const std::function<void(const TraceRow&)>& on_generation) {
  ds.validate();
  cfg.validate();
  layout.validate();
  if (ds.dims() != static_cast<Eigen::Index>(layout.n_mf.size()))
    throw DimensionMismatch("dataset input dimension differs from genome layout");

  EvolveResult result;
  result.layout = layout;
  Population pop = init_population(cfg, layout);
  double best_mse = std::numeric_limits<double>::infinity();
  for (int g = 1; g <= cfg.max_generations; ++g) {
    evaluate_population(pop, ds, cfg, layout);
    double sum = 0;
    bool any_valid = false;
    for (const auto& ind : pop) {
      sum += ind.fitness;
      if (!ind.valid) continue;
      any_valid = true;
      best_mse = std::min(best_mse, ind.mse);
      if (!result.best.valid || ind.fitness > result.best.fitness) result.best = ind;
    }
    if (!any_valid)
      throw DataError("every individual failed in generation " + std::to_string(g) + ": " +
                      pop.front().diagnostic);
    TraceRow row{g, result.best.fitness, best_mse, result.best.penalty,
                 sum / static_cast<double>(pop.size())};
    result.trace.push_back(row);
    if (on_generation) on_generation(row);
    if (g == cfg.max_generations) break;
    Rng rng = make_rng(cfg.seed, "ga.reproduce", static_cast<std::uint64_t>(g));
    pop = reproduce(pop, cfg, layout, rng);
  }
  return result;
}

RuleBase<double> model_from(const Individual& ind, const GenomeLayout& layout) {
  if (!ind.valid) throw DataError("model_from: individual has no fitted consequents");
  RuleBase<double> grid = rule_base_from(ind.chromosome, layout, ModelKind::tsk);
  std::vector<int> keep(grid.size());
  std::iota(keep.begin(), keep.end(), 0);
  std::vector<Consequent<double>> consequents(ind.consequents.begin(), ind.consequents.end());
  return select_rules(grid, std::span<const int>(keep), std::move(consequents));
}

}  // namespace fuzzyid::ga

#pragma once

// Genetic tuning of Gaussian antecedent membership functions for a TSK model.
// Each chromosome encodes (center, width) pairs; fitness evaluation builds the
// complete rule grid, fits the linear consequents by least squares and scores
//   F = 1 / (MSE + beta * PF + eps)
// where PF sums the overlap lengths of center-adjacent membership functions.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fuzzyid/estimation.hpp"
#include "fuzzyid/fuzzy_engine.hpp"
#include "fuzzyid/membership.hpp"
#include "fuzzyid/rng.hpp"

namespace fuzzyid::ga {

struct GaConfig {
  int population_size = 60;
  int max_generations = 100;
  double crossover_prob = 0.8;
  /// Mutation noise standard deviation as a fraction of the domain length.
  double mutation_rho = 0.1;
  /// Per-gene mutation probability; negative selects 1/L, 0 disables mutation.
  double mutation_prob = -1.0;
  double beta = 0.1;
  double xi = 0.5;
  /// Top fraction of the ranked population that is copied forward.
  double elite_fraction = 0.3;
  /// Fraction of the next population filled with those copies.
  double copy_share = 0.5;
  double arithmetic_crossover_share = 0.5;
  int tournament_size = 3;
  /// Divide each overlap length by its input-domain length.
  bool overlap_normalize = false;
  int overlap_samples = 2048;
  double epsilon = 1e-12;
  std::uint64_t seed = 1;
  /// Worker threads for fitness evaluation; 0 picks hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

/// Per-input membership-function counts and domains. Input j owns n_mf[j]
/// consecutive (center, width) gene pairs.
struct GenomeLayout {
  std::vector<Domain<double>> domains;
  std::vector<int> n_mf;

  Eigen::Index length() const;
  Eigen::Index offset(std::size_t input) const;
  void validate() const;
};

struct Chromosome {
  Eigen::VectorXd genes;

  double center(const GenomeLayout& layout, std::size_t input, int k) const {
    return genes(layout.offset(input) + 2 * k);
  }
  double width(const GenomeLayout& layout, std::size_t input, int k) const {
    return genes(layout.offset(input) + 2 * k + 1);
  }
  friend bool operator==(const Chromosome& a, const Chromosome& b) {
    return a.genes.size() == b.genes.size() && a.genes == b.genes;
  }
};

struct Individual {
  Chromosome chromosome;
  double fitness = 0;
  double mse = std::numeric_limits<double>::infinity();
  double penalty = 0;
  bool evaluated = false;
  bool valid = false;
  std::vector<LinearConsequent<double>> consequents;
  std::string diagnostic;
};

using Population = std::vector<Individual>;

/// Smallest width allowed for input j: 1e-6 of its domain length.
double min_width(const Domain<double>& domain);

/// Centers uniform over each domain, widths uniform in [0.05, 0.5] x domain
/// length. Individual i draws from its own seeded stream.
Population init_population(const GaConfig& cfg, const GenomeLayout& layout);

/// Centers inside their domain and widths >= min_width.
bool satisfies_invariants(const Chromosome& c, const GenomeLayout& layout);

/// Clamps centers into their domain and widths to >= min_width.
void clamp_to_layout(Chromosome& c, const GenomeLayout& layout);

/// Gaussian term sets decoded from the chromosome, in gene order.
std::vector<std::vector<MembershipFunction<double>>> decode_terms(const Chromosome& c,
                                                                 const GenomeLayout& layout);

/// Complete rule grid over the decoded term sets (first input slowest).
RuleBase<double> rule_base_from(const Chromosome& c, const GenomeLayout& layout,
                                ModelKind kind = ModelKind::tsk);

/// Normalized firing matrix of the chromosome's rule grid over `inputs`.
/// Same values as assemble_firing_matrix(rule_base_from(c), ...).
FiringMatrix<double> grid_firing(const Chromosome& c, const GenomeLayout& layout,
                                 const Eigen::MatrixXd& inputs);

/// Sum over inputs of the overlap lengths of membership functions adjacent
/// in center order.
double overlap_penalty(const Chromosome& c, const GenomeLayout& layout, double xi,
                       bool normalize = false, int samples = 2048);

/// Builds the rule grid, fits TSK consequents, and fills mse, penalty and
/// fitness. Uncovered samples make the individual invalid with fitness 0.
Individual evaluate(Individual ind, const Dataset<double>& ds, const GaConfig& cfg,
                    const GenomeLayout& layout);

/// Single-point crossover with cut k in 1..L-1: [a_1..a_k b_k+1..b_L] and
/// [b_1..b_k a_k+1..a_L].
std::pair<Chromosome, Chromosome> bitwise_crossover_at(const Chromosome& a, const Chromosome& b,
                                                       Eigen::Index k);
std::pair<Chromosome, Chromosome> bitwise_crossover(const Chromosome& a, const Chromosome& b,
                                                    Rng& rng);

/// alpha a + (1 - alpha) b and alpha b + (1 - alpha) a.
std::pair<Chromosome, Chromosome> arithmetic_crossover_with(const Chromosome& a,
                                                            const Chromosome& b, double alpha);
std::pair<Chromosome, Chromosome> arithmetic_crossover(const Chromosome& a, const Chromosome& b,
                                                       Rng& rng);

/// Adds N(0, rho * domain length) to each gene with the per-gene mutation
/// probability, then clamps back into the layout.
Chromosome mutate(const Chromosome& c, const GaConfig& cfg, const GenomeLayout& layout, Rng& rng);

/// Next generation from an evaluated population. The best individual is
/// copied verbatim into slot 0, the top elite_fraction fill the first
/// copy_share of slots round-robin by rank, and the rest are offspring of
/// tournament-selected parents (crossover, then mutation). Copies keep their
/// evaluation; offspring are unevaluated.
Population reproduce(const Population& pop, const GaConfig& cfg, const GenomeLayout& layout,
                     Rng& rng);

/// Evaluates every unevaluated individual, in parallel when cfg.threads allows.
void evaluate_population(Population& pop, const Dataset<double>& ds, const GaConfig& cfg,
                         const GenomeLayout& layout);

struct TraceRow {
  int generation = 0;
  double best_fitness = 0;   // best-ever fitness
  double best_mse = 0;       // lowest MSE of any individual evaluated so far
  double best_penalty = 0;   // penalty of the best-ever individual
  double mean_fitness = 0;   // mean over the current generation
};

struct EvolveResult {
  Individual best;
  std::vector<TraceRow> trace;
  GenomeLayout layout;
};

/// Runs max_generations evaluation rounds with reproduction in between.
EvolveResult evolve(const Dataset<double>& ds, const GaConfig& cfg, const GenomeLayout& layout,
                    const std::function<void(const TraceRow&)>& on_generation = {});

/// TSK rule base of an evaluated individual with its fitted consequents.
RuleBase<double> model_from(const Individual& ind, const GenomeLayout& layout);

}  // namespace fuzzyid::ga

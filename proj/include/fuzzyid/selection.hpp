#pragma once

// Information criteria log(sigma^2) + m p(N) and the model-order sweep.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fuzzyid/error.hpp"
#include "fuzzyid/estimation.hpp"

namespace fuzzyid {

struct Aic {};
/// Bhansali-Downham criterion. alpha is not pinned down by the method; 3 is
/// the default.
struct Bdic {
  double alpha = 3.0;
};
struct Sric {};
/// log(sigma^2) + m p(N) for a user-supplied positive p with p(N) -> 0.
struct GeneralCriterion {
  std::string name;
  std::function<double(double)> penalty;
};

using CriterionKind = std::variant<Aic, Bdic, Sric, GeneralCriterion>;

inline std::string criterion_name(const CriterionKind& kind) {
  return std::visit(overloaded{[](const Aic&) { return std::string("aic"); },
                               [](const Bdic&) { return std::string("bdic"); },
                               [](const Sric&) { return std::string("sric"); },
                               [](const GeneralCriterion& g) { return g.name; }},
                    kind);
}

/// Throws ConfigError unless the kind's parameters are admissible: alpha > 0
/// for BDIC; for the general form p(N) > 0 and strictly decreasing over
/// N = 1e3, 1e6, 1e9.
inline void validate(const CriterionKind& kind) {
  if (const auto* b = std::get_if<Bdic>(&kind); b && !(b->alpha > 0))
    throw ConfigError("BDIC alpha must be positive");
  if (const auto* g = std::get_if<GeneralCriterion>(&kind)) {
    if (!g->penalty) throw ConfigError("general criterion needs a penalty function");
    const double p3 = g->penalty(1e3), p6 = g->penalty(1e6), p9 = g->penalty(1e9);
    if (!(p3 > 0 && p6 > 0 && p9 > 0) || !(p3 > p6 && p6 > p9))
      throw ConfigError("general criterion penalty must be positive and decrease toward 0");
  }
}

/// Criterion score. sigma2 == 0 returns -infinity (degenerate exact fit).
template <typename Scalar>
Scalar criterion_value(const CriterionKind& kind, Scalar sigma2, Eigen::Index m, Eigen::Index N) {
  if (sigma2 < 0 || !std::isfinite(static_cast<double>(sigma2)))
    throw ConfigError("criterion_value: sigma2 must be finite and non-negative");
  if (N < 1 || m < 0) throw ConfigError("criterion_value: requires N >= 1 and m >= 0");
  if (sigma2 == 0) return -std::numeric_limits<Scalar>::infinity();
  using std::log;
  const Scalar fit = log(sigma2);
  const Scalar mm = static_cast<Scalar>(m);
  const Scalar n = static_cast<Scalar>(N);
  return std::visit(
      overloaded{[&](const Aic&) { return fit + 2 * mm / n; },
                 [&](const Bdic& b) { return fit + static_cast<Scalar>(b.alpha) * mm / n; },
                 [&](const Sric&) { return fit + log(n) * mm / n; },
                 [&](const GeneralCriterion& g) {
                   return fit + mm * static_cast<Scalar>(g.penalty(static_cast<double>(N)));
                 }},
      kind);
}

/// How m in the criteria is counted: free parameters, or rules (the x-axis of
/// the usual criterion-vs-rule-count curves).
enum class ParamMode { rules, params };

inline const char* to_string(ParamMode mode) {
  return mode == ParamMode::rules ? "rules" : "params";
}

inline Eigen::Index count_parameters(ModelKind kind, Eigen::Index m_rules, Eigen::Index p_inputs,
                                     ParamMode mode) {
  if (m_rules < 1) throw ConfigError("count_parameters: m_rules must be >= 1");
  if (mode == ParamMode::rules || kind == ModelKind::constant) return m_rules;
  return m_rules * (p_inputs + 1);
}

template <typename Scalar>
struct SweepRow {
  Eigen::Index m = 0;        // rule count
  Eigen::Index n_params = 0; // m as fed to the criteria
  Scalar sigma2{0};
  bool rank_deficient = false;
  bool degenerate = false;   // sigma2 == 0
  std::vector<Scalar> scores;  // one per criterion, same order as SweepResult::kinds
};

template <typename Scalar>
struct SweepResult {
  ModelKind model = ModelKind::constant;
  ParamMode mode = ParamMode::rules;
  std::vector<CriterionKind> kinds;
  std::vector<SweepRow<Scalar>> rows;
  std::vector<Eigen::Index> chosen;  // m* per criterion

  std::vector<std::string> chosen_by(Eigen::Index m) const {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < kinds.size(); ++k)
      if (chosen[k] == m) names.push_back(criterion_name(kinds[k]));
    return names;
  }
};

/// Index of the minimum with the earliest position winning ties.
template <typename Scalar>
std::size_t argmin_first(const std::vector<Scalar>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return best;
}

/// Fits the top-m ranked rules for m = 1..m_r and scores every criterion;
/// chosen[k] is the argmin of criterion k with the smallest m winning ties.
template <typename Scalar>
SweepResult<Scalar> sweep_models(const RuleRanking<Scalar>& ranking, const FiringMatrix<Scalar>& P,
                                 const Dataset<Scalar>& ds, ModelKind model,
                                 std::vector<CriterionKind> kinds,
                                 ParamMode mode = ParamMode::rules) {
  ds.validate();
  for (const auto& k : kinds) validate(k);
  if (static_cast<Eigen::Index>(ranking.order.size()) != P.rules())
    throw ConfigError("sweep_models: ranking must cover every rule");

  SweepResult<Scalar> out;
  out.model = model;
  out.mode = mode;
  out.kinds = std::move(kinds);
  const Eigen::Index N = ds.size();
  for (Eigen::Index m = 1; m <= P.rules(); ++m) {
    SweepRow<Scalar> row;
    row.m = m;
    row.n_params = count_parameters(model, m, ds.dims(), mode);
    try {
      if (model == ModelKind::constant) {
        const auto fit = solve_constant_consequents(P, ds.targets, m, ranking);
        row.sigma2 = residual_variance(fit.fitted, ds.targets);
        row.rank_deficient = fit.rank_deficient;
      } else {
        const auto fit = solve_tsk_consequents(P, ds, m, ranking);
        row.sigma2 = residual_variance(fit.fitted, ds.targets);
        row.rank_deficient = fit.rank_deficient;
      }
    } catch (const NumericalError& e) {
      throw NumericalError("sweep failed at m=" + std::to_string(m) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("sweep failed at m=" + std::to_string(m) + ": " + e.what());
    }
    row.degenerate = row.sigma2 == 0;
    for (const auto& k : out.kinds) row.scores.push_back(criterion_value(k, row.sigma2, row.n_params, N));
    out.rows.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < out.kinds.size(); ++k) {
    std::vector<Scalar> column;
    for (const auto& row : out.rows) column.push_back(row.scores[k]);
    out.chosen.push_back(out.rows[argmin_first(column)].m);
  }
  return out;
}

}  // namespace fuzzyid

#pragma once

// Firing-matrix assembly, SVD-based rule ranking, and least-squares
// identification of constant and TSK consequents.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fuzzyid/error.hpp"
#include "fuzzyid/fuzzy_engine.hpp"
#include "fuzzyid/linalg.hpp"

namespace fuzzyid {

/// N samples of p inputs with one target each.
template <typename Scalar>
struct Dataset {
  MatrixX<Scalar> inputs;
  VectorX<Scalar> targets;

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index dims() const { return inputs.cols(); }

  void validate() const {
    if (inputs.rows() < 1) throw DataError("dataset is empty");
    if (inputs.rows() != targets.size())
      throw DimensionMismatch("dataset has " + std::to_string(inputs.rows()) + " input rows and " +
                              std::to_string(targets.size()) + " targets");
  }
};

enum class FiringMode { normalized, raw };

/// N x m_r matrix of firing strengths; row h belongs to sample h. In
/// normalized mode every row sums to one.
template <typename Scalar>
struct FiringMatrix {
  MatrixX<Scalar> values;
  FiringMode mode = FiringMode::normalized;

  Eigen::Index samples() const { return values.rows(); }
  Eigen::Index rules() const { return values.cols(); }
};

template <typename Scalar>
FiringMatrix<Scalar> assemble_firing_matrix(const RuleBase<Scalar>& rb, const Dataset<Scalar>& ds,
                                            FiringMode mode = FiringMode::normalized) {
  ds.validate();
  if (ds.dims() != static_cast<Eigen::Index>(rb.inputs()))
    throw DimensionMismatch("dataset has " + std::to_string(ds.dims()) +
                            " inputs, rule base expects " + std::to_string(rb.inputs()));
  FiringMatrix<Scalar> P;
  P.mode = mode;
  P.values.resize(ds.size(), static_cast<Eigen::Index>(rb.size()));
  VectorX<Scalar> x(ds.dims());
  for (Eigen::Index h = 0; h < ds.size(); ++h) {
    x = ds.inputs.row(h).transpose();
    const VectorX<Scalar> w = rb.firing_strengths(x);
    if (mode == FiringMode::raw) {
      if (!(w.sum() > 0)) throw ZeroFiring(static_cast<std::size_t>(h));
      P.values.row(h) = w.transpose();
      continue;
    }
    try {
      P.values.row(h) = normalize_firing<Scalar>(w).transpose();
    } catch (const ZeroFiring&) {
      throw ZeroFiring(static_cast<std::size_t>(h));
    }
  }
  return P;
}

/// Rules in order of importance plus the singular-value spectrum of P.
template <typename Scalar>
struct RuleRanking {
  std::vector<int> order;
  VectorX<Scalar> singular_values;
  /// Number of right singular vectors used by the pivoting phase.
  Eigen::Index retained = 0;
};

/// How the pivoting phase chooses the next rule.
enum class PivotRule {
  /// Residual direction with the largest share inside span(U_k).
  dominant_subspace,
  /// Column-pivoted QR on the leading right singular vectors V_k^T.
  right_singular_vectors,
};

struct RankOptions {
  PivotRule pivot = PivotRule::dominant_subspace;
  /// Overrides the numerical rank as the number of retained singular vectors.
  std::optional<Eigen::Index> retained;
  double rank_tolerance = 1e-10;
  JacobiOptions jacobi;
};

namespace detail {

// Index of the largest value among the unselected entries. Values within a
// relative 1e-12 of the maximum tie and the smallest index wins.
template <typename Scalar>
Eigen::Index pick_pivot(const VectorX<Scalar>& norms, const std::vector<bool>& taken) {
  Scalar best(-1);
  for (Eigen::Index j = 0; j < norms.size(); ++j)
    if (!taken[j]) best = std::max(best, norms(j));
  const Scalar cut = best - Scalar(1e-12) * std::max(best, Scalar(0));
  for (Eigen::Index j = 0; j < norms.size(); ++j)
    if (!taken[j] && norms(j) >= cut) return j;
  return -1;
}

// Norms of the columns of M after projection onto the orthogonal complement
// of the span of the columns listed in `basis_cols` (two-pass Gram-Schmidt).
template <typename Scalar>
VectorX<Scalar> residual_norms(const MatrixX<Scalar>& M, std::span<const int> basis_cols) {
  MatrixX<Scalar> Q(M.rows(), 0);
  for (int c : basis_cols) {
    VectorX<Scalar> v = M.col(c);
    for (int pass = 0; pass < 2; ++pass)
      if (Q.cols() > 0) v -= Q * (Q.transpose() * v);
    const Scalar nv = v.norm();
    if (nv > Scalar(1e-13) * std::max(M.col(c).norm(), Scalar(1e-300))) {
      Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
      Q.col(Q.cols() - 1) = v / nv;
    }
  }
  MatrixX<Scalar> R = M;
  for (int pass = 0; pass < 2; ++pass)
    if (Q.cols() > 0) R -= Q * (Q.transpose() * R);
  return R.colwise().norm().transpose();
}

}  // namespace detail

/// Ranks the columns (rules) of P by importance.
///
/// P = U S V^T is computed by one-sided Jacobi. The pivoting phase keeps the
/// span of the chosen columns close to the dominant left singular subspace:
/// step k projects every unchosen column onto the orthogonal complement of
/// the k-1 earlier picks (two-pass Gram-Schmidt) and picks the one whose
/// residual direction has the largest share inside span(U_k). Step 1 is thus
/// the column with the smallest angle to u_1. The ordering is nested and
/// invariant to column scaling. r is the numerical rank unless overridden.
/// Columns that the pivoting phase does not reach, including any lying in the
/// span of earlier picks, are appended by pivoted QR on P itself.
/// PivotRule::right_singular_vectors selects the classic variant: step k is a
/// column-pivoted QR of V_k^T with the earlier picks kept in front.
template <typename Scalar>
RuleRanking<Scalar> rank_rules(const FiringMatrix<Scalar>& P, const RankOptions& options = {}) {
  const Eigen::Index n = P.rules();
  if (P.samples() == 0 || n == 0) throw DataError("rank_rules: empty firing matrix");

  const Svd<Scalar> svd = jacobi_svd(P.values, options.jacobi);
  RuleRanking<Scalar> out;
  out.singular_values = svd.singular_values;
  const Eigen::Index available = svd.V.cols();
  Eigen::Index r = options.retained.value_or(svd.rank(static_cast<Scalar>(options.rank_tolerance)));
  r = std::clamp<Eigen::Index>(r, 0, std::min(available, n));
  out.retained = r;

  std::vector<bool> taken(n, false);
  if (options.pivot == PivotRule::right_singular_vectors) {
    for (Eigen::Index k = 1; k <= r; ++k) {
      const MatrixX<Scalar> M = svd.V.leftCols(k).transpose();
      const VectorX<Scalar> norms = detail::residual_norms<Scalar>(M, out.order);
      const Eigen::Index j = detail::pick_pivot(norms, taken);
      if (j < 0 || !(norms(j) > Scalar(1e-12))) break;
      out.order.push_back(static_cast<int>(j));
      taken[j] = true;
    }
  }
  MatrixX<Scalar> Q(P.samples(), 0);
  const bool subspace = options.pivot == PivotRule::dominant_subspace;
  for (Eigen::Index k = 1; subspace && k <= r; ++k) {
    MatrixX<Scalar> R = P.values;
    for (int pass = 0; pass < 2; ++pass)
      if (Q.cols() > 0) R -= Q * (Q.transpose() * R);
    const VectorX<Scalar> len = R.colwise().norm().transpose();
    const VectorX<Scalar> inside = (svd.U.leftCols(k).transpose() * R).colwise().norm().transpose();
    VectorX<Scalar> score = VectorX<Scalar>::Constant(n, Scalar(-1));
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar full = P.values.col(j).norm();
      if (!taken[j] && len(j) > Scalar(1e-12) * full) score(j) = inside(j) / len(j);
    }
    const Eigen::Index j = detail::pick_pivot(score, taken);
    if (j < 0 || !(score(j) > Scalar(1e-12))) break;
    out.order.push_back(static_cast<int>(j));
    taken[j] = true;
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = R.col(j) / len(j);
  }
  while (static_cast<Eigen::Index>(out.order.size()) < n) {
    const VectorX<Scalar> norms = detail::residual_norms<Scalar>(P.values, out.order);
    const Eigen::Index j = detail::pick_pivot(norms, taken);
    out.order.push_back(static_cast<int>(j));
    taken[j] = true;
  }
  return out;
}

namespace detail {

inline void check_model_size(Eigen::Index m, Eigen::Index rules, std::size_t ranked) {
  if (m < 1 || m > rules)
    throw ConfigError("model size m=" + std::to_string(m) + " outside 1.." + std::to_string(rules));
  if (static_cast<Eigen::Index>(ranked) < m) throw ConfigError("ranking shorter than model size");
}

}  // namespace detail

/// The first m ranked columns of P, in ranking order.
template <typename Scalar>
MatrixX<Scalar> ranked_columns(const FiringMatrix<Scalar>& P, Eigen::Index m,
                               const RuleRanking<Scalar>& ranking) {
  detail::check_model_size(m, P.rules(), ranking.order.size());
  MatrixX<Scalar> Pm(P.samples(), m);
  for (Eigen::Index i = 0; i < m; ++i) Pm.col(i) = P.values.col(ranking.order[i]);
  return Pm;
}

/// Regressor whose block for rule i is [v_i, v_i x_1, ..., v_i x_p] per row.
template <typename Scalar>
MatrixX<Scalar> tsk_regressor(const MatrixX<Scalar>& Pm, const MatrixX<Scalar>& inputs) {
  if (Pm.rows() != inputs.rows()) throw DimensionMismatch("tsk_regressor: row count mismatch");
  const Eigen::Index p = inputs.cols();
  MatrixX<Scalar> R(Pm.rows(), Pm.cols() * (p + 1));
  for (Eigen::Index i = 0; i < Pm.cols(); ++i) {
    R.col(i * (p + 1)) = Pm.col(i);
    for (Eigen::Index j = 0; j < p; ++j)
      R.col(i * (p + 1) + 1 + j) = Pm.col(i).cwiseProduct(inputs.col(j));
  }
  return R;
}

template <typename Scalar>
struct ConstantFit {
  std::vector<int> rules;  // rule positions, ranking order
  VectorX<Scalar> consequents;
  VectorX<Scalar> fitted;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

template <typename Scalar>
struct TskFit {
  std::vector<int> rules;
  std::vector<LinearConsequent<Scalar>> consequents;
  VectorX<Scalar> fitted;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

/// Least-squares constants for the top-m ranked rules: argmin ||P_m c - y||.
template <typename Scalar>
ConstantFit<Scalar> solve_constant_consequents(const FiringMatrix<Scalar>& P,
                                               const VectorX<Scalar>& targets, Eigen::Index m,
                                               const RuleRanking<Scalar>& ranking) {
  if (targets.size() != P.samples())
    throw DimensionMismatch("solve_constant_consequents: target length differs from sample count");
  const MatrixX<Scalar> Pm = ranked_columns(P, m, ranking);
  const auto ls = least_squares(Pm, targets);
  ConstantFit<Scalar> fit;
  fit.rules.assign(ranking.order.begin(), ranking.order.begin() + m);
  fit.consequents = ls.x;
  fit.fitted = Pm * ls.x;
  fit.rank = ls.rank;
  fit.rank_deficient = ls.rank_deficient;
  return fit;
}

/// Joint least-squares solve for all c_ij of the top-m ranked rules.
template <typename Scalar>
TskFit<Scalar> solve_tsk_consequents(const FiringMatrix<Scalar>& P, const Dataset<Scalar>& ds,
                                     Eigen::Index m, const RuleRanking<Scalar>& ranking) {
  ds.validate();
  if (ds.size() != P.samples())
    throw DimensionMismatch("solve_tsk_consequents: dataset size differs from firing matrix");
  const MatrixX<Scalar> R = tsk_regressor<Scalar>(ranked_columns(P, m, ranking), ds.inputs);
  const auto ls = least_squares(R, ds.targets);
  const Eigen::Index p = ds.dims();
  TskFit<Scalar> fit;
  fit.rules.assign(ranking.order.begin(), ranking.order.begin() + m);
  for (Eigen::Index i = 0; i < m; ++i)
    fit.consequents.push_back({ls.x(i * (p + 1)), ls.x.segment(i * (p + 1) + 1, p)});
  fit.fitted = R * ls.x;
  fit.rank = ls.rank;
  fit.rank_deficient = ls.rank_deficient;
  return fit;
}

/// Mean squared residual (1/N) sum r_h^2.
template <typename Derived>
typename Derived::Scalar residual_variance(const Eigen::MatrixBase<Derived>& residuals) {
  if (residuals.size() == 0) return 0;
  return residuals.squaredNorm() / static_cast<typename Derived::Scalar>(residuals.size());
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar residual_variance(const Eigen::MatrixBase<DerivedA>& fitted,
                                            const Eigen::MatrixBase<DerivedB>& targets) {
  if (fitted.size() != targets.size())
    throw DimensionMismatch("residual_variance: fitted and target lengths differ");
  return residual_variance(fitted - targets);
}

}  // namespace fuzzyid

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "fuzzyid/error.hpp"

namespace fuzzyid {

/// Thin SVD A = U diag(s) V^T with s sorted non-increasing.
template <typename Scalar>
struct Svd {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> U;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> singular_values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> V;
  int sweeps = 0;

  /// Number of singular values above rel_tol * s_max.
  Eigen::Index rank(Scalar rel_tol = Scalar(1e-10)) const {
    if (singular_values.size() == 0 || !(singular_values(0) > 0)) return 0;
    const Scalar cut = rel_tol * singular_values(0);
    return (singular_values.array() > cut).count();
  }
};

struct JacobiOptions {
  double tolerance = 1e-12;
  int max_sweeps = 60;
};

namespace detail {

// Replaces the zero columns of Q (m x k, others orthonormal) with unit vectors
// orthogonal to every other column.
template <typename Matrix>
void complete_orthonormal(Matrix& Q, const std::vector<bool>& zero) {
  using Scalar = typename Matrix::Scalar;
  const Eigen::Index m = Q.rows();
  Eigen::Index probe = 0;
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    if (!zero[j]) continue;
    while (probe < m) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Unit(m, probe++);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index k = 0; k < Q.cols(); ++k)
          if (k != j && (!zero[k] || k < j)) v -= Q.col(k).dot(v) * Q.col(k);
      const Scalar norm = v.norm();
      if (norm > Scalar(1e-3)) {
        Q.col(j) = v / norm;
        break;
      }
    }
  }
}

}  // namespace detail

/// One-sided (Hestenes) Jacobi SVD. Columns are rotated pairwise until every
/// pair is orthogonal to `tolerance` relative to the product of their norms.
/// Throws NumericalError after `max_sweeps` sweeps without convergence.
template <typename Derived>
Svd<typename Derived::Scalar> jacobi_svd(const Eigen::MatrixBase<Derived>& a,
                                         const JacobiOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (a.rows() < a.cols()) {
    Svd<Scalar> t = jacobi_svd(Matrix(a.transpose()), options);
    std::swap(t.U, t.V);
    return t;
  }

  const Eigen::Index n = a.cols();
  Matrix W = a;
  Matrix V = Matrix::Identity(n, n);
  const Scalar tol = static_cast<Scalar>(options.tolerance);

  int sweep = 0;
  bool rotated = true;
  while (rotated) {
    if (sweep == options.max_sweeps)
      throw NumericalError("one-sided Jacobi SVD did not converge after " +
                           std::to_string(sweep) + " sweeps");
    ++sweep;
    rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar alpha = W.col(p).squaredNorm();
        const Scalar beta = W.col(q).squaredNorm();
        const Scalar gamma = W.col(p).dot(W.col(q));
        if (gamma == Scalar(0) || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Scalar zeta = (beta - alpha) / (2 * gamma);
        const Scalar t = (zeta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(zeta) + std::sqrt(Scalar(1) + zeta * zeta));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = c * t;
        for (Eigen::Index i = 0; i < W.rows(); ++i) {
          const Scalar wp = W(i, p), wq = W(i, q);
          W(i, p) = c * wp - s * wq;
          W(i, q) = s * wp + c * wq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const Scalar vp = V(i, p), vq = V(i, q);
          V(i, p) = c * vp - s * vq;
          V(i, q) = s * vp + c * vq;
        }
      }
    }
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sigma(n);
  for (Eigen::Index j = 0; j < n; ++j) sigma(j) = W.col(j).norm();

  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return sigma(x) > sigma(y); });

  Svd<Scalar> out;
  out.sweeps = sweep;
  out.U.resize(W.rows(), n);
  out.V.resize(n, n);
  out.singular_values.resize(n);
  std::vector<bool> zero(n, false);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index j = perm[k];
    out.singular_values(k) = sigma(j);
    out.V.col(k) = V.col(j);
    if (std::isnormal(sigma(j))) {
      out.U.col(k) = W.col(j) / sigma(j);
    } else {
      out.U.col(k).setZero();
      zero[k] = true;
    }
  }
  if (std::find(zero.begin(), zero.end(), true) != zero.end())
    detail::complete_orthonormal(out.U, zero);
  return out;
}

/// Least-squares solution of A x ~ b with rank information.
template <typename Scalar>
struct LeastSquaresSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

/// Minimizer of ||A x - b||. When A is numerically rank deficient (pivots at
/// or below rel_tol times the largest) the minimum-norm minimizer is returned
/// and rank_deficient is set.
template <typename DerivedA, typename DerivedB>
LeastSquaresSolution<typename DerivedA::Scalar> least_squares(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
    typename DerivedA::Scalar rel_tol = 1e-10) {
  using Scalar = typename DerivedA::Scalar;
  if (a.rows() != b.rows())
    throw DimensionMismatch("least_squares: A has " + std::to_string(a.rows()) +
                            " rows, b has " + std::to_string(b.rows()));
  Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> cod;
  cod.setThreshold(rel_tol);
  cod.compute(a);
  LeastSquaresSolution<Scalar> out;
  out.x = cod.solve(b);
  out.rank = cod.rank();
  out.rank_deficient = out.rank < a.cols();
  return out;
}

}  // namespace fuzzyid

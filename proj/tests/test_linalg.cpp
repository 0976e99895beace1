#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/SVD>

#include "fuzzyid/linalg.hpp"

using namespace fuzzyid;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n(0, 1);
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

void check_svd(const MatrixXd& a, double tol = 1e-10) {
  const auto s = jacobi_svd(a);
  const Eigen::Index k = std::min(a.rows(), a.cols());
  REQUIRE(s.singular_values.size() == k);
  const MatrixXd recon = s.U * s.singular_values.asDiagonal() * s.V.transpose();
  CHECK((recon - a).norm() <= tol * std::max(1.0, a.norm()));
  CHECK((s.U.transpose() * s.U - MatrixXd::Identity(k, k)).norm() <= tol);
  CHECK((s.V.transpose() * s.V - MatrixXd::Identity(k, k)).norm() <= tol);
  for (Eigen::Index i = 1; i < k; ++i) CHECK(s.singular_values(i) <= s.singular_values(i - 1));

  const Eigen::BDCSVD<MatrixXd> oracle(a);
  CHECK((s.singular_values - oracle.singularValues()).norm() <= tol * std::max(1.0, a.norm()));
}

}  // namespace

TEST_CASE("Jacobi SVD on random shapes") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int t = 0; t < 40; ++t) {
    const int r = dim(rng), c = std::min(dim(rng), 36);
    check_svd(random_matrix(rng, r, c));
  }
}

TEST_CASE("Jacobi SVD on rank-deficient input") {
  std::mt19937_64 rng(12);
  const MatrixXd b = random_matrix(rng, 20, 3);
  MatrixXd a(20, 6);
  a << b, b.col(0) + b.col(1), b.col(2), MatrixXd::Zero(20, 1);
  check_svd(a);
  const auto s = jacobi_svd(a);
  CHECK(s.rank() == 3);
  check_svd(MatrixXd::Zero(5, 3));
}

TEST_CASE("Jacobi SVD of a diagonal matrix") {
  MatrixXd d = MatrixXd::Zero(3, 3);
  d.diagonal() << 1, 3, 2;
  const auto s = jacobi_svd(d);
  CHECK(s.singular_values(0) == doctest::Approx(3));
  CHECK(s.singular_values(1) == doctest::Approx(2));
  CHECK(s.singular_values(2) == doctest::Approx(1));
}

TEST_CASE("sweep cap raises") {
  std::mt19937_64 rng(13);
  JacobiOptions tight;
  tight.max_sweeps = 1;
  CHECK_THROWS_AS(jacobi_svd(random_matrix(rng, 30, 20), tight), NumericalError);
}

TEST_CASE("least squares matches normal equations") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd a = random_matrix(rng, 40, 7);
    const VectorXd b = random_matrix(rng, 40, 1);
    const auto ls = least_squares(a, b);
    const VectorXd oracle = (a.transpose() * a).ldlt().solve(a.transpose() * b);
    CHECK((ls.x - oracle).norm() <= 1e-9 * std::max(1.0, oracle.norm()));
    CHECK_FALSE(ls.rank_deficient);
    // residual orthogonal to the column space
    const VectorXd r = b - a * ls.x;
    CHECK((a.transpose() * r).norm() <= 1e-8 * a.norm() * b.norm());
  }
}

TEST_CASE("least squares hand example") {
  MatrixXd p(3, 2);
  p << 1, 0, 0, 1, 0.5, 0.5;
  VectorXd y(3);
  y << 0, 2, 1;
  const auto ls = least_squares(p, y);
  CHECK(ls.x(0) == doctest::Approx(0).epsilon(1e-12));
  CHECK(ls.x(1) == doctest::Approx(2));
}

TEST_CASE("least squares on duplicated columns gives the minimum-norm solution") {
  MatrixXd a(4, 2);
  a << 1, 1, 2, 2, 3, 3, 4, 4;
  VectorXd b(4);
  b << 2, 4, 6, 8;
  const auto ls = least_squares(a, b);
  CHECK(ls.rank_deficient);
  CHECK(ls.rank == 1);
  CHECK(ls.x(0) == doctest::Approx(1));
  CHECK(ls.x(1) == doctest::Approx(1));
  CHECK_THROWS_AS(least_squares(a, VectorXd::Zero(3)), DimensionMismatch);
}

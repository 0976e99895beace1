#pragma once

// Second-order nonlinear benchmark plant
//   y(k) = f(y(k-1), y(k-2)) + u(k),
//   f(a, b) = a b (a - 0.5) / (1 + a^2 + b^2).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fuzzyid/estimation.hpp"

namespace fuzzyid::plant {

/// Lagged outputs (y(k-1), y(k-2)).
struct PlantState {
  double y1 = 0;
  double y2 = 0;
};

/// Which column a regression dataset uses as its target.
enum class TargetKind {
  y,  // plant output y(k) = f + u(k)
  f,  // unforced component f(y(k-1), y(k-2))
};

TargetKind parse_target_kind(const std::string& s);
const char* to_string(TargetKind t);

double unforced_f(double y1, double y2);

/// y[k] = f(y[k-1], y[k-2]) + u[k], with y[-1] = init.y1 and y[-2] = init.y2.
std::vector<double> simulate(std::span<const double> u, PlantState init = {});

/// Regression pairs taken from one simulated run. Row h corresponds to step
/// k = h + 2 of the run; the first two steps are warm-up.
struct PlantDataset {
  Eigen::MatrixXd inputs;     // columns y(k-1), y(k-2)
  Eigen::VectorXd f_targets;  // f(y(k-1), y(k-2))
  Eigen::VectorXd y_targets;  // y(k)
  Eigen::VectorXd u;          // u(k)
  std::vector<double> u_sequence;  // whole input signal, from k = 0
  std::vector<double> y_sequence;  // whole trajectory, from k = 0
  std::string signal;              // human-readable signal definition
  std::uint64_t seed = 0;

  Eigen::Index size() const { return inputs.rows(); }
  Dataset<double> dataset(TargetKind target) const;
};

/// n pairs from u(k) ~ U[-1, 1] starting at rest, deterministic in `seed`.
PlantDataset gen_training(int n = 1000, std::uint64_t seed = 1);

/// n pairs from u(k) = sin(2 pi k / period) starting at rest.
PlantDataset gen_test(int n = 200, int period = 25);

/// Builds pairs from an arbitrary input signal (length n + 2).
PlantDataset pairs_from_signal(std::vector<double> u, std::string signal, std::uint64_t seed);

}  // namespace fuzzyid::plant

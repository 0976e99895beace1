#include "fuzzyid/plant.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fuzzyid/error.hpp"
#include "fuzzyid/rng.hpp"

namespace fuzzyid::plant {

TargetKind parse_target_kind(const std::string& s) {
  if (s == "y") return TargetKind::y;
  if (s == "f") return TargetKind::f;
  throw ConfigError("target must be 'y' or 'f', got '" + s + "'");
}

const char* to_string(TargetKind t) { return t == TargetKind::y ? "y" : "f"; }

double unforced_f(double y1, double y2) {
  return y1 * y2 * (y1 - 0.5) / (1.0 + y1 * y1 + y2 * y2);
}

std::vector<double> simulate(std::span<const double> u, PlantState init) {
  std::vector<double> y;
  y.reserve(u.size());
  double lag1 = init.y1, lag2 = init.y2;
  for (double uk : u) {
    const double yk = unforced_f(lag1, lag2) + uk;
    y.push_back(yk);
    lag2 = lag1;
    lag1 = yk;
  }
  return y;
}

Dataset<double> PlantDataset::dataset(TargetKind target) const {
  return {inputs, target == TargetKind::y ? y_targets : f_targets};
}

PlantDataset pairs_from_signal(std::vector<double> u, std::string signal, std::uint64_t seed) {
  if (u.size() < 3) throw ConfigError("plant dataset needs at least one pair");
  PlantDataset d;
  d.y_sequence = simulate(u);
  d.u_sequence = std::move(u);
  d.signal = std::move(signal);
  d.seed = seed;
  const auto n = static_cast<Eigen::Index>(d.u_sequence.size()) - 2;
  d.inputs.resize(n, 2);
  d.f_targets.resize(n);
  d.y_targets.resize(n);
  d.u.resize(n);
  for (Eigen::Index h = 0; h < n; ++h) {
    const auto k = static_cast<std::size_t>(h + 2);
    d.inputs(h, 0) = d.y_sequence[k - 1];
    d.inputs(h, 1) = d.y_sequence[k - 2];
    d.f_targets(h) = unforced_f(d.inputs(h, 0), d.inputs(h, 1));
    d.y_targets(h) = d.y_sequence[k];
    d.u(h) = d.u_sequence[k];
  }
  return d;
}

PlantDataset gen_training(int n, std::uint64_t seed) {
  if (n < 3) throw ConfigError("n_train must be >= 3");
  Rng rng = make_rng(seed, "plant.train");
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> u(static_cast<std::size_t>(n) + 2);
  for (auto& v : u) v = dist(rng);
  return pairs_from_signal(std::move(u), "uniform[-1,1]", seed);
}

PlantDataset gen_test(int n, int period) {
  if (n < 3) throw ConfigError("n_test must be >= 3");
  if (period < 1) throw ConfigError("test_period must be >= 1");
  std::vector<double> u(static_cast<std::size_t>(n) + 2);
  for (std::size_t k = 0; k < u.size(); ++k)
    u[k] = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / period);
  return pairs_from_signal(std::move(u), "sin(2*pi*k/" + std::to_string(period) + ")", 0);
}

}  // namespace fuzzyid::plant

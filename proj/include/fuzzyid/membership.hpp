#pragma once

// Membership-function families and B-spline input partitions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fuzzyid/error.hpp"

namespace fuzzyid {

template <typename... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Closed interval [lo, hi] of an input variable, lo < hi.
template <typename Scalar>
struct Domain {
  Scalar lo{0};
  Scalar hi{1};

  Domain() = default;
  Domain(Scalar lo_, Scalar hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi) || !std::isfinite(static_cast<double>(lo)) ||
        !std::isfinite(static_cast<double>(hi)))
      throw ConfigError("domain requires finite lo < hi");
  }

  Scalar length() const { return hi - lo; }
  bool contains(Scalar x) const { return lo <= x && x <= hi; }
  Scalar clamp(Scalar x) const { return std::clamp(x, lo, hi); }

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Smallest domain covering `values`, widened on both sides by `margin` times
/// the observed range.
template <typename Derived>
Domain<typename Derived::Scalar> data_domain(const Eigen::DenseBase<Derived>& values,
                                             typename Derived::Scalar margin = 0.01) {
  using Scalar = typename Derived::Scalar;
  if (values.size() == 0) throw DataError("data_domain: no values");
  Scalar lo = values.minCoeff();
  Scalar hi = values.maxCoeff();
  Scalar pad = margin * (hi - lo);
  if (!(pad > 0)) pad = std::max(margin, Scalar(1e-6)) * std::max(Scalar(1), std::abs(hi));
  return {lo - pad, hi + pad};
}

// 1 left of x1, linear fall to 0 at x2.
template <typename Scalar>
struct LeftTriangle {
  Scalar x1, x2;
  friend bool operator==(const LeftTriangle&, const LeftTriangle&) = default;
};

// 0 left of x1, linear rise to 1 at x2.
template <typename Scalar>
struct RightTriangle {
  Scalar x1, x2;
  friend bool operator==(const RightTriangle&, const RightTriangle&) = default;
};

// Symmetric triangle on [x1, x2] peaking at the midpoint.
template <typename Scalar>
struct Triangle {
  Scalar x1, x2;
  friend bool operator==(const Triangle&, const Triangle&) = default;
};

// Gaussian spanning [x1, x2]: exp(-y^2/2) with y = 8(x - x1)/(x2 - x1) - 4.
template <typename Scalar>
struct GaussianSpan {
  Scalar x1, x2;
  friend bool operator==(const GaussianSpan&, const GaussianSpan&) = default;
};

// exp(-((x - center)/width)^2 / 2); the form tuned by the genetic algorithm.
template <typename Scalar>
struct GaussianCW {
  Scalar center, width;
  friend bool operator==(const GaussianCW&, const GaussianCW&) = default;
};

/// The index-th B-spline basis function of the given order (degree + 1) on a
/// non-decreasing knot vector with knots.size() = n_basis + order.
template <typename Scalar>
struct BSplineBasis {
  std::vector<Scalar> knots;
  int index = 0;
  int order = 1;
  friend bool operator==(const BSplineBasis&, const BSplineBasis&) = default;
};

template <typename Scalar>
using MembershipFunction =
    std::variant<LeftTriangle<Scalar>, RightTriangle<Scalar>, Triangle<Scalar>,
                 GaussianSpan<Scalar>, GaussianCW<Scalar>, BSplineBasis<Scalar>>;

/// Gaussian with the width clamped to at least 1e-6 of the domain length.
template <typename Scalar>
GaussianCW<Scalar> gaussian_cw(Scalar center, Scalar width, const Domain<Scalar>& domain) {
  return {center, std::max(width, Scalar(1e-6) * domain.length())};
}

/// Throws ConfigError if `mf` violates its family's invariants.
template <typename Scalar>
void validate(const MembershipFunction<Scalar>& mf) {
  std::visit(
      overloaded{
          [](const GaussianCW<Scalar>& g) {
            if (!(g.width > 0)) throw ConfigError("GaussianCW width must be positive");
          },
          [](const BSplineBasis<Scalar>& b) {
            const auto n = static_cast<int>(b.knots.size());
            if (b.order < 1 || n < b.order + 1 || b.index < 0 || b.index > n - b.order - 1)
              throw ConfigError("BSplineBasis index/order inconsistent with knot count");
            if (!std::is_sorted(b.knots.begin(), b.knots.end()) ||
                !(b.knots.front() < b.knots.back()))
              throw ConfigError("BSplineBasis knots must be non-decreasing with lo < hi");
            for (int i = 0; i + b.order < n; ++i)
              if (b.knots[i] == b.knots[i + b.order])
                throw ConfigError("BSplineBasis knot multiplicity exceeds order");
          },
          [](const auto& span) {
            if (!(span.x1 < span.x2)) throw ConfigError("membership span requires x1 < x2");
          }},
      mf);
}

namespace detail {

// Cox-de Boor evaluation of a single basis function. The right end of the
// knot vector is included in the last non-degenerate interval.
template <typename Scalar>
Scalar bspline_value(const BSplineBasis<Scalar>& b, Scalar x) {
  const auto& t = b.knots;
  const int k = b.order;
  const int i0 = b.index;
  if (x < t.front() || x > t.back()) return Scalar(0);
  if (x < t[i0] || x > t[i0 + k]) return Scalar(0);

  int last_span = static_cast<int>(t.size()) - 2;
  while (last_span > 0 && !(t[last_span] < t[last_span + 1])) --last_span;

  // n[j] holds N_{i0+j, d} for the current degree d.
  Scalar n[32];
  Scalar* buf = n;
  std::vector<Scalar> heap;
  if (k > 32) {
    heap.resize(k);
    buf = heap.data();
  }
  for (int j = 0; j < k; ++j) {
    const int s = i0 + j;
    bool inside = (t[s] <= x && x < t[s + 1]);
    if (x == t.back()) inside = (s == last_span);
    buf[j] = inside ? Scalar(1) : Scalar(0);
  }
  for (int d = 2; d <= k; ++d) {
    for (int j = 0; j + d <= k; ++j) {
      const int s = i0 + j;
      Scalar value(0);
      const Scalar left_den = t[s + d - 1] - t[s];
      const Scalar right_den = t[s + d] - t[s + 1];
      if (left_den > 0) value += (x - t[s]) / left_den * buf[j];
      if (right_den > 0) value += (t[s + d] - x) / right_den * buf[j + 1];
      buf[j] = value;
    }
  }
  return std::clamp(buf[0], Scalar(0), Scalar(1));
}

}  // namespace detail

/// Membership degree of x. Total over the reals.
template <typename Scalar>
Scalar eval_mf(const MembershipFunction<Scalar>& mf, Scalar x) {
  return std::visit(
      overloaded{
          [x](const LeftTriangle<Scalar>& m) -> Scalar {
            if (x < m.x1) return 1;
            if (x > m.x2) return 0;
            return (m.x2 - x) / (m.x2 - m.x1);
          },
          [x](const RightTriangle<Scalar>& m) -> Scalar {
            if (x < m.x1) return 0;
            if (x > m.x2) return 1;
            return (x - m.x1) / (m.x2 - m.x1);
          },
          [x](const Triangle<Scalar>& m) -> Scalar {
            if (x < m.x1 || x > m.x2) return 0;
            const Scalar mid = (m.x1 + m.x2) / 2;
            if (x <= mid) return 2 * (x - m.x1) / (m.x2 - m.x1);
            return 2 * (m.x2 - x) / (m.x2 - m.x1);
          },
          [x](const GaussianSpan<Scalar>& m) -> Scalar {
            const Scalar y = 8 * (x - m.x1) / (m.x2 - m.x1) - 4;
            return std::exp(Scalar(-0.5) * y * y);
          },
          [x](const GaussianCW<Scalar>& m) -> Scalar {
            const Scalar z = (x - m.center) / m.width;
            return std::exp(Scalar(-0.5) * z * z);
          },
          [x](const BSplineBasis<Scalar>& m) -> Scalar { return detail::bspline_value(m, x); }},
      mf);
}

/// Clamped uniform knot vector with n_basis + order knots over the domain.
template <typename Scalar>
std::vector<Scalar> clamped_uniform_knots(const Domain<Scalar>& domain, int n_basis, int order) {
  const int n_inner = n_basis - order;  // interior knots
  std::vector<Scalar> knots;
  knots.reserve(n_basis + order);
  for (int i = 0; i < order; ++i) knots.push_back(domain.lo);
  for (int i = 1; i <= n_inner; ++i)
    knots.push_back(domain.lo + domain.length() * Scalar(i) / Scalar(n_inner + 1));
  for (int i = 0; i < order; ++i) knots.push_back(domain.hi);
  return knots;
}

/// n_basis B-spline basis functions of the given order (4 = cubic) on a
/// clamped uniform knot vector. They form a partition of unity on the domain.
template <typename Scalar>
std::vector<MembershipFunction<Scalar>> build_bspline_partition(const Domain<Scalar>& domain,
                                                                int n_basis = 6, int order = 4) {
  if (order < 1 || n_basis < order)
    throw ConfigError("B-spline partition requires n_basis >= order >= 1 (got n_basis=" +
                      std::to_string(n_basis) + ", order=" + std::to_string(order) + ")");
  const auto knots = clamped_uniform_knots(domain, n_basis, order);
  std::vector<MembershipFunction<Scalar>> basis;
  basis.reserve(n_basis);
  for (int i = 0; i < n_basis; ++i) basis.emplace_back(BSplineBasis<Scalar>{knots, i, order});
  return basis;
}

/// Length of {x in domain : min(a(x), b(x)) >= xi}, measured by midpoint
/// sampling with `samples` points.
template <typename Scalar>
Scalar overlap_length(const MembershipFunction<Scalar>& a, const MembershipFunction<Scalar>& b,
                      Scalar xi, const Domain<Scalar>& domain, int samples = 2048) {
  const Scalar h = domain.length() / Scalar(samples);
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    const Scalar x = domain.lo + (Scalar(i) + Scalar(0.5)) * h;
    if (std::min(eval_mf(a, x), eval_mf(b, x)) >= xi) ++count;
  }
  return Scalar(count) * h;
}

}  // namespace fuzzyid

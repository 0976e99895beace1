#pragma once

// Constant and TSK rule bases, product-AND inference, centroid defuzzification.
//
// All weighted sums run in rule-index order, so a TSK rule base whose linear
// coefficients are zero produces bit-identical output to the constant rule
// base with c_i = c_i0.

#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "fuzzyid/error.hpp"
#include "fuzzyid/membership.hpp"

namespace fuzzyid {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class ModelKind { constant, tsk };

inline const char* to_string(ModelKind kind) {
  return kind == ModelKind::constant ? "constant" : "tsk";
}

template <typename Scalar>
struct ConstantConsequent {
  Scalar c{0};
};

/// y = c0 + coeffs . x
template <typename Scalar>
struct LinearConsequent {
  Scalar c0{0};
  VectorX<Scalar> coeffs;
};

template <typename Scalar>
using Consequent = std::variant<ConstantConsequent<Scalar>, LinearConsequent<Scalar>>;

/// One rule: for input j the antecedent picks term antecedent[j] of that
/// input's term set.
template <typename Scalar>
struct Rule {
  std::vector<int> antecedent;
  Consequent<Scalar> consequent;
};

/// Product of the antecedent membership degrees at x.
template <typename Scalar>
Scalar firing_strength(std::span<const MembershipFunction<Scalar>> antecedent,
                       const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& x) {
  if (static_cast<Eigen::Index>(antecedent.size()) != x.size())
    throw DimensionMismatch("firing_strength: antecedent has " +
                            std::to_string(antecedent.size()) + " terms, input has " +
                            std::to_string(x.size()) + " dimensions");
  Scalar w(1);
  for (std::size_t j = 0; j < antecedent.size(); ++j) w *= eval_mf(antecedent[j], x(j));
  return w;
}

/// Ordered, homogeneous set of rules over per-input term sets.
template <typename Scalar>
class RuleBase {
 public:
  using Term = MembershipFunction<Scalar>;

  RuleBase(std::vector<std::vector<Term>> terms, std::vector<Domain<Scalar>> domains,
           std::vector<Rule<Scalar>> rules)
      : terms_(std::move(terms)), domains_(std::move(domains)), rules_(std::move(rules)) {
    if (rules_.empty()) throw ConfigError("rule base must contain at least one rule");
    if (terms_.empty() || terms_.size() != domains_.size())
      throw ConfigError("rule base needs one term set and one domain per input");
    for (const auto& set : terms_) {
      if (set.empty()) throw ConfigError("empty term set");
      for (const auto& mf : set) validate(mf);
    }
    kind_ = std::holds_alternative<ConstantConsequent<Scalar>>(rules_.front().consequent)
                ? ModelKind::constant
                : ModelKind::tsk;
    for (const auto& rule : rules_) {
      if (rule.antecedent.size() != terms_.size())
        throw DimensionMismatch("rule antecedent length differs from input dimension");
      for (std::size_t j = 0; j < terms_.size(); ++j)
        if (rule.antecedent[j] < 0 || rule.antecedent[j] >= static_cast<int>(terms_[j].size()))
          throw ConfigError("rule antecedent references a missing term");
      const bool constant = std::holds_alternative<ConstantConsequent<Scalar>>(rule.consequent);
      if (constant != (kind_ == ModelKind::constant))
        throw ConfigError("rule base mixes constant and linear consequents");
      if (!constant && std::get<LinearConsequent<Scalar>>(rule.consequent).coeffs.size() !=
                           static_cast<Eigen::Index>(terms_.size()))
        throw DimensionMismatch("linear consequent length differs from input dimension");
    }
  }

  std::size_t inputs() const { return terms_.size(); }
  std::size_t size() const { return rules_.size(); }
  ModelKind kind() const { return kind_; }
  const std::vector<std::vector<Term>>& terms() const { return terms_; }
  const std::vector<Domain<Scalar>>& domains() const { return domains_; }
  const std::vector<Rule<Scalar>>& rules() const { return rules_; }
  const Rule<Scalar>& rule(std::size_t i) const { return rules_.at(i); }

  std::vector<Term> antecedent_terms(std::size_t i) const {
    std::vector<Term> out;
    const auto& r = rules_.at(i);
    for (std::size_t j = 0; j < r.antecedent.size(); ++j) out.push_back(terms_[j][r.antecedent[j]]);
    return out;
  }

  /// Unnormalized firing strengths of every rule at x. Each term is evaluated
  /// once and shared between the rules that reference it.
  VectorX<Scalar> firing_strengths(const Eigen::Ref<const VectorX<Scalar>>& x) const {
    check_input(x);
    std::vector<std::vector<Scalar>> degrees(terms_.size());
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      degrees[j].reserve(terms_[j].size());
      for (const auto& mf : terms_[j]) degrees[j].push_back(eval_mf(mf, x(j)));
    }
    VectorX<Scalar> w(rules_.size());
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      Scalar wi(1);
      for (std::size_t j = 0; j < terms_.size(); ++j) wi *= degrees[j][rules_[i].antecedent[j]];
      w(i) = wi;
    }
    return w;
  }

  void check_input(const Eigen::Ref<const VectorX<Scalar>>& x) const {
    if (x.size() != static_cast<Eigen::Index>(terms_.size()))
      throw DimensionMismatch("input has " + std::to_string(x.size()) +
                              " dimensions, rule base expects " + std::to_string(terms_.size()));
  }

 private:
  std::vector<std::vector<Term>> terms_;
  std::vector<Domain<Scalar>> domains_;
  std::vector<Rule<Scalar>> rules_;
  ModelKind kind_ = ModelKind::constant;
};

template <typename Scalar>
Scalar firing_strength(const RuleBase<Scalar>& rb, std::size_t rule,
                       const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& x) {
  const auto terms = rb.antecedent_terms(rule);
  return firing_strength<Scalar>(std::span<const MembershipFunction<Scalar>>(terms), x);
}

/// v_i = w_i / sum_k w_k. Throws ZeroFiring when no rule fires.
template <typename Scalar>
VectorX<Scalar> normalize_firing(const VectorX<Scalar>& w) {
  Scalar total(0);
  for (Eigen::Index i = 0; i < w.size(); ++i) total += w(i);
  if (!(total > 0)) throw ZeroFiring();
  VectorX<Scalar> v(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) v(i) = w(i) / total;
  return v;
}

template <typename Scalar>
VectorX<Scalar> normalized_firing(const RuleBase<Scalar>& rb,
                                  const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& x) {
  return normalize_firing<Scalar>(rb.firing_strengths(x));
}

/// Output of rule i's consequent at x.
template <typename Scalar>
Scalar rule_output(const Consequent<Scalar>& consequent,
                   const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& x) {
  return std::visit(overloaded{[](const ConstantConsequent<Scalar>& c) { return c.c; },
                               [&x](const LinearConsequent<Scalar>& l) {
                                 Scalar y = l.c0;
                                 for (Eigen::Index j = 0; j < x.size(); ++j) y += l.coeffs(j) * x(j);
                                 return y;
                               }},
                    consequent);
}

namespace detail {

template <typename Scalar>
Scalar weighted_output(const RuleBase<Scalar>& rb, const Eigen::Ref<const VectorX<Scalar>>& x) {
  const VectorX<Scalar> v = normalized_firing(rb, x);
  Scalar y(0);
  for (std::size_t i = 0; i < rb.size(); ++i) y += v(i) * rule_output(rb.rules()[i].consequent, x);
  return y;
}

}  // namespace detail

/// y = sum_i v_i c_i for a constant-consequent rule base.
template <typename Scalar>
Scalar infer_constant(const RuleBase<Scalar>& rb,
                      const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& x) {
  if (rb.kind() != ModelKind::constant)
    throw ConfigError("infer_constant called on a TSK rule base");
  return detail::weighted_output(rb, x);
}

/// y = sum_i v_i (c_i0 + c_i1 x_1 + ... + c_in x_n) for a TSK rule base.
template <typename Scalar>
Scalar infer_tsk(const RuleBase<Scalar>& rb,
                 const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& x) {
  if (rb.kind() != ModelKind::tsk) throw ConfigError("infer_tsk called on a constant rule base");
  return detail::weighted_output(rb, x);
}

/// Dispatches on the rule base's consequent kind.
template <typename Scalar>
Scalar infer(const RuleBase<Scalar>& rb,
             const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& x) {
  return detail::weighted_output(rb, x);
}

/// Complete grid of rules over the term sets, first input slowest. Rule
/// i = (k_1 * n_2 + k_2) * n_3 + ... ; consequents are zero.
template <typename Scalar>
RuleBase<Scalar> make_grid_rule_base(std::vector<std::vector<MembershipFunction<Scalar>>> terms,
                                     std::vector<Domain<Scalar>> domains, ModelKind kind) {
  const std::size_t p = terms.size();
  std::size_t count = 1;
  for (const auto& set : terms) count *= set.size();
  std::vector<Rule<Scalar>> rules;
  rules.reserve(count);
  std::vector<int> idx(p, 0);
  for (std::size_t r = 0; r < count; ++r) {
    Rule<Scalar> rule;
    rule.antecedent = idx;
    if (kind == ModelKind::constant)
      rule.consequent = ConstantConsequent<Scalar>{};
    else
      rule.consequent = LinearConsequent<Scalar>{Scalar(0), VectorX<Scalar>::Zero(p)};
    rules.push_back(std::move(rule));
    for (std::size_t j = p; j-- > 0;) {
      if (++idx[j] < static_cast<int>(terms[j].size())) break;
      idx[j] = 0;
    }
  }
  return RuleBase<Scalar>(std::move(terms), std::move(domains), std::move(rules));
}

/// Copy of `rb` keeping only the listed rules (in the listed order), with new
/// consequents.
template <typename Scalar>
RuleBase<Scalar> select_rules(const RuleBase<Scalar>& rb, std::span<const int> keep,
                              std::vector<Consequent<Scalar>> consequents) {
  if (keep.size() != consequents.size())
    throw DimensionMismatch("select_rules: one consequent per kept rule required");
  std::vector<Rule<Scalar>> rules;
  rules.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    rules.push_back({rb.rule(static_cast<std::size_t>(keep[i])).antecedent, std::move(consequents[i])});
  return RuleBase<Scalar>(rb.terms(), rb.domains(), std::move(rules));
}

/// Discrete fuzzy output set {(theta_j, m_O(theta_j))}.
template <typename Scalar>
struct FuzzyOutputSet {
  std::vector<std::pair<Scalar, Scalar>> points;
};

/// Center of gravity: sum theta_j m_j / sum m_j. Throws ZeroMass.
template <typename Scalar>
Scalar centroid_defuzzify(const FuzzyOutputSet<Scalar>& o) {
  Scalar num(0), den(0);
  for (const auto& [theta, m] : o.points) {
    num += theta * m;
    den += m;
  }
  if (!(den > 0)) throw ZeroMass();
  return num / den;
}

}  // namespace fuzzyid

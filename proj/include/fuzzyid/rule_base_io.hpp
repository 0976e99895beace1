#pragma once

// Plain-text rule base format, one rule per line:
//
//   # fuzzyid rule base
//   # fields: <term x_1> ... <term x_p> => <c> | <c0> <c1> ... <cp>
//   rulebase kind=<constant|tsk> inputs=<p> rules=<m>
//   domain <lo> <hi>                      (p lines, input order)
//   <term x_1> ... <term x_p> => <coefficients>   (m lines, rule order)
//
// Terms are written as family:param,param,...
//   left:x1,x2  right:x1,x2  tri:x1,x2  gauss:x1,x2  gcw:center,width
//   bspline:order,index,k_0,k_1,...,k_last
// Numbers use shortest round-trip formatting, so write/read is lossless.

#include <filesystem>
#include <string>

#include "fuzzyid/fuzzy_engine.hpp"

namespace fuzzyid::io {

std::string format_term(const MembershipFunction<double>& mf);
MembershipFunction<double> parse_term(const std::string& token);

std::string serialize_rule_base(const RuleBase<double>& rb);
RuleBase<double> parse_rule_base(const std::string& text);

void save_rule_base(const std::filesystem::path& path, const RuleBase<double>& rb);
RuleBase<double> load_rule_base(const std::filesystem::path& path);

}  // namespace fuzzyid::io

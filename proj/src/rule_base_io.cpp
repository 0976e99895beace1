#include "fuzzyid/rule_base_io.hpp"

#include <sstream>

#include "fuzzyid/csv.hpp"
#include "fuzzyid/error.hpp"

namespace fuzzyid::io {

namespace {

std::string join_numbers(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += format_double(v);
  }
  return out;
}

std::vector<double> numbers(const std::string& csv) {
  std::vector<double> out;
  for (const auto& part : split(csv, ',')) out.push_back(parse_double(part));
  return out;
}

std::string key_value(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw DataError("rule base header: expected " + key + "=...");
  return token.substr(key.size() + 1);
}

}  // namespace

std::string format_term(const MembershipFunction<double>& mf) {
  return std::visit(
      overloaded{
          [](const LeftTriangle<double>& m) { return "left:" + join_numbers({m.x1, m.x2}); },
          [](const RightTriangle<double>& m) { return "right:" + join_numbers({m.x1, m.x2}); },
          [](const Triangle<double>& m) { return "tri:" + join_numbers({m.x1, m.x2}); },
          [](const GaussianSpan<double>& m) { return "gauss:" + join_numbers({m.x1, m.x2}); },
          [](const GaussianCW<double>& m) { return "gcw:" + join_numbers({m.center, m.width}); },
          [](const BSplineBasis<double>& m) {
            std::string out = "bspline:" + std::to_string(m.order) + "," + std::to_string(m.index);
            for (double k : m.knots) out += "," + format_double(k);
            return out;
          }},
      mf);
}

MembershipFunction<double> parse_term(const std::string& token) {
  const auto colon = token.find(':');
  if (colon == std::string::npos) throw DataError("malformed term '" + token + "'");
  const std::string family = token.substr(0, colon);
  const auto v = numbers(token.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (v.size() != n) throw DataError("term '" + token + "' needs " + std::to_string(n) + " values");
  };
  MembershipFunction<double> mf;
  if (family == "left") {
    need(2);
    mf = LeftTriangle<double>{v[0], v[1]};
  } else if (family == "right") {
    need(2);
    mf = RightTriangle<double>{v[0], v[1]};
  } else if (family == "tri") {
    need(2);
    mf = Triangle<double>{v[0], v[1]};
  } else if (family == "gauss") {
    need(2);
    mf = GaussianSpan<double>{v[0], v[1]};
  } else if (family == "gcw") {
    need(2);
    mf = GaussianCW<double>{v[0], v[1]};
  } else if (family == "bspline") {
    if (v.size() < 4) throw DataError("bspline term '" + token + "' is too short");
    mf = BSplineBasis<double>{std::vector<double>(v.begin() + 2, v.end()), static_cast<int>(v[1]),
                              static_cast<int>(v[0])};
  } else {
    throw DataError("unknown term family '" + family + "'");
  }
  try {
    validate(mf);
  } catch (const ConfigError& e) {
    throw DataError("term '" + token + "': " + e.what());
  }
  return mf;
}

std::string serialize_rule_base(const RuleBase<double>& rb) {
  std::ostringstream out;
  out << "# fuzzyid rule base\n";
  out << "# fields: <term x_1> ... <term x_p> => <c> | <c0> <c1> ... <cp>\n";
  out << "rulebase kind=" << to_string(rb.kind()) << " inputs=" << rb.inputs()
      << " rules=" << rb.size() << "\n";
  for (const auto& d : rb.domains()) out << "domain " << format_double(d.lo) << ' ' << format_double(d.hi) << "\n";
  for (const auto& rule : rb.rules()) {
    for (std::size_t j = 0; j < rule.antecedent.size(); ++j)
      out << format_term(rb.terms()[j][rule.antecedent[j]]) << ' ';
    out << "=>";
    std::visit(overloaded{[&](const ConstantConsequent<double>& c) { out << ' ' << format_double(c.c); },
                          [&](const LinearConsequent<double>& l) {
                            out << ' ' << format_double(l.c0);
                            for (Eigen::Index j = 0; j < l.coeffs.size(); ++j)
                              out << ' ' << format_double(l.coeffs(j));
                          }},
               rule.consequent);
    out << "\n";
  }
  return out.str();
}

RuleBase<double> parse_rule_base(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  ModelKind kind = ModelKind::constant;
  std::size_t p = 0, m = 0;
  std::vector<Domain<double>> domains;
  std::vector<std::vector<MembershipFunction<double>>> terms;
  std::vector<Rule<double>> rules;

  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);

    if (!have_header) {
      if (tok.size() != 4 || tok[0] != "rulebase") throw DataError("rule base: missing header line");
      const auto k = key_value(tok[1], "kind");
      if (k != "constant" && k != "tsk") throw DataError("rule base: unknown kind '" + k + "'");
      kind = k == "constant" ? ModelKind::constant : ModelKind::tsk;
      p = static_cast<std::size_t>(parse_int(key_value(tok[2], "inputs")));
      m = static_cast<std::size_t>(parse_int(key_value(tok[3], "rules")));
      terms.resize(p);
      have_header = true;
      continue;
    }
    if (tok[0] == "domain") {
      if (tok.size() != 3) throw DataError("rule base: malformed domain line");
      try {
        domains.emplace_back(parse_double(tok[1]), parse_double(tok[2]));
      } catch (const ConfigError& e) {
        throw DataError(std::string("rule base: ") + e.what());
      }
      continue;
    }
    if (tok.size() < p + 2 || tok[p] != "=>")
      throw DataError("rule base: rule line " + std::to_string(rules.size() + 1) + " is malformed");
    Rule<double> rule;
    for (std::size_t j = 0; j < p; ++j) {
      const auto mf = parse_term(tok[j]);
      auto& set = terms[j];
      auto it = std::find(set.begin(), set.end(), mf);
      if (it == set.end()) it = set.insert(set.end(), mf);
      rule.antecedent.push_back(static_cast<int>(it - set.begin()));
    }
    const std::size_t n_coef = tok.size() - p - 1;
    if (kind == ModelKind::constant) {
      if (n_coef != 1) throw DataError("rule base: constant rule needs one coefficient");
      rule.consequent = ConstantConsequent<double>{parse_double(tok[p + 1])};
    } else {
      if (n_coef != p + 1) throw DataError("rule base: TSK rule needs p+1 coefficients");
      LinearConsequent<double> l;
      l.c0 = parse_double(tok[p + 1]);
      l.coeffs.resize(static_cast<Eigen::Index>(p));
      for (std::size_t j = 0; j < p; ++j) l.coeffs(j) = parse_double(tok[p + 2 + j]);
      rule.consequent = std::move(l);
    }
    rules.push_back(std::move(rule));
  }
  if (!have_header) throw DataError("rule base: missing header line");
  if (domains.size() != p) throw DataError("rule base: expected one domain line per input");
  if (rules.size() != m)
    throw DataError("rule base: header announces " + std::to_string(m) + " rules, found " +
                    std::to_string(rules.size()));
  try {
    return RuleBase<double>(std::move(terms), std::move(domains), std::move(rules));
  } catch (const ConfigError& e) {
    throw DataError(std::string("rule base: ") + e.what());
  }
}

void save_rule_base(const std::filesystem::path& path, const RuleBase<double>& rb) {
  write_file_atomic(path, serialize_rule_base(rb));
}

RuleBase<double> load_rule_base(const std::filesystem::path& path) {
  try {
    return parse_rule_base(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace fuzzyid::io

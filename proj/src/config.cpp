#include "fuzzyid/config.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fuzzyid/csv.hpp"
#include "fuzzyid/error.hpp"

namespace fuzzyid {

namespace {

int to_int(const std::string& key, const std::string& v) {
  try {
    return static_cast<int>(io::parse_int(v));
  } catch (const DataError&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return io::parse_double(v);
  } catch (const DataError&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& part : io::split(v, ',')) out.push_back(to_int(key, io::trim(part)));
  return out;
}

std::vector<int> per_input(const std::vector<int>& counts) {
  return counts.size() == 1 ? std::vector<int>{counts[0], counts[0]} : counts;
}

template <typename T>
std::string join(const std::vector<T>& values, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + f(values[i]);
  return out;
}

}  // namespace

FitRequest parse_fit_request(const std::string& s) {
  const auto parts = io::split(s, ':');
  if (parts.size() != 2) throw ConfigError("fit model '" + s + "' must look like kind:rules");
  FitRequest r;
  const auto kind = io::trim(parts[0]);
  if (kind == "constant")
    r.kind = ModelKind::constant;
  else if (kind == "tsk")
    r.kind = ModelKind::tsk;
  else
    throw ConfigError("fit model kind must be constant or tsk, got '" + kind + "'");
  r.rules = to_int("fit_models", io::trim(parts[1]));
  return r;
}

int ExperimentConfig::grid_rules() const {
  int total = 1;
  for (int n : n_mf) total *= n;
  return total;
}

void ExperimentConfig::set_seed(std::uint64_t s) {
  seed = s;
  ga.seed = s;
}

void ExperimentConfig::validate() const {
  if (n_train < 3) throw ConfigError("n_train must be >= 3");
  if (n_test < 3) throw ConfigError("n_test must be >= 3");
  if (test_period < 1) throw ConfigError("test_period must be >= 1");
  if (n_mf.size() != 2) throw ConfigError("n_mf needs one count per plant input (2)");
  if (ga_n_mf.size() != 2) throw ConfigError("ga_n_mf needs one count per plant input (2)");
  for (int n : n_mf)
    if (n < mf_order) throw ConfigError("n_mf must be >= mf_order");
  for (int n : ga_n_mf)
    if (n < 1) throw ConfigError("ga_n_mf entries must be >= 1");
  if (mf_order < 1) throw ConfigError("mf_order must be >= 1");
  if (!(domain_margin >= 0)) throw ConfigError("domain_margin must be >= 0");
  if (rank_retained < 0) throw ConfigError("rank_retained must be >= 0");
  if (criteria.empty()) throw ConfigError("criteria must list at least one criterion");
  for (const auto& c : criteria)
    if (c != "aic" && c != "bdic" && c != "sric") throw ConfigError("unknown criterion '" + c + "'");
  if (!(bdic_alpha > 0)) throw ConfigError("bdic_alpha must be positive");
  for (const auto& f : fit_models)
    if (f.rules < 1 || f.rules > grid_rules())
      throw ConfigError("fit model size " + std::to_string(f.rules) + " outside 1.." +
                        std::to_string(grid_rules()));
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  ga.validate();
}

std::vector<CriterionKind> ExperimentConfig::criterion_kinds() const {
  std::vector<CriterionKind> out;
  for (const auto& c : criteria) {
    if (c == "aic") out.emplace_back(Aic{});
    if (c == "bdic") out.emplace_back(Bdic{bdic_alpha});
    if (c == "sric") out.emplace_back(Sric{});
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const {
  auto d = [](double v) { return io::format_double(v); };
  auto ints = [](const std::vector<int>& v) {
    return join<int>(v, [](const int& x) { return std::to_string(x); });
  };
  return {
      {"n_train", std::to_string(n_train)},
      {"n_test", std::to_string(n_test)},
      {"seed", std::to_string(seed)},
      {"target", plant::to_string(target)},
      {"test_period", std::to_string(test_period)},
      {"n_mf", ints(n_mf)},
      {"mf_order", std::to_string(mf_order)},
      {"domain_margin", d(domain_margin)},
      {"firing", firing == FiringMode::normalized ? "normalized" : "raw"},
      {"rank_retained", std::to_string(rank_retained)},
      {"rank_pivot", rank_pivot == PivotRule::dominant_subspace ? "subspace" : "right_vectors"},
      {"criteria", join<std::string>(criteria, [](const std::string& s) { return s; })},
      {"param_mode", to_string(param_mode)},
      {"bdic_alpha", d(bdic_alpha)},
      {"fit_models", join<FitRequest>(fit_models,
                                      [](const FitRequest& f) {
                                        return std::string(to_string(f.kind)) + ":" +
                                               std::to_string(f.rules);
                                      })},
      {"population_size", std::to_string(ga.population_size)},
      {"max_generations", std::to_string(ga.max_generations)},
      {"crossover_prob", d(ga.crossover_prob)},
      {"mutation_rho", d(ga.mutation_rho)},
      {"mutation_prob", d(ga.mutation_prob)},
      {"beta", d(ga.beta)},
      {"xi", d(ga.xi)},
      {"elite_fraction", d(ga.elite_fraction)},
      {"arithmetic_crossover_share", d(ga.arithmetic_crossover_share)},
      {"overlap_normalize", ga.overlap_normalize ? "true" : "false"},
      {"ga_n_mf", ints(ga_n_mf)},
      {"threads", std::to_string(ga.threads)},
      {"output_dir", output_dir},
  };
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"n_train", [&](auto& k, auto& v) { cfg.n_train = to_int(k, v); }},
      {"n_test", [&](auto& k, auto& v) { cfg.n_test = to_int(k, v); }},
      {"seed",
       [&](auto& k, auto& v) {
         const int s = to_int(k, v);
         if (s < 0) throw ConfigError("seed must be >= 0");
         cfg.set_seed(static_cast<std::uint64_t>(s));
       }},
      {"target", [&](auto&, auto& v) { cfg.target = plant::parse_target_kind(v); }},
      {"test_period", [&](auto& k, auto& v) { cfg.test_period = to_int(k, v); }},
      {"n_mf", [&](auto& k, auto& v) { cfg.n_mf = per_input(to_int_list(k, v)); }},
      {"mf_order", [&](auto& k, auto& v) { cfg.mf_order = to_int(k, v); }},
      {"domain_margin", [&](auto& k, auto& v) { cfg.domain_margin = to_double(k, v); }},
      {"firing",
       [&](auto&, auto& v) {
         if (v != "normalized" && v != "raw") throw ConfigError("firing must be normalized or raw");
         cfg.firing = v == "raw" ? FiringMode::raw : FiringMode::normalized;
       }},
      {"rank_retained", [&](auto& k, auto& v) { cfg.rank_retained = to_int(k, v); }},
      {"rank_pivot",
       [&](auto&, auto& v) {
         if (v != "subspace" && v != "right_vectors")
           throw ConfigError("rank_pivot must be subspace or right_vectors");
         cfg.rank_pivot = v == "subspace" ? PivotRule::dominant_subspace : PivotRule::right_singular_vectors;
       }},
      {"criteria",
       [&](auto&, auto& v) {
         cfg.criteria.clear();
         for (const auto& c : io::split(v, ',')) cfg.criteria.push_back(io::trim(c));
       }},
      {"param_mode",
       [&](auto&, auto& v) {
         if (v != "rules" && v != "params") throw ConfigError("param_mode must be rules or params");
         cfg.param_mode = v == "rules" ? ParamMode::rules : ParamMode::params;
       }},
      {"bdic_alpha", [&](auto& k, auto& v) { cfg.bdic_alpha = to_double(k, v); }},
      {"fit_models",
       [&](auto&, auto& v) {
         cfg.fit_models.clear();
         for (const auto& f : io::split(v, ',')) cfg.fit_models.push_back(parse_fit_request(io::trim(f)));
       }},
      {"population_size", [&](auto& k, auto& v) { cfg.ga.population_size = to_int(k, v); }},
      {"max_generations", [&](auto& k, auto& v) { cfg.ga.max_generations = to_int(k, v); }},
      {"crossover_prob", [&](auto& k, auto& v) { cfg.ga.crossover_prob = to_double(k, v); }},
      {"mutation_rho", [&](auto& k, auto& v) { cfg.ga.mutation_rho = to_double(k, v); }},
      {"mutation_prob", [&](auto& k, auto& v) { cfg.ga.mutation_prob = to_double(k, v); }},
      {"beta", [&](auto& k, auto& v) { cfg.ga.beta = to_double(k, v); }},
      {"xi", [&](auto& k, auto& v) { cfg.ga.xi = to_double(k, v); }},
      {"elite_fraction", [&](auto& k, auto& v) { cfg.ga.elite_fraction = to_double(k, v); }},
      {"arithmetic_crossover_share",
       [&](auto& k, auto& v) { cfg.ga.arithmetic_crossover_share = to_double(k, v); }},
      {"overlap_normalize", [&](auto& k, auto& v) { cfg.ga.overlap_normalize = to_bool(k, v); }},
      {"ga_n_mf", [&](auto& k, auto& v) { cfg.ga_n_mf = per_input(to_int_list(k, v)); }},
      {"threads",
       [&](auto& k, auto& v) {
         const int t = to_int(k, v);
         if (t < 0) throw ConfigError("threads must be >= 0");
         cfg.ga.threads = static_cast<unsigned>(t);
       }},
      {"output_dir", [&](auto&, auto& v) { cfg.output_dir = v; }},
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = io::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const auto key = io::trim(line.substr(0, eq));
    const auto value = io::trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    it->second(key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_config(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace fuzzyid

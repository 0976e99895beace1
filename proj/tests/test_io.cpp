#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "fuzzyid/config.hpp"
#include "fuzzyid/csv.hpp"
#include "fuzzyid/rule_base_io.hpp"

using namespace fuzzyid;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fuzzyid_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(i % 30) - 15);
    CHECK(io::parse_double(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(3.0) == "3");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::isinf(io::parse_double("-inf")));
  CHECK(std::isnan(io::parse_double(io::format_double(std::nan("")))));
  CHECK_THROWS_AS(io::parse_double("1.5x"), DataError);
  CHECK(io::parse_int(" 42 ") == 42);
  CHECK_THROWS_AS(io::parse_int("4.2"), DataError);
}

TEST_CASE("tables") {
  const auto t = io::parse_table("# note\na,b\n1,2\n3,4\n");
  CHECK(t.comments == std::vector<std::string>{"note"});
  CHECK(t.column("b") == 1);
  CHECK(t.rows.size() == 2);
  CHECK(io::parse_table(t.to_string()).rows == t.rows);
  CHECK_THROWS_AS(t.column("c"), DataError);
  CHECK_THROWS_AS(io::parse_table("a,b\n1\n"), DataError);

  Eigen::MatrixXd m(2, 3);
  m << 1, 0.1, -2.5e-17, 4, 5, 6;
  io::write_matrix_csv(scratch("m.csv"), m, {"x", "y", "z"});
  std::vector<std::string> labels;
  CHECK(io::read_matrix_csv(scratch("m.csv"), &labels) == m);
  CHECK(labels == std::vector<std::string>{"x", "y", "z"});
  CHECK_THROWS_AS(io::read_table(scratch("missing.csv")), IoError);
}

TEST_CASE("plant CSV round-trip") {
  const auto d = plant::gen_training(50, 9);
  io::write_plant_csv(scratch("train.csv"), d);
  const auto back = io::read_plant_csv(scratch("train.csv"));
  CHECK(back.inputs == d.inputs);
  CHECK(back.f_targets == d.f_targets);
  CHECK(back.y_targets == d.y_targets);
  CHECK(back.u == d.u);
  CHECK(back.seed == d.seed);
  CHECK(back.signal == d.signal);
}

TEST_CASE("rule base round-trip") {
  const Domain<double> d{-1.5, 1.4};
  const auto b = build_bspline_partition(d, 6, 4);
  auto rb = make_grid_rule_base<double>({b, b}, {d, d}, ModelKind::tsk);
  std::vector<int> keep = {3, 17, 35};
  std::vector<Consequent<double>> cons;
  for (int i = 0; i < 3; ++i) cons.push_back(LinearConsequent<double>{0.1 * i, Eigen::Vector2d(1.0 / 3, -i * 1e-9)});
  rb = select_rules(rb, std::span<const int>(keep), cons);
  const std::string text = io::serialize_rule_base(rb);
  const auto back = io::parse_rule_base(text);
  CHECK(io::serialize_rule_base(back) == text);
  CHECK(back.size() == 3);
  CHECK(back.kind() == ModelKind::tsk);
  Eigen::Vector2d x(1.2, 1.3);  // inside the support of rule 35
  CHECK(infer(back, x) == infer(rb, x));

  const std::vector<MembershipFunction<double>> mixed = {
      LeftTriangle<double>{0, 1}, RightTriangle<double>{0, 1}, Triangle<double>{0, 1},
      GaussianSpan<double>{0, 1}, GaussianCW<double>{0.5, 0.2}};
  for (const auto& mf : mixed) CHECK(io::parse_term(io::format_term(mf)) == mf);

  io::save_rule_base(scratch("rb.txt"), back);
  CHECK(io::serialize_rule_base(io::load_rule_base(scratch("rb.txt"))) == text);

  CHECK_THROWS_AS(io::parse_term("cosine:1,2"), DataError);
  CHECK_THROWS_AS(io::parse_term("tri:1"), DataError);
  CHECK_THROWS_AS(io::parse_rule_base("rulebase kind=constant inputs=1 rules=1\n"), DataError);
}

TEST_CASE("config parsing") {
  const auto def = parse_config("");
  CHECK(def.n_train == 1000);
  CHECK(def.grid_rules() == 36);
  CHECK(def.criterion_kinds().size() == 3);

  const auto cfg = parse_config(
      "# comment\n"
      "n_train = 200   # trailing\n"
      "seed = 7\n"
      "n_mf = 4\n"
      "criteria = aic, sric\n"
      "fit_models = constant:5, tsk:3\n"
      "target = f\n"
      "population_size = 10\n");
  CHECK(cfg.n_train == 200);
  CHECK(cfg.seed == 7);
  CHECK(cfg.ga.seed == 7);
  CHECK(cfg.n_mf == std::vector<int>{4, 4});
  CHECK(cfg.grid_rules() == 16);
  CHECK(cfg.criteria == std::vector<std::string>{"aic", "sric"});
  REQUIRE(cfg.fit_models.size() == 2);
  CHECK(cfg.fit_models[1].kind == ModelKind::tsk);
  CHECK(cfg.fit_models[1].rules == 3);
  CHECK(cfg.target == plant::TargetKind::f);
  CHECK(cfg.ga.population_size == 10);
  CHECK(cfg.rank_pivot == PivotRule::dominant_subspace);
  CHECK(parse_config("rank_pivot = right_vectors\n").rank_pivot == PivotRule::right_singular_vectors);
  CHECK_THROWS_AS(parse_config("rank_pivot = v1\n"), ConfigError);

  CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("seed = 1\nseed = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_train = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_train\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("criteria = aic, hannan\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("fit_models = tsk:99\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("bdic_alpha = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_fit_request("tsk"), ConfigError);

  // resolved() covers every key and round-trips
  std::string text;
  for (const auto& [k, v] : cfg.resolved()) text += k + " = " + v + "\n";
  const auto again = parse_config(text);
  CHECK(again.resolved() == cfg.resolved());
}

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "perc/experiments.hpp"

using namespace perc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = config_from_json(nlohmann::json::parse(
      R"({"experiment":"renorm","d":2,"epsilon":0.2,"n_values":[1,2],"trials":50,"seed":9,"thin_q":[0.99]})"));
  CHECK(cfg.kind == ExperimentKind::renorm);
  CHECK(cfg.epsilon == 0.2);
  CHECK(cfg.thin_q == std::vector<double>{0.99});
  CHECK_NOTHROW(cfg.validate());

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"epsilonn":0.1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"d":"two"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"experiment":"nope"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("[1,2]")), ConfigError);

  auto bad = cfg;
  bad.d = 7;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.n_values = {4, 2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.kind = ExperimentKind::slab;
  bad.slab_arm = "slab";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("canonical config and hash") {
  ExperimentConfig a;
  ExperimentConfig b = a;
  b.threads = 8;
  b.out_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);

  const auto round = config_from_json(to_json(a));
  CHECK(config_hash(round) == config_hash(a));
}

TEST_CASE("bundled multigraphs have the advertised connectivity") {
  for (const auto& bg : bundled_multigraphs({1, 2, 3, 4, 6, 12})) REQUIRE(edge_connectivity(bg.graph) == bg.connectivity);
}

TEST_CASE("shrink study agrees with the exact value") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::shrink;
  cfg.epsilon = 0.8;
  cfg.trials = 4000;
  cfg.connectivity_values = {2, 6};
  const auto rows = shrink_study(cfg);
  CHECK(rows.size() == 14);
  for (const auto& r : rows) {
    REQUIRE(r.exact.has_value());
    const double sd = std::sqrt(std::max(*r.exact * (1 - *r.exact), 1e-12) / cfg.trials);
    REQUIRE(std::abs(r.empirical.p_hat - *r.exact) <= 4 * sd + 1e-12);
    if (r.graph_id.find("connected_base") != std::string::npos) REQUIRE(r.empirical.successes == 0);
  }
}

TEST_CASE("uniqueness curve") {
  const auto fol = Subgraph::axis_foliation(2, 1);
  const auto control = uniqueness_curve(fol, 0.0, {2, 4}, 20, 1, 0.95, 1);
  for (const auto& p : control.points) CHECK(p.estimate.successes == 0);

  const auto full = uniqueness_curve(fol, 1.0, {2, 4}, 10, 1, 0.95, 2);
  for (const auto& p : full.points) CHECK(p.estimate.successes == 10);

  const auto a = uniqueness_curve(fol, 0.3, {2, 3}, 60, 5, 0.95, 1);
  const auto b = uniqueness_curve(fol, 0.3, {2, 3}, 60, 5, 0.95, 4, 1.0);
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].estimate.successes == b.points[i].estimate.successes);

  // Thinning at q = 0 removes everything.
  const auto zero = uniqueness_curve(fol, 0.3, {2}, 20, 5, 0.95, 1, 0.0);
  CHECK(zero.points[0].estimate.successes == 0);
}

TEST_CASE("stretched exponential fit skips saturated points") {
  std::vector<UniquenessPoint> pts{{4, EstimateReport::from_counts(50, 100)},
                                   {9, EstimateReport::from_counts(75, 100)},
                                   {16, EstimateReport::from_counts(100, 100)}};
  const auto fit = stretched_exponential_fit(pts);
  CHECK(fit.points == 2);
  CHECK(fit.slope == doctest::Approx(std::log(0.5)));
}

TEST_CASE("proof geometry trial") {
  const auto fol = Subgraph::axis_foliation(2, 1);
  const auto none = proof_geometry_trial(fol, 0.0, 1, 1, 0);
  REQUIRE(none.u_counts.size() == 5);
  // Rows: U_{0,m} = 2m + 1 for m = 16, 14, 12, 10, 8.
  CHECK(none.u_counts == std::vector<std::uint64_t>{33, 29, 25, 21, 17});
  CHECK_FALSE(none.final_unique);

  const auto all = proof_geometry_trial(fol, 1.0, 1, 1, 0);
  CHECK(all.u_counts[0] == 33);
  for (std::size_t i = 1; i < all.u_counts.size(); ++i) CHECK(all.u_counts[i] == 1);
  CHECK(all.recursion_holds);
  CHECK(all.final_unique);
}

TEST_CASE("outputs and thread independence") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::uniqueness;
  cfg.n_values = {2, 4};
  cfg.trials = 50;
  cfg.plot = true;
  const auto dir = std::filesystem::temp_directory_path() / "perc_test_outputs";
  std::filesystem::remove_all(dir);
  write_outputs(cfg, run_experiment(cfg), dir / "one");
  cfg.threads = 8;
  write_outputs(cfg, run_experiment(cfg), dir / "eight");
  const std::string csv = slurp(dir / "one" / "results.csv");
  CHECK(csv == slurp(dir / "eight" / "results.csv"));
  CHECK(csv.rfind("experiment,param,n,trials,successes,p_hat,ci_low,ci_high\n", 0) == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "one" / "report.json"));
  CHECK(report.at("version") == kArtifactVersion);
  CHECK(report.at("config_hash") == config_hash(cfg));
  CHECK(report.at("results").size() == 2);
  CHECK(std::filesystem::exists(dir / "one" / "plot.gp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("every experiment kind runs") {
  for (auto kind : {ExperimentKind::shrink, ExperimentKind::renorm, ExperimentKind::pc, ExperimentKind::slab}) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.n_values = {1, 2};
    cfg.trials = 10;
    cfg.connectivity_values = {2};
    cfg.coarse_radius = 1;
    cfg.thin_q = {0.99};
    cfg.window_sizes = {1, 2};
    const auto res = run_experiment(cfg);
    CHECK_FALSE(res.rows.empty());
  }
  ExperimentConfig pg;
  pg.proof_geometry = true;
  pg.n_values = {1};
  pg.trials = 5;
  CHECK(run_experiment(pg).rows.size() == 3);
}

TEST_CASE("a generator that fails the proxy is rejected") {
  ExperimentConfig cfg;
  cfg.generator = {{"kind", "edge_list"}, {"params", {{"region", {{"d", 2}, {"r", 4}, {"center", {0, 0}}}}, {"path", "/nonexistent"}}}};
  CHECK_THROWS(run_experiment(cfg));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bottleneck/harness.hpp"
#include "bottleneck/rng.hpp"

using namespace bottleneck;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream s;
  s << is.rdbuf();
  return s.str();
}

ExperimentConfig matching(double rho, std::vector<int> ns) {
  ExperimentConfig c;
  c.schedule.beta = 4.0;
  c.schedule.rho = rho;
  c.n_list = std::move(ns);
  c.method = Method::exact;
  return c;
}

}  // namespace

TEST_CASE("tv distance") {
  const std::vector<double> law{0.5, 0.5, 0.0, 0.0};
  CHECK(tv_distance(law, 0.0, law) == 0.0);
  CHECK(tv_distance(std::vector<double>{0.0, 0.0, 1.0, 0.0}, 0.0, law) == 1.0);
  CHECK(tv_distance(std::vector<double>{0.25, 0.25, 0.25, 0.25}, 0.0, law) == doctest::Approx(0.5));
  CHECK(tv_distance(std::vector<double>{0.4, 0.4, 0.0, 0.0}, 0.2, law) == doctest::Approx(0.2));
  CHECK_THROWS(tv_distance(std::vector<double>{1.0}, 0.0, law));

  CounterRng rng(1, 0);
  auto random_masses = [&] {
    std::vector<double> v(5);
    double s = 0.0;
    for (double& x : v) s += (x = rng.uniform());
    for (double& x : v) x /= s;
    return v;
  };
  for (int t = 0; t < 200; ++t) {
    const auto p = random_masses(), q = random_masses(), r = random_masses();
    CHECK(tv_distance(p, 0.0, q) == doctest::Approx(tv_distance(q, 0.0, p)));
    CHECK(tv_distance(p, 0.0, r) <= tv_distance(p, 0.0, q) + tv_distance(q, 0.0, r) + 1e-15);
  }
}

TEST_CASE("aligned regime: TV decreases with N") {
  const auto result = run_experiment(matching(0.5, {200, 400, 800, 1600}));
  REQUIRE(result.rows.size() == 4);
  for (std::size_t i = 1; i < result.rows.size(); ++i) CHECK(*result.rows[i].tv < *result.rows[i - 1].tv);
  for (const auto& row : result.rows) {
    double sum = row.residual;
    for (double m : row.masses) sum += m;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("decoupled regime: four equal wells") {
  const auto result = run_experiment(matching(1.5, {200, 400, 800, 1600}));
  for (double m : result.rows.back().masses) CHECK(std::abs(m - 0.25) <= 0.05);
}

TEST_CASE("weighted-sign regime against the sign weights") {
  ExperimentConfig c;
  c.schedule.model = ModelKind::three_block;
  c.schedule.beta = 1.5;
  c.schedule.gamma = 0.5;
  c.schedule.rho = 0.75;
  c.schedule.b_prefactor = 40.5 / std::sqrt(840.0);
  c.schedule.a_prefactor = 1.0 / std::sqrt(c.schedule.b_prefactor);
  c.n_list = {840};
  c.method = Method::exact;
  c.wells_eps = solve_cw(1.5).value;
  const auto result = run_experiment(c);
  REQUIRE(result.law_weights.size() == 8);
  for (std::size_t w = 0; w < 8; ++w) CHECK(std::abs(result.rows[0].masses[w] - result.law_weights[w]) <= 0.05);
}

TEST_CASE("uncovered regime is reported without TV") {
  auto c = matching(1.0, {100});
  c.schedule.a_prefactor = 3.0;
  const auto result = run_experiment(c);
  CHECK_FALSE(result.regime.covered);
  CHECK_FALSE(result.rows[0].tv.has_value());
  CHECK(result.law_weights.empty());
}

TEST_CASE("mcmc method gives symmetric masses") {
  auto c = matching(0.5, {60});
  c.method = Method::mcmc;
  c.sweeps = 2000;
  c.burn_in = 200;
  c.seeds = {1, 2};
  const auto result = run_experiment(c);
  REQUIRE(result.rows.size() == 2);
  for (const auto& row : result.rows) {
    CHECK(row.method == "mcmc");
    CHECK(row.masses[0] == doctest::Approx(row.masses[3]));
  }
}

TEST_CASE("outputs are byte-identical across reruns") {
  const auto dir = fs::temp_directory_path() / "bottleneck_harness_test";
  fs::remove_all(dir);
  auto c = matching(0.5, {100, 200});
  c.output_dir = (dir / "a").string();
  write_experiment_outputs(c, run_experiment(c));
  auto d = c;
  d.output_dir = (dir / "b").string();
  d.threads = 1;
  write_experiment_outputs(d, run_experiment(d));
  for (const char* name : {"rows.csv", "tv.svg", "masses.svg"})
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  CHECK(slurp(dir / "a" / "report.json").find("\"rows\"") != std::string::npos);
  CHECK(fs::exists(dir / "a" / "effective_config.json"));
  CHECK(fs::exists(dir / "a" / "timing.csv"));
  CHECK(slurp(dir / "a" / "tv.svg").rfind("<svg", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("config file overlays flags") {
  auto c = matching(0.5, {100});
  apply_config_json(c, R"({"rho": 1.5, "N": [50, 100], "method": "mcmc", "seed": 9})");
  CHECK(c.schedule.rho == 1.5);
  CHECK(c.n_list == std::vector<int>{50, 100});
  CHECK(c.method == Method::mcmc);
  CHECK(c.seeds == std::vector<std::uint64_t>{9});
  CHECK(c.schedule.beta == 4.0);
  auto round = matching(0.7, {10});
  apply_config_json(round, config_json(c));
  CHECK(config_json(round) == config_json(c));
}

TEST_CASE("config validation") {
  CHECK_THROWS(validate(matching(0.5, {400, 200})));
  CHECK_THROWS(validate(matching(0.5, {201})));
  CHECK_THROWS(validate(matching(0.5, {})));
  CHECK_NOTHROW(validate(matching(0.5, {200, 400})));
}

TEST_CASE("fast verification suite passes and detects a broken kernel") {
  VerifyOptions fast;
  CHECK(verify_suite(fast).all_passed());
  fast.corrupt_cross_sign = true;
  CHECK_FALSE(check_detailed_balance(fast).passed);
  CHECK_FALSE(check_mcmc_vs_exact(fast).passed);
}

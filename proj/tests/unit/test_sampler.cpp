#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bottleneck/exact_gibbs.hpp"
#include "bottleneck/sampler.hpp"

using namespace bottleneck;

namespace {

double tv(const std::vector<double>& p, const LogWeightTable& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += std::abs(p[i] - t.prob_at(i));
  return 0.5 * s;
}

}  // namespace

TEST_CASE("flip probabilities") {
  CHECK(flip_probability(Dynamics::glauber, 0.0) == 0.5);
  CHECK(flip_probability(Dynamics::glauber, 800.0) == doctest::Approx(0.0));
  CHECK(flip_probability(Dynamics::glauber, -800.0) == 1.0);
  CHECK(flip_probability(Dynamics::glauber, 1.3) == doctest::Approx(1.0 / (1.0 + std::exp(1.3))));
  CHECK(flip_probability(Dynamics::metropolis, -0.2) == 1.0);
  CHECK(flip_probability(Dynamics::metropolis, 0.7) == doctest::Approx(std::exp(-0.7)));
  CHECK(parse_dynamics("metropolis") == Dynamics::metropolis);
  CHECK_THROWS(parse_dynamics("wolff"));
}

TEST_CASE("incremental energy change matches full recomputation") {
  const std::vector<ModelSpec> specs{TwoBlockSpec{30, 4.0, 0.9}, make_diluted({30, 4.0, 0.9}, 0.4, 8),
                                     ThreeBlockSpec{9, 4, 1.5, 0.7}};
  CounterRng rng(5, 0);
  for (const auto& spec : specs) {
    ChainConfig chain;
    chain.seed = 11;
    ChainState state(spec, initial_config(spec, chain));
    for (int t = 0; t < 2000; ++t) {
      const int site = static_cast<int>(rng.below(state.size()));
      const double before = energy(spec, state.config());
      const double delta = state.delta_energy(site);
      state.flip(site);
      CHECK(std::abs(energy(spec, state.config()) - before - delta) <= 1e-9);
      CHECK(state.magnetization() == magnetization(state.config()));
    }
  }
}

TEST_CASE("chains are reproducible") {
  const ModelSpec spec = TwoBlockSpec{20, 4.0, 0.3};
  ChainConfig chain;
  chain.seed = 42;
  chain.sweeps = 500;
  chain.burn_in = 10;
  const auto a = run_chain(spec, chain);
  const auto b = run_chain(spec, chain);
  CHECK(a.samples == b.samples);
  CHECK(a.sweeps == b.sweeps);
  chain.seed = 43;
  CHECK(run_chain(spec, chain).samples != a.samples);

  chain.seed = 42;
  const auto one = run_chains(spec, chain, 4, 1);
  const auto three = run_chains(spec, chain, 4, 3);
  for (int i = 0; i < 4; ++i) CHECK(one[i].samples == three[i].samples);
  CHECK(one[0].samples == a.samples);

  chain.dynamics = Dynamics::metropolis;
  const auto m = run_chain(spec, chain);
  REQUIRE(m.acceptance_rate.has_value());
  CHECK(*m.acceptance_rate > 0.0);
  CHECK(*m.acceptance_rate <= 1.0);
  CHECK_FALSE(a.acceptance_rate.has_value());

  std::ostringstream os;
  write_trajectory_csv(os, a);
  CHECK(os.str().rfind("sweep,k1,k2\n", 0) == 0);
}

TEST_CASE("infinite temperature gives symmetric magnetization") {
  const ModelSpec spec = TwoBlockSpec{40, 0.0, 0.0};
  ChainConfig chain;
  chain.seed = 7;
  chain.sweeps = 20000;
  chain.burn_in = 100;
  const auto traj = run_chain(spec, chain);
  double mean = 0.0;
  for (const auto& s : traj.samples) mean += s.m(0);
  mean /= traj.samples.size();
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(traj.samples.size() * 20.0));
}

TEST_CASE("small two-block chain matches the exact law") {
  const ModelSpec spec = TwoBlockSpec{8, 4.0, 0.5};
  ChainConfig chain;
  chain.seed = 2024;
  chain.sweeps = 1000000;
  chain.burn_in = 1000;
  const auto traj = run_chain(spec, chain);
  const auto table = exact_table(spec);
  const auto emp = empirical_law(traj, table.block_sizes);
  double total = 0.0;
  for (double x : emp) total += x;
  CHECK(total == doctest::Approx(1.0));
  CHECK(tv(emp, table) <= 0.01);
}

TEST_CASE("mask sampling") {
  const auto full = sample_mask(1000, 1.0, 3);
  CHECK(full.retained == 500);
  CHECK(sample_mask(1000, 0.3, 3).mask == sample_mask(1000, 0.3, 3).mask);
  // Chernoff: P(|M - Np/2| > d Np/2) <= 2 exp(-d^2 (Np/2) / 3).
  const int n = 1000000;
  const double p = 0.5;
  int outliers = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = sample_mask(n, p, seed);
    CHECK(s.expected == doctest::Approx(n * p / 2));
    if (s.deviation > 0.05 * n * p / 2) ++outliers;
  }
  CHECK(outliers / 100.0 <= 10.0 * 2.0 * std::exp(-0.0025 * n * p / 6.0));
}

TEST_CASE("conditional uniform configurations") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = sample_conditional_uniform(40, 0.3, -0.6, seed);
    const auto m = magnetization(c);
    CHECK(m.m(0) == doctest::Approx(0.3));
    CHECK(m.m(1) == doctest::Approx(-0.6));
  }
  CHECK_THROWS(sample_conditional_uniform(40, 0.25, 0.0, 1));

  // Chi-square of the ++ pair count at N = 8, mu = (0, 0) against the pair-count law.
  const auto law = pair_count_law(8, 0.0, 0.0);
  std::vector<double> observed(law.n_max - law.n_min + 1, 0.0);
  const int draws = 100000;
  for (int d = 0; d < draws; ++d) {
    const auto c = sample_conditional_uniform(8, 0.0, 0.0, static_cast<std::uint64_t>(d));
    int pp = 0;
    for (int i = 0; i < 4; ++i) pp += c.spins[i] > 0 && c.spins[i + 4] > 0;
    observed[pp - law.n_min] += 1.0;
  }
  double chi2 = 0.0;
  for (int k = law.n_min; k <= law.n_max; ++k) {
    const double expected = draws * law.probability(k);
    chi2 += (observed[k - law.n_min] - expected) * (observed[k - law.n_min] - expected) / expected;
  }
  CHECK(chi2 < 13.816);  // chi-square, 2 degrees of freedom, level 1e-3

  double mean = 0.0;
  for (int d = 0; d < 1000; ++d) {
    const auto c = sample_conditional_uniform(10000, 0.9, 0.9, 500 + d);
    long s = 0;
    for (int i = 0; i < 5000; ++i) s += c.spins[i] * c.spins[i + 5000];
    mean += static_cast<double>(s) / 10000.0;
  }
  CHECK(std::abs(mean / 1000.0 - 0.5 * 0.81) <= 0.01);
}

TEST_CASE("thinned cross-term concentration") {
  const auto full = thinned_cross_term_check(10000, 0.9, 0.9, 1.0, 3, 200);
  CHECK(std::abs(full.mean_ratio - 0.81) <= 0.01);
  CHECK(full.discarded == 0);

  const auto frozen = thinned_cross_term_check(1000, 1.0, 1.0, 0.1, 3, 100);
  CHECK(frozen.mean_deviation == 0.0);
  CHECK(frozen.sd_deviation == 0.0);

  double previous = 2.0;
  for (int n : {1000, 10000, 100000}) {
    const auto r = thinned_cross_term_check(n, 0.9, 0.9, 0.1, 5, 300, {0.05});
    CHECK(r.tail_frequency[0] < previous);
    previous = r.tail_frequency[0];
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "../support/brute_force.hpp"
#include "bottleneck/exact_gibbs.hpp"
#include "bottleneck/fixed_point.hpp"
#include "bottleneck/log_math.hpp"

using namespace bottleneck;

namespace {

double max_diff(const LogWeightTable& t, const std::vector<double>& law) {
  REQUIRE(t.size() == law.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(t.prob_at(i) - law[i]));
  return worst;
}

MagnetizationPoint point2(int a, int b, int half) {
  const std::array<int, 2> c{a, b}, s{half, half};
  return MagnetizationPoint(c, s);
}

}  // namespace

TEST_CASE("two-block table against raw enumeration") {
  CHECK(max_diff(exact_two_block({8, 4.0, 0.5}), oracle::two_block_law(8, 4.0, 0.5)) <= 1e-12);
  CHECK(max_diff(exact_two_block({10, 3.0, 1.5}), oracle::two_block_law(10, 3.0, 1.5)) <= 1e-12);
}

TEST_CASE("diluted table against raw enumeration") {
  const std::vector<std::uint8_t> mask{0, 1, 0, 1};
  CHECK(max_diff(exact_diluted({{8, 4.0, 0.5}, mask, 0.5, 0}), oracle::two_block_law(8, 4.0, 0.5, {0, 1, 0, 1})) <=
        1e-12);
  const std::vector<std::uint8_t> mask5{1, 1, 0, 1, 0};
  CHECK(max_diff(exact_diluted({{10, 2.5, 0.9}, mask5, 0.5, 0}), oracle::two_block_law(10, 2.5, 0.9, {1, 1, 0, 1, 0})) <=
        1e-12);
}

TEST_CASE("diluted extremes") {
  const TwoBlockSpec base{40, 4.0, 0.3};
  const auto full = exact_diluted({base, std::vector<std::uint8_t>(20, 1), 1.0, 0});
  const auto two = exact_two_block(base);
  for (std::size_t i = 0; i < two.size(); ++i) CHECK(full.prob_at(i) == doctest::Approx(two.prob_at(i)).epsilon(1e-10));
  const auto empty = exact_diluted({base, std::vector<std::uint8_t>(20, 0), 0.5, 0});
  const auto zero = exact_two_block({40, 4.0, 0.0});
  for (std::size_t i = 0; i < zero.size(); ++i) CHECK(std::abs(empty.prob_at(i) - zero.prob_at(i)) <= 1e-14);
}

TEST_CASE("three-block table against raw enumeration") {
  CHECK(max_diff(exact_three_block({2, 2, 1.5, 0.1}), oracle::three_block_law(2, 2, 1.5, 0.1)) <= 1e-12);
  CHECK(max_diff(exact_three_block({4, 3, 2.0, 0.9}), oracle::three_block_law(4, 3, 2.0, 0.9)) <= 1e-12);
}

TEST_CASE("exact symmetries and normalization") {
  const std::vector<ModelSpec> specs{TwoBlockSpec{100, 4.0, 0.2}, make_diluted({100, 4.0, 0.5}, 0.3, 2),
                                     ThreeBlockSpec{20, 7, 1.5, 0.3}};
  for (const auto& spec : specs) {
    const auto t = exact_table(spec);
    CHECK(std::abs(t.total_probability() - 1.0) <= 1e-10);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto p = t.point(i);
      CHECK(t.index_of(p) == i);
      CHECK(t.log_weights[i] == t.log_weight(p.flipped()));
    }
  }
}

TEST_CASE("thread count does not change tables") {
  const TwoBlockSpec spec{120, 4.0, 0.1};
  const auto one = exact_two_block(spec, {.threads = 1});
  const auto four = exact_two_block(spec, {.threads = 4});
  CHECK(one.log_weights == four.log_weights);
  const ThreeBlockSpec three{30, 9, 1.5, 0.2};
  CHECK(exact_three_block(three, {.threads = 1}).log_weights == exact_three_block(three, {.threads = 3}).log_weights);
}

TEST_CASE("pair-count law") {
  const auto law = pair_count_law(8, 0.0, 0.0);
  CHECK(law.n_min == 0);
  CHECK(law.n_max == 2);
  CHECK(std::exp(log_sum_exp(law.log_counts)) == doctest::Approx(36.0));
  CHECK(std::exp(law.log_total()) == doctest::Approx(36.0));

  const auto saturated = pair_count_law(8, 1.0, 0.5);
  CHECK(saturated.n_min == saturated.n_max);
  CHECK(saturated.n_min == saturated.b);
  CHECK(saturated.probability(saturated.b) == doctest::Approx(1.0));

  const auto hundred = pair_count_law(100, 0.2, 0.4);
  CHECK(std::abs(hundred.argmax() - std::lround(gamma_star(0.2, 0.4) * 100 / 4.0)) <= 1);

  // Direct enumeration at N = 8: count configurations by (a, b, n++).
  std::map<std::tuple<int, int, int>, double> counts;
  for (unsigned bits = 0; bits < 256; ++bits) {
    int a = 0, b = 0, pp = 0;
    for (int i = 0; i < 4; ++i) {
      const bool x = bits >> i & 1U, y = bits >> (i + 4) & 1U;
      a += x;
      b += y;
      pp += x && y;
    }
    counts[{a, b, pp}] += 1.0;
  }
  for (const auto& [key, count] : counts) {
    const auto [a, b, pp] = key;
    CHECK(std::exp(pair_count_law(8, point2(a, b, 4)).log_count(pp)) == doctest::Approx(count));
  }
}

TEST_CASE("gamma maximizers") {
  CHECK(gamma_star(0.0, 0.0) == 0.5);
  CHECK(gamma_star_star(0.0, 0.0) == 0.5);
  CHECK(gamma_star(1.0, 1.0) == 2.0);
  CHECK(gamma_star_star(1.0, 1.0) == 0.0);
  CHECK(gamma_star(0.5, -0.5) == doctest::Approx(0.375));
  const auto [lo, hi] = gamma_range(0.5, -0.5);
  CHECK(lo == 0.0);
  CHECK(hi == 0.5);
}

TEST_CASE("cross term") {
  CHECK(cross_term_value(4, point2(2, 2, 2), 2) == 2);
  CHECK_THROWS(cross_term_value(4, point2(2, 2, 2), 1));
  // N = 8: every configuration's cross sum equals the closed form.
  for (unsigned bits = 0; bits < 256; ++bits) {
    int a = 0, b = 0, pp = 0, s = 0;
    for (int i = 0; i < 4; ++i) {
      const int x = bits >> i & 1U, y = bits >> (i + 4) & 1U;
      a += x;
      b += y;
      pp += x && y;
      s += (2 * x - 1) * (2 * y - 1);
    }
    CHECK(cross_term_value(8, point2(a, b, 4), pp) == s);
  }
}

TEST_CASE("tilted expectation") {
  const auto law = pair_count_law(40, point2(15, 12, 20));
  CHECK(tilted_log_expectation(law, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  double direct = 0.0;
  for (int pp = law.n_min; pp <= law.n_max; ++pp)
    direct += law.probability(pp) * std::exp(0.3 * cross_term_value(40, point2(15, 12, 20), pp));
  CHECK(tilted_log_expectation(law, 0.3) == doctest::Approx(std::log(direct)).epsilon(1e-12));
}

TEST_CASE("budgets") {
  CHECK_THROWS_AS(exact_two_block({2000, 4.0, 0.1}, {.max_operations = 1e6}), BudgetExceeded);
  CHECK_THROWS_AS(exact_three_block({400, 40, 1.5, 0.1}, {.max_table_points = 1e5}), BudgetExceeded);
  CHECK(exact_cost(ThreeBlockSpec{400, 40, 1.5, 0.1}) == doctest::Approx(401.0 * 401.0 * 41.0));
}

TEST_CASE("well masses") {
  const auto t = exact_two_block({40, 4.0, 0.3});
  const auto whole = well_mass(t, WellSpec{{{0.0, 0.0}}, 1.0});
  CHECK(whole.masses[0] == doctest::Approx(1.0));
  CHECK(whole.residual == doctest::Approx(0.0).epsilon(1e-12));

  const double m = solve_cw(2.0).value;
  const WellSpec four{{{m, m}, {m, -m}, {-m, m}, {-m, -m}}, 0.1};
  const auto decoupled = well_mass(exact_two_block({400, 4.0, 0.0}), four);
  for (double mass : decoupled.masses) CHECK(std::abs(mass - 0.25) <= 0.01);
  CHECK(decoupled.residual < 1e-3);
  CHECK(decoupled.masses[0] == decoupled.masses[3]);

  double previous = 1.0;
  for (int n : {100, 200, 400}) {
    const auto r = well_mass(exact_two_block({n, 4.0, 0.0}), four);
    CHECK(r.residual < previous);
    previous = r.residual;
    double sum = r.residual;
    for (double x : r.masses) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS(validate(WellSpec{{{0.5, 0.5}, {0.6, 0.6}}, 0.1}));
  CHECK_NOTHROW(validate(WellSpec{{{0.5, 0.5}, {0.7, 0.5}}, 0.1}));
}

TEST_CASE("boundary points split between equidistant wells") {
  // N = 8: grid step 0.5, so m = 0 sits on the closure of wells centered at +-0.5 with eps 0.5.
  const auto t = exact_two_block({8, 4.0, 0.0});
  const WellSpec wells{{{0.5, 0.5}, {-0.5, 0.5}}, 0.5};
  const auto r = well_mass(t, wells);
  double expected0 = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto p = t.point(i);
    if (p.m(1) >= 0.0 && p.m(0) >= 0.0) expected0 += t.prob_at(i) * (p.m(0) == 0.0 ? 0.5 : 1.0);
  }
  CHECK(r.masses[0] == doctest::Approx(expected0).epsilon(1e-14));
  CHECK(r.masses[0] == doctest::Approx(r.masses[1]).epsilon(1e-14));
  CHECK(r.masses[0] + r.masses[1] + r.residual == doctest::Approx(1.0));
}

TEST_CASE("csv and cache") {
  const auto t = exact_three_block({3, 2, 1.5, 0.2});
  std::ostringstream os;
  write_table_csv(os, t);
  CHECK(os.str().rfind("k1,k2,k3,m1,m2,m3,log_weight,probability\n", 0) == 0);

  const ModelSpec spec = ThreeBlockSpec{3, 2, 1.5, 0.2};
  const auto path = (std::filesystem::temp_directory_path() / "bottleneck_cache_test.bin").string();
  save_table_cache(path, t, spec_hash(spec));
  const auto loaded = load_table_cache(path, spec_hash(spec));
  REQUIRE(loaded.has_value());
  CHECK(loaded->log_weights == t.log_weights);
  CHECK(loaded->log_partition == t.log_partition);
  CHECK(!load_table_cache(path, spec_hash(ThreeBlockSpec{3, 2, 1.5, 0.3})).has_value());
  std::filesystem::remove(path);
  CHECK(!load_table_cache(path, spec_hash(spec)).has_value());
}

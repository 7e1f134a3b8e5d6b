#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "../support/brute_force.hpp"
#include "bottleneck/model.hpp"
#include "bottleneck/rng.hpp"

using namespace bottleneck;

namespace {

SpinConfig config(std::initializer_list<int> s, BlockLayout layout) {
  std::vector<std::int8_t> spins;
  for (int x : s) spins.push_back(static_cast<std::int8_t>(x));
  return SpinConfig(spins, std::move(layout));
}

SpinConfig random_config(const BlockLayout& layout, CounterRng& rng) {
  std::vector<std::int8_t> spins(layout.total());
  for (auto& s : spins) s = rng.bernoulli(0.5) ? 1 : -1;
  return SpinConfig(spins, layout);
}

}  // namespace

TEST_CASE("magnetization of small configurations") {
  const auto m = magnetization(config({1, 1, 1, 1}, {{2, 2}}));
  CHECK(m.m(0) == 1.0);
  CHECK(m.m(1) == 1.0);
  const auto z = magnetization(config({1, -1, 1, -1}, {{2, 2}}));
  CHECK(z.m(0) == 0.0);
  CHECK(z.m(1) == 0.0);
  const auto t = magnetization(config({1, 1, -1, -1, 1, -1}, {{2, 2, 2}}));
  CHECK(t.m(0) == 1.0);
  CHECK(t.m(1) == -1.0);
  CHECK(t.m(2) == 0.0);
}

TEST_CASE("two-block energies by hand") {
  const BlockLayout l{{2, 2}};
  CHECK(energy_two_block({4, 4.0, 1.0}, config({1, 1, 1, 1}, l)) == doctest::Approx(-6.0));
  CHECK(energy_two_block({4, 4.0, 1.0}, config({1, 1, -1, -1}, l)) == doctest::Approx(-2.0));
  CHECK(energy_two_block({4, 4.0, 0.0}, config({1, -1, 1, 1}, l)) == doctest::Approx(-2.0));
}

TEST_CASE("diluted energies") {
  const TwoBlockSpec base{4, 4.0, 1.0};
  const BlockLayout l{{2, 2}};
  CHECK(energy_diluted({base, {1, 0}, 0.5, 0}, config({1, 1, 1, 1}, l)) == doctest::Approx(-5.0));

  CounterRng rng(3, 0);
  const TwoBlockSpec big{10, 3.0, 0.7};
  for (int t = 0; t < 50; ++t) {
    const auto c = random_config(layout_of(big), rng);
    const auto m = magnetization(c);
    const double cw = -(big.beta * big.n / 8.0) * (m.m(0) * m.m(0) + m.m(1) * m.m(1));
    CHECK(energy_diluted({big, std::vector<std::uint8_t>(5, 0), 0.5, 0}, c) == doctest::Approx(cw).epsilon(1e-12));
    CHECK(energy_diluted({big, std::vector<std::uint8_t>(5, 1), 1.0, 0}, c) ==
          doctest::Approx(energy_two_block(big, c)).epsilon(1e-12));
  }
}

TEST_CASE("three-block energies by hand") {
  const std::array<int, 3> sizes{2, 2, 2};
  const std::array<int, 3> all_plus{2, 2, 2}, mixed{2, 0, 2};
  CHECK(energy_three_block({2, 2, 1.5, 0.1}, MagnetizationPoint(all_plus, sizes)) == doctest::Approx(-4.9));
  CHECK(energy_three_block({2, 2, 1.5, 0.0}, MagnetizationPoint(mixed, sizes)) == doctest::Approx(-4.5));
  const MagnetizationPoint m(std::array<int, 3>{1, 2, 0}, sizes);
  CHECK(energy_three_block({2, 2, 1.5, 0.3}, m) == energy_three_block({2, 2, 1.5, 0.3}, m.flipped()));
}

TEST_CASE("reference energy") {
  const std::array<int, 2> sizes{2, 2};
  CHECK(energy_reference({4, 4.0, 2.0}, MagnetizationPoint(std::array<int, 2>{2, 2}, sizes)) == doctest::Approx(-6.0));
  CHECK(energy_reference({4, 4.0, 2.0}, MagnetizationPoint(std::array<int, 2>{1, 1}, sizes)) == 0.0);
  const MagnetizationPoint m(std::array<int, 2>{2, 1}, sizes);
  CHECK(energy_reference({4, 4.0, 0.0}, m) == doctest::Approx(-(4.0 * 4 / 8) * (1.0 + 0.0)));
}

TEST_CASE("energies agree with raw double sums, N <= 8") {
  for (int n : {4, 6, 8}) {
    const TwoBlockSpec spec{n, 3.0, 0.6};
    const auto layout = layout_of(spec);
    for (unsigned bits = 0; bits < (1U << n); ++bits) {
      std::vector<int> s(n);
      std::vector<std::int8_t> s8(n);
      for (int i = 0; i < n; ++i) s8[i] = static_cast<std::int8_t>(s[i] = (bits >> i) & 1U ? 1 : -1);
      const SpinConfig c(s8, layout);
      CHECK(energy_two_block(spec, c) ==
            doctest::Approx(static_cast<double>(oracle::raw_two_block_energy(n, 3.0, 0.6, s, {}))).epsilon(1e-13));
      const std::vector<int> mask_i{1, 0, 1, 1};
      std::vector<std::uint8_t> mask(mask_i.begin(), mask_i.begin() + n / 2);
      const std::vector<int> mask_o(mask_i.begin(), mask_i.begin() + n / 2);
      CHECK(energy_diluted({spec, mask, 0.5, 0}, c) ==
            doctest::Approx(static_cast<double>(oracle::raw_two_block_energy(n, 3.0, 0.6, s, mask_o))).epsilon(1e-13));
    }
  }
}

TEST_CASE("symmetries of the energy") {
  CounterRng rng(17, 1);
  const std::vector<ModelSpec> specs{TwoBlockSpec{12, 4.0, 0.8}, make_diluted({12, 4.0, 0.8}, 0.5, 4),
                                     ThreeBlockSpec{5, 3, 1.5, 0.4}};
  for (const auto& spec : specs) {
    for (int t = 0; t < 100; ++t) {
      const auto c = random_config(layout_of(spec), rng);
      CHECK(energy(spec, c) == doctest::Approx(energy(spec, c.flipped())).epsilon(1e-13));
    }
  }
  // Block exchange with matched spins: swap B1 and B2 sitewise.
  const TwoBlockSpec two{12, 4.0, 0.8};
  for (int t = 0; t < 100; ++t) {
    auto c = random_config(layout_of(two), rng);
    const double before = energy_two_block(two, c);
    std::rotate(c.spins.begin(), c.spins.begin() + 6, c.spins.end());
    CHECK(energy_two_block(two, c) == doctest::Approx(before).epsilon(1e-13));
  }
  // Three-block: reverse B1 <-> B3 and constancy on fibers.
  const ThreeBlockSpec three{5, 3, 1.5, 0.4};
  for (int t = 0; t < 100; ++t) {
    auto c = random_config(layout_of(three), rng);
    const double before = energy_three_block(three, c);
    std::swap_ranges(c.spins.begin(), c.spins.begin() + 5, c.spins.begin() + 8);
    CHECK(energy_three_block(three, c) == doctest::Approx(before).epsilon(1e-13));
    std::shuffle(c.spins.begin(), c.spins.begin() + 5, rng);
    CHECK(energy_three_block(three, c) == doctest::Approx(before).epsilon(1e-13));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(TwoBlockSpec{5, 4.0, 0.1}), ModelError);
  CHECK_THROWS_AS(validate(TwoBlockSpec{8, 1.5, 0.1}), ModelError);
  CHECK_NOTHROW(validate(TwoBlockSpec{8, 1.5, 0.1}, false));
  CHECK_THROWS_AS(validate(TwoBlockSpec{8, 4.0, 5.0}), ModelError);
  CHECK_THROWS_AS(validate(TwoBlockSpec{8, 4.0, -0.1}), ModelError);
  CHECK_THROWS_AS(validate(DilutedSpec{{8, 4.0, 0.1}, {1, 0, 1}, 0.5, 0}), ModelError);
  CHECK_THROWS_AS(validate(ThreeBlockSpec{2, 3, 1.5, 0.1}), ModelError);
  CHECK_THROWS_AS(validate(ThreeBlockSpec{4, 2, 0.9, 0.1}), ModelError);
  CHECK_NOTHROW(validate(ThreeBlockSpec{4, 2, 1.5, 3.0}));
  const std::array<int, 2> sizes{2, 2};
  CHECK_THROWS(MagnetizationPoint(std::array<int, 2>{3, 0}, sizes));
  CHECK_THROWS(energy_two_block({6, 4.0, 0.0}, config({1, 1, 1, 1}, {{2, 2}})));
}

TEST_CASE("masks") {
  CHECK(generate_mask(20, 0.3, 9) == generate_mask(20, 0.3, 9));
  CHECK(generate_mask(20, 1.0, 9) == std::vector<std::uint8_t>(10, 1));
  const auto big = generate_mask(200000, 0.25, 1);
  const double rate = std::count(big.begin(), big.end(), 1) / 100000.0;
  CHECK(rate == doctest::Approx(0.25).epsilon(0.05));
  CHECK(mask_from_bits(mask_to_bits(big)) == big);
  CHECK_THROWS_AS(mask_from_bits("01x"), ModelError);
}

TEST_CASE("config text round trip") {
  const std::vector<ModelSpec> specs{TwoBlockSpec{12, 4.0, 0.8}, make_diluted({12, 4.0, 0.8}, 0.5, 4),
                                     ThreeBlockSpec{5, 3, 1.5, 0.4}};
  for (const auto& spec : specs) {
    const auto text = to_config_text(spec);
    CHECK(to_config_text(from_config_text(text)) == text);
  }
  const auto d = std::get<DilutedSpec>(
      from_config_text(R"({"model": "diluted", "N": 40, "beta": 4, "alpha": 0.5, "p": 0.3, "mask_seed": 7})"));
  CHECK(d.mask == generate_mask(40, 0.3, 7));
  CHECK_THROWS_AS(from_config_text(R"({"model": "two_block", "N": 8})"), ModelError);
  CHECK_THROWS_AS(from_config_text("not json"), ModelError);
}

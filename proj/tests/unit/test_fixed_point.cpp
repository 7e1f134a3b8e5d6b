#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bottleneck/fixed_point.hpp"

using namespace bottleneck;

namespace {

// Plain fixed-point iteration z <- tanh(beta z + h) from z = 1 in long double.
long double iterate(long double beta, long double h) {
  long double z = 1.0L;
  for (int i = 0; i < 200000; ++i) {
    const long double next = std::tanh(beta * z + h);
    if (std::abs(next - z) < 1e-18L) return next;
    z = next;
  }
  return z;
}

}  // namespace

TEST_CASE("curie-weiss fixed points") {
  CHECK(solve_cw(0.5).value == 0.0);
  CHECK(solve_cw(1.0).value == 0.0);
  CHECK(solve_cw(0.0).value == 0.0);
  const auto two = solve_cw(2.0);
  CHECK(two.value == doctest::Approx(0.95750).epsilon(1e-5));
  CHECK(two.residual <= 1e-12);
  for (double g : {1.2, 1.5, 2.0, 3.0, 8.0})
    CHECK(std::abs(solve_cw(g).value - static_cast<double>(iterate(g, 0.0L))) <= 1e-12);
  CHECK(std::abs(solve_cw(1.5).value - 0.8578) <= 1e-3);
  CHECK_THROWS_AS(solve_cw(-1.0), std::domain_error);
}

TEST_CASE("fixed points in a field") {
  CHECK(solve_cw_field(1.5, 0.0).value == solve_cw(1.5).value);
  CHECK(solve_cw_field(1.5, 10.0).value > 0.9999);
  CHECK(solve_cw_field(0.5, 0.0).value == 0.0);
  for (double h : {0.01, 0.3, 1.0, 2.5}) {
    const auto r = solve_cw_field(1.5, h);
    CHECK(r.residual <= 1e-12);
    CHECK(std::abs(r.value - static_cast<double>(iterate(1.5L, h))) <= 1e-12);
    // Smallest root of x = tanh(beta x - h) by iterating from -1.
    long double z = -1.0L;
    for (int i = 0; i < 100000; ++i) z = std::tanh(1.5L * z - h);
    CHECK(std::abs(static_cast<double>(z) + r.value) <= 1e-12);
  }
  CHECK_THROWS_AS(solve_cw_field(1.5, -0.1), std::domain_error);
}

TEST_CASE("middle-block magnetization m(c)") {
  const double m_star = solve_cw(1.5).value;
  CHECK(m_of_c(1.5, 0.0) == m_star);
  CHECK(m_of_c(1.5, ExtendedReal::infinity()) == 1.0);
  const double one = m_of_c(1.5, 1.0);
  CHECK(one > m_star);
  CHECK(one < 1.0);
  CHECK(std::abs(one - std::tanh(1.5 * one + std::sqrt(2.0) * m_star)) <= 1e-12);
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double m = m_of_c(1.5, 0.05 * i);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("free energy") {
  CHECK(free_energy(1.5, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(free_energy(1.5, 1.0) == doctest::Approx(0.75 - std::log(2.0)));
  CHECK(free_energy(1.5, -1.0) == doctest::Approx(0.75 - std::log(2.0)));
  CHECK(spin_entropy(1.0) == 0.0);
  for (double x : {0.1, 0.5, 0.9}) CHECK(free_energy(2.0, x) == free_energy(2.0, -x));

  const double m_star = solve_cw(1.5).value;
  const int points = 100000;
  double best = -1e9, arg = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double x = -1.0 + 2.0 * i / points;
    if (free_energy(1.5, x) > best) {
      best = free_energy(1.5, x);
      arg = x;
    }
  }
  CHECK(std::abs(std::abs(arg) - m_star) <= 2.0 / points);
  const double h = 1e-6;
  CHECK(std::abs((free_energy(1.5, m_star + h) - free_energy(1.5, m_star - h)) / (2 * h)) <= 1e-8);
}

TEST_CASE("extended reals") {
  CHECK(ExtendedReal::infinity().is_infinite());
  CHECK(ExtendedReal(0.0).is_zero());
  CHECK(ExtendedReal(2.0) == ExtendedReal(2.0));
  CHECK(!(ExtendedReal(2.0) == ExtendedReal::infinity()));
  CHECK(ExtendedReal::infinity().to_string() == "inf");
}

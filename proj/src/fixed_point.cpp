#include "bottleneck/fixed_point.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bottleneck {

std::string ExtendedReal::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << value_;
  return os.str();
}

namespace {

// x - tanh(beta x + h) is convex on [0, 1] for h >= 0, negative right of 0
// up to the largest root and positive after it, so halving towards the
// side where it is positive converges to the largest nonnegative root.
FixedPointResult bisect_largest_root(double beta, double h) {
  double lo = 0.0;
  double hi = 1.0;
  int iterations = 0;
  while (hi - lo > kBracketTolerance && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid - std::tanh(beta * mid + h) > 0.0)
      hi = mid;
    else
      lo = mid;
    ++iterations;
  }
  const double value = 0.5 * (lo + hi);
  return {value, std::abs(value - std::tanh(beta * value + h)), iterations};
}

}  // namespace

FixedPointResult solve_cw(double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw std::domain_error("solve_cw: gamma must be finite and >= 0");
  if (gamma <= 1.0) return {0.0, 0.0, 0};
  return bisect_largest_root(gamma, 0.0);
}

FixedPointResult solve_cw_field(double beta, double h) {
  if (!std::isfinite(beta) || beta < 0.0 || !std::isfinite(h) || h < 0.0)
    throw std::domain_error("solve_cw_field: beta and h must be finite and >= 0");
  if (h == 0.0) return solve_cw(beta);
  return bisect_largest_root(beta, h);
}

double m_of_c(double beta, ExtendedReal c) {
  if (!(beta > 1.0)) throw std::domain_error("m_of_c: beta must exceed 1");
  if (c.is_infinite()) return 1.0;
  if (c.value() < 0.0) throw std::domain_error("m_of_c: c must be >= 0");
  const double m_star = solve_cw(beta).value;
  return solve_cw_field(beta, std::numbers::sqrt2 * c.value() * m_star).value;
}

double spin_entropy(double x) {
  if (std::abs(x) > 1.0) throw std::domain_error("spin_entropy: |x| must be <= 1");
  auto term = [](double q) { return q > 0.0 ? q * std::log(q) : 0.0; };
  return -term((1.0 + x) / 2.0) - term((1.0 - x) / 2.0);
}

double free_energy(double beta, double x) {
  return beta / 2.0 * x * x - std::numbers::ln2 + spin_entropy(x);
}

}  // namespace bottleneck

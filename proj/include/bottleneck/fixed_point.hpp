#pragma once

#include <string>

namespace bottleneck {

/// Nonnegative real or symbolic +infinity; used for the limit constants c, C.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_zero() const { return !infinite_ && value_ == 0.0; }
  // Finite value; meaningless when is_infinite().
  constexpr double value() const { return value_; }

  std::string to_string() const;

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

struct FixedPointResult {
  double value = 0.0;
  double residual = 0.0;  // |value - tanh(gamma * value + h)|
  int iterations = 0;
};

inline constexpr double kBracketTolerance = 1e-14;

/// Largest root of z = tanh(gamma z); zero when gamma <= 1.
FixedPointResult solve_cw(double gamma);

/// Largest root of x = tanh(beta x + h) for h >= 0.
FixedPointResult solve_cw_field(double beta, double h);

/// m(c): largest root of x = tanh(beta x + sqrt(2) c m*(beta)), with m(inf) = 1.
double m_of_c(double beta, ExtendedReal c);

/// Binary entropy in nats of a spin with mean x; s(+-1) = 0.
double spin_entropy(double x);

/// F_beta(x) = beta/2 x^2 - log 2 + s(x).
double free_energy(double beta, double x);

}  // namespace bottleneck

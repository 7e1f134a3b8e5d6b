#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace bottleneck {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log C(n, k); throws std::out_of_range unless 0 <= k <= n.
double log_binomial(long n, long k);

/// Log-factorials 0..max_n held in long double, so that log C(n, k) is a
/// difference of three cached entries.
class LogFactorials {
 public:
  explicit LogFactorials(long max_n);

  long max_n() const { return static_cast<long>(table_.size()) - 1; }
  long double log_factorial(long n) const { return table_[n]; }

  // No range check; callers iterate over valid (n, k).
  double log_binomial(long n, long k) const {
    return static_cast<double>(table_[n] - table_[k] - table_[n - k]);
  }

  double checked_log_binomial(long n, long k) const;

 private:
  std::vector<long double> table_;
};

// Streaming log-sum-exp: keeps the running maximum and a sum of scaled
// exponentials, rescaling when a larger term arrives. Summation order is
// the call order, so results are reproducible for a fixed order.
class LogSumExp {
 public:
  void add(double x) {
    if (x == kNegInf) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  void merge(const LogSumExp& other) {
    if (other.max_ == kNegInf) return;
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
  }

  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(sum_); }
  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

double log_sum_exp(std::span<const double> xs);

}  // namespace bottleneck

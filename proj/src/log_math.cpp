#include "bottleneck/log_math.hpp"

#include <stdexcept>
#include <string>

namespace bottleneck {

double log_binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n)
    throw std::out_of_range("log_binomial: need 0 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  if (k == 0 || k == n) return 0.0;
  return static_cast<double>(std::lgamma(static_cast<long double>(n) + 1) -
                             std::lgamma(static_cast<long double>(k) + 1) -
                             std::lgamma(static_cast<long double>(n - k) + 1));
}

LogFactorials::LogFactorials(long max_n) {
  if (max_n < 0) throw std::out_of_range("LogFactorials: max_n must be >= 0");
  table_.resize(static_cast<std::size_t>(max_n) + 1);
  for (long n = 0; n <= max_n; ++n) table_[n] = std::lgamma(static_cast<long double>(n) + 1);
  table_[0] = 0.0L;
  if (max_n >= 1) table_[1] = 0.0L;
}

double LogFactorials::checked_log_binomial(long n, long k) const {
  if (n < 0 || k < 0 || k > n) throw std::out_of_range("log_binomial: need 0 <= k <= n");
  if (n > max_n()) throw std::out_of_range("log_binomial: n exceeds cached range");
  return log_binomial(n, k);
}

double log_sum_exp(std::span<const double> xs) {
  LogSumExp acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

}  // namespace bottleneck

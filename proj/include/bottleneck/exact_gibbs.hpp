#pragma once

// Exact finite-N Gibbs laws of the block magnetization vector, computed by
// log-space summation over configuration counts.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bottleneck/model.hpp"

namespace bottleneck {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactOptions {
  double max_operations = 1e9;     // two-block and diluted summation cost
  double max_table_points = 1e8;   // three-block dense table size
  int threads = 0;                 // 0: BOTTLENECK_THREADS or hardware concurrency
};

/// Unnormalized log-weights over every admissible magnetization vector,
/// stored densely in row-major plus-count order (last block fastest).
struct LogWeightTable {
  std::vector<int> block_sizes;
  std::vector<double> log_weights;
  double log_partition = 0.0;

  std::size_t size() const { return log_weights.size(); }
  int blocks() const { return static_cast<int>(block_sizes.size()); }
  MagnetizationPoint point(std::size_t index) const;
  std::size_t index_of(const MagnetizationPoint& m) const;
  double log_weight(const MagnetizationPoint& m) const { return log_weights[index_of(m)]; }
  double log_prob(const MagnetizationPoint& m) const { return log_weight(m) - log_partition; }
  double prob(const MagnetizationPoint& m) const;
  double prob_at(std::size_t index) const;
  double total_probability() const;
  /// Law of one block's plus-count.
  std::vector<double> marginal(int block) const;
};

/// Number of ++ matched pairs n given a plus spins in B1 and b in B2.
struct PairCountLaw {
  int n = 0;  // total spins
  int a = 0;
  int b = 0;
  int n_min = 0;
  int n_max = 0;
  std::vector<double> log_counts;  // index n - n_min

  double mu1() const { return 4.0 * a / n - 1.0; }
  double mu2() const { return 4.0 * b / n - 1.0; }
  double log_count(int pairs) const { return log_counts.at(pairs - n_min); }
  /// log C(N/2, a) + log C(N/2, b)
  double log_total() const;
  double probability(int pairs) const;
  int argmax() const;
};

PairCountLaw pair_count_law(int n, const MagnetizationPoint& mu);
PairCountLaw pair_count_law(int n, double mu1, double mu2);

/// Feasible range [max(0, mu1+mu2), min(1+mu1, 1+mu2)] for gamma = 4n/N.
std::pair<double, double> gamma_range(double mu1, double mu2);
double gamma_star(double mu1, double mu2);
double gamma_star_star(double mu1, double mu2);

// Sum over matched pairs of sigma_i sigma_{i+N/2} for any configuration with
// `pairs` ++ pairs at plus-counts (a, b). With the four pair counts
// n_{++} = n, n_{+-} = a - n, n_{-+} = b - n, n_{--} = N/2 - a - b + n the sum
// is n_{++} + n_{--} - n_{+-} - n_{-+} = 4n + N/2 - 2a - 2b, i.e.
// S = 4n - N/2 - N(mu1 + mu2)/2.
long cross_term_value(int n, const MagnetizationPoint& mu, int pairs);

/// log E[exp(alpha S)] under the uniform law on configurations at fixed magnetization.
double tilted_log_expectation(const PairCountLaw& law, double alpha);

double exact_cost(const ModelSpec& spec);

LogWeightTable exact_two_block(const TwoBlockSpec& spec, const ExactOptions& options = {});
LogWeightTable exact_diluted(const DilutedSpec& spec, const ExactOptions& options = {});
LogWeightTable exact_three_block(const ThreeBlockSpec& spec, const ExactOptions& options = {});
LogWeightTable exact_table(const ModelSpec& spec, const ExactOptions& options = {});

/// Boxes of half-width eps around each center; open boxes must be disjoint.
struct WellSpec {
  std::vector<std::vector<double>> centers;
  double half_width = 0.1;
};

void validate(const WellSpec& wells);

struct WellMassReport {
  std::vector<double> masses;
  double residual = 0.0;
  std::optional<double> tv;
  std::string regime;
};

// Points strictly inside a box belong to it. A point on the closure of one or
// more boxes goes to the nearest center among them; exact ties split evenly.
WellMassReport well_mass(const LogWeightTable& table, const WellSpec& wells);

void write_table_csv(std::ostream& os, const LogWeightTable& table);

std::uint64_t spec_hash(const ModelSpec& spec);
void save_table_cache(const std::string& path, const LogWeightTable& table, std::uint64_t hash);
/// Empty when the file is missing, malformed, or keyed by a different hash.
std::optional<LogWeightTable> load_table_cache(const std::string& path, std::uint64_t hash);

}  // namespace bottleneck

#pragma once

// Single-spin-flip MCMC for the three bottleneck models, quenched mask
// generation, and uniform sampling at fixed block magnetization.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bottleneck/model.hpp"
#include "bottleneck/rng.hpp"

namespace bottleneck {

enum class Dynamics { glauber, metropolis };

Dynamics parse_dynamics(const std::string& name);

struct ChainConfig {
  std::uint64_t seed = 1;
  long sweeps = 1000;  // one sweep = N proposals at uniformly random sites
  long burn_in = 100;
  long thin = 1;
  Dynamics dynamics = Dynamics::glauber;
  std::uint64_t stream = 0;
  // Start with every spin of block k equal to initial_signs[k]; random start if empty.
  std::vector<int> initial_signs;
};

void validate(const ChainConfig& chain);

struct Trajectory {
  std::vector<long> sweeps;  // sweep index of each sample
  std::vector<MagnetizationPoint> samples;
  std::optional<double> acceptance_rate;  // metropolis only
};

/// Probability of accepting a proposed flip with energy change delta_energy.
double flip_probability(Dynamics dynamics, double delta_energy);

// Spin state with cached block sums so that a flip's energy change costs
// O(1). cross_sign scales the inter-block term of the energy change; values
// other than +1 exist to check that the test suite detects a broken kernel.
class ChainState {
 public:
  ChainState(const ModelSpec& spec, SpinConfig config, double cross_sign = 1.0);

  double delta_energy(int site) const;
  void flip(int site);

  const SpinConfig& config() const { return config_; }
  int size() const { return config_.size(); }
  MagnetizationPoint magnetization() const;

 private:
  ModelSpec spec_;
  SpinConfig config_;
  std::vector<int> block_of_;
  std::vector<int> partner_;  // matched partner or -1
  std::array<long, kMaxBlocks> sums_{};
  double cross_sign_;
};

SpinConfig initial_config(const ModelSpec& spec, const ChainConfig& chain);

Trajectory run_chain(const ModelSpec& spec, const ChainConfig& chain);
Trajectory run_chain(ChainState state, const ChainConfig& chain);

/// Independent chains on streams chain.stream + i, run in parallel; output order is by i.
std::vector<Trajectory> run_chains(const ModelSpec& spec, const ChainConfig& chain, int count, int threads = 0);

/// Empirical law on the dense plus-count grid (same indexing as LogWeightTable).
std::vector<double> empirical_law(const Trajectory& trajectory, const std::vector<int>& block_sizes);

struct MaskSample {
  std::vector<std::uint8_t> mask;
  int retained = 0;
  double expected = 0.0;   // N p / 2
  double deviation = 0.0;  // |M - N p / 2|
};

MaskSample sample_mask(int n, double p, std::uint64_t seed);

/// Uniform configuration with exactly the given block magnetizations.
SpinConfig sample_conditional_uniform(int n, double mu1, double mu2, std::uint64_t seed);

struct ThinnedCrossReport {
  int draws = 0;
  int discarded = 0;            // draws with M = 0
  double mean_ratio = 0.0;      // mean of (1/M) sum over retained pairs
  double mean_deviation = 0.0;  // mean of ratio - mu1 mu2
  double sd_deviation = 0.0;
  std::vector<double> thresholds;
  std::vector<double> tail_frequency;  // fraction of kept draws with |deviation| > threshold
};

ThinnedCrossReport thinned_cross_term_check(int n, double mu1, double mu2, double p, std::uint64_t seed, int draws,
                                            std::vector<double> thresholds = {0.01, 0.05, 0.1});

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);
void write_mask(std::ostream& os, const std::vector<std::uint8_t>& mask);

}  // namespace bottleneck

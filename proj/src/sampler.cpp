#include "bottleneck/sampler.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "bottleneck/parallel.hpp"

namespace bottleneck {

Dynamics parse_dynamics(const std::string& name) {
  if (name == "glauber") return Dynamics::glauber;
  if (name == "metropolis") return Dynamics::metropolis;
  throw std::invalid_argument("unknown dynamics '" + name + "' (expected glauber or metropolis)");
}

void validate(const ChainConfig& chain) {
  if (!(chain.sweeps > chain.burn_in && chain.burn_in >= 0)) throw std::invalid_argument("need sweeps > burn_in >= 0");
  if (chain.thin < 1) throw std::invalid_argument("thin must be >= 1");
}

double flip_probability(Dynamics dynamics, double delta_energy) {
  if (dynamics == Dynamics::metropolis) return delta_energy <= 0.0 ? 1.0 : std::exp(-delta_energy);
  if (delta_energy > 0.0) {
    const double e = std::exp(-delta_energy);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(delta_energy));
}

ChainState::ChainState(const ModelSpec& spec, SpinConfig config, double cross_sign)
    : spec_(spec), config_(std::move(config)), cross_sign_(cross_sign) {
  validate(spec_, false);
  const BlockLayout layout = layout_of(spec_);
  if (config_.layout.sizes != layout.sizes) throw std::invalid_argument("configuration layout does not match the model");
  block_of_.resize(config_.size());
  partner_.assign(config_.size(), -1);
  for (int i = 0; i < config_.size(); ++i) {
    block_of_[i] = layout.block_of(i);
    sums_[block_of_[i]] += config_.spins[i];
  }
  const std::vector<std::uint8_t>* mask = nullptr;
  if (const auto* d = std::get_if<DilutedSpec>(&spec_)) mask = &d->mask;
  if (spec_.index() != 2) {
    const int half = layout.sizes[0];
    for (int i = 0; i < half; ++i) {
      if (mask && (*mask)[i] == 0) continue;
      partner_[i] = i + half;
      partner_[i + half] = i;
    }
  }
}

double ChainState::delta_energy(int site) const {
  const int k = block_of_[site];
  const int s = config_.spins[site];
  if (const auto* t = std::get_if<ThreeBlockSpec>(&spec_)) {
    const double size = k == 1 ? t->b : t->n_outer;
    const double d = -2.0 * s;
    const double sum = static_cast<double>(sums_[k]);
    const double curie_weiss = -t->beta / (2.0 * size) * (2.0 * sum * d + d * d);
    const double coupling = t->alpha / std::sqrt(static_cast<double>(t->n_outer) * t->b);
    const double neighbours = k == 1 ? static_cast<double>(sums_[0] + sums_[2]) : static_cast<double>(sums_[1]);
    return curie_weiss - cross_sign_ * coupling * d * neighbours;
  }
  const TwoBlockSpec& base = spec_.index() == 0 ? std::get<TwoBlockSpec>(spec_) : std::get<DilutedSpec>(spec_).base;
  double delta = 2.0 * base.beta / base.n * (s * static_cast<double>(sums_[k]) - 1.0);
  if (const int p = partner_[site]; p >= 0) delta += cross_sign_ * 2.0 * base.alpha * s * config_.spins[p];
  return delta;
}

void ChainState::flip(int site) {
  sums_[block_of_[site]] -= 2 * config_.spins[site];
  config_.spins[site] = static_cast<std::int8_t>(-config_.spins[site]);
}

MagnetizationPoint ChainState::magnetization() const {
  const auto& sizes = config_.layout.sizes;
  std::array<int, kMaxBlocks> counts{};
  for (std::size_t k = 0; k < sizes.size(); ++k) counts[k] = static_cast<int>((sizes[k] + sums_[k]) / 2);
  return MagnetizationPoint(std::span<const int>(counts.data(), sizes.size()), sizes);
}

SpinConfig initial_config(const ModelSpec& spec, const ChainConfig& chain) {
  const BlockLayout layout = layout_of(spec);
  std::vector<std::int8_t> spins(layout.total());
  if (!chain.initial_signs.empty()) {
    if (static_cast<int>(chain.initial_signs.size()) != layout.blocks())
      throw std::invalid_argument("initial_signs needs one sign per block");
    for (int i = 0; i < layout.total(); ++i) spins[i] = chain.initial_signs[layout.block_of(i)] >= 0 ? 1 : -1;
  } else {
    CounterRng rng(chain.seed, ~chain.stream);
    for (auto& s : spins) s = rng.bernoulli(0.5) ? 1 : -1;
  }
  return SpinConfig(std::move(spins), layout);
}

Trajectory run_chain(const ModelSpec& spec, const ChainConfig& chain) {
  return run_chain(ChainState(spec, initial_config(spec, chain)), chain);
}

Trajectory run_chain(ChainState state, const ChainConfig& chain) {
  validate(chain);
  CounterRng rng(chain.seed, chain.stream);
  const int n = state.size();
  Trajectory out;
  const long kept = (chain.sweeps - chain.burn_in) / chain.thin;
  out.samples.reserve(static_cast<std::size_t>(kept));
  out.sweeps.reserve(static_cast<std::size_t>(kept));
  long accepted = 0;
  for (long sweep = 1; sweep <= chain.sweeps; ++sweep) {
    for (int step = 0; step < n; ++step) {
      const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const double delta = state.delta_energy(site);
      if (rng.uniform() < flip_probability(chain.dynamics, delta)) {
        state.flip(site);
        ++accepted;
      }
    }
    if (sweep > chain.burn_in && (sweep - chain.burn_in) % chain.thin == 0) {
      out.sweeps.push_back(sweep);
      out.samples.push_back(state.magnetization());
    }
  }
  if (chain.dynamics == Dynamics::metropolis)
    out.acceptance_rate = static_cast<double>(accepted) / (static_cast<double>(chain.sweeps) * n);
  return out;
}

std::vector<Trajectory> run_chains(const ModelSpec& spec, const ChainConfig& chain, int count, int threads) {
  std::vector<Trajectory> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    ChainConfig c = chain;
    c.stream = chain.stream + i;
    out[i] = run_chain(spec, c);
  });
  return out;
}

std::vector<double> empirical_law(const Trajectory& trajectory, const std::vector<int>& block_sizes) {
  std::size_t total = 1;
  for (int s : block_sizes) total *= static_cast<std::size_t>(s + 1);
  std::vector<double> law(total, 0.0);
  if (trajectory.samples.empty()) return law;
  const double weight = 1.0 / static_cast<double>(trajectory.samples.size());
  for (const auto& p : trajectory.samples) {
    std::size_t index = 0;
    for (std::size_t j = 0; j < block_sizes.size(); ++j)
      index = index * static_cast<std::size_t>(block_sizes[j] + 1) + static_cast<std::size_t>(p.plus_count(static_cast<int>(j)));
    law[index] += weight;
  }
  return law;
}

MaskSample sample_mask(int n, double p, std::uint64_t seed) {
  MaskSample out;
  out.mask = generate_mask(n, p, seed);
  out.retained = static_cast<int>(std::accumulate(out.mask.begin(), out.mask.end(), 0));
  out.expected = n * p / 2.0;
  out.deviation = std::abs(out.retained - out.expected);
  return out;
}

namespace {

// Sets `count` uniformly chosen entries of spins[offset, offset + size) to +1.
void place_plus(std::vector<std::int8_t>& spins, int offset, int size, int count, CounterRng& rng) {
  std::vector<int> slots(size);
  std::iota(slots.begin(), slots.end(), 0);
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(size - i)));
    std::swap(slots[i], slots[j]);
    spins[offset + slots[i]] = 1;
  }
}

int admissible_count(int size, double mu) {
  const double k = size * (1.0 + mu) / 2.0;
  const double rounded = std::round(k);
  if (mu < -1.0 || mu > 1.0 || std::abs(k - rounded) > 1e-9)
    throw std::invalid_argument("magnetization is not admissible for block size " + std::to_string(size));
  return static_cast<int>(rounded);
}

}  // namespace

SpinConfig sample_conditional_uniform(int n, double mu1, double mu2, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("spin count must be even");
  const int half = n / 2;
  const int a = admissible_count(half, mu1);
  const int b = admissible_count(half, mu2);
  CounterRng rng(seed, 0x636f6e64ULL);
  std::vector<std::int8_t> spins(n, -1);
  place_plus(spins, 0, half, a, rng);
  place_plus(spins, half, half, b, rng);
  return SpinConfig(std::move(spins), BlockLayout{{half, half}});
}

ThinnedCrossReport thinned_cross_term_check(int n, double mu1, double mu2, double p, std::uint64_t seed, int draws,
                                            std::vector<double> thresholds) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("retention probability p must lie in (0, 1]");
  ThinnedCrossReport report;
  report.draws = draws;
  report.thresholds = std::move(thresholds);
  report.tail_frequency.assign(report.thresholds.size(), 0.0);
  std::vector<double> deviations;
  double ratio_sum = 0.0;
  for (int d = 0; d < draws; ++d) {
    const std::uint64_t draw_seed = CounterRng::mix64(seed + 0x9e3779b97f4a7c15ULL * (d + 1));
    const SpinConfig config = sample_conditional_uniform(n, mu1, mu2, draw_seed);
    const auto mask = generate_mask(n, p, draw_seed ^ 0x5bd1e995ULL);
    const int retained = static_cast<int>(std::accumulate(mask.begin(), mask.end(), 0));
    if (retained == 0) {
      ++report.discarded;
      continue;
    }
    const double ratio = static_cast<double>(cross_sum(config, mask)) / retained;
    ratio_sum += ratio;
    deviations.push_back(ratio - mu1 * mu2);
  }
  const auto kept = static_cast<double>(deviations.size());
  if (kept == 0) return report;
  report.mean_ratio = ratio_sum / kept;
  report.mean_deviation = std::accumulate(deviations.begin(), deviations.end(), 0.0) / kept;
  double sq = 0.0;
  for (double x : deviations) sq += (x - report.mean_deviation) * (x - report.mean_deviation);
  report.sd_deviation = deviations.size() > 1 ? std::sqrt(sq / (kept - 1.0)) : 0.0;
  for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
    double hits = 0.0;
    for (double x : deviations)
      if (std::abs(x) > report.thresholds[t]) hits += 1.0;
    report.tail_frequency[t] = hits / kept;
  }
  return report;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  const int blocks = trajectory.samples.empty() ? 0 : trajectory.samples.front().blocks();
  os << "sweep";
  for (int j = 0; j < blocks; ++j) os << ",k" << j + 1;
  os << '\n';
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
    os << trajectory.sweeps[i];
    for (int j = 0; j < blocks; ++j) os << ',' << trajectory.samples[i].plus_count(j);
    os << '\n';
  }
}

void write_mask(std::ostream& os, const std::vector<std::uint8_t>& mask) { os << mask_to_bits(mask) << '\n'; }

}  // namespace bottleneck

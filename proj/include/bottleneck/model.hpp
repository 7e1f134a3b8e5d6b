#pragma once

// Bottleneck Curie-Weiss models: two blocks joined by a perfect matching,
// the same with a diluted matching, and three blocks with a small middle block.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bottleneck {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxBlocks = 3;

struct TwoBlockSpec {
  int n = 4;           // total spin count, even
  double beta = 4.0;
  double alpha = 0.0;  // coupling per matched pair

  int half() const { return n / 2; }
};

struct DilutedSpec {
  TwoBlockSpec base;
  std::vector<std::uint8_t> mask;  // one entry per matched pair, 0 or 1
  double p = 1.0;                  // retention probability the mask was drawn with
  std::uint64_t mask_seed = 0;

  int retained() const;
};

struct ThreeBlockSpec {
  int n_outer = 1;  // |B1| = |B3|
  int b = 1;        // |B2|
  double beta = 1.5;
  double alpha = 0.0;

  int total() const { return 2 * n_outer + b; }
};

using ModelSpec = std::variant<TwoBlockSpec, DilutedSpec, ThreeBlockSpec>;

// Structural checks always apply (sizes, mask length, alpha >= 0, beta >= 0).
// With require_regime the temperature regime of the limit theorems is also
// enforced: beta > 2 and alpha <= beta for the matching models, beta > 1 for
// the three-block model.
void validate(const TwoBlockSpec& spec, bool require_regime = true);
void validate(const DilutedSpec& spec, bool require_regime = true);
void validate(const ThreeBlockSpec& spec, bool require_regime = true);
void validate(const ModelSpec& spec, bool require_regime = true);

std::string model_name(const ModelSpec& spec);
int spin_count(const ModelSpec& spec);

/// Sizes of the blocks in label order.
struct BlockLayout {
  std::vector<int> sizes;

  int blocks() const { return static_cast<int>(sizes.size()); }
  int total() const;
  int offset(int block) const;
  int block_of(int site) const;
};

BlockLayout layout_of(const TwoBlockSpec& spec);
BlockLayout layout_of(const DilutedSpec& spec);
BlockLayout layout_of(const ThreeBlockSpec& spec);
BlockLayout layout_of(const ModelSpec& spec);

struct SpinConfig {
  std::vector<std::int8_t> spins;
  BlockLayout layout;

  SpinConfig() = default;
  SpinConfig(std::vector<std::int8_t> s, BlockLayout l);

  int size() const { return static_cast<int>(spins.size()); }
  SpinConfig flipped() const;
};

/// Admissible block magnetization stored as plus-counts; m_j = 2k_j/|B_j| - 1.
class MagnetizationPoint {
 public:
  MagnetizationPoint() = default;
  MagnetizationPoint(std::span<const int> plus_counts, std::span<const int> block_sizes);

  static MagnetizationPoint from_values(std::span<const double> m, std::span<const int> block_sizes);

  int blocks() const { return blocks_; }
  int plus_count(int j) const { return counts_[j]; }
  int block_size(int j) const { return sizes_[j]; }
  double m(int j) const { return 2.0 * counts_[j] / sizes_[j] - 1.0; }
  std::vector<double> values() const;
  MagnetizationPoint flipped() const;

  friend bool operator==(const MagnetizationPoint&, const MagnetizationPoint&) = default;

 private:
  std::array<int, kMaxBlocks> counts_{};
  std::array<int, kMaxBlocks> sizes_{};
  int blocks_ = 0;
};

MagnetizationPoint magnetization(const SpinConfig& config);

/// Cross sum over matched pairs, restricted to retained pairs when a mask is given.
long cross_sum(const SpinConfig& config, std::span<const std::uint8_t> mask = {});

double energy_two_block(const TwoBlockSpec& spec, const SpinConfig& config);
double energy_diluted(const DilutedSpec& spec, const SpinConfig& config);
double energy_three_block(const ThreeBlockSpec& spec, const MagnetizationPoint& m);
double energy_three_block(const ThreeBlockSpec& spec, const SpinConfig& config);
double energy_reference(const TwoBlockSpec& spec, const MagnetizationPoint& m);
double energy(const ModelSpec& spec, const SpinConfig& config);

/// Deterministic Bernoulli(p) mask of length n/2.
std::vector<std::uint8_t> generate_mask(int n, double p, std::uint64_t seed);

DilutedSpec make_diluted(const TwoBlockSpec& base, double p, std::uint64_t mask_seed);

std::string mask_to_bits(std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> mask_from_bits(const std::string& bits);

// Human-readable JSON with keys model, N, beta, alpha, b, p, mask_seed (and
// optionally an explicit mask bit string).
std::string to_config_text(const ModelSpec& spec);
ModelSpec from_config_text(const std::string& text);

}  // namespace bottleneck

#include "bottleneck/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "bottleneck/rng.hpp"

namespace bottleneck {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

void check_alpha_beta(double beta, double alpha) {
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be finite and >= 0");
}

}  // namespace

int DilutedSpec::retained() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

void validate(const TwoBlockSpec& spec, bool require_regime) {
  require(spec.n >= 4 && spec.n % 2 == 0, "two-block N must be even and >= 4");
  check_alpha_beta(spec.beta, spec.alpha);
  if (require_regime) {
    require(spec.beta > 2.0, "two-block model requires beta > 2");
    require(spec.alpha <= spec.beta, "two-block model requires alpha <= beta");
  }
}

void validate(const DilutedSpec& spec, bool require_regime) {
  validate(spec.base, require_regime);
  require(static_cast<int>(spec.mask.size()) == spec.base.half(), "mask length must equal N/2");
  require(std::all_of(spec.mask.begin(), spec.mask.end(), [](auto e) { return e <= 1; }),
          "mask entries must be 0 or 1");
  require(spec.p > 0.0 && spec.p <= 1.0, "retention probability p must lie in (0, 1]");
}

void validate(const ThreeBlockSpec& spec, bool require_regime) {
  require(spec.n_outer >= 1 && spec.b >= 1, "three-block sizes must be positive");
  require(spec.b <= spec.n_outer, "bottleneck block must not exceed the outer blocks");
  check_alpha_beta(spec.beta, spec.alpha);
  if (require_regime) require(spec.beta > 1.0, "three-block model requires beta > 1");
}

void validate(const ModelSpec& spec, bool require_regime) {
  std::visit([&](const auto& s) { validate(s, require_regime); }, spec);
}

std::string model_name(const ModelSpec& spec) {
  switch (spec.index()) {
    case 0: return "two_block";
    case 1: return "diluted";
    default: return "three_block";
  }
}

int spin_count(const ModelSpec& spec) { return layout_of(spec).total(); }

int BlockLayout::total() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int BlockLayout::offset(int block) const {
  return std::accumulate(sizes.begin(), sizes.begin() + block, 0);
}

int BlockLayout::block_of(int site) const {
  int end = 0;
  for (int k = 0; k < blocks(); ++k) {
    end += sizes[k];
    if (site < end) return k;
  }
  throw ModelError("site outside layout");
}

BlockLayout layout_of(const TwoBlockSpec& spec) { return {{spec.half(), spec.half()}}; }
BlockLayout layout_of(const DilutedSpec& spec) { return layout_of(spec.base); }
BlockLayout layout_of(const ThreeBlockSpec& spec) { return {{spec.n_outer, spec.b, spec.n_outer}}; }
BlockLayout layout_of(const ModelSpec& spec) {
  return std::visit([](const auto& s) { return layout_of(s); }, spec);
}

SpinConfig::SpinConfig(std::vector<std::int8_t> s, BlockLayout l) : spins(std::move(s)), layout(std::move(l)) {
  require(static_cast<int>(spins.size()) == layout.total(), "spin vector length does not match layout");
  require(std::all_of(spins.begin(), spins.end(), [](auto x) { return x == 1 || x == -1; }),
          "spins must be +1 or -1");
}

SpinConfig SpinConfig::flipped() const {
  SpinConfig out = *this;
  for (auto& s : out.spins) s = static_cast<std::int8_t>(-s);
  return out;
}

MagnetizationPoint::MagnetizationPoint(std::span<const int> plus_counts, std::span<const int> block_sizes) {
  require(plus_counts.size() == block_sizes.size(), "plus-count and block-size lengths differ");
  require(!plus_counts.empty() && plus_counts.size() <= kMaxBlocks, "unsupported number of blocks");
  blocks_ = static_cast<int>(plus_counts.size());
  for (int j = 0; j < blocks_; ++j) {
    require(block_sizes[j] > 0, "block size must be positive");
    require(plus_counts[j] >= 0 && plus_counts[j] <= block_sizes[j], "plus-count outside [0, |B|]");
    counts_[j] = plus_counts[j];
    sizes_[j] = block_sizes[j];
  }
}

MagnetizationPoint MagnetizationPoint::from_values(std::span<const double> m, std::span<const int> block_sizes) {
  require(m.size() == block_sizes.size(), "magnetization and block-size lengths differ");
  std::vector<int> counts(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double k = block_sizes[j] * (1.0 + m[j]) / 2.0;
    const double rounded = std::round(k);
    require(std::abs(k - rounded) <= 1e-9, "magnetization is not admissible for this block size");
    counts[j] = static_cast<int>(rounded);
  }
  return MagnetizationPoint(counts, block_sizes);
}

std::vector<double> MagnetizationPoint::values() const {
  std::vector<double> out(blocks_);
  for (int j = 0; j < blocks_; ++j) out[j] = m(j);
  return out;
}

MagnetizationPoint MagnetizationPoint::flipped() const {
  MagnetizationPoint out = *this;
  for (int j = 0; j < blocks_; ++j) out.counts_[j] = sizes_[j] - counts_[j];
  return out;
}

MagnetizationPoint magnetization(const SpinConfig& config) {
  const auto& sizes = config.layout.sizes;
  std::vector<int> counts(sizes.size(), 0);
  int site = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    for (int i = 0; i < sizes[k]; ++i, ++site)
      if (config.spins[site] > 0) ++counts[k];
  return MagnetizationPoint(counts, sizes);
}

long cross_sum(const SpinConfig& config, std::span<const std::uint8_t> mask) {
  require(config.layout.blocks() == 2, "cross sum needs a two-block layout");
  const int half = config.layout.sizes[0];
  require(mask.empty() || static_cast<int>(mask.size()) == half, "mask length must equal N/2");
  long total = 0;
  for (int i = 0; i < half; ++i) {
    if (!mask.empty() && mask[i] == 0) continue;
    total += config.spins[i] * config.spins[i + half];
  }
  return total;
}

namespace {

double curie_weiss_two_block(const TwoBlockSpec& spec, const MagnetizationPoint& m) {
  return -(spec.beta * spec.n / 8.0) * (m.m(0) * m.m(0) + m.m(1) * m.m(1));
}

void require_two_block_config(const TwoBlockSpec& spec, const SpinConfig& config) {
  require(config.size() == spec.n && config.layout.blocks() == 2 && config.layout.sizes[0] == spec.half(),
          "configuration does not match the two-block spec");
}

void require_admissible(const MagnetizationPoint& m, const BlockLayout& layout) {
  require(m.blocks() == layout.blocks(), "magnetization has the wrong number of blocks");
  for (int j = 0; j < m.blocks(); ++j)
    require(m.block_size(j) == layout.sizes[j], "magnetization is not admissible for this spec");
}

}  // namespace

double energy_two_block(const TwoBlockSpec& spec, const SpinConfig& config) {
  require_two_block_config(spec, config);
  return curie_weiss_two_block(spec, magnetization(config)) - spec.alpha * static_cast<double>(cross_sum(config));
}

double energy_diluted(const DilutedSpec& spec, const SpinConfig& config) {
  require_two_block_config(spec.base, config);
  require(static_cast<int>(spec.mask.size()) == spec.base.half(), "mask length must equal N/2");
  return curie_weiss_two_block(spec.base, magnetization(config)) -
         spec.base.alpha * static_cast<double>(cross_sum(config, spec.mask));
}

double energy_three_block(const ThreeBlockSpec& spec, const MagnetizationPoint& m) {
  require_admissible(m, layout_of(spec));
  const double outer = spec.n_outer;
  const double mid = spec.b;
  const double m1 = m.m(0), m2 = m.m(1), m3 = m.m(2);
  const double curie_weiss = (spec.beta / 2.0) * (outer * m1 * m1 + mid * m2 * m2 + outer * m3 * m3);
  const double coupling = spec.alpha * std::sqrt(outer * mid) * (m1 * m2 + m3 * m2);
  return -curie_weiss - coupling;
}

double energy_three_block(const ThreeBlockSpec& spec, const SpinConfig& config) {
  require(config.size() == spec.total(), "configuration does not match the three-block spec");
  return energy_three_block(spec, magnetization(config));
}

double energy_reference(const TwoBlockSpec& spec, const MagnetizationPoint& m) {
  require_admissible(m, layout_of(spec));
  const double m1 = m.m(0), m2 = m.m(1);
  return -(spec.n / 2.0) * (spec.alpha / 2.0 * m1 * m2 + spec.beta / 4.0 * m1 * m1 + spec.beta / 4.0 * m2 * m2);
}

double energy(const ModelSpec& spec, const SpinConfig& config) {
  struct Visitor {
    const SpinConfig& c;
    double operator()(const TwoBlockSpec& s) const { return energy_two_block(s, c); }
    double operator()(const DilutedSpec& s) const { return energy_diluted(s, c); }
    double operator()(const ThreeBlockSpec& s) const { return energy_three_block(s, c); }
  };
  return std::visit(Visitor{config}, spec);
}

std::vector<std::uint8_t> generate_mask(int n, double p, std::uint64_t seed) {
  require(n >= 2 && n % 2 == 0, "mask needs an even spin count");
  require(p > 0.0 && p <= 1.0, "retention probability p must lie in (0, 1]");
  CounterRng rng(seed, /*stream=*/0x6d61736bULL);
  std::vector<std::uint8_t> mask(n / 2);
  for (auto& e : mask) e = rng.bernoulli(p) ? 1 : 0;
  return mask;
}

DilutedSpec make_diluted(const TwoBlockSpec& base, double p, std::uint64_t mask_seed) {
  DilutedSpec spec{base, generate_mask(base.n, p, mask_seed), p, mask_seed};
  return spec;
}

std::string mask_to_bits(std::span<const std::uint8_t> mask) {
  std::string out;
  out.reserve(mask.size());
  for (auto e : mask) out.push_back(e ? '1' : '0');
  return out;
}

std::vector<std::uint8_t> mask_from_bits(const std::string& bits) {
  std::vector<std::uint8_t> mask;
  mask.reserve(bits.size());
  for (char c : bits) {
    if (c == '0' || c == '1')
      mask.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (c != '\n' && c != '\r' && c != ' ')
      throw ModelError("mask bit string may only contain 0 and 1");
  }
  return mask;
}

std::string to_config_text(const ModelSpec& spec) {
  nlohmann::ordered_json j;
  j["model"] = model_name(spec);
  if (const auto* s = std::get_if<TwoBlockSpec>(&spec)) {
    j["N"] = s->n;
    j["beta"] = s->beta;
    j["alpha"] = s->alpha;
  } else if (const auto* d = std::get_if<DilutedSpec>(&spec)) {
    j["N"] = d->base.n;
    j["beta"] = d->base.beta;
    j["alpha"] = d->base.alpha;
    j["p"] = d->p;
    j["mask_seed"] = d->mask_seed;
    j["mask"] = mask_to_bits(d->mask);
  } else {
    const auto& t = std::get<ThreeBlockSpec>(spec);
    j["N"] = t.total();
    j["b"] = t.b;
    j["beta"] = t.beta;
    j["alpha"] = t.alpha;
  }
  return j.dump(2) + "\n";
}

ModelSpec from_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("model config is not valid JSON: ") + e.what());
  }
  auto get = [&](const char* key) {
    if (!j.contains(key)) throw ModelError(std::string("model config is missing key '") + key + "'");
    return j.at(key);
  };
  const std::string model = get("model").get<std::string>();
  ModelSpec spec;
  if (model == "two_block") {
    spec = TwoBlockSpec{get("N").get<int>(), get("beta").get<double>(), get("alpha").get<double>()};
  } else if (model == "diluted") {
    TwoBlockSpec base{get("N").get<int>(), get("beta").get<double>(), get("alpha").get<double>()};
    const double p = get("p").get<double>();
    const auto seed = j.value("mask_seed", std::uint64_t{0});
    DilutedSpec d;
    if (j.contains("mask")) {
      d = DilutedSpec{base, mask_from_bits(j.at("mask").get<std::string>()), p, seed};
    } else {
      validate(base, false);
      d = make_diluted(base, p, seed);
    }
    spec = d;
  } else if (model == "three_block") {
    const int total = get("N").get<int>();
    const int b = get("b").get<int>();
    require((total - b) % 2 == 0 && total > b, "three-block N - b must be positive and even");
    spec = ThreeBlockSpec{(total - b) / 2, b, get("beta").get<double>(), get("alpha").get<double>()};
  } else {
    throw ModelError("unknown model '" + model + "'");
  }
  validate(spec);
  return spec;
}

}  // namespace bottleneck

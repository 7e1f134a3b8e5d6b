#pragma once

// Brute-force Gibbs laws by visiting all 2^N spin configurations. Used to
// cross-check the combinatorial tables at small N.

#include <vector>

#include "bottleneck/model.hpp"

namespace bottleneck {

inline constexpr int kMaxEnumerationSpins = 24;

/// Probability of every plus-count vector (dense, row-major, last block fastest).
std::vector<double> enumerate_law(const ModelSpec& spec);

}  // namespace bottleneck

#include "bottleneck/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bottleneck {

std::vector<double> enumerate_law(const ModelSpec& spec) {
  const BlockLayout layout = layout_of(spec);
  const int n = layout.total();
  if (n > kMaxEnumerationSpins) throw std::invalid_argument("enumeration is limited to 24 spins");
  std::size_t grid = 1;
  for (int s : layout.sizes) grid *= static_cast<std::size_t>(s + 1);

  const std::size_t configs = std::size_t{1} << n;
  std::vector<double> energies(configs);
  std::vector<std::size_t> cell(configs);
  SpinConfig config(std::vector<std::int8_t>(n, 1), layout);
  for (std::size_t bits = 0; bits < configs; ++bits) {
    for (int i = 0; i < n; ++i) config.spins[i] = (bits >> i) & 1U ? 1 : -1;
    energies[bits] = energy(spec, config);
    const auto m = magnetization(config);
    std::size_t index = 0;
    for (int j = 0; j < m.blocks(); ++j) index = index * static_cast<std::size_t>(m.block_size(j) + 1) + m.plus_count(j);
    cell[bits] = index;
  }
  const double ground = *std::min_element(energies.begin(), energies.end());
  std::vector<double> law(grid, 0.0);
  double z = 0.0;
  for (std::size_t bits = 0; bits < configs; ++bits) {
    const double w = std::exp(ground - energies[bits]);
    law[cell[bits]] += w;
    z += w;
  }
  for (double& p : law) p /= z;
  return law;
}

}  // namespace bottleneck

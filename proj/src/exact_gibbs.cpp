#include "bottleneck/exact_gibbs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "bottleneck/log_math.hpp"
#include "bottleneck/parallel.hpp"

namespace bottleneck {

MagnetizationPoint LogWeightTable::point(std::size_t index) const {
  std::array<int, kMaxBlocks> counts{};
  for (int j = blocks() - 1; j >= 0; --j) {
    const auto extent = static_cast<std::size_t>(block_sizes[j] + 1);
    counts[j] = static_cast<int>(index % extent);
    index /= extent;
  }
  return MagnetizationPoint(std::span<const int>(counts.data(), block_sizes.size()), block_sizes);
}

std::size_t LogWeightTable::index_of(const MagnetizationPoint& m) const {
  if (m.blocks() != blocks()) throw std::invalid_argument("magnetization point has the wrong number of blocks");
  std::size_t index = 0;
  for (int j = 0; j < blocks(); ++j) {
    if (m.block_size(j) != block_sizes[j]) throw std::invalid_argument("magnetization point is not on this table's grid");
    index = index * static_cast<std::size_t>(block_sizes[j] + 1) + static_cast<std::size_t>(m.plus_count(j));
  }
  return index;
}

double LogWeightTable::prob(const MagnetizationPoint& m) const { return prob_at(index_of(m)); }

double LogWeightTable::prob_at(std::size_t index) const { return std::exp(log_weights[index] - log_partition); }

double LogWeightTable::total_probability() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += prob_at(i);
  return total;
}

std::vector<double> LogWeightTable::marginal(int block) const {
  std::vector<double> out(static_cast<std::size_t>(block_sizes.at(block) + 1), 0.0);
  for (std::size_t i = 0; i < size(); ++i) out[point(i).plus_count(block)] += prob_at(i);
  return out;
}

namespace {

int require_plus_count(int block_size, double mu) {
  const double k = block_size * (1.0 + mu) / 2.0;
  const double rounded = std::round(k);
  if (mu < -1.0 || mu > 1.0 || std::abs(k - rounded) > 1e-9)
    throw std::invalid_argument("magnetization is not admissible for block size " + std::to_string(block_size));
  return static_cast<int>(rounded);
}

void require_two_block_point(int n, const MagnetizationPoint& mu) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("spin count must be even");
  if (mu.blocks() != 2 || mu.block_size(0) != n / 2 || mu.block_size(1) != n / 2)
    throw std::invalid_argument("magnetization is not admissible for two blocks of size N/2");
}

double log_count_pairs(const LogFactorials& lf, int half, int a, int b, int pairs) {
  return lf.log_binomial(half, pairs) + lf.log_binomial(half - pairs, a - pairs) +
         lf.log_binomial(half - a, b - pairs);
}

void finish(LogWeightTable& table) {
  LogSumExp acc;
  for (double w : table.log_weights) acc.add(w);
  table.log_partition = acc.value();
}

// Fills `table` by evaluating `weight(index)` once per symmetry orbit and
// copying it to the other members, which makes the symmetries bit-exact.
template <class OrbitFn, class WeightFn>
void fill_by_orbits(LogWeightTable& table, int threads, std::size_t rows, OrbitFn orbit, WeightFn weight) {
  const std::size_t row_length = table.size() / rows;
  parallel_for(rows, threads, [&](std::size_t row) {
    for (std::size_t col = 0; col < row_length; ++col) {
      const std::size_t index = row * row_length + col;
      const auto members = orbit(index);
      if (*std::min_element(members.begin(), members.end()) != index) continue;
      const double w = weight(index);
      for (std::size_t m : members) table.log_weights[m] = w;
    }
  });
  finish(table);
}

std::array<std::size_t, 4> two_block_orbit(std::size_t index, int half) {
  const auto extent = static_cast<std::size_t>(half + 1);
  const std::size_t a = index / extent;
  const std::size_t b = index % extent;
  const std::size_t h = static_cast<std::size_t>(half);
  return {index, b * extent + a, (h - a) * extent + (h - b), (h - b) * extent + (h - a)};
}

void check_budget(double cost, double limit, const std::string& what) {
  if (cost > limit) {
    std::ostringstream os;
    os << what << ": estimated cost " << cost << " exceeds budget " << limit;
    throw BudgetExceeded(os.str());
  }
}

}  // namespace

double PairCountLaw::log_total() const { return log_binomial(n / 2, a) + log_binomial(n / 2, b); }

double PairCountLaw::probability(int pairs) const {
  if (pairs < n_min || pairs > n_max) return 0.0;
  return std::exp(log_count(pairs) - log_total());
}

int PairCountLaw::argmax() const {
  const auto it = std::max_element(log_counts.begin(), log_counts.end());
  return n_min + static_cast<int>(it - log_counts.begin());
}

PairCountLaw pair_count_law(int n, const MagnetizationPoint& mu) {
  require_two_block_point(n, mu);
  PairCountLaw law;
  law.n = n;
  law.a = mu.plus_count(0);
  law.b = mu.plus_count(1);
  const int half = n / 2;
  law.n_min = std::max(0, law.a + law.b - half);
  law.n_max = std::min(law.a, law.b);
  const LogFactorials lf(half);
  law.log_counts.reserve(static_cast<std::size_t>(law.n_max - law.n_min + 1));
  for (int k = law.n_min; k <= law.n_max; ++k) law.log_counts.push_back(log_count_pairs(lf, half, law.a, law.b, k));
  return law;
}

PairCountLaw pair_count_law(int n, double mu1, double mu2) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("spin count must be even");
  const std::array<int, 2> counts{require_plus_count(n / 2, mu1), require_plus_count(n / 2, mu2)};
  const std::array<int, 2> sizes{n / 2, n / 2};
  return pair_count_law(n, MagnetizationPoint(counts, sizes));
}

std::pair<double, double> gamma_range(double mu1, double mu2) {
  return {std::max(0.0, mu1 + mu2), std::min(1.0 + mu1, 1.0 + mu2)};
}

double gamma_star(double mu1, double mu2) { return 0.5 * (mu1 + mu2 + mu1 * mu2 + 1.0); }

double gamma_star_star(double mu1, double mu2) { return 0.5 * (-mu1 - mu2 + mu1 * mu2 + 1.0); }

long cross_term_value(int n, const MagnetizationPoint& mu, int pairs) {
  require_two_block_point(n, mu);
  const int a = mu.plus_count(0);
  const int b = mu.plus_count(1);
  if (pairs < std::max(0, a + b - n / 2) || pairs > std::min(a, b))
    throw std::invalid_argument("pair count is infeasible for this magnetization");
  return 4L * pairs + n / 2 - 2L * a - 2L * b;
}

double tilted_log_expectation(const PairCountLaw& law, double alpha) {
  LogSumExp acc;
  for (int k = law.n_min; k <= law.n_max; ++k)
    acc.add(law.log_count(k) + alpha * static_cast<double>(4L * k + law.n / 2 - 2L * law.a - 2L * law.b));
  return acc.value() - law.log_total();
}

double exact_cost(const ModelSpec& spec) {
  if (const auto* t = std::get_if<TwoBlockSpec>(&spec)) {
    const double h = t->half() + 1.0;
    return h * h * (h / 3.0 + 1.0);
  }
  if (const auto* d = std::get_if<DilutedSpec>(&spec)) {
    const double h = d->base.half() + 1.0;
    const int m = d->retained();
    const double inner = std::min(m, d->base.half() - m) + 1.0;
    return std::pow(m + 1.0, 3) / 3.0 + h * h * inner * inner;
  }
  const auto& s = std::get<ThreeBlockSpec>(spec);
  return (s.n_outer + 1.0) * (s.n_outer + 1.0) * (s.b + 1.0);
}

LogWeightTable exact_two_block(const TwoBlockSpec& spec, const ExactOptions& options) {
  validate(spec, false);
  check_budget(exact_cost(spec), options.max_operations, "exact_two_block");
  const int half = spec.half();
  const LogFactorials lf(half);
  LogWeightTable table;
  table.block_sizes = {half, half};
  table.log_weights.assign(static_cast<std::size_t>(half + 1) * (half + 1), kNegInf);
  const double cw_scale = spec.beta * spec.n / 8.0;
  const auto extent = static_cast<std::size_t>(half + 1);
  fill_by_orbits(
      table, options.threads, extent, [half](std::size_t i) { return two_block_orbit(i, half); },
      [&](std::size_t index) {
        const int a = static_cast<int>(index / extent);
        const int b = static_cast<int>(index % extent);
        const double m1 = 2.0 * a / half - 1.0;
        const double m2 = 2.0 * b / half - 1.0;
        LogSumExp acc;
        for (int k = std::max(0, a + b - half); k <= std::min(a, b); ++k) {
          const long cross = 4L * k + half - 2L * a - 2L * b;
          acc.add(log_count_pairs(lf, half, a, b, k) + spec.alpha * static_cast<double>(cross));
        }
        return cw_scale * (m1 * m1 + m2 * m2) + acc.value();
      });
  return table;
}

LogWeightTable exact_diluted(const DilutedSpec& spec, const ExactOptions& options) {
  validate(spec, false);
  check_budget(exact_cost(spec), options.max_operations, "exact_diluted");
  const int half = spec.base.half();
  const int retained = spec.retained();
  const int free = half - retained;
  const double alpha = spec.base.alpha;
  const LogFactorials lf(half);

  // Retained pairs are exchangeable, so their contribution only depends on
  // j (pluses on the B1 side) and l (pluses on the B2 side).
  const auto side = static_cast<std::size_t>(retained + 1);
  std::vector<double> matched(side * side, kNegInf);
  for (int j = 0; j <= retained; ++j) {
    for (int l = 0; l <= retained; ++l) {
      LogSumExp acc;
      for (int k = std::max(0, j + l - retained); k <= std::min(j, l); ++k) {
        const long cross = 4L * k + retained - 2L * j - 2L * l;
        acc.add(lf.log_binomial(retained, k) + lf.log_binomial(retained - k, j - k) +
                lf.log_binomial(retained - j, l - k) + alpha * static_cast<double>(cross));
      }
      matched[static_cast<std::size_t>(j) * side + l] = acc.value();
    }
  }

  LogWeightTable table;
  table.block_sizes = {half, half};
  table.log_weights.assign(static_cast<std::size_t>(half + 1) * (half + 1), kNegInf);
  const double cw_scale = spec.base.beta * spec.base.n / 8.0;
  const auto extent = static_cast<std::size_t>(half + 1);
  fill_by_orbits(
      table, options.threads, extent, [half](std::size_t i) { return two_block_orbit(i, half); },
      [&](std::size_t index) {
        const int a = static_cast<int>(index / extent);
        const int b = static_cast<int>(index % extent);
        const double m1 = 2.0 * a / half - 1.0;
        const double m2 = 2.0 * b / half - 1.0;
        LogSumExp acc;
        for (int j = std::max(0, a - free); j <= std::min(a, retained); ++j) {
          const double left = lf.log_binomial(free, a - j);
          for (int l = std::max(0, b - free); l <= std::min(b, retained); ++l)
            acc.add(matched[static_cast<std::size_t>(j) * side + l] + left + lf.log_binomial(free, b - l));
        }
        return cw_scale * (m1 * m1 + m2 * m2) + acc.value();
      });
  return table;
}

LogWeightTable exact_three_block(const ThreeBlockSpec& spec, const ExactOptions& options) {
  validate(spec, false);
  check_budget(exact_cost(spec), options.max_table_points, "exact_three_block");
  const int outer = spec.n_outer;
  const int mid = spec.b;
  const LogFactorials lf(outer);
  LogWeightTable table;
  table.block_sizes = {outer, mid, outer};
  const auto e_outer = static_cast<std::size_t>(outer + 1);
  const auto e_mid = static_cast<std::size_t>(mid + 1);
  table.log_weights.assign(e_outer * e_mid * e_outer, kNegInf);
  const double coupling = spec.alpha * std::sqrt(static_cast<double>(outer) * mid);

  auto orbit = [&](std::size_t index) {
    const std::size_t k3 = index % e_outer;
    const std::size_t k2 = (index / e_outer) % e_mid;
    const std::size_t k1 = index / (e_outer * e_mid);
    auto at = [&](std::size_t x, std::size_t y, std::size_t z) { return (x * e_mid + y) * e_outer + z; };
    const std::size_t o = static_cast<std::size_t>(outer), b = static_cast<std::size_t>(mid);
    return std::array<std::size_t, 4>{index, at(k3, k2, k1), at(o - k1, b - k2, o - k3), at(o - k3, b - k2, o - k1)};
  };
  fill_by_orbits(table, options.threads, e_outer, orbit, [&](std::size_t index) {
    const int k3 = static_cast<int>(index % e_outer);
    const int k2 = static_cast<int>((index / e_outer) % e_mid);
    const int k1 = static_cast<int>(index / (e_outer * e_mid));
    const double m1 = 2.0 * k1 / outer - 1.0;
    const double m2 = 2.0 * k2 / mid - 1.0;
    const double m3 = 2.0 * k3 / outer - 1.0;
    const double neg_energy =
        spec.beta / 2.0 * (outer * m1 * m1 + mid * m2 * m2 + outer * m3 * m3) + coupling * m2 * (m1 + m3);
    return neg_energy + lf.log_binomial(outer, k1) + lf.log_binomial(mid, k2) + lf.log_binomial(outer, k3);
  });
  return table;
}

LogWeightTable exact_table(const ModelSpec& spec, const ExactOptions& options) {
  struct Visitor {
    const ExactOptions& o;
    LogWeightTable operator()(const TwoBlockSpec& s) const { return exact_two_block(s, o); }
    LogWeightTable operator()(const DilutedSpec& s) const { return exact_diluted(s, o); }
    LogWeightTable operator()(const ThreeBlockSpec& s) const { return exact_three_block(s, o); }
  };
  return std::visit(Visitor{options}, spec);
}

void validate(const WellSpec& wells) {
  if (wells.centers.empty()) throw std::invalid_argument("well spec has no centers");
  if (!(wells.half_width > 0.0)) throw std::invalid_argument("well half-width must be positive");
  const std::size_t dim = wells.centers.front().size();
  for (const auto& c : wells.centers)
    if (c.size() != dim) throw std::invalid_argument("well centers differ in dimension");
  for (std::size_t i = 0; i < wells.centers.size(); ++i) {
    for (std::size_t j = i + 1; j < wells.centers.size(); ++j) {
      bool separated = false;
      for (std::size_t d = 0; d < dim; ++d)
        separated |= std::abs(wells.centers[i][d] - wells.centers[j][d]) >= 2.0 * wells.half_width - 1e-12;
      if (!separated) throw std::invalid_argument("overlapping wells");
    }
  }
}

WellMassReport well_mass(const LogWeightTable& table, const WellSpec& wells) {
  validate(wells);
  if (wells.centers.front().size() != static_cast<std::size_t>(table.blocks()))
    throw std::invalid_argument("well dimension does not match the table");
  constexpr double kEdge = 1e-12;
  const double eps = wells.half_width;
  const std::size_t count = wells.centers.size();

  // Contributions are summed in sorted order, so wells related by a symmetry
  // of the table get bit-identical masses.
  std::vector<std::vector<double>> parts(count);
  WellMassReport report;
  report.masses.assign(count, 0.0);
  std::vector<std::size_t> closure;
  std::vector<double> distance(count);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double p = table.prob_at(i);
    const auto m = table.point(i).values();
    closure.clear();
    std::optional<std::size_t> inside;
    for (std::size_t w = 0; w < count && !inside; ++w) {
      double sup = 0.0, sq = 0.0;
      for (std::size_t d = 0; d < m.size(); ++d) {
        const double diff = std::abs(m[d] - wells.centers[w][d]);
        sup = std::max(sup, diff);
        sq += diff * diff;
      }
      if (sup < eps - kEdge) inside = w;
      else if (sup <= eps + kEdge) {
        closure.push_back(w);
        distance[w] = std::sqrt(sq);
      }
    }
    if (inside) {
      parts[*inside].push_back(p);
    } else if (closure.empty()) {
      report.residual += p;
    } else {
      double best = distance[closure.front()];
      for (auto w : closure) best = std::min(best, distance[w]);
      std::vector<std::size_t> nearest;
      for (auto w : closure)
        if (distance[w] <= best + kEdge) nearest.push_back(w);
      for (auto w : nearest) parts[w].push_back(p / static_cast<double>(nearest.size()));
    }
  }
  for (std::size_t w = 0; w < count; ++w) {
    std::sort(parts[w].begin(), parts[w].end());
    for (double x : parts[w]) report.masses[w] += x;
  }
  return report;
}

}  // namespace bottleneck

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "bottleneck/enumerate.hpp"
#include "bottleneck/harness.hpp"
#include "bottleneck/log_math.hpp"
#include "bottleneck/rng.hpp"

namespace bottleneck {

namespace {

bool is_full(const VerifyOptions& o) { return o.level == VerifyLevel::full; }

CheckResult run_check(std::string id, std::string name, const std::function<bool(std::ostringstream&)>& body) {
  CheckResult r{std::move(id), std::move(name), false, {}, 0.0};
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  detail.precision(6);
  try {
    r.passed = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
    r.passed = false;
  }
  r.detail = detail.str();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double max_abs_diff(const LogWeightTable& table, const std::vector<double>& law) {
  double worst = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) worst = std::max(worst, std::abs(table.prob_at(i) - law[i]));
  return worst;
}

// Normalized law of one Curie-Weiss block with weight C(size,k) exp(beta/2 * size * m^2).
std::vector<double> curie_weiss_block(int size, double beta) {
  std::vector<double> logw(static_cast<std::size_t>(size + 1));
  for (int k = 0; k <= size; ++k) {
    const double m = 2.0 * k / size - 1.0;
    logw[k] = log_binomial(size, k) + beta / 2.0 * size * m * m;
  }
  const double z = log_sum_exp(logw);
  for (double& w : logw) w = std::exp(w - z);
  return logw;
}

double aligned_mass(const WellMassReport& r) { return r.masses[0] + r.masses[3]; }
double anti_aligned_mass(const WellMassReport& r) { return r.masses[1] + r.masses[2]; }

WellSpec matching_wells(double beta, double eps) {
  const double m = solve_cw(beta / 2.0).value;
  return WellSpec{{{m, m}, {m, -m}, {-m, m}, {-m, -m}}, eps};
}

std::vector<int> capped(std::vector<int> ns, const VerifyOptions& o) {
  if (is_full(o)) return ns;
  std::vector<int> out;
  for (int n : ns)
    if (n <= 400) out.push_back(n);
  return out;
}

// Three-block schedule with b_N = 40 at N = 840 and the requested exponents.
ScheduleSpec three_block_schedule(double rho, double a_prefactor) {
  ScheduleSpec s;
  s.model = ModelKind::three_block;
  s.beta = 1.5;
  s.gamma = 0.5;
  s.b_prefactor = 40.5 / std::sqrt(840.0);
  s.rho = rho;
  s.a_prefactor = a_prefactor;
  return s;
}

}  // namespace

CheckResult check_oracle_equivalence(const VerifyOptions&) {
  return run_check("AC1", "exact tables match 2^N enumeration (N <= 12)", [](std::ostringstream& d) {
    double worst = 0.0;
    int cases = 0;
    for (int n = 4; n <= 12; n += 2) {
      const TwoBlockSpec two{n, 4.0, 0.5};
      worst = std::max(worst, max_abs_diff(exact_two_block(two), enumerate_law(two)));
      ++cases;
      for (unsigned bits = 0; bits < (1U << (n / 2)); ++bits) {
        DilutedSpec diluted{two, std::vector<std::uint8_t>(n / 2), 0.5, 0};
        for (int i = 0; i < n / 2; ++i) diluted.mask[i] = (bits >> i) & 1U;
        worst = std::max(worst, max_abs_diff(exact_diluted(diluted), enumerate_law(diluted)));
        ++cases;
      }
    }
    for (int outer = 1; 2 * outer + 1 <= 12; ++outer)
      for (int b = 1; b <= outer && 2 * outer + b <= 12; ++b) {
        const ThreeBlockSpec three{outer, b, 1.5, 0.3};
        worst = std::max(worst, max_abs_diff(exact_three_block(three), enumerate_law(three)));
        ++cases;
      }
    d << cases << " specs, max |P_exact - P_enum| = " << worst << " (tol 1e-12)";
    return worst <= 1e-12;
  });
}

CheckResult check_decoupled_factorization(const VerifyOptions&) {
  return run_check("AC2", "alpha = 0 tables factorize into Curie-Weiss marginals", [](std::ostringstream& d) {
    double worst = 0.0;
    for (int n : {10, 50, 200}) {
      const TwoBlockSpec spec{n, 4.0, 0.0};
      const auto table = exact_two_block(spec);
      const auto block = curie_weiss_block(n / 2, 2.0);
      for (std::size_t i = 0; i < table.size(); ++i) {
        const auto p = table.point(i);
        worst = std::max(worst, std::abs(table.prob_at(i) - block[p.plus_count(0)] * block[p.plus_count(1)]));
      }
    }
    for (auto [outer, b] : {std::pair{5, 3}, {40, 10}, {100, 20}}) {
      const ThreeBlockSpec spec{outer, b, 1.5, 0.0};
      const auto table = exact_three_block(spec);
      const auto po = curie_weiss_block(outer, 1.5);
      const auto pm = curie_weiss_block(b, 1.5);
      for (std::size_t i = 0; i < table.size(); ++i) {
        const auto p = table.point(i);
        const double expected = po[p.plus_count(0)] * pm[p.plus_count(1)] * po[p.plus_count(2)];
        worst = std::max(worst, std::abs(table.prob_at(i) - expected));
      }
    }
    d << "max deviation from product law = " << worst << " (tol 1e-10)";
    return worst <= 1e-10;
  });
}

namespace {

struct RandomPoint {
  int n, a, b;
};

std::vector<RandomPoint> random_points(int count, int max_n, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  std::vector<RandomPoint> out;
  for (int i = 0; i < count; ++i) {
    const int n = 4 + 2 * static_cast<int>(rng.below(static_cast<std::uint64_t>((max_n - 4) / 2 + 1)));
    const int half = n / 2;
    out.push_back({n, static_cast<int>(rng.below(half + 1)), static_cast<int>(rng.below(half + 1))});
  }
  return out;
}

}  // namespace

CheckResult check_pair_count_law(const VerifyOptions& o) {
  return run_check("AC3", "pair-count law totals and maximizer", [&](std::ostringstream& d) {
    const int max_n = is_full(o) ? 2000 : 400;
    double worst_total = 0.0, worst_argmax = 0.0;
    bool concave = true;
    for (const auto& pt : random_points(100, max_n, 2024)) {
      const int half = pt.n / 2;
      const std::array<int, 2> counts{pt.a, pt.b}, sizes{half, half};
      const auto law = pair_count_law(pt.n, MagnetizationPoint(counts, sizes));
      const double total = log_sum_exp(law.log_counts);
      worst_total = std::max(worst_total, std::abs(total - (log_binomial(half, pt.a) + log_binomial(half, pt.b))));
      const double target = gamma_star(law.mu1(), law.mu2()) * pt.n / 4.0;
      worst_argmax = std::max(worst_argmax, std::abs(law.argmax() - target));
      for (std::size_t k = 1; k + 1 < law.log_counts.size(); ++k)
        concave &= law.log_counts[k + 1] - 2 * law.log_counts[k] + law.log_counts[k - 1] < 0.0;
    }
    d << "max |log total error| = " << worst_total << ", max |argmax - gamma* N/4| = " << worst_argmax
      << ", strictly concave = " << (concave ? "yes" : "no");
    return worst_total <= 1e-10 && worst_argmax <= 1.0 && concave;
  });
}

CheckResult check_cross_term_identity(const VerifyOptions& o) {
  return run_check("AC4", "cross term at gamma* equals N mu1 mu2 / 2", [&](std::ostringstream& d) {
    const int max_n = is_full(o) ? 2000 : 400;
    double worst = 0.0;
    for (const auto& pt : random_points(100, max_n, 2024)) {
      const int half = pt.n / 2;
      const std::array<int, 2> counts{pt.a, pt.b}, sizes{half, half};
      const MagnetizationPoint mu(counts, sizes);
      const double target_pairs = gamma_star(mu.m(0), mu.m(1)) * pt.n / 4.0;
      const int lo = std::max(0, pt.a + pt.b - half), hi = std::min(pt.a, pt.b);
      const int pairs = std::clamp(static_cast<int>(std::lround(target_pairs)), lo, hi);
      const double expected = pt.n * mu.m(0) * mu.m(1) / 2.0;
      // S is linear in the pair count with slope 4, so rounding the pair count moves S by at most 2.
      const double allowed = 4.0 * std::abs(pairs - target_pairs) + 1e-9;
      worst = std::max(worst, std::abs(static_cast<double>(cross_term_value(pt.n, mu, pairs)) - expected) - allowed);
    }
    d << "max excess over rounding allowance = " << worst;
    return worst <= 0.0;
  });
}

CheckResult check_matching_aligned(const VerifyOptions& o) {
  return run_check("AC5", "perfect matching, N alpha_N -> inf: aligned wells", [&](std::ostringstream& d) {
    const auto ns = capped({200, 400, 800, 1600}, o);
    const WellSpec wells = matching_wells(4.0, 0.1);
    const double m = solve_cw(2.0).value;
    const LimitLaw law{{{m, m}, {-m, -m}}, {0.5, 0.5}};
    const auto weights = law_weights_for(wells, law);
    std::vector<double> aligned;
    double last_tv = 1.0;
    for (int n : ns) {
      const TwoBlockSpec spec{n, 4.0, 1.0 / std::sqrt(static_cast<double>(n))};
      const auto r = well_mass(exact_two_block(spec, {.threads = o.threads}), wells);
      aligned.push_back(aligned_mass(r));
      last_tv = tv_distance(r.masses, r.residual, weights);
      d << "N=" << n << " aligned=" << aligned.back() << " tv=" << last_tv << "; ";
    }
    bool ok = std::adjacent_find(aligned.begin(), aligned.end(), std::greater_equal<>()) == aligned.end();
    if (is_full(o)) ok = ok && aligned.back() >= 0.90 && last_tv <= 0.10;
    return ok;
  });
}

CheckResult check_matching_decoupled(const VerifyOptions& o) {
  return run_check("AC6", "perfect matching, N alpha_N -> 0: four equal wells", [&](std::ostringstream& d) {
    const int n = is_full(o) ? 1600 : 400;
    const WellSpec wells = matching_wells(4.0, 0.1);
    const TwoBlockSpec spec{n, 4.0, std::pow(static_cast<double>(n), -1.5)};
    const auto r = well_mass(exact_two_block(spec, {.threads = o.threads}), wells);
    double worst = 0.0;
    for (double mass : r.masses) worst = std::max(worst, std::abs(mass - 0.25));
    const std::vector<double> quarter(4, 0.25);
    const double tv = tv_distance(r.masses, r.residual, quarter);
    d << "N=" << n << " max |mass - 1/4| = " << worst << ", tv = " << tv;
    return worst <= 0.05 && tv <= 0.05;
  });
}

namespace {

// Well masses averaged over masks drawn with retention p: the quenched law
// depends on the mask only through M ~ Bin(N/2, p).
std::vector<double> disorder_averaged_masses(int n, double alpha, double p, const WellSpec& wells) {
  const int half = n / 2;
  std::vector<double> total(wells.centers.size(), 0.0);
  for (int m = 0; m <= half; ++m) {
    const double pmf = std::exp(log_binomial(half, m) + m * std::log(p) + (half - m) * std::log1p(-p));
    if (pmf < 1e-15) continue;
    DilutedSpec spec{{n, 4.0, alpha}, std::vector<std::uint8_t>(half, 0), p, 0};
    std::fill(spec.mask.begin(), spec.mask.begin() + m, 1);
    const auto r = well_mass(exact_diluted(spec), wells);
    for (std::size_t w = 0; w < total.size(); ++w) total[w] += pmf * r.masses[w];
  }
  return total;
}

}  // namespace

CheckResult check_diluted(const VerifyOptions&) {
  return run_check("AC7", "diluted matching: quenched alignment threshold", [&](std::ostringstream& d) {
    const WellSpec wells = matching_wells(4.0, 0.1);
    bool ok = true;
    auto alpha = [](int n) { return std::pow(static_cast<double>(n), -0.3); };
    auto p_strong = [](int n) { return std::pow(static_cast<double>(n), -0.4); };
    auto p_weak = [](int n) { return std::pow(static_cast<double>(n), -0.9); };

    d << "N=120 per-mask aligned/anti:";
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto spec = make_diluted({120, 4.0, alpha(120)}, p_strong(120), seed);
      const auto r = well_mass(exact_diluted(spec), wells);
      ok &= aligned_mass(r) > anti_aligned_mass(r);
      d << " [M=" << spec.retained() << " " << aligned_mass(r) << "/" << anti_aligned_mass(r) << "]";
    }
    std::vector<double> averaged;
    for (int n : {60, 90, 120}) {
      const auto masses = disorder_averaged_masses(n, alpha(n), p_strong(n), wells);
      averaged.push_back(masses[0] + masses[3]);
    }
    ok &= averaged[0] < averaged[1] && averaged[1] < averaged[2];
    d << "; disorder-averaged aligned mass N=60,90,120: " << averaged[0] << ", " << averaged[1] << ", " << averaged[2];

    double worst = 0.0;
    for (double mass : disorder_averaged_masses(120, alpha(120), p_weak(120), wells))
      worst = std::max(worst, std::abs(mass - 0.25));
    d << "; weak dilution per-mask max |mass - 1/4|:";
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto spec = make_diluted({120, 4.0, alpha(120)}, p_weak(120), seed);
      double dev = 0.0;
      for (double mass : well_mass(exact_diluted(spec), wells).masses) dev = std::max(dev, std::abs(mass - 0.25));
      d << " [M=" << spec.retained() << " " << dev << "]";
    }
    ok &= worst <= 0.1;
    d << "; disorder-averaged max |mass - 1/4| = " << worst;
    return ok;
  });
}

CheckResult check_weighted_signs(const VerifyOptions& o) {
  return run_check("AC8", "three blocks, alpha sqrt(bN) -> C: sign weights", [&](std::ostringstream& d) {
    const int n = is_full(o) ? 840 : 400;
    bool ok = true;
    for (double big_c : {0.5, 1.0, 2.0}) {
      const ScheduleSpec schedule = three_block_schedule(0.75, big_c / std::sqrt(40.5 / std::sqrt(840.0)));
      const auto regime = classify(schedule);
      ok &= regime.theorem_case == TheoremCase::weighted_signs;
      const auto law = limit_law(schedule, regime);
      const double m_star = solve_cw(1.5).value;
      const WellSpec wells = prediction_wells(schedule, regime, m_star);
      const auto weights = law_weights_for(wells, law);
      const auto spec = std::get<ThreeBlockSpec>(spec_at(schedule, n));
      const auto r = well_mass(exact_three_block(spec, {.threads = o.threads}), wells);
      double worst = 0.0, asym = 0.0;
      for (std::size_t w = 0; w < 8; ++w) {
        worst = std::max(worst, std::abs(r.masses[w] - weights[w]));
        asym = std::max(asym, std::abs(r.masses[w] - r.masses[7 - w]));  // global flip
        const std::size_t mirrored = ((w & 1) << 2) | (w & 2) | ((w >> 2) & 1);  // B1 <-> B3
        asym = std::max(asym, std::abs(r.masses[w] - r.masses[mirrored]));
      }
      ok &= worst <= 0.05 && asym == 0.0;
      d << "C=" << big_c << " (n_outer=" << spec.n_outer << ", b=" << spec.b << "): max |mass - a| = " << worst
        << ", symmetry defect = " << asym << "; ";
    }
    return ok;
  });
}

CheckResult check_middle_field(const VerifyOptions& o) {
  return run_check("AC9", "three blocks, alpha sqrt(N/b) -> c: middle block in a field", [&](std::ostringstream& d) {
    const int n = is_full(o) ? 840 : 400;
    const double root_b = std::sqrt(40.5 / std::sqrt(840.0));
    const ScheduleSpec schedule = three_block_schedule(0.25, root_b);  // c = A / sqrt(B) = 1
    const auto regime = classify(schedule);
    const double target = m_of_c(1.5, *regime.c);
    const auto spec = std::get<ThreeBlockSpec>(spec_at(schedule, n));
    const auto table = exact_three_block(spec, {.threads = o.threads});
    const double m_star = solve_cw(1.5).value;
    std::vector<double> middle(static_cast<std::size_t>(spec.b + 1), 0.0);
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto p = table.point(i);
      if (std::abs(p.m(0) - m_star) < 0.1 && std::abs(p.m(2) - m_star) < 0.1) middle[p.plus_count(1)] += table.prob_at(i);
    }
    const int peak = static_cast<int>(std::max_element(middle.begin(), middle.end()) - middle.begin());
    const double peak_m = 2.0 * peak / spec.b - 1.0;
    const double allowed = 2.0 / spec.b + 0.02;
    d << "case=" << to_string(regime.theorem_case) << " c=" << regime.c->to_string() << " m(c)=" << target
      << " peak m2=" << peak_m << " (allowed " << allowed << ")";
    return regime.theorem_case == TheoremCase::field_middle && std::abs(peak_m - target) <= allowed;
  });
}

CheckResult check_tilted_expectation(const VerifyOptions&) {
  return run_check("AC10", "tilted expectation log E[e^{alpha S}] ~ alpha N mu1 mu2 / 2", [](std::ostringstream& d) {
    const double m_star = solve_cw(2.0).value;
    std::vector<double> errors;
    for (int n : {200, 400, 800}) {
      const int half = n / 2;
      const int k = static_cast<int>(std::lround(half * (1.0 + m_star) / 2.0));
      const std::array<int, 2> counts{k, k}, sizes{half, half};
      const MagnetizationPoint mu(counts, sizes);
      const double alpha = std::pow(static_cast<double>(n), -0.6);
      const auto law = pair_count_law(n, mu);
      const double err = std::abs(tilted_log_expectation(law, alpha) - alpha * n / 2.0 * mu.m(0) * mu.m(1)) / (alpha * n);
      errors.push_back(err);
      d << "N=" << n << " err=" << err << "; ";
    }
    return errors.back() <= 0.05 && errors[0] > errors[1] && errors[1] > errors[2];
  });
}

namespace {

std::vector<ModelSpec> small_models(std::uint64_t seed) {
  return {TwoBlockSpec{10, 4.0, 0.5}, make_diluted({10, 4.0, 0.7}, 0.6, seed), ThreeBlockSpec{4, 2, 1.5, 0.3},
          TwoBlockSpec{40, 3.0, 0.2}, ThreeBlockSpec{15, 6, 2.0, 0.8}};
}

}  // namespace

CheckResult check_detailed_balance(const VerifyOptions& o) {
  return run_check("AC11a", "detailed balance of the flip kernels", [&](std::ostringstream& d) {
    const double sign = o.corrupt_cross_sign ? -1.0 : 1.0;
    double worst_delta = 0.0, worst_balance = 0.0;
    CounterRng rng(99, 3);
    for (const auto& spec : small_models(5)) {
      const BlockLayout layout = layout_of(spec);
      for (int trial = 0; trial < 10000; ++trial) {
        std::vector<std::int8_t> spins(layout.total());
        for (auto& s : spins) s = rng.bernoulli(0.5) ? 1 : -1;
        const SpinConfig before(spins, layout);
        const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(layout.total())));
        SpinConfig after = before;
        after.spins[site] = static_cast<std::int8_t>(-after.spins[site]);
        const double h_before = energy(spec, before), h_after = energy(spec, after);
        const double forward = ChainState(spec, before, sign).delta_energy(site);
        const double backward = ChainState(spec, after, sign).delta_energy(site);
        worst_delta = std::max(worst_delta, std::abs(forward - (h_after - h_before)));
        for (Dynamics dyn : {Dynamics::glauber, Dynamics::metropolis}) {
          const double lhs = -h_before + std::log(flip_probability(dyn, forward));
          const double rhs = -h_after + std::log(flip_probability(dyn, backward));
          worst_balance = std::max(worst_balance, std::abs(lhs - rhs));
        }
      }
    }
    d << "max |dH_incremental - dH_full| = " << worst_delta << ", max log-balance defect = " << worst_balance
      << " (tol 1e-9)";
    return worst_delta <= 1e-9 && worst_balance <= 1e-9;
  });
}

CheckResult check_mcmc_vs_exact(const VerifyOptions& o) {
  return run_check("AC11b", "MCMC histograms match exact tables (N <= 12)", [&](std::ostringstream& d) {
    const double sign = o.corrupt_cross_sign ? -1.0 : 1.0;
    const long sweeps = is_full(o) ? 1000000 : 100000;
    const std::vector<ModelSpec> specs{TwoBlockSpec{8, 4.0, 0.5}, make_diluted({8, 4.0, 0.5}, 0.5, 11),
                                       ThreeBlockSpec{3, 2, 1.5, 0.6}};
    double worst = 0.0;
    std::uint64_t stream = 0;
    for (const auto& spec : specs) {
      const auto table = exact_table(spec);
      ChainConfig chain{.seed = 2025, .sweeps = sweeps, .burn_in = 1000, .thin = 1, .stream = stream++, .initial_signs = {}};
      const auto traj = run_chain(ChainState(spec, initial_config(spec, chain), sign), chain);
      const auto emp = empirical_law(traj, table.block_sizes);
      double tv = 0.0;
      for (std::size_t i = 0; i < table.size(); ++i) tv += std::abs(emp[i] - table.prob_at(i));
      tv *= 0.5;
      worst = std::max(worst, tv);
      d << model_name(spec) << " tv=" << tv << "; ";
    }
    return worst <= 0.02;
  });
}

CheckResult check_prediction_algebra(const VerifyOptions&) {
  return run_check("AC12", "sign weights sum to one and recover the extreme regimes", [](std::ostringstream& d) {
    std::vector<ExtendedReal> grid{0.0, ExtendedReal::infinity()};
    for (int i = 0; i < 48; ++i) grid.emplace_back(std::pow(10.0, -3.0 + 6.0 * i / 47.0));
    double worst_sum = 0.0;
    for (const auto& c : grid) {
      double total = 0.0;
      for (int code = 0; code < 8; ++code)
        total += a_weight(code & 4 ? -1 : 1, code & 2 ? -1 : 1, code & 1 ? -1 : 1, c, 1.5);
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    }
    bool extremes = true;
    for (int code = 0; code < 8; ++code) {
      const int x = code & 4 ? -1 : 1, y = code & 2 ? -1 : 1, z = code & 1 ? -1 : 1;
      const bool equal = x == y && y == z;
      extremes &= a_weight(x, y, z, 0.0, 1.5) == 0.125;
      extremes &= a_weight(x, y, z, ExtendedReal::infinity(), 1.5) == (equal ? 0.5 : 0.0);
      extremes &= std::abs(a_weight(x, y, z, 1e-12, 1.5) - 0.125) <= 1e-12;
      extremes &= std::abs(a_weight(x, y, z, 1e6, 1.5) - (equal ? 0.5 : 0.0)) <= 1e-12;
    }
    const double m_star = solve_cw(1.5).value;
    const bool middle = std::abs(m_of_c(1.5, 1e-9) - m_star) <= 1e-8 && 1.0 - m_of_c(1.5, 1e3) <= 1e-12 &&
                        m_of_c(1.5, ExtendedReal::infinity()) == 1.0;
    d << grid.size() << " values of C, max |sum - 1| = " << worst_sum << ", extreme limits "
      << (extremes ? "ok" : "FAILED") << ", m(c) limits " << (middle ? "ok" : "FAILED");
    return worst_sum <= 1e-12 && extremes && middle;
  });
}

CheckResult check_fixed_point_invariants(const VerifyOptions&) {
  return run_check("INV-fp", "fixed-point residuals, monotonicity, stationarity", [](std::ostringstream& d) {
    double worst_residual = 0.0, worst_stationary = 0.0;
    bool monotone = true;
    double previous = 0.0;
    for (int i = 1; i <= 400; ++i) {
      const double gamma = 0.01 * i;
      const auto r = solve_cw(gamma);
      worst_residual = std::max(worst_residual, r.residual);
      if (gamma > 1.0) {
        monotone &= r.value > previous;
        if (r.value < 1.0 - 1e-6) worst_stationary = std::max(worst_stationary, std::abs(gamma * r.value - std::atanh(r.value)));
      } else {
        monotone &= r.value == 0.0;
      }
      previous = r.value;
    }
    double prev_c = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double m = m_of_c(1.5, 0.05 * i);
      monotone &= m >= prev_c;
      prev_c = m;
    }
    d << "max residual " << worst_residual << ", max |beta m - atanh m| " << worst_stationary;
    return worst_residual <= 1e-12 && worst_stationary <= 1e-8 && monotone;
  });
}

CheckResult check_table_symmetries(const VerifyOptions&) {
  return run_check("INV-sym", "normalization and bit-exact flip/exchange symmetry", [](std::ostringstream& d) {
    bool ok = true;
    double worst_norm = 0.0;
    const std::vector<ModelSpec> specs{TwoBlockSpec{60, 4.0, 0.1}, make_diluted({60, 4.0, 0.3}, 0.4, 3),
                                       ThreeBlockSpec{30, 8, 1.5, 0.2}};
    for (const auto& spec : specs) {
      const auto table = exact_table(spec);
      worst_norm = std::max(worst_norm, std::abs(table.total_probability() - 1.0));
      for (std::size_t i = 0; i < table.size(); ++i) {
        const auto p = table.point(i);
        ok &= table.log_weights[i] == table.log_weight(p.flipped());
        std::vector<int> swapped;
        for (int j = table.blocks() - 1; j >= 0; --j) swapped.push_back(p.plus_count(j));
        ok &= table.log_weights[i] == table.log_weight(MagnetizationPoint(swapped, table.block_sizes));
      }
    }
    d << "max |sum P - 1| = " << worst_norm << ", symmetric = " << (ok ? "yes" : "no");
    return ok && worst_norm <= 1e-10;
  });
}

VerifyReport verify_suite(const VerifyOptions& options) {
  VerifyReport report;
  for (const auto& check :
       {check_fixed_point_invariants, check_table_symmetries, check_oracle_equivalence, check_decoupled_factorization,
        check_pair_count_law, check_cross_term_identity, check_matching_aligned, check_matching_decoupled,
        check_diluted, check_weighted_signs, check_middle_field, check_tilted_expectation, check_detailed_balance,
        check_mcmc_vs_exact, check_prediction_algebra})
    report.checks.push_back(check(options));
  return report;
}

}  // namespace bottleneck

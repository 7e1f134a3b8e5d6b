#pragma once

// Convergence experiments over a schedule's N list, output files, and the
// bundled verification suite.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bottleneck/exact_gibbs.hpp"
#include "bottleneck/predictions.hpp"
#include "bottleneck/sampler.hpp"

namespace bottleneck {

/// 1/2 sum |p_w - q_w| + 1/2 residual, with masses and law weights matched per well.
double tv_distance(std::span<const double> masses, double residual, std::span<const double> law_weights);

enum class Method { exact, mcmc, automatic };

Method parse_method(const std::string& name);
std::string to_string(Method method);

struct ExperimentConfig {
  ScheduleSpec schedule;
  std::vector<int> n_list;
  Method method = Method::automatic;
  std::optional<WellSpec> wells;   // explicit wells; otherwise from the prediction
  double wells_eps = -1.0;         // < 0: default min(0.1, m/2)
  double kappa = 0.0;              // > 0: half-width N^-kappa instead of wells_eps
  std::string output_dir;          // empty: no files written
  std::vector<std::uint64_t> seeds{1};
  long sweeps = 20000;
  long burn_in = 2000;
  int threads = 0;
  ExactOptions exact;
  double auto_two_block_max_n = 2000;
};

void validate(const ExperimentConfig& config);

struct ConvergenceRow {
  int n = 0;
  std::uint64_t seed = 0;
  std::string method;
  int retained = -1;  // diluted: number of retained matched pairs
  std::vector<double> masses;
  double residual = 0.0;
  std::optional<double> tv;
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  RegimeClassification regime;
  std::optional<LimitLaw> law;
  WellSpec wells;                    // centers; half-width of the last N
  std::vector<double> law_weights;   // per well, empty when uncovered
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> warnings;
};

/// Sign-pattern wells whose magnitudes come from the predicted atoms.
WellSpec prediction_wells(const ScheduleSpec& schedule, const RegimeClassification& regime, double eps);
/// Law weight of each well, matching centers to atoms; throws on a well/atom mismatch.
std::vector<double> law_weights_for(const WellSpec& wells, const LimitLaw& law);

/// Well masses from multi-seed chains, one chain per well started at its sign pattern, flip-symmetrized.
WellMassReport mcmc_well_mass(const ModelSpec& spec, const WellSpec& wells, const ChainConfig& chain, int threads = 0);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// rows.csv, report.json, timing.csv, tv.svg, masses.svg under config.output_dir.
void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result);

std::string rows_csv(const ExperimentResult& result);
std::string report_json(const ExperimentConfig& config, const ExperimentResult& result);
std::string config_json(const ExperimentConfig& config);
/// Overlays keys present in a JSON config text onto `config`.
void apply_config_json(ExperimentConfig& config, const std::string& text);

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series);

enum class VerifyLevel { fast, full };

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::fast;
  // Fault injection: negate the cross-term sign inside the MCMC kernel.
  bool corrupt_cross_sign = false;
  int threads = 0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Individual criteria; each runs at the sizes of the requested level.
CheckResult check_oracle_equivalence(const VerifyOptions& options);
CheckResult check_decoupled_factorization(const VerifyOptions& options);
CheckResult check_pair_count_law(const VerifyOptions& options);
CheckResult check_cross_term_identity(const VerifyOptions& options);
CheckResult check_matching_aligned(const VerifyOptions& options);
CheckResult check_matching_decoupled(const VerifyOptions& options);
CheckResult check_diluted(const VerifyOptions& options);
CheckResult check_weighted_signs(const VerifyOptions& options);
CheckResult check_middle_field(const VerifyOptions& options);
CheckResult check_tilted_expectation(const VerifyOptions& options);
CheckResult check_detailed_balance(const VerifyOptions& options);
CheckResult check_mcmc_vs_exact(const VerifyOptions& options);
CheckResult check_prediction_algebra(const VerifyOptions& options);
CheckResult check_fixed_point_invariants(const VerifyOptions& options);
CheckResult check_table_symmetries(const VerifyOptions& options);

VerifyReport verify_suite(const VerifyOptions& options);

}  // namespace bottleneck

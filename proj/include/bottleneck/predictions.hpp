#pragma once

// Regime classification of power-law parameter schedules and the limit laws
// of the block magnetization predicted in each regime.

#include <optional>
#include <string>
#include <vector>

#include "bottleneck/exact_gibbs.hpp"
#include "bottleneck/fixed_point.hpp"
#include "bottleneck/model.hpp"

namespace bottleneck {

enum class ModelKind { two_block, diluted, three_block };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

// alpha_N = A N^-rho; b_N = max(1, floor(B N^gamma)); p(N) = min(1, P N^-pi).
struct ScheduleSpec {
  ModelKind model = ModelKind::two_block;
  double beta = 4.0;
  double a_prefactor = 1.0;
  double rho = 0.5;
  double b_prefactor = 1.0;
  double gamma = 0.5;
  double p_prefactor = 1.0;
  double pi = 0.0;
  // Constant in p(N) N >= C log N for the almost-sure refinement.
  double as_log_constant = 1.0;

  double alpha_at(int n) const;
  int b_at(int n) const;
  double p_at(int n) const;
};

void validate(const ScheduleSpec& schedule);

enum class TheoremCase {
  uncovered,
  matching_aligned,     // two-block, N alpha_N -> inf
  matching_decoupled,   // two-block, N alpha_N -> 0
  diluted_aligned,      // p N alpha_N -> inf
  diluted_decoupled,    // p N alpha_N -> 0
  blockspin_saturated,  // alpha sqrt(N/b) -> inf
  field_middle,         // alpha sqrt(N/b) -> c in (0, inf)
  blockspin_aligned,    // alpha sqrt(N/b) -> 0, alpha sqrt(bN) -> inf
  weighted_signs,       // alpha sqrt(bN) -> C in (0, inf)
  blockspin_free,       // alpha sqrt(bN) -> 0
};

std::string to_string(TheoremCase c);

struct LimitConstant {
  std::string name;  // e.g. "N*alpha_N"
  double exponent = 0.0;
  ExtendedReal limit;
};

struct RegimeClassification {
  TheoremCase theorem_case = TheoremCase::uncovered;
  bool covered = false;
  std::vector<LimitConstant> limit_constants;
  std::optional<ExtendedReal> c;        // alpha sqrt(N/b) limit, three-block
  std::optional<ExtendedReal> big_c;    // alpha sqrt(bN) limit, three-block
  bool as_convergence_plausible = false;  // diluted only
  std::string note;
};

inline constexpr double kExponentTolerance = 1e-12;

RegimeClassification classify(const ScheduleSpec& schedule);

struct LimitLaw {
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;
};

void validate(const LimitLaw& law);

/// Weight of the sign pattern (chi1, chi2, chi3) in the finite-C mixture.
double a_weight(int chi1, int chi2, int chi3, ExtendedReal big_c, double beta);

/// Throws std::domain_error for uncovered regimes.
LimitLaw limit_law(const ScheduleSpec& schedule);
LimitLaw limit_law(const ScheduleSpec& schedule, const RegimeClassification& regime);

/// Candidate sign atoms of a model even when the regime is uncovered.
std::vector<std::vector<double>> sign_atoms(const ScheduleSpec& schedule);

/// Boxes of half-width eps around the atoms of a law.
WellSpec wells_from_atoms(const std::vector<std::vector<double>>& atoms, double eps);
double default_well_half_width(const ScheduleSpec& schedule);

std::string to_json(const LimitLaw& law, int indent = 2);
std::string to_json(const RegimeClassification& regime, int indent = 2);

/// Concrete model at size N; for the three-block model N - b_N is rounded down to even.
ModelSpec spec_at(const ScheduleSpec& schedule, int n, std::uint64_t mask_seed = 0);

}  // namespace bottleneck

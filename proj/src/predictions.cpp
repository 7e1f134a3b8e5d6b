#include "bottleneck/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace bottleneck {

ModelKind parse_model_kind(const std::string& name) {
  if (name == "two_block") return ModelKind::two_block;
  if (name == "diluted") return ModelKind::diluted;
  if (name == "three_block") return ModelKind::three_block;
  throw std::invalid_argument("unknown model '" + name + "' (expected two_block, diluted or three_block)");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::two_block: return "two_block";
    case ModelKind::diluted: return "diluted";
    case ModelKind::three_block: return "three_block";
  }
  return "?";
}

std::string to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::uncovered: return "uncovered";
    case TheoremCase::matching_aligned: return "matching_aligned";
    case TheoremCase::matching_decoupled: return "matching_decoupled";
    case TheoremCase::diluted_aligned: return "diluted_aligned";
    case TheoremCase::diluted_decoupled: return "diluted_decoupled";
    case TheoremCase::blockspin_saturated: return "blockspin_saturated";
    case TheoremCase::field_middle: return "field_middle";
    case TheoremCase::blockspin_aligned: return "blockspin_aligned";
    case TheoremCase::weighted_signs: return "weighted_signs";
    case TheoremCase::blockspin_free: return "blockspin_free";
  }
  return "?";
}

double ScheduleSpec::alpha_at(int n) const { return a_prefactor * std::pow(static_cast<double>(n), -rho); }

int ScheduleSpec::b_at(int n) const {
  return std::max(1, static_cast<int>(std::floor(b_prefactor * std::pow(static_cast<double>(n), gamma))));
}

double ScheduleSpec::p_at(int n) const { return std::min(1.0, p_prefactor * std::pow(static_cast<double>(n), -pi)); }

void validate(const ScheduleSpec& s) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(std::isfinite(s.beta) && s.beta > 0.0, "schedule beta must be positive");
  require(s.a_prefactor > 0.0 && std::isfinite(s.a_prefactor), "alpha prefactor A must be positive");
  require(s.rho > 0.0 && std::isfinite(s.rho), "rho must be positive (alpha_N must vanish)");
  if (s.model == ModelKind::three_block) {
    require(s.beta > 1.0, "three-block schedule requires beta > 1");
    require(s.b_prefactor > 0.0, "b prefactor B must be positive");
    require(s.gamma > 0.0 && s.gamma < 1.0, "b exponent gamma must lie in (0, 1) so that b_N -> inf and b_N/N -> 0");
  } else {
    require(s.beta > 2.0, "two-block schedules require beta > 2");
  }
  if (s.model == ModelKind::diluted) {
    require(s.p_prefactor > 0.0, "p prefactor P must be positive");
    require(s.pi >= 0.0, "p exponent pi must be >= 0");
  }
}

namespace {

LimitConstant make_constant(std::string name, double exponent, double prefactor) {
  LimitConstant lc{std::move(name), exponent, {}};
  if (exponent > kExponentTolerance)
    lc.limit = ExtendedReal::infinity();
  else if (exponent < -kExponentTolerance)
    lc.limit = 0.0;
  else
    lc.limit = prefactor;
  return lc;
}

bool is_intermediate(const ExtendedReal& x) { return !x.is_infinite() && !x.is_zero(); }

}  // namespace

RegimeClassification classify(const ScheduleSpec& s) {
  validate(s);
  RegimeClassification r;
  switch (s.model) {
    case ModelKind::two_block: {
      const auto lc = make_constant("N*alpha_N", 1.0 - s.rho, s.a_prefactor);
      r.limit_constants.push_back(lc);
      if (lc.limit.is_infinite()) r.theorem_case = TheoremCase::matching_aligned;
      else if (lc.limit.is_zero()) r.theorem_case = TheoremCase::matching_decoupled;
      else r.note = "N*alpha_N tends to a finite nonzero constant; no limit law is known";
      break;
    }
    case ModelKind::diluted: {
      const double p_limit_prefactor = s.pi > 0.0 ? s.p_prefactor : std::min(1.0, s.p_prefactor);
      const auto np = make_constant("p(N)*N", 1.0 - s.pi, p_limit_prefactor);
      const auto lc = make_constant("p(N)*N*alpha_N", 1.0 - s.rho - s.pi, p_limit_prefactor * s.a_prefactor);
      r.limit_constants = {lc, np};
      r.as_convergence_plausible = np.limit.is_infinite();
      if (!np.limit.is_infinite()) r.note = "p(N)*N does not diverge; the number of retained edges stays bounded";
      else if (lc.limit.is_infinite()) r.theorem_case = TheoremCase::diluted_aligned;
      else if (lc.limit.is_zero()) r.theorem_case = TheoremCase::diluted_decoupled;
      else r.note = "p(N)*N*alpha_N tends to a finite nonzero constant; no limit law is known";
      break;
    }
    case ModelKind::three_block: {
      const double root_b = std::sqrt(s.b_prefactor);
      const auto small = make_constant("alpha_N*sqrt(N/b_N)", -s.rho + (1.0 - s.gamma) / 2.0, s.a_prefactor / root_b);
      const auto large = make_constant("alpha_N*sqrt(b_N*N)", -s.rho + (1.0 + s.gamma) / 2.0, s.a_prefactor * root_b);
      r.limit_constants = {small, large};
      r.c = small.limit;
      r.big_c = large.limit;
      if (small.limit.is_infinite()) r.theorem_case = TheoremCase::blockspin_saturated;
      else if (is_intermediate(small.limit)) r.theorem_case = TheoremCase::field_middle;
      else if (large.limit.is_infinite()) r.theorem_case = TheoremCase::blockspin_aligned;
      else if (is_intermediate(large.limit)) r.theorem_case = TheoremCase::weighted_signs;
      else r.theorem_case = TheoremCase::blockspin_free;
      break;
    }
  }
  r.covered = r.theorem_case != TheoremCase::uncovered;
  return r;
}

void validate(const LimitLaw& law) {
  if (law.atoms.size() != law.weights.size() || law.atoms.empty())
    throw std::invalid_argument("limit law needs one weight per atom");
  double total = 0.0;
  for (double w : law.weights) {
    if (!(w > 0.0)) throw std::invalid_argument("limit law weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("limit law weights must sum to 1");
}

double a_weight(int chi1, int chi2, int chi3, ExtendedReal big_c, double beta) {
  auto sign_ok = [](int x) { return x == 1 || x == -1; };
  if (!sign_ok(chi1) || !sign_ok(chi2) || !sign_ok(chi3)) throw std::invalid_argument("a_weight: signs must be +-1");
  const bool all_equal = chi1 == chi2 && chi2 == chi3;
  if (big_c.is_infinite()) return all_equal ? 0.5 : 0.0;
  if (big_c.value() < 0.0) throw std::invalid_argument("a_weight: C must be >= 0");
  const double m_star = solve_cw(beta).value;
  const double x = std::numbers::sqrt2 * big_c.value() * m_star * m_star;
  const double damp = std::exp(-x);
  const double denom = 2.0 * (1.0 + damp) * (1.0 + damp);
  if (all_equal) return 1.0 / denom;
  if (chi1 == chi3) return damp * damp / denom;  // middle block against both outer blocks
  return damp / denom;
}

std::vector<std::vector<double>> sign_atoms(const ScheduleSpec& s) {
  std::vector<std::vector<double>> atoms;
  if (s.model == ModelKind::three_block) {
    const double m = solve_cw(s.beta).value;
    for (int code = 0; code < 8; ++code)
      atoms.push_back({(code & 4) ? -m : m, (code & 2) ? -m : m, (code & 1) ? -m : m});
  } else {
    const double m = solve_cw(s.beta / 2.0).value;
    atoms = {{m, m}, {m, -m}, {-m, m}, {-m, -m}};
  }
  return atoms;
}

LimitLaw limit_law(const ScheduleSpec& schedule) { return limit_law(schedule, classify(schedule)); }

LimitLaw limit_law(const ScheduleSpec& s, const RegimeClassification& r) {
  if (!r.covered) throw std::domain_error("no limit law for an uncovered regime: " + r.note);
  LimitLaw law;
  switch (r.theorem_case) {
    case TheoremCase::matching_aligned:
    case TheoremCase::diluted_aligned: {
      const double m = solve_cw(s.beta / 2.0).value;
      law.atoms = {{m, m}, {-m, -m}};
      law.weights = {0.5, 0.5};
      break;
    }
    case TheoremCase::matching_decoupled:
    case TheoremCase::diluted_decoupled:
      law.atoms = sign_atoms(s);
      law.weights.assign(4, 0.25);
      break;
    case TheoremCase::blockspin_saturated:
    case TheoremCase::field_middle:
    case TheoremCase::blockspin_aligned: {
      const double m = solve_cw(s.beta).value;
      double middle = m;
      if (r.theorem_case == TheoremCase::blockspin_saturated) middle = 1.0;
      if (r.theorem_case == TheoremCase::field_middle) middle = m_of_c(s.beta, *r.c);
      law.atoms = {{m, middle, m}, {-m, -middle, -m}};
      law.weights = {0.5, 0.5};
      break;
    }
    case TheoremCase::weighted_signs:
    case TheoremCase::blockspin_free: {
      law.atoms = sign_atoms(s);
      const ExtendedReal big_c = r.theorem_case == TheoremCase::blockspin_free ? ExtendedReal(0.0) : *r.big_c;
      for (const auto& atom : law.atoms) {
        auto sign = [](double x) { return x > 0.0 ? 1 : -1; };
        law.weights.push_back(a_weight(sign(atom[0]), sign(atom[1]), sign(atom[2]), big_c, s.beta));
      }
      break;
    }
    case TheoremCase::uncovered:
      break;
  }
  validate(law);
  return law;
}

WellSpec wells_from_atoms(const std::vector<std::vector<double>>& atoms, double eps) {
  WellSpec wells{atoms, eps};
  validate(wells);
  return wells;
}

double default_well_half_width(const ScheduleSpec& s) {
  const double m = s.model == ModelKind::three_block ? solve_cw(s.beta).value : solve_cw(s.beta / 2.0).value;
  return std::min(0.1, m / 2.0);
}

std::string to_json(const LimitLaw& law, int indent) {
  nlohmann::ordered_json j;
  j["atoms"] = law.atoms;
  j["weights"] = law.weights;
  return j.dump(indent);
}

namespace {

nlohmann::ordered_json extended_json(const ExtendedReal& x) {
  if (x.is_infinite()) return "inf";
  return x.value();
}

}  // namespace

std::string to_json(const RegimeClassification& r, int indent) {
  nlohmann::ordered_json j;
  j["theorem_case"] = to_string(r.theorem_case);
  j["covered"] = r.covered;
  auto constants = nlohmann::ordered_json::array();
  for (const auto& lc : r.limit_constants)
    constants.push_back({{"name", lc.name}, {"exponent", lc.exponent}, {"limit", extended_json(lc.limit)}});
  j["limit_constants"] = constants;
  if (r.c) j["c"] = extended_json(*r.c);
  if (r.big_c) j["C"] = extended_json(*r.big_c);
  j["as_convergence_plausible"] = r.as_convergence_plausible;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(indent);
}

ModelSpec spec_at(const ScheduleSpec& s, int n, std::uint64_t mask_seed) {
  validate(s);
  switch (s.model) {
    case ModelKind::two_block: {
      TwoBlockSpec spec{n, s.beta, s.alpha_at(n)};
      validate(spec);
      return spec;
    }
    case ModelKind::diluted: {
      TwoBlockSpec base{n, s.beta, s.alpha_at(n)};
      validate(base);
      return make_diluted(base, s.p_at(n), mask_seed);
    }
    case ModelKind::three_block: {
      const int b = s.b_at(n);
      ThreeBlockSpec spec{(n - b) / 2, b, s.beta, s.alpha_at(n)};
      validate(spec);
      return spec;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace bottleneck

// bottleneck: exact tables, chains, predictions and convergence sweeps for the
// bottleneck Curie-Weiss models.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bottleneck/harness.hpp"

namespace fs = std::filesystem;
using namespace bottleneck;

namespace {

struct Options {
  std::string model = "two_block";
  double beta = 4.0;
  double a = 1.0, rho = 0.5;
  double b = 1.0, gamma = 0.5;
  double p = 1.0, pi = 0.0;
  std::vector<int> n_list{200};
  long sweeps = 20000;
  long burn_in = 2000;
  std::vector<std::uint64_t> seeds{1};
  double wells_eps = -1.0;
  double kappa = 0.0;
  std::string method = "auto";
  std::string dynamics = "glauber";
  std::string out;
  std::string format = "csv";
  std::string config_file;
  std::string level = "fast";
  bool corrupt = false;
};

void add_schedule_flags(CLI::App* app, Options& o) {
  app->add_option("--model", o.model, "two_block, diluted or three_block")->capture_default_str();
  app->add_option("--beta", o.beta, "inverse temperature")->capture_default_str();
  app->add_option("--A", o.a, "alpha prefactor: alpha_N = A N^-rho")->capture_default_str();
  app->add_option("--rho", o.rho, "alpha exponent")->capture_default_str();
  app->add_option("--B", o.b, "middle block prefactor: b_N = floor(B N^gamma)")->capture_default_str();
  app->add_option("--gamma", o.gamma, "middle block exponent")->capture_default_str();
  app->add_option("--P", o.p, "retention prefactor: p(N) = min(1, P N^-pi)")->capture_default_str();
  app->add_option("--pi", o.pi, "retention exponent")->capture_default_str();
  app->add_option("--config", o.config_file, "JSON config file; its keys override flags");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--format", o.format, "stdout format: csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_run_flags(CLI::App* app, Options& o, bool many_n) {
  if (many_n)
    app->add_option("--N", o.n_list, "system sizes")->expected(1, -1);
  else
    app->add_option("--N", o.n_list, "system size")->expected(1);
  app->add_option("--seed", o.seeds, "seeds (diluted: also the mask seed)")->expected(1, -1);
  app->add_option("--wells-eps", o.wells_eps, "well half-width (default min(0.1, m/2))");
}

ExperimentConfig to_config(const Options& o) {
  ExperimentConfig c;
  c.schedule.model = parse_model_kind(o.model);
  c.schedule.beta = o.beta;
  c.schedule.a_prefactor = o.a;
  c.schedule.rho = o.rho;
  c.schedule.b_prefactor = o.b;
  c.schedule.gamma = o.gamma;
  c.schedule.p_prefactor = o.p;
  c.schedule.pi = o.pi;
  c.n_list = o.n_list;
  c.method = parse_method(o.method);
  c.wells_eps = o.wells_eps;
  c.kappa = o.kappa;
  c.output_dir = o.out;
  c.seeds = o.seeds;
  c.sweeps = o.sweeps;
  c.burn_in = o.burn_in;
  if (!o.config_file.empty()) {
    std::ifstream is(o.config_file);
    if (!is) throw std::runtime_error("cannot read config file " + o.config_file);
    std::stringstream text;
    text << is.rdbuf();
    apply_config_json(c, text.str());
  }
  return c;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
  os << content;
}

WellSpec wells_for(const ExperimentConfig& c, const RegimeClassification& regime) {
  if (c.wells) return *c.wells;
  return prediction_wells(c.schedule, regime, c.wells_eps > 0 ? c.wells_eps : default_well_half_width(c.schedule));
}

std::string masses_csv(const WellSpec& wells, const WellMassReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "well,center,mass\n";
  for (std::size_t w = 0; w < wells.centers.size(); ++w) {
    os << w << ",\"";
    for (std::size_t j = 0; j < wells.centers[w].size(); ++j) os << (j ? " " : "") << wells.centers[w][j];
    os << "\"," << r.masses[w] << '\n';
  }
  os << "residual,," << r.residual << '\n';
  return os.str();
}

int cmd_exact(const Options& o) {
  const auto c = to_config(o);
  const auto spec = spec_at(c.schedule, c.n_list.front(), c.seeds.front());
  const auto table = exact_table(spec, c.exact);
  const auto regime = classify(c.schedule);
  const auto wells = wells_for(c, regime);
  const auto masses = well_mass(table, wells);

  std::ostringstream csv;
  write_table_csv(csv, table);
  write_file(c.output_dir, "effective_config.json", config_json(c));
  write_file(c.output_dir, "model.json", to_config_text(spec));
  write_file(c.output_dir, "table.csv", csv.str());
  write_file(c.output_dir, "wells.csv", masses_csv(wells, masses));
  if (o.format == "json") {
    ExperimentResult result;
    result.regime = regime;
    result.wells = wells;
    result.rows.push_back({c.n_list.front(), c.seeds.front(), "exact", -1, masses.masses, masses.residual, {}, 0.0});
    std::cout << report_json(c, result) << '\n';
  } else {
    std::cout << csv.str();
  }
  return 0;
}

int cmd_mcmc(const Options& o) {
  const auto c = to_config(o);
  const auto spec = spec_at(c.schedule, c.n_list.front(), c.seeds.front());
  ChainConfig chain;
  chain.seed = c.seeds.front();
  chain.sweeps = c.sweeps;
  chain.burn_in = c.burn_in;
  chain.dynamics = parse_dynamics(o.dynamics);
  const auto traj = run_chain(spec, chain);

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_file(c.output_dir, "effective_config.json", config_json(c));
  write_file(c.output_dir, "model.json", to_config_text(spec));
  write_file(c.output_dir, "trajectory.csv", csv.str());
  if (const auto* d = std::get_if<DilutedSpec>(&spec)) {
    std::ostringstream mask;
    write_mask(mask, d->mask);
    write_file(c.output_dir, "mask.txt", mask.str());
  }
  std::cout << csv.str();
  if (traj.acceptance_rate) std::cerr << "acceptance rate " << *traj.acceptance_rate << '\n';
  return 0;
}

int cmd_predict(const Options& o) {
  const auto c = to_config(o);
  const auto regime = classify(c.schedule);
  std::string text = "{\n\"regime\": " + to_json(regime);
  if (regime.covered) text += ",\n\"law\": " + to_json(limit_law(c.schedule, regime));
  text += "\n}\n";
  write_file(c.output_dir, "effective_config.json", config_json(c));
  write_file(c.output_dir, "prediction.json", text);
  if (o.format == "json") {
    std::cout << text;
  } else {
    std::cout << "case,covered\n" << to_string(regime.theorem_case) << ',' << (regime.covered ? 1 : 0) << '\n';
    if (!regime.note.empty()) std::cerr << regime.note << '\n';
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  const auto c = to_config(o);
  const auto result = run_experiment(c);
  write_experiment_outputs(c, result);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << (o.format == "json" ? report_json(c, result) + "\n" : rows_csv(result));
  return 0;
}

int cmd_verify(const Options& o) {
  VerifyOptions v;
  v.level = o.level == "full" ? VerifyLevel::full : VerifyLevel::fast;
  v.corrupt_cross_sign = o.corrupt;
  bool ok = true;
  for (const auto& check :
       {check_fixed_point_invariants, check_table_symmetries, check_oracle_equivalence, check_decoupled_factorization,
        check_pair_count_law, check_cross_term_identity, check_matching_aligned, check_matching_decoupled,
        check_diluted, check_weighted_signs, check_middle_field, check_tilted_expectation, check_detailed_balance,
        check_mcmc_vs_exact, check_prediction_algebra}) {
    const auto r = check(v);
    ok &= r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << "  " << r.name << "  [" << r.seconds << " s]\n    "
              << r.detail << std::endl;
  }
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bottleneck Curie-Weiss models: exact laws, chains and limit predictions"};
  app.require_subcommand(1);
  Options o;

  auto* exact = app.add_subcommand("exact", "exact magnetization table at one N");
  add_schedule_flags(exact, o);
  add_run_flags(exact, o, false);

  auto* mcmc = app.add_subcommand("mcmc", "single-spin-flip chain at one N");
  add_schedule_flags(mcmc, o);
  add_run_flags(mcmc, o, false);
  mcmc->add_option("--sweeps", o.sweeps, "sweeps")->capture_default_str();
  mcmc->add_option("--burn-in", o.burn_in, "discarded sweeps")->capture_default_str();
  mcmc->add_option("--dynamics", o.dynamics, "glauber or metropolis")->capture_default_str();

  auto* predict = app.add_subcommand("predict", "classify a schedule and print its limit law");
  add_schedule_flags(predict, o);

  auto* sweep = app.add_subcommand("sweep", "well masses and TV to the limit law over a list of N");
  add_schedule_flags(sweep, o);
  add_run_flags(sweep, o, true);
  sweep->add_option("--method", o.method, "exact, mcmc or auto")->capture_default_str();
  sweep->add_option("--sweeps", o.sweeps, "sweeps per chain (mcmc)")->capture_default_str();
  sweep->add_option("--burn-in", o.burn_in, "discarded sweeps (mcmc)")->capture_default_str();
  sweep->add_option("--kappa", o.kappa, "shrink wells as N^-kappa");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--level", o.level, "fast or full")->check(CLI::IsMember({"fast", "full"}))->capture_default_str();
  verify->add_flag("--corrupt-cross-sign", o.corrupt, "fault injection: flip the cross-term sign in the chain kernel");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*exact) return cmd_exact(o);
    if (*mcmc) return cmd_mcmc(o);
    if (*predict) return cmd_predict(o);
    if (*sweep) return cmd_sweep(o);
    return cmd_verify(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

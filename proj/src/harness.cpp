#include "bottleneck/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bottleneck/log_math.hpp"
#include "bottleneck/parallel.hpp"

namespace bottleneck {

using ojson = nlohmann::ordered_json;

double tv_distance(std::span<const double> masses, double residual, std::span<const double> law_weights) {
  if (masses.size() != law_weights.size()) throw std::invalid_argument("tv_distance: well/atom mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) total += std::abs(masses[i] - law_weights[i]);
  return std::clamp(0.5 * total + 0.5 * residual, 0.0, 1.0);
}

Method parse_method(const std::string& name) {
  if (name == "exact") return Method::exact;
  if (name == "mcmc") return Method::mcmc;
  if (name == "auto") return Method::automatic;
  throw std::invalid_argument("unknown method '" + name + "' (expected exact, mcmc or auto)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::exact: return "exact";
    case Method::mcmc: return "mcmc";
    case Method::automatic: return "auto";
  }
  return "?";
}

void validate(const ExperimentConfig& config) {
  validate(config.schedule);
  if (config.n_list.empty()) throw std::invalid_argument("N list is empty");
  if (!std::is_sorted(config.n_list.begin(), config.n_list.end()) ||
      std::adjacent_find(config.n_list.begin(), config.n_list.end()) != config.n_list.end())
    throw std::invalid_argument("N list must be strictly increasing");
  for (int n : config.n_list) {
    if (config.schedule.model != ModelKind::three_block && (n < 4 || n % 2 != 0))
      throw std::invalid_argument("matching models need even N >= 4, got " + std::to_string(n));
    if (config.schedule.model == ModelKind::three_block) {
      const int b = config.schedule.b_at(n);
      if ((n - b) / 2 < b) throw std::invalid_argument("N too small for the bottleneck size at N=" + std::to_string(n));
    }
  }
  if (config.seeds.empty()) throw std::invalid_argument("need at least one seed");
  if (config.wells) validate(*config.wells);
}

namespace {

std::vector<std::vector<double>> sign_patterns(const std::vector<double>& magnitudes) {
  const std::size_t dim = magnitudes.size();
  std::vector<std::vector<double>> out;
  for (std::size_t code = 0; code < (std::size_t{1} << dim); ++code) {
    std::vector<double> c(dim);
    for (std::size_t d = 0; d < dim; ++d) c[d] = (code >> (dim - 1 - d)) & 1U ? -magnitudes[d] : magnitudes[d];
    out.push_back(std::move(c));
  }
  return out;
}

std::string sign_label(const std::vector<double>& center) {
  std::string s;
  for (double x : center) s += x >= 0.0 ? '+' : '-';
  return s;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

double well_half_width(const ExperimentConfig& config, int n) {
  if (config.kappa > 0.0) return std::pow(static_cast<double>(n), -config.kappa);
  if (config.wells_eps > 0.0) return config.wells_eps;
  return default_well_half_width(config.schedule);
}

}  // namespace

WellSpec prediction_wells(const ScheduleSpec& schedule, const RegimeClassification& regime, double eps) {
  const auto atoms = regime.covered ? limit_law(schedule, regime).atoms : sign_atoms(schedule);
  std::vector<double> magnitudes;
  for (double x : atoms.front()) magnitudes.push_back(std::abs(x));
  return wells_from_atoms(sign_patterns(magnitudes), eps);
}

std::vector<double> law_weights_for(const WellSpec& wells, const LimitLaw& law) {
  std::vector<double> weights(wells.centers.size(), 0.0);
  for (std::size_t a = 0; a < law.atoms.size(); ++a) {
    bool matched = false;
    for (std::size_t w = 0; w < wells.centers.size() && !matched; ++w) {
      if (wells.centers[w].size() != law.atoms[a].size()) continue;
      double diff = 0.0;
      for (std::size_t d = 0; d < law.atoms[a].size(); ++d)
        diff = std::max(diff, std::abs(wells.centers[w][d] - law.atoms[a][d]));
      if (diff < 1e-9) {
        weights[w] += law.weights[a];
        matched = true;
      }
    }
    if (!matched) throw std::invalid_argument("well/atom mismatch: a limit atom has no well");
  }
  return weights;
}

WellMassReport mcmc_well_mass(const ModelSpec& spec, const WellSpec& wells, const ChainConfig& chain, int threads) {
  validate(wells);
  const auto sizes = layout_of(spec).sizes;
  std::vector<Trajectory> runs(wells.centers.size());
  parallel_for(runs.size(), threads, [&](std::size_t w) {
    ChainConfig c = chain;
    c.stream = chain.stream + w;
    c.initial_signs.clear();
    for (double x : wells.centers[w]) c.initial_signs.push_back(x >= 0.0 ? 1 : -1);
    runs[w] = run_chain(spec, c);
  });
  LogWeightTable table;
  table.block_sizes = sizes;
  std::vector<double> pooled;
  for (const auto& run : runs) {
    const auto law = empirical_law(run, sizes);
    if (pooled.empty()) pooled.assign(law.size(), 0.0);
    for (std::size_t i = 0; i < law.size(); ++i) pooled[i] += law[i] / static_cast<double>(runs.size());
  }
  table.log_weights.resize(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double sym = 0.5 * (pooled[i] + pooled[table.index_of(table.point(i).flipped())]);
    table.log_weights[i] = sym > 0.0 ? std::log(sym) : kNegInf;
  }
  table.log_partition = 0.0;
  return well_mass(table, wells);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  result.regime = classify(config.schedule);
  if (result.regime.covered) result.law = limit_law(config.schedule, result.regime);
  else result.warnings.push_back("uncovered regime: " + result.regime.note);

  struct Task {
    int n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  const bool per_seed = config.schedule.model == ModelKind::diluted;
  for (int n : config.n_list) {
    if (per_seed || config.method != Method::exact)
      for (auto s : config.seeds) tasks.push_back({n, s});
    else
      tasks.push_back({n, config.seeds.front()});
  }

  const int outer = std::min<int>(resolve_threads(config.threads), static_cast<int>(tasks.size()));
  ExactOptions exact = config.exact;
  exact.threads = outer > 1 ? 1 : config.threads;
  std::vector<ConvergenceRow> rows(tasks.size());
  std::vector<std::string> task_warnings(tasks.size());
  std::vector<WellSpec> task_wells(tasks.size());

  parallel_for(tasks.size(), outer, [&](std::size_t t) {
    const auto start = std::chrono::steady_clock::now();
    const auto [n, seed] = tasks[t];
    const ModelSpec spec = spec_at(config.schedule, n, seed);
    const double eps = well_half_width(config, n);
    WellSpec wells = config.wells ? *config.wells : prediction_wells(config.schedule, result.regime, eps);
    Method method = config.method;
    if (method == Method::automatic) {
      bool fits = false;
      if (config.schedule.model == ModelKind::two_block) fits = n <= config.auto_two_block_max_n;
      else if (config.schedule.model == ModelKind::diluted) fits = exact_cost(spec) <= exact.max_operations;
      else fits = exact_cost(spec) <= exact.max_table_points;
      method = fits ? Method::exact : Method::mcmc;
      if (!fits)
        task_warnings[t] = "N=" + std::to_string(n) +
                           ": using MCMC; well-mass ratios at large N are only claimed for the exact method";
    }
    WellMassReport report;
    if (method == Method::exact) {
      report = well_mass(exact_table(spec, exact), wells);
    } else {
      ChainConfig chain;
      chain.seed = seed;
      chain.sweeps = config.sweeps;
      chain.burn_in = config.burn_in;
      report = mcmc_well_mass(spec, wells, chain, outer > 1 ? 1 : config.threads);
    }
    ConvergenceRow row;
    row.n = n;
    row.seed = seed;
    row.method = to_string(method);
    if (const auto* d = std::get_if<DilutedSpec>(&spec)) row.retained = d->retained();
    row.masses = report.masses;
    row.residual = report.residual;
    if (result.law) row.tv = tv_distance(row.masses, row.residual, law_weights_for(wells, *result.law));
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows[t] = std::move(row);
    task_wells[t] = std::move(wells);
  });

  result.rows = std::move(rows);
  result.wells = task_wells.back();
  if (result.law) result.law_weights = law_weights_for(result.wells, *result.law);
  for (auto& w : task_warnings)
    if (!w.empty()) result.warnings.push_back(std::move(w));
  return result;
}

std::string rows_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "N,seed,method,retained";
  for (const auto& c : result.wells.centers) os << ",mass_" << sign_label(c);
  os << ",residual,tv\n";
  for (const auto& r : result.rows) {
    os << r.n << ',' << r.seed << ',' << r.method << ',';
    if (r.retained >= 0) os << r.retained;
    for (double m : r.masses) os << ',' << fmt(m);
    os << ',' << fmt(r.residual) << ',';
    if (r.tv) os << fmt(*r.tv);
    os << '\n';
  }
  return os.str();
}

std::string config_json(const ExperimentConfig& config) {
  const auto& s = config.schedule;
  ojson j;
  j["model"] = to_string(s.model);
  j["beta"] = s.beta;
  j["A"] = s.a_prefactor;
  j["rho"] = s.rho;
  if (s.model == ModelKind::three_block) {
    j["B"] = s.b_prefactor;
    j["gamma"] = s.gamma;
  }
  if (s.model == ModelKind::diluted) {
    j["P"] = s.p_prefactor;
    j["pi"] = s.pi;
    j["as_log_constant"] = s.as_log_constant;
  }
  j["N"] = config.n_list;
  j["method"] = to_string(config.method);
  j["wells_eps"] = config.wells_eps;
  j["kappa"] = config.kappa;
  j["seeds"] = config.seeds;
  j["sweeps"] = config.sweeps;
  j["burn_in"] = config.burn_in;
  j["max_operations"] = config.exact.max_operations;
  j["max_table_points"] = config.exact.max_table_points;
  if (config.wells) {
    j["wells"] = {{"centers", config.wells->centers}, {"half_width", config.wells->half_width}};
  }
  return j.dump(2) + "\n";
}

void apply_config_json(ExperimentConfig& config, const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  auto& s = config.schedule;
  if (j.contains("model")) s.model = parse_model_kind(j["model"].get<std::string>());
  if (j.contains("beta")) s.beta = j["beta"].get<double>();
  if (j.contains("A")) s.a_prefactor = j["A"].get<double>();
  if (j.contains("rho")) s.rho = j["rho"].get<double>();
  if (j.contains("B")) s.b_prefactor = j["B"].get<double>();
  if (j.contains("gamma")) s.gamma = j["gamma"].get<double>();
  if (j.contains("P")) s.p_prefactor = j["P"].get<double>();
  if (j.contains("pi")) s.pi = j["pi"].get<double>();
  if (j.contains("as_log_constant")) s.as_log_constant = j["as_log_constant"].get<double>();
  if (j.contains("N")) {
    if (j["N"].is_array()) config.n_list = j["N"].get<std::vector<int>>();
    else config.n_list = {j["N"].get<int>()};
  }
  if (j.contains("method")) config.method = parse_method(j["method"].get<std::string>());
  if (j.contains("wells_eps")) config.wells_eps = j["wells_eps"].get<double>();
  if (j.contains("kappa")) config.kappa = j["kappa"].get<double>();
  if (j.contains("seeds")) config.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("seed")) config.seeds = {j["seed"].get<std::uint64_t>()};
  if (j.contains("sweeps")) config.sweeps = j["sweeps"].get<long>();
  if (j.contains("burn_in")) config.burn_in = j["burn_in"].get<long>();
  if (j.contains("out")) config.output_dir = j["out"].get<std::string>();
  if (j.contains("max_operations")) config.exact.max_operations = j["max_operations"].get<double>();
  if (j.contains("max_table_points")) config.exact.max_table_points = j["max_table_points"].get<double>();
  if (j.contains("wells")) {
    WellSpec w;
    w.centers = j["wells"].at("centers").get<std::vector<std::vector<double>>>();
    w.half_width = j["wells"].at("half_width").get<double>();
    config.wells = w;
  }
}

std::string report_json(const ExperimentConfig& config, const ExperimentResult& result) {
  ojson j;
  j["config"] = ojson::parse(config_json(config));
  j["regime"] = ojson::parse(to_json(result.regime));
  if (result.law) j["law"] = ojson::parse(to_json(*result.law));
  j["wells"] = {{"centers", result.wells.centers}, {"half_width", result.wells.half_width}};
  if (!result.law_weights.empty()) j["law_weights"] = result.law_weights;
  auto rows = ojson::array();
  for (const auto& r : result.rows) {
    ojson row;
    row["N"] = r.n;
    row["seed"] = r.seed;
    row["method"] = r.method;
    if (r.retained >= 0) row["retained"] = r.retained;
    row["masses"] = r.masses;
    row["residual"] = r.residual;
    row["tv"] = r.tv ? ojson(*r.tv) : ojson(nullptr);
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  if (config.output_dir.empty()) return;
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream os(fs::path(config.output_dir) / name, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + name + " in " + config.output_dir);
    os << content;
  };
  write("effective_config.json", config_json(config));
  write("rows.csv", rows_csv(result));
  write("report.json", report_json(config, result));

  std::ostringstream timing;
  timing << "N,seed,wall_seconds\n";
  for (const auto& r : result.rows) timing << r.n << ',' << r.seed << ',' << fmt(r.wall_seconds) << '\n';
  write("timing.csv", timing.str());

  std::vector<SvgSeries> tv_series, mass_series;
  for (auto seed : config.seeds) {
    SvgSeries s{"seed " + std::to_string(seed), {}, {}};
    for (const auto& r : result.rows)
      if (r.seed == seed && r.tv) {
        s.x.push_back(r.n);
        s.y.push_back(*r.tv);
      }
    if (!s.x.empty()) tv_series.push_back(std::move(s));
  }
  for (std::size_t w = 0; w < result.wells.centers.size(); ++w) {
    SvgSeries s{"well " + sign_label(result.wells.centers[w]), {}, {}};
    for (const auto& r : result.rows)
      if (r.seed == result.rows.front().seed) {
        s.x.push_back(r.n);
        s.y.push_back(r.masses[w]);
      }
    mass_series.push_back(std::move(s));
  }
  write("tv.svg", svg_line_plot("TV distance to the limit law", "N", "TV", tv_series));
  write("masses.svg", svg_line_plot("Well masses", "N", "mass", mass_series));
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series) {
  constexpr double width = 640, height = 400, left = 70, right = 160, top = 40, bottom = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  double x0 = 1e300, x1 = -1e300, y0 = 0.0, y1 = 1e-12;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (x0 > x1) x0 = 0, x1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  y1 *= 1.05;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape_xml(title)
     << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\" font-size=\"11\">" << xv
       << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << yv
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = palette[k % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      os << (i ? " " : "") << px(series[k].x[i]) << ',' << py(series[k].y[i]);
    os << "\"/>\n";
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      os << "<circle cx=\"" << px(series[k].x[i]) << "\" cy=\"" << py(series[k].y[i]) << "\" r=\"3\" fill=\"" << colour
         << "\"/>\n";
    const double ly = top + 16 * (k + 1);
    os << "<rect x=\"" << left + pw + 12 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << colour
       << "\"/>\n";
    os << "<text x=\"" << left + pw + 28 << "\" y=\"" << ly << "\" font-size=\"11\">" << escape_xml(series[k].name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace bottleneck

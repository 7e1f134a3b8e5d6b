#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "bottleneck/enumerate.hpp"
#include "bottleneck/harness.hpp"
#include "bottleneck/log_math.hpp"

namespace py = pybind11;
using namespace bottleneck;

namespace {

ExtendedReal extended(double x) { return std::isinf(x) ? ExtendedReal::infinity() : ExtendedReal(x); }

double as_float(const ExtendedReal& x) {
  return x.is_infinite() ? std::numeric_limits<double>::infinity() : x.value();
}

ScheduleSpec schedule_from(const std::string& model, double beta, double a, double rho, double b, double gamma, double p,
                           double pi) {
  ScheduleSpec s;
  s.model = parse_model_kind(model);
  s.beta = beta;
  s.a_prefactor = a;
  s.rho = rho;
  s.b_prefactor = b;
  s.gamma = gamma;
  s.p_prefactor = p;
  s.pi = pi;
  return s;
}

py::dict regime_dict(const RegimeClassification& r) {
  py::dict d;
  d["theorem_case"] = to_string(r.theorem_case);
  d["covered"] = r.covered;
  if (r.c) d["c"] = as_float(*r.c);
  if (r.big_c) d["C"] = as_float(*r.big_c);
  d["as_convergence_plausible"] = r.as_convergence_plausible;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact laws, chains and limit predictions for bottleneck Curie-Weiss models";

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded");

  py::class_<TwoBlockSpec>(m, "TwoBlockSpec")
      .def(py::init<int, double, double>(), py::arg("n"), py::arg("beta"), py::arg("alpha"))
      .def_readwrite("n", &TwoBlockSpec::n)
      .def_readwrite("beta", &TwoBlockSpec::beta)
      .def_readwrite("alpha", &TwoBlockSpec::alpha);

  py::class_<DilutedSpec>(m, "DilutedSpec")
      .def(py::init([](int n, double beta, double alpha, double p, std::uint64_t seed) {
             return make_diluted({n, beta, alpha}, p, seed);
           }),
           py::arg("n"), py::arg("beta"), py::arg("alpha"), py::arg("p"), py::arg("mask_seed") = 0)
      .def_readonly("mask", &DilutedSpec::mask)
      .def_property_readonly("retained", &DilutedSpec::retained);

  py::class_<ThreeBlockSpec>(m, "ThreeBlockSpec")
      .def(py::init<int, int, double, double>(), py::arg("n_outer"), py::arg("b"), py::arg("beta"), py::arg("alpha"))
      .def_readwrite("n_outer", &ThreeBlockSpec::n_outer)
      .def_readwrite("b", &ThreeBlockSpec::b)
      .def_readwrite("beta", &ThreeBlockSpec::beta)
      .def_readwrite("alpha", &ThreeBlockSpec::alpha);

  py::class_<LogWeightTable>(m, "LogWeightTable")
      .def_readonly("block_sizes", &LogWeightTable::block_sizes)
      .def_readonly("log_weights", &LogWeightTable::log_weights)
      .def_readonly("log_partition", &LogWeightTable::log_partition)
      .def("__len__", &LogWeightTable::size)
      .def("probabilities", [](const LogWeightTable& t) {
        std::vector<double> out(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) out[i] = t.prob_at(i);
        return out;
      })
      .def("prob", [](const LogWeightTable& t, std::vector<int> counts) {
        return t.prob(MagnetizationPoint(counts, t.block_sizes));
      })
      .def("marginal", &LogWeightTable::marginal);

  m.def("exact_table", [](const ModelSpec& spec, int threads) { return exact_table(spec, {.threads = threads}); },
        py::arg("spec"), py::arg("threads") = 0);
  m.def("enumerate_law", &enumerate_law, py::arg("spec"));

  m.def(
      "well_mass",
      [](const LogWeightTable& t, std::vector<std::vector<double>> centers, double eps) {
        const auto r = well_mass(t, WellSpec{std::move(centers), eps});
        return py::make_tuple(r.masses, r.residual);
      },
      py::arg("table"), py::arg("centers"), py::arg("eps"));

  m.def(
      "run_chain",
      [](const ModelSpec& spec, std::uint64_t seed, long sweeps, long burn_in, const std::string& dynamics) {
        ChainConfig c;
        c.seed = seed;
        c.sweeps = sweeps;
        c.burn_in = burn_in;
        c.dynamics = parse_dynamics(dynamics);
        const auto traj = run_chain(spec, c);
        std::vector<std::vector<int>> counts;
        for (const auto& s : traj.samples) {
          std::vector<int> row;
          for (int j = 0; j < s.blocks(); ++j) row.push_back(s.plus_count(j));
          counts.push_back(std::move(row));
        }
        return counts;
      },
      py::arg("spec"), py::arg("seed"), py::arg("sweeps"), py::arg("burn_in") = 0, py::arg("dynamics") = "glauber");

  m.def("solve_cw", [](double gamma) { return solve_cw(gamma).value; }, py::arg("gamma"));
  m.def("solve_cw_field", [](double beta, double h) { return solve_cw_field(beta, h).value; }, py::arg("beta"),
        py::arg("h"));
  m.def("m_of_c", [](double beta, double c) { return m_of_c(beta, extended(c)); }, py::arg("beta"), py::arg("c"));
  m.def("free_energy", &free_energy, py::arg("beta"), py::arg("x"));
  m.def("log_binomial", &log_binomial, py::arg("n"), py::arg("k"));
  m.def("gamma_star", &gamma_star, py::arg("mu1"), py::arg("mu2"));
  m.def("gamma_star_star", &gamma_star_star, py::arg("mu1"), py::arg("mu2"));
  m.def(
      "pair_count_log_counts",
      [](int n, double mu1, double mu2) {
        const auto law = pair_count_law(n, mu1, mu2);
        return py::make_tuple(law.n_min, law.log_counts);
      },
      py::arg("n"), py::arg("mu1"), py::arg("mu2"));
  m.def(
      "a_weight", [](int x, int y, int z, double c, double beta) { return a_weight(x, y, z, extended(c), beta); },
      py::arg("chi1"), py::arg("chi2"), py::arg("chi3"), py::arg("C"), py::arg("beta"));

  m.def(
      "classify",
      [](const std::string& model, double beta, double a, double rho, double b, double gamma, double p, double pi) {
        return regime_dict(classify(schedule_from(model, beta, a, rho, b, gamma, p, pi)));
      },
      py::arg("model"), py::arg("beta"), py::arg("A") = 1.0, py::arg("rho") = 0.5, py::arg("B") = 1.0,
      py::arg("gamma") = 0.5, py::arg("P") = 1.0, py::arg("pi") = 0.0);
  m.def(
      "limit_law",
      [](const std::string& model, double beta, double a, double rho, double b, double gamma, double p, double pi) {
        const auto law = limit_law(schedule_from(model, beta, a, rho, b, gamma, p, pi));
        return py::make_tuple(law.atoms, law.weights);
      },
      py::arg("model"), py::arg("beta"), py::arg("A") = 1.0, py::arg("rho") = 0.5, py::arg("B") = 1.0,
      py::arg("gamma") = 0.5, py::arg("P") = 1.0, py::arg("pi") = 0.0);

  m.def(
      "tv_distance",
      [](std::vector<double> masses, double residual, std::vector<double> law) {
        return tv_distance(masses, residual, law);
      },
      py::arg("masses"), py::arg("residual"), py::arg("law_weights"));

  m.def(
      "verify",
      [](const std::string& level) {
        VerifyOptions o;
        o.level = level == "full" ? VerifyLevel::full : VerifyLevel::fast;
        VerifyReport report;
        {
          py::gil_scoped_release release;
          report = verify_suite(o);
        }
        py::list out;
        for (const auto& r : report.checks) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("level") = "fast");
}

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpd2s/asymptotics.hpp"
#include "dpd2s/classical.hpp"
#include "dpd2s/datasets.hpp"
#include "dpd2s/divergence.hpp"
#include "dpd2s/dpd_test.hpp"
#include "dpd2s/errors.hpp"
#include "dpd2s/mdpde.hpp"
#include "dpd2s/simulate.hpp"

namespace py = pybind11;
using namespace dpd2s;

namespace {

Sample to_sample(const std::vector<double>& v, const char* label) { return Sample(v, label); }

SolverConfig solver(double tolerance, int max_iterations) {
    SolverConfig cfg;
    cfg.tolerance = tolerance;
    cfg.max_iterations = max_iterations;
    cfg.validate();
    return cfg;
}

py::dict dataset_dict(const Dataset& d) {
    py::dict out;
    out["name"] = d.name;
    out["x"] = std::vector<double>(d.sample_x.values().begin(), d.sample_x.values().end());
    out["y"] = std::vector<double>(d.sample_y.values().begin(), d.sample_y.values().end());
    out["label_x"] = d.sample_x.label();
    out["label_y"] = d.sample_y.label();
    out["outliers_x"] = d.outlier_indices_x;
    out["outliers_y"] = d.outlier_indices_y;
    out["provenance"] = d.provenance;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Density power divergence two-sample tests (C++ core)";

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const LookupError& e) {
            PyErr_SetString(PyExc_KeyError, e.what());
        } catch (const InputError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ConfigError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<TwoSampleEstimate>(m, "TwoSampleEstimate")
        .def_readonly("mu1", &TwoSampleEstimate::mu1)
        .def_readonly("mu2", &TwoSampleEstimate::mu2)
        .def_readonly("sigma", &TwoSampleEstimate::sigma)
        .def_readonly("beta", &TwoSampleEstimate::beta)
        .def_readonly("objective", &TwoSampleEstimate::objective)
        .def_readonly("iterations", &TwoSampleEstimate::iterations)
        .def_readonly("converged", &TwoSampleEstimate::converged)
        .def_readonly("gradient_norm", &TwoSampleEstimate::gradient_norm)
        .def("__repr__", [](const TwoSampleEstimate& e) {
            return "TwoSampleEstimate(mu1=" + std::to_string(e.mu1) + ", mu2=" + std::to_string(e.mu2) +
                   ", sigma=" + std::to_string(e.sigma) + ")";
        });

    py::class_<DpdTestResult>(m, "DpdTestResult")
        .def_readonly("statistic", &DpdTestResult::statistic)
        .def_readonly("p_value", &DpdTestResult::p_value)
        .def_readonly("p_value_underflow", &DpdTestResult::p_value_underflow)
        .def_readonly("lambda_", &DpdTestResult::lambda)
        .def_readonly("divergence", &DpdTestResult::divergence)
        .def_readonly("beta", &DpdTestResult::beta)
        .def_readonly("gamma", &DpdTestResult::gamma)
        .def_readonly("estimate", &DpdTestResult::estimate)
        .def_readonly("n1", &DpdTestResult::n1)
        .def_readonly("n2", &DpdTestResult::n2)
        .def("__repr__", [](const DpdTestResult& r) {
            return "DpdTestResult(statistic=" + std::to_string(r.statistic) +
                   ", p_value=" + std::to_string(r.p_value) + ")";
        });

    py::class_<ClassicalTestResult>(m, "ClassicalTestResult")
        .def_readonly("statistic", &ClassicalTestResult::statistic)
        .def_readonly("p_value", &ClassicalTestResult::p_value)
        .def_readonly("df", &ClassicalTestResult::df)
        .def_readonly("all_tied", &ClassicalTestResult::all_tied)
        .def_property_readonly("method", [](const ClassicalTestResult& r) {
            return std::string(method_name(r.method));
        });

    m.def("dpd_normal",
          [](double mu1, double sigma1, double mu2, double sigma2, double gamma) {
              return dpd_normal_general({mu1, sigma1}, {mu2, sigma2}, TuningGamma(gamma));
          },
          py::arg("mu1"), py::arg("sigma1"), py::arg("mu2"), py::arg("sigma2"), py::arg("gamma"),
          "Divergence from N(mu1, sigma1^2) to N(mu2, sigma2^2).");
    m.def("dpd_normal_equal_sigma",
          [](double mu1, double mu2, double sigma, double gamma) {
              return dpd_normal_equal_sigma(mu1, mu2, sigma, TuningGamma(gamma));
          },
          py::arg("mu1"), py::arg("mu2"), py::arg("sigma"), py::arg("gamma"));

    m.def("estimate_two_sample",
          [](const std::vector<double>& x, const std::vector<double>& y, double beta, double tol,
             int max_iter) {
              return estimate_two_sample(to_sample(x, "x"), to_sample(y, "y"), TuningBeta(beta),
                                         solver(tol, max_iter));
          },
          py::arg("x"), py::arg("y"), py::arg("beta"), py::arg("tolerance") = 1e-10,
          py::arg("max_iterations") = 200);

    m.def("dpd_test",
          [](const std::vector<double>& x, const std::vector<double>& y, double gamma,
             std::optional<double> beta) {
              return dpd_test(to_sample(x, "x"), to_sample(y, "y"), TuningBeta(beta.value_or(gamma)),
                              TuningGamma(gamma));
          },
          py::arg("x"), py::arg("y"), py::arg("gamma"), py::arg("beta") = py::none(),
          "DPD test of equal means; beta defaults to gamma.");

    m.def("pooled_t_test",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return pooled_t_test(to_sample(x, "x"), to_sample(y, "y"));
          },
          py::arg("x"), py::arg("y"));
    m.def("trimmed_t_test",
          [](const std::vector<double>& x, const std::vector<double>& y, double trim) {
              return trimmed_t_test(to_sample(x, "x"), to_sample(y, "y"), trim);
          },
          py::arg("x"), py::arg("y"), py::arg("trim") = 0.2);
    m.def("wilcoxon_test",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return wilcoxon_test(to_sample(x, "x"), to_sample(y, "y"));
          },
          py::arg("x"), py::arg("y"));
    m.def("ks_test",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return ks_test(to_sample(x, "x"), to_sample(y, "y"));
          },
          py::arg("x"), py::arg("y"));

    m.def("lambda_scaling",
          [](double sigma, double beta, double gamma) {
              return lambda_scaling(sigma, TuningBeta(beta), TuningGamma(gamma));
          },
          py::arg("sigma"), py::arg("beta"), py::arg("gamma"));
    m.def("sigma_w_beta",
          [](double w, double sigma0, double beta) { return sigma_w_beta(AsymptoticParams(w, sigma0, beta)); },
          py::arg("w"), py::arg("sigma0"), py::arg("beta"));
    m.def("power_approx",
          [](double mu1, double mu2, double sigma0, double w, double beta, double gamma, std::size_t n1,
             std::size_t n2, double alpha) {
              return power_approx(mu1, mu2, AsymptoticParams(w, sigma0, beta), TuningGamma(gamma), n1, n2,
                                  alpha);
          },
          py::arg("mu1"), py::arg("mu2"), py::arg("sigma0"), py::arg("w"), py::arg("beta"),
          py::arg("gamma"), py::arg("n1"), py::arg("n2"), py::arg("alpha") = 0.05);
    m.def("lrt_statistic",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return lrt_statistic(to_sample(x, "x"), to_sample(y, "y"));
          },
          py::arg("x"), py::arg("y"));

    m.def("dataset_names", &dataset_names);
    m.def("load_dataset",
          [](const std::string& name, bool drop_outliers) {
              const Dataset d = load_dataset(name);
              return dataset_dict(drop_outliers ? without_outliers(d) : d);
          },
          py::arg("name"), py::arg("drop_outliers") = false);

    m.def("simulate",
          [](const std::vector<std::size_t>& total_n_grid, double mu1, double mu2, std::vector<std::string> tests,
             double beta, double gamma, double trim, std::size_t replications, double w, double sigma,
             double contamination_rate, double contamination_mu, double contamination_sigma,
             double nominal_alpha, std::uint64_t seed, unsigned threads) {
              SimulationConfig cfg;
              cfg.total_n_grid = total_n_grid;
              cfg.mu1 = mu1;
              cfg.mu2 = mu2;
              cfg.w = w;
              cfg.sigma = sigma;
              cfg.contamination_rate = contamination_rate;
              cfg.contamination_mu = contamination_mu;
              cfg.contamination_sigma = contamination_sigma;
              cfg.replications = replications;
              cfg.nominal_alpha = nominal_alpha;
              cfg.master_seed = seed;
              for (const auto& t : tests) {
                  TestSpec spec;
                  spec.kind = parse_test_kind(t);
                  spec.beta = beta;
                  spec.gamma = gamma;
                  spec.trim = trim;
                  cfg.tests.push_back(spec);
              }
              SimulationReport report;
              {
                  py::gil_scoped_release release;
                  report = run_level_power_study(cfg, threads);
              }
              py::list rows;
              for (const SimulationCell& c : report.cells) {
                  py::dict row;
                  row["test"] = c.test;
                  row["n"] = c.n;
                  row["n1"] = c.n1;
                  row["n2"] = c.n2;
                  row["rejections"] = c.rejections;
                  row["effective_replications"] = c.effective_replications;
                  row["excluded"] = c.excluded;
                  row["rejection_rate"] = c.rejection_rate;
                  row["monte_carlo_se"] = c.monte_carlo_se;
                  rows.append(row);
              }
              return rows;
          },
          py::arg("total_n_grid"), py::arg("mu1"), py::arg("mu2"), py::arg("tests"),
          py::arg("beta") = 0.1, py::arg("gamma") = 0.1, py::arg("trim") = 0.2,
          py::arg("replications") = 1000, py::arg("w") = 0.6, py::arg("sigma") = 1.0,
          py::arg("contamination_rate") = 0.0, py::arg("contamination_mu") = -10.0,
          py::arg("contamination_sigma") = 1.0, py::arg("nominal_alpha") = 0.05,
          py::arg("seed") = 20240101, py::arg("threads") = 1,
          "Level/power study; every DPD entry in `tests` uses the same beta and gamma.");
}

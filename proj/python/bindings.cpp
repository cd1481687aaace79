#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dampchain/coupling.hpp"
#include "dampchain/io.hpp"
#include "dampchain/report.hpp"
#include "dampchain/spectral.hpp"
#include "dampchain/stationary.hpp"
#include "dampchain/triangular.hpp"

namespace py = pybind11;
using namespace dampchain;

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

DampingVector damping_or_uniform(const std::optional<Vector>& d, std::size_t m) {
    return d ? DampingVector(*d) : DampingVector::uniform(m);
}

py::dict structure_dict(const ChainStructure& s) {
    py::list classes;
    for (const auto& c : s.classes) {
        py::dict cd;
        cd["states"] = c.states;
        cd["period"] = c.period;
        classes.append(cd);
    }
    py::dict out;
    out["regime"] = std::string(to_string(s.regime));
    out["classes"] = classes;
    out["transient_states"] = s.transient_states;
    out["diagnostic"] = s.diagnostic;
    return out;
}

}  // namespace

PYBIND11_MODULE(_dampchain, m) {
    m.doc() = "Perturbation analysis of damped Markov chains";
    m.attr("__version__") = kVersion;

    static py::exception<Error> error_type(m, "DampchainError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error_type;
            PyErr_SetObject(exc.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
        }
    });

    m.def("damped_matrix",
          [](const Matrix& p0, const std::optional<Vector>& d, double eps) {
              const StochasticMatrix p(p0);
              return build_damped_matrix(DampedChain(p, damping_or_uniform(d, p.dim()), eps)).values();
          },
          py::arg("p0"), py::arg("damping") = py::none(), py::arg("epsilon"));

    m.def("decompose", [](const Matrix& p0) { return structure_dict(decompose(StochasticMatrix(p0))); },
          py::arg("p0"));

    m.def("stationary",
          [](const Matrix& p, const std::string& method, double tol) -> Vector {
              const StochasticMatrix pm(p);
              if (method == "direct") return stationary_direct(pm).pi.values();
              if (method == "power") return stationary_power(pm, Distribution::uniform(pm.dim()), {tol, 1000000}).pi.values();
              throw Error(ErrorCode::InvalidInput, "method must be 'direct' or 'power'");
          },
          py::arg("p"), py::arg("method") = "direct", py::arg("tol") = 1e-12);

    m.def("stationary_series",
          [](const Matrix& p0, const std::optional<Vector>& d, double eps, double tol) {
              const StochasticMatrix p(p0);
              return stationary_series(p, damping_or_uniform(d, p.dim()), eps, tol).pi.values();
          },
          py::arg("p0"), py::arg("damping") = py::none(), py::arg("epsilon"), py::arg("tol") = 1e-12);

    m.def("spectrum",
          [](const Matrix& p0) {
              const auto s = spectrum(StochasticMatrix(p0));
              return Eigen::Map<const Eigen::VectorXcd>(s.eigenvalues.data(),
                                                       static_cast<Eigen::Index>(s.eigenvalues.size()))
                  .eval();
          },
          py::arg("p0"));

    m.def("expansion",
          [](const Matrix& p0, const std::optional<Vector>& d, int order) {
              const StochasticMatrix p(p0);
              const auto e = expansion(p, damping_or_uniform(d, p.dim()), decompose(p), order);
              return py::make_tuple(e.base, e.coeffs);
          },
          py::arg("p0"), py::arg("damping") = py::none(), py::arg("order") = 2,
          "Returns (limit, coefficients) with coefficients[k-1] the eps^k terms.");

    m.def("ergodicity_coefficient",
          [](const Matrix& p, int N) {
              const auto r = ergodicity_coefficient(StochasticMatrix(p), N);
              return py::make_tuple(r.q_n, r.delta_n);
          },
          py::arg("p"), py::arg("N") = 1, "Returns (Q(P^N), Delta_N).");

    m.def("maximal_coupling",
          [](const Vector& a, const Vector& b) { return maximal_coupling(a, b).joint; }, py::arg("p1"),
          py::arg("p2"));

    m.def("deviation_bound",
          [](const Matrix& p0, const std::optional<Vector>& d, double eps, std::optional<double> C,
             std::optional<double> lambda) {
              const StochasticMatrix p(p0);
              const auto s = decompose(p);
              const DampingVector dv = damping_or_uniform(d, p.dim());
              DeviationConstants dc;
              if (!C || !lambda) dc = estimate_deviation_constants(p, s);
              if (C) dc.C = *C;
              if (lambda) dc.lambda = *lambda;
              const Distribution ref = limit_stationary(p, dv.as_distribution(), s);
              return bound_theorem1(dc.C, dc.lambda, dv, ref, eps);
          },
          py::arg("p0"), py::arg("damping") = py::none(), py::arg("epsilon"), py::arg("C") = py::none(),
          py::arg("lam") = py::none());

    m.def("rate_bound",
          [](const Matrix& p0, const Vector& p, const std::optional<Vector>& d, double eps, int N,
             const std::vector<int>& steps) {
              const StochasticMatrix pm(p0);
              const DampingVector dv = damping_or_uniform(d, pm.dim());
              const auto s = decompose(pm);
              const Distribution start(p);
              const Distribution pi = stationary_series(pm, dv, eps, 1e-14).pi;
              Matrix out(static_cast<Eigen::Index>(steps.size()), static_cast<Eigen::Index>(pm.dim()));
              if (s.regime == Regime::Singular) {
                  const auto b = bound_theorem7(pm, dv, start, pi, eps, N, s);
                  for (std::size_t i = 0; i < steps.size(); ++i)
                      out.row(static_cast<Eigen::Index>(i)) = b.evaluate_all(steps[i]).transpose();
              } else {
                  const auto b = bound_theorem6(pm, start, pi, eps, N);
                  for (std::size_t i = 0; i < steps.size(); ++i)
                      out.row(static_cast<Eigen::Index>(i)).setConstant(b.evaluate(steps[i]));
              }
              return out;
          },
          py::arg("p0"), py::arg("initial"), py::arg("damping") = py::none(), py::arg("epsilon"),
          py::arg("N") = 1, py::arg("steps"), "Per-state bound on |p P_eps^n - pi_eps|, one row per step.");

    m.def("coupling_tail",
          [](const Matrix& p0, const Vector& p, const std::optional<Vector>& d, double eps, long trials,
             std::uint64_t seed, int horizon) {
              const StochasticMatrix pm(p0);
              const StochasticMatrix pe = build_damped_matrix(DampedChain(pm, damping_or_uniform(d, pm.dim()), eps));
              const auto pi = stationary_direct(pe).pi;
              const auto tail = simulate_coupling_time(build_coupling_kernel(pe),
                                                       maximal_coupling(Distribution(p), pi), trials, seed, horizon);
              py::gil_scoped_acquire acquire;
              return py::make_tuple(tail.tail, tail.std_error);
          },
          py::arg("p0"), py::arg("initial"), py::arg("damping") = py::none(), py::arg("epsilon"),
          py::arg("trials"), py::arg("seed"), py::arg("horizon") = 30,
          py::call_guard<py::gil_scoped_release>());

    m.def("triangular_limit",
          [](const Matrix& p0, const Vector& p, const std::optional<Vector>& d, double t) {
              const StochasticMatrix pm(p0);
              const MixingTime mt = std::isinf(t) ? MixingTime::infinity() : MixingTime(t);
              return triangular_limit(pm, damping_or_uniform(d, pm.dim()), Distribution(p), decompose(pm), mt)
                  .pi_of_t;
          },
          py::arg("p0"), py::arg("initial"), py::arg("damping") = py::none(), py::arg("t"));

    m.def("run_command_json",
          [](const std::string& command, const std::string& input, const std::vector<double>& epsilons,
             std::optional<std::uint64_t> seed, long trials, int order) {
              RunConfig cfg;
              cfg.input = input;
              cfg.format = format_from_path(input);
              cfg.epsilons = epsilons;
              cfg.seed = seed;
              cfg.trials = trials;
              cfg.order = order;
              const auto res = run_command(command, cfg);
              return res.raw.empty() ? dump_report(res.report) : res.raw;
          },
          py::arg("command"), py::arg("input"), py::arg("epsilons") = std::vector<double>{0.15},
          py::arg("seed") = py::none(), py::arg("trials") = 100000, py::arg("order") = 2);
}

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <map>
#include <memory>
#include <string>

#include "orlicz_lab/bounds.hpp"
#include "orlicz_lab/error.hpp"
#include "orlicz_lab/gibbs.hpp"
#include "orlicz_lab/isotropic.hpp"
#include "orlicz_lab/orlicz_function.hpp"
#include "orlicz_lab/sampling.hpp"

namespace py = pybind11;
using namespace orlicz;

namespace {

// Heavy routines run without the GIL; Python callables in custom potentials
// reacquire it per call.
using release = py::call_guard<py::gil_scoped_release>;

NormKind to_kind(const std::string& kind) {
  if (kind == "exp") return NormKind::exp;
  if (kind == "subgaussian") return NormKind::subgaussian;
  throw DomainError("norm kind must be 'exp' or 'subgaussian'");
}

GrowthClass to_growth(const py::object& growth) {
  if (py::isinstance<py::str>(growth)) {
    if (growth.cast<std::string>() == "superpolynomial") return GrowthClass::superpolynomial();
    throw DomainError("growth must be a number or 'superpolynomial'");
  }
  return GrowthClass::power(growth.cast<double>());
}

std::function<double(double)> wrap_callable(py::function fn) {
  // The last owner may be released on a thread that does not hold the GIL.
  std::shared_ptr<py::function> shared(new py::function(std::move(fn)), [](py::function* f) {
    py::gil_scoped_acquire gil;
    delete f;
  });
  return [shared](double x) {
    py::gil_scoped_acquire gil;
    return (*shared)(x).cast<double>();
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Thin-shell concentration on Orlicz balls";

  // Exception hierarchy: OrliczError > UsageError | NumericalError > leaf.
  static std::map<std::string, PyObject*> types;
  const auto make = [&m](const char* name, PyObject* parent) {
    PyObject* type =
        PyErr_NewException((std::string("orlicz_lab._core.") + name).c_str(), parent, nullptr);
    m.attr(name) = py::handle(type);
    types[name] = type;
    return type;
  };
  PyObject* base = make("OrliczError", PyExc_RuntimeError);
  PyObject* usage = make("UsageError", base);
  PyObject* numerical = make("NumericalError", base);
  for (const char* name : {"ParseError", "DomainError", "HypothesisError", "RangeError"}) {
    make(name, usage);
  }
  for (const char* name : {"NoTruncationError", "UnsolvableError", "DivergenceError",
                           "DegenerateEstimateError", "ConstructionError", "EfficiencyError",
                           "SingularityError", "ConvergenceError"}) {
    make(name, numerical);
  }
  py::register_exception_translator([](std::exception_ptr p) {
    if (!p) return;
    try {
      std::rethrow_exception(p);
    } catch (const Error& e) {
      const char* name = e.category() == ErrorCategory::usage ? "UsageError" : "NumericalError";
#define ORLICZ_MAP(T) \
  if (dynamic_cast<const T*>(&e)) name = #T;
      ORLICZ_MAP(ParseError)
      ORLICZ_MAP(DomainError)
      ORLICZ_MAP(HypothesisError)
      ORLICZ_MAP(RangeError)
      ORLICZ_MAP(NoTruncationError)
      ORLICZ_MAP(UnsolvableError)
      ORLICZ_MAP(DivergenceError)
      ORLICZ_MAP(DegenerateEstimateError)
      ORLICZ_MAP(ConstructionError)
      ORLICZ_MAP(EfficiencyError)
      ORLICZ_MAP(SingularityError)
      ORLICZ_MAP(ConvergenceError)
#undef ORLICZ_MAP
      PyErr_SetString(types.at(name), e.what());
    }
  });

  py::class_<OrliczFunction>(m, "OrliczFunction")
      .def_static("power", &OrliczFunction::power, py::arg("p"))
      .def_static("mix", &OrliczFunction::mix, py::arg("p"), py::arg("q"), py::arg("w"))
      .def_static("coshm1", &OrliczFunction::coshm1)
      .def_static("expsq", &OrliczFunction::expsq)
      .def_static(
          "custom",
          [](std::string name, py::function eval, py::function subgradient,
             const py::object& growth) {
            return OrliczFunction::custom(std::move(name), wrap_callable(std::move(eval)),
                                          wrap_callable(std::move(subgradient)),
                                          to_growth(growth));
          },
          py::arg("name"), py::arg("eval"), py::arg("subgradient"), py::arg("growth"))
      .def_static("parse", &parse_orlicz_spec, py::arg("spec"))
      .def("__call__", &OrliczFunction::operator(), py::arg("x"))
      .def("subgradient", &OrliczFunction::subgradient, py::arg("x"))
      .def_property_readonly("name", [](const OrliczFunction& f) { return std::string(f.name()); })
      .def_property_readonly("growth",
                             [](const OrliczFunction& f) { return f.growth_class().to_string(); })
      .def_property_readonly("params", &OrliczFunction::params)
      .def_property_readonly("power_exponent", &OrliczFunction::power_exponent)
      .def("spec", &OrliczFunction::spec)
      .def("__repr__", [](const OrliczFunction& f) { return "OrliczFunction('" + f.spec() + "')"; });

  m.def("parse_orlicz_spec", &parse_orlicz_spec, py::arg("spec"));
  m.def(
      "verify_orlicz_axioms",
      [](const OrliczFunction& f, const std::vector<double>& grid) {
        const auto report = verify_orlicz_axioms(f, grid);
        py::dict checks;
        for (const auto& c : report.checks) {
          checks[py::str(c.axiom)] =
              py::dict(py::arg("passed") = c.passed, py::arg("worst_violation") = c.worst_violation);
        }
        return py::make_tuple(report.all_passed(), checks);
      },
      py::arg("f"), py::arg("grid"));

  py::class_<GibbsSummary>(m, "GibbsSummary")
      .def_readonly("alpha_star", &GibbsSummary::alpha_star)
      .def_readonly("R", &GibbsSummary::R)
      .def_readonly("phi", &GibbsSummary::phi)
      .def_readonly("phi1", &GibbsSummary::phi1)
      .def_readonly("phi2", &GibbsSummary::phi2)
      .def_readonly("L2", &GibbsSummary::L2)
      .def_readonly("varZ2", &GibbsSummary::varZ2)
      .def_readonly("EZ4", &GibbsSummary::EZ4)
      .def_readonly("cov", &GibbsSummary::cov)
      .def("alpha_residual", &GibbsSummary::alpha_residual);

  m.def("log_partition",
        [](const OrliczFunction& f, double alpha) { return log_partition(f, alpha); },
        py::arg("f"), py::arg("alpha"), release());
  m.def("solve_alpha_star",
        [](const OrliczFunction& f, double R) { return solve_alpha_star(f, R); }, py::arg("f"),
        py::arg("R"), release());
  m.def("gibbs_summary", [](const OrliczFunction& f, double R) { return gibbs_summary(f, R); },
        py::arg("f"), py::arg("R"), release());
  m.def("lp_closed_forms", &lp_closed_forms, py::arg("p"), py::arg("R"));

  py::class_<OrliczNormConstant>(m, "OrliczNormConstant")
      .def_property_readonly("kind",
                             [](const OrliczNormConstant& c) {
                               return c.kind == NormKind::exp ? "exp" : "subgaussian";
                             })
      .def_readonly("A", &OrliczNormConstant::A);
  m.def(
      "orlicz_norm_constant",
      [](const OrliczFunction& f, double R, const std::string& kind) {
        const auto k = to_kind(kind);
        py::gil_scoped_release nogil;
        return orlicz_norm_constant(f, R, k);
      },
      py::arg("f"), py::arg("R"), py::arg("kind") = "exp");

  py::class_<BoundValue>(m, "BoundValue")
      .def_readonly("name", &BoundValue::name)
      .def_readonly("prefactor", &BoundValue::prefactor)
      .def_readonly("exponent", &BoundValue::exponent)
      .def_readonly("value", &BoundValue::value)
      .def_readonly("asymptotic_caveat", &BoundValue::asymptotic_caveat)
      .def("__repr__", [](const BoundValue& b) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", b.value);
        return "BoundValue('" + b.name + "', value=" + buf + ")";
      });
  m.def("chebyshev_thinshell_bound", &chebyshev_thinshell_bound, py::arg("s"), py::arg("n"),
        py::arg("t"));
  m.def("mdp_upper_bound", &mdp_upper_bound, py::arg("s"), py::arg("n"), py::arg("t"));
  m.def("mdp_lower_bound", &mdp_lower_bound, py::arg("s"), py::arg("n"), py::arg("t"),
        py::arg("r_n") = py::none());
  m.def("bernstein_bound", &bernstein_bound, py::arg("A"), py::arg("n"), py::arg("t"));
  m.def("expectation_centered_bound", &expectation_centered_bound, py::arg("s"), py::arg("A"),
        py::arg("n"), py::arg("t"));
  m.def(
      "lp_small_p_bounds",
      [](double p, double n, double t) {
        const auto b = lp_small_p_bounds(p, n, t);
        return py::make_tuple(b.upper, b.lower);
      },
      py::arg("p"), py::arg("n"), py::arg("t"));
  m.def(
      "comparison_bounds",
      [](double n, double t, double c) {
        const auto b = comparison_bounds(n, t, c);
        return py::dict(py::arg("lee-vempala") = b.lee_vempala,
                        py::arg("guedon-milman") = b.guedon_milman,
                        py::arg("schechtman-zinn") = b.schechtman_zinn);
      },
      py::arg("n"), py::arg("t"), py::arg("c"));
  m.def(
      "tn_range_diagnostics",
      [](std::optional<double> p, double n, double t) {
        const auto d = tn_range_diagnostics(p, n, t);
        return py::dict(py::arg("t_sqrt_n") = d.t_sqrt_n, py::arg("t") = d.t,
                        py::arg("t_n_quarter") = d.t_quarter,
                        py::arg("small_p_upper") = d.small_p_upper,
                        py::arg("small_p_lower") = d.small_p_lower);
      },
      py::arg("p"), py::arg("n"), py::arg("t"));
  m.def("generalized_gaussian_tail_bound", &generalized_gaussian_tail_bound, py::arg("p"),
        py::arg("a"));
  m.def("el_tail_condition", &el_tail_condition, py::arg("p"), py::arg("n"), py::arg("s_n"));

  py::class_<CramerTransform>(m, "CramerTransform")
      .def(py::init([](const OrliczFunction& f, double R) { return CramerTransform(f, R); }),
           py::arg("f"), py::arg("R"), release())
      .def("log_mgf", &CramerTransform::log_mgf, py::arg("u"), release())
      .def("legendre", &CramerTransform::legendre, py::arg("s"), release())
      .def("rate", &CramerTransform::rate, py::arg("t"), release())
      .def_property_readonly("u_max", &CramerTransform::u_max)
      .def_property_readonly("one_sided", &CramerTransform::one_sided)
      .def_property_readonly("summary", &CramerTransform::summary);
  m.def("cramer_rate",
        [](const OrliczFunction& f, double R, double t) { return cramer_rate(f, R, t); },
        py::arg("f"), py::arg("R"), py::arg("t"), release());
  m.def("lp_ldp_rate_small_p", &lp_ldp_rate_small_p, py::arg("p"), py::arg("L2"), py::arg("x"));
  m.def(
      "rate_2d",
      [](const std::array<double, 4>& cov, double x_lo, double x_hi, std::vector<double> y_values,
         bool half) {
        const auto r = rate_2d(cov, Rate2dOptions{x_lo, x_hi, std::move(y_values), half});
        return py::make_tuple(r.rate, r.x, r.y);
      },
      py::arg("cov"), py::arg("x_lo") = -1.0, py::arg("x_hi") = 0.0,
      py::arg("y_values") = std::vector<double>{-1.0, 1.0}, py::arg("half") = false);

  py::class_<MonteCarloEstimate>(m, "MonteCarloEstimate")
      .def_readonly("value", &MonteCarloEstimate::value)
      .def_readonly("std_error", &MonteCarloEstimate::std_error)
      .def_readonly("ci_low", &MonteCarloEstimate::ci_low)
      .def_readonly("ci_high", &MonteCarloEstimate::ci_high)
      .def_readonly("n_samples", &MonteCarloEstimate::n_samples)
      .def_readonly("seed", &MonteCarloEstimate::seed)
      .def_readonly("effective_sample_size", &MonteCarloEstimate::effective_sample_size)
      .def_readonly("unreliable", &MonteCarloEstimate::unreliable)
      .def_readonly("approximate", &MonteCarloEstimate::approximate)
      .def("__repr__", [](const MonteCarloEstimate& e) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "MonteCarloEstimate(value=%.6g, std_error=%.3g)", e.value,
                      e.std_error);
        return std::string(buf);
      });

  m.def("sample_gibbs", &sample_gibbs, py::arg("f"), py::arg("R"), py::arg("count"),
        py::arg("seed"), release());
  m.def("sample_lp_uniform_exact",
        py::overload_cast<double, int, double, std::uint64_t>(&sample_lp_uniform_exact),
        py::arg("p"), py::arg("n"), py::arg("radius_power"), py::arg("seed"), release());
  m.def(
      "thinshell_probability_is",
      [](const OrliczFunction& f, double R, int n, double t, std::uint64_t samples,
         std::uint64_t seed, bool bootstrap) {
        SamplingOptions opts;
        opts.bootstrap = bootstrap;
        return thinshell_probability_is(f, R, n, t, samples, seed, opts);
      },
      py::arg("f"), py::arg("R"), py::arg("n"), py::arg("t"), py::arg("samples"),
      py::arg("seed"), py::arg("bootstrap") = false, release());
  m.def("thinshell_probability_exact", &thinshell_probability_exact, py::arg("p"), py::arg("R"),
        py::arg("n"), py::arg("t"), py::arg("samples"), py::arg("seed"), release());
  m.def(
      "mean_sq_norm_estimate",
      [](const OrliczFunction& f, double R, int n, std::uint64_t samples, std::uint64_t seed) {
        return mean_sq_norm_estimate(f, R, n, samples, seed);
      },
      py::arg("f"), py::arg("R"), py::arg("n"), py::arg("samples"), py::arg("seed"), release());
  m.def("mean_sq_norm_exact", &mean_sq_norm_exact, py::arg("p"), py::arg("R"), py::arg("n"),
        py::arg("samples"), py::arg("seed"), release());
  m.def(
      "normalization_check",
      [](const OrliczFunction& f, double R, int n, std::uint64_t samples, std::uint64_t seed) {
        NormalizationCheck c;
        {
          py::gil_scoped_release nogil;
          c = normalization_check(f, R, n, samples, seed);
        }
        return py::dict(py::arg("estimate") = c.estimate, py::arg("theory") = c.theory,
                        py::arg("ratio") = c.ratio);
      },
      py::arg("f"), py::arg("R"), py::arg("n"), py::arg("samples"), py::arg("seed"));

  m.def("asymptotic_isotropic_constant", &asymptotic_isotropic_constant, py::arg("s"));
  m.def("asymptotic_volume_radius", &asymptotic_volume_radius, py::arg("s"));
  m.def("lp_ball_volume_exact", &lp_ball_volume_exact, py::arg("p"), py::arg("n"),
        py::arg("R"));
  m.def(
      "finite_n_isotropic_estimate",
      [](const OrliczFunction& f, double R, int n, std::uint64_t samples, std::uint64_t seed) {
        return finite_n_isotropic_estimate(f, R, n, samples, seed);
      },
      py::arg("f"), py::arg("R"), py::arg("n"), py::arg("samples"), py::arg("seed"), release());
  m.def(
      "isotropic_report",
      [](const OrliczFunction& f, double R, const std::vector<int>& n_list,
         std::uint64_t samples, std::uint64_t seed) {
        IsotropicReport r;
        {
          py::gil_scoped_release nogil;
          r = isotropic_report(f, R, n_list, samples, seed);
        }
        py::list entries;
        for (const auto& e : r.finite_n_estimates) entries.append(py::make_tuple(e.n, e.estimate));
        return py::dict(py::arg("asymptotic_L") = r.asymptotic_L,
                        py::arg("volume_radius") = r.volume_radius,
                        py::arg("finite_n_estimates") = entries);
      },
      py::arg("f"), py::arg("R"), py::arg("n_list"), py::arg("samples"), py::arg("seed"));
}

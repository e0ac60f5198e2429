#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "igdcert/certify.hpp"
#include "igdcert/io.hpp"
#include "igdcert/rates.hpp"
#include "igdcert/sim.hpp"

namespace py = pybind11;
using namespace igdcert;

namespace {

FunctionClass class_from_string(const std::string& s) {
  if (s == "sector") return FunctionClass::Sector;
  if (s == "strongly-convex") return FunctionClass::StronglyConvex;
  throw py::value_error("function class must be 'sector' or 'strongly-convex'");
}

py::object certificate_to_dict(const std::optional<Certificate>& cert) {
  if (!cert) return py::none();
  py::dict d;
  d["rho"] = cert->rho;
  d["lambda"] = cert->lambda;
  d["gamma"] = cert->gamma ? py::cast(*cert->gamma) : py::none();
  d["kind"] = certificate_kind_name(cert->kind);
  d["endpoints"] = py::make_tuple(cert->endpoint_values[0], cert->endpoint_values[1]);
  if (cert->witness) {
    py::dict w;
    w["N_scalar"] = cert->witness->n_scalar;
    w["epsilon"] = cert->witness->epsilon;
    d["witness"] = w;
  } else {
    d["witness"] = py::none();
  }
  d["json"] = certificate_to_json(*cert);
  return d;
}

TestFunction function_from_args(const std::string& kind, const ProblemSpec& spec,
                                double gain, const std::vector<double>& spectrum,
                                const std::vector<double>& breakpoints, double omega) {
  if (kind == "quadratic-gain")
    return TestFunction::quadratic_gain(gain > 0 ? gain : spec.L, spec.m, spec.L, 1);
  if (kind == "diagonal-quadratic")
    return TestFunction::diagonal_quadratic(
        spectrum.empty() ? std::vector<double>{spec.m, 0.5 * (spec.m + spec.L), spec.L}
                         : spectrum,
        spec.m, spec.L);
  if (kind == "slope-zigzag")
    return TestFunction::slope_zigzag(
        breakpoints.empty() ? std::vector<double>{0.5, 1.5, 3.0} : breakpoints, spec.m, spec.L);
  if (kind == "gain-oscillator")
    return TestFunction::gain_oscillator(omega > 0 ? omega : 50.0, spec.m, spec.L);
  throw py::value_error("unknown function kind: " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "frequency-domain rate certificates for inexact gradient descent";

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init<double, double, double, double>(), py::arg("m"), py::arg("L"),
           py::arg("alpha"), py::arg("delta") = 0.0)
      .def_readonly("m", &ProblemSpec::m)
      .def_readonly("L", &ProblemSpec::L)
      .def_readonly("alpha", &ProblemSpec::alpha)
      .def_readonly("delta", &ProblemSpec::delta)
      .def("kappa", &ProblemSpec::kappa)
      .def("__repr__", [](const ProblemSpec& s) {
        return "ProblemSpec(m=" + format_g17(s.m) + ", L=" + format_g17(s.L) +
               ", alpha=" + format_g17(s.alpha) + ", delta=" + format_g17(s.delta) + ")";
      });

  m.def("rho_gd", &rho_gd, py::arg("m"), py::arg("L"), py::arg("alpha"));
  m.def("rho_gd_noisy", &rho_gd_noisy, py::arg("spec"));
  m.def("alpha_minus", &alpha_minus, py::arg("m"), py::arg("L"), py::arg("delta"));
  m.def("alpha_plus", &alpha_plus, py::arg("m"), py::arg("L"), py::arg("delta"));
  m.def("prop2_rate", &prop2_rate, py::arg("spec"));
  m.def("prop3_sharp_rate", &prop3_sharp_rate, py::arg("m"), py::arg("L"), py::arg("delta"));

  m.def(
      "classify_regime",
      [](const ProblemSpec& spec, const std::string& cls) {
        const RateRegime r = classify_regime(spec, class_from_string(cls));
        py::dict d;
        d["kind"] = regime_name(r.kind);
        d["certified_rho"] = r.certified_rho;
        d["divergent"] = r.divergent();
        return d;
      },
      py::arg("spec"), py::arg("function_class") = "sector");

  m.def("f_sector", &f_sector, py::arg("t"), py::arg("lambda_"), py::arg("spec"));
  m.def("f_offbyone", &f_offbyone, py::arg("t"), py::arg("rho"), py::arg("lambda_"),
        py::arg("gamma"), py::arg("spec"));

  m.def(
      "certify",
      [](const ProblemSpec& spec, const std::string& cls, py::object rho,
         bool outside_window) -> py::object {
        const FunctionClass fc = class_from_string(cls);
        if (!rho.is_none()) {
          const double r = rho.cast<double>();
          if (fc == FunctionClass::StronglyConvex) {
            auto cert = certify_strongly_convex(spec, outside_window);
            if (cert && cert->rho <= r + 1e-12) return certificate_to_dict(cert);
            return certificate_to_dict(certify_sector_noisy(spec, r));
          }
          return certificate_to_dict(certify_sector_noisy(spec, r));
        }
        if (fc == FunctionClass::StronglyConvex)
          return certificate_to_dict(certify_strongly_convex(spec, outside_window));
        return certificate_to_dict(rho_star_sector(spec));
      },
      py::arg("spec"), py::arg("function_class") = "sector", py::arg("rho") = py::none(),
      py::arg("outside_window") = false,
      "Minimal certified rate (rho=None) or decision mode at a given rho; returns a "
      "certificate dict or None.");

  m.def(
      "simulate",
      [](const ProblemSpec& spec, const std::string& function, const std::string& policy,
         int steps, std::uint64_t seed, std::vector<double> x0, double gain,
         std::vector<double> spectrum, std::vector<double> breakpoints, double omega) {
        const TestFunction fn = function_from_args(function, spec, gain, spectrum,
                                                   breakpoints, omega);
        const auto pol = NoisePolicy::parse(policy, spec.delta, seed);
        if (!pol) throw py::value_error("unknown policy: " + policy);
        if (x0.empty()) x0.assign(fn.dim, 1.0);
        if (x0.size() == 1 && fn.dim > 1) x0.assign(fn.dim, x0[0]);
        const Trajectory t = run_inexact_gd(fn, x0, spec.alpha, *pol, steps);
        py::dict d;
        d["x"] = t.x;
        d["u"] = t.u;
        d["e"] = t.e;
        d["v"] = t.v;
        d["diverged"] = t.diverged;
        d["seed"] = t.seed;
        if (!t.diverged && static_cast<int>(t.length()) > 31) {
          const auto est = empirical_rate(t, 20);
          d["empirical_rate"] = est.rate;
          d["reached_fixed_point"] = est.reached_fixed_point;
        }
        return d;
      },
      py::arg("spec"), py::arg("function") = "quadratic-gain", py::arg("policy") = "zero",
      py::arg("steps") = 500, py::arg("seed") = 0, py::arg("x0") = std::vector<double>{},
      py::arg("gain") = 0.0, py::arg("spectrum") = std::vector<double>{},
      py::arg("breakpoints") = std::vector<double>{}, py::arg("omega") = 0.0);

  m.def(
      "lower_bound_witness",
      [](const ProblemSpec& spec) {
        const WitnessResult w = lower_bound_witness(spec);
        py::dict d;
        d["rate"] = w.rate;
        d["l_branch_won"] = w.l_branch_won;
        return d;
      },
      py::arg("spec"));

  m.attr("__version__") = "0.1.0";
}

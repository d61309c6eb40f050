#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qiopa/closed_forms.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/loss.hpp"
#include "qiopa/metrics.hpp"
#include "qiopa/verify.hpp"

namespace py = pybind11;
using namespace qiopa;

namespace {

py::dict extraction_dict(const PairExtraction& res) {
  py::dict d;
  d["rho"] = res.rho.matrix();
  d["basis"] = res.rho.labels();
  d["success_probability"] = res.success_probability;
  d["terms"] = res.terms;
  d["warning"] = res.warning ? py::cast(*res.warning) : py::none();
  return d;
}

closed_form::ReducedPair selector(const std::string& s) {
  if (s == "k1k2") return closed_form::ReducedPair::k1k2;
  if (s == "kTk1") return closed_form::ReducedPair::kTk1;
  if (s == "kTk2") return closed_form::ReducedPair::kTk2;
  throw std::invalid_argument("selector must be k1k2, kTk1 or kTk2");
}

PairOptions options(const std::string& path, int n_max, double tol) {
  PairOptions o;
  if (path == "full") o.path = PairPath::full_ket;
  else if (path != "series") throw std::invalid_argument("path must be series or full");
  o.n_max = n_max;
  o.tolerance = tol;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "QIOPA pair-extraction numerics";

  py::register_exception<NumericFault>(m, "NumericFault", PyExc_ArithmeticError);

  py::class_<GainParams>(m, "GainParams")
      .def(py::init<double, double>(), py::arg("g"), py::arg("eta") = 0.0)
      .def_property_readonly("g", &GainParams::g)
      .def_property_readonly("eta", &GainParams::eta)
      .def_property_readonly("tanh_g", &GainParams::tanh_g)
      .def_property_readonly("gamma", &GainParams::gamma)
      .def_property_readonly("nbar", &GainParams::nbar)
      .def_property_readonly("t", &GainParams::t)
      .def_property_readonly("d", &GainParams::d);

  py::class_<PolarizationQubit>(m, "PolarizationQubit")
      .def(py::init<std::complex<double>, std::complex<double>>(), py::arg("alpha"),
           py::arg("beta"))
      .def_static("preset", &PolarizationQubit::preset)
      .def_property_readonly("alpha", &PolarizationQubit::alpha)
      .def_property_readonly("beta", &PolarizationQubit::beta)
      .def("vector", &PolarizationQubit::vector);

  py::enum_<LossConvention>(m, "LossConvention")
      .value("a", LossConvention::a)
      .value("b", LossConvention::b);

  py::class_<LossSpec>(m, "LossSpec")
      .def(py::init([](double eta, LossConvention c) { return LossSpec{eta, c}; }),
           py::arg("eta") = 0.0, py::arg("convention") = LossConvention::b)
      .def_readwrite("eta", &LossSpec::eta)
      .def_readwrite("convention", &LossSpec::convention)
      .def("effective_t", &LossSpec::effective_t);

  m.def(
      "pair_extracted_rho",
      [](const GainParams& g, const PolarizationQubit& q, const LossSpec& loss,
         const std::string& path, int n_max, double tol) {
        return extraction_dict(pair_extracted_rho(g, q, loss, options(path, n_max, tol)));
      },
      py::arg("gain"), py::arg("qubit"), py::arg("loss") = LossSpec{},
      py::arg("path") = "series", py::arg("n_max") = 12, py::arg("tol") = 1e-12);
  m.def(
      "pair_extracted_rho3",
      [](const GainParams& g, const LossSpec& loss, const std::string& path, int n_max,
         double tol) {
        return extraction_dict(pair_extracted_rho3(g, loss, options(path, n_max, tol)));
      },
      py::arg("gain"), py::arg("loss") = LossSpec{}, py::arg("path") = "series",
      py::arg("n_max") = 12, py::arg("tol") = 1e-12);

  m.def("h_input", [](double t) { return closed_form::h_input(t).matrix(); }, py::arg("t"));
  m.def(
      "pair_analytic",
      [](double t, const PolarizationQubit& q) { return closed_form::pair(t, q).matrix(); },
      py::arg("t"), py::arg("qubit"));
  m.def("three_qubit", [](double t) { return closed_form::three_qubit(t).matrix(); },
        py::arg("t"));
  m.def(
      "reduced_pair",
      [](double t, const std::string& sel) {
        return closed_form::reduced_pair(t, selector(sel)).matrix();
      },
      py::arg("t"), py::arg("selector"));
  m.def("clone_fidelity", &closed_form::clone_fidelity, py::arg("t"));
  m.def("anticlone_fidelity", &closed_form::anticlone_fidelity);
  m.def("werner_p", &closed_form::werner_p, py::arg("t"));
  m.def("unot_on_pair", &closed_form::unot_on_pair, py::arg("rho"));

  m.def("concurrence", py::overload_cast<const Matrix&>(&concurrence), py::arg("rho"));
  m.def(
      "werner_fit",
      [](const Matrix& rho) {
        const WernerFit f = werner_fit(rho);
        py::dict d;
        d["bell"] = to_string(f.bell);
        d["weight"] = f.weight;
        d["residual"] = f.residual;
        d["ambiguous"] = f.ambiguous;
        d["entangled"] = f.entangled();
        return d;
      },
      py::arg("rho"));
  m.def("uhlmann_fidelity", py::overload_cast<const Matrix&, const Matrix&>(&uhlmann_fidelity),
        py::arg("rho"), py::arg("sigma"));
  m.def("hs_distance", py::overload_cast<const Matrix&, const Matrix&>(&hs_distance),
        py::arg("a"), py::arg("b"));

  m.def(
      "verify",
      [](std::optional<double> tol, std::vector<int> criteria) {
        verify::Options o{tol, std::move(criteria)};
        return verify::to_json(verify::run(o), o).dump();
      },
      py::arg("tolerance") = py::none(), py::arg("criteria") = std::vector<int>{},
      "Runs the verification report; returns it as a JSON string.");
}

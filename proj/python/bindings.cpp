#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conefield/certificate.hpp"
#include "conefield/config.hpp"
#include "conefield/scout.hpp"

namespace py = pybind11;
using namespace conefield;

namespace {

py::list matrix_rows(const IntervalMatrix& m) {
  py::list rows;
  for (size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (size_t j = 0; j < m.cols(); ++j) row.append(m(i, j));
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_conefield, m) {
  m.doc() = "Verified connecting orbits of A'' + A'/r - A/(4r^2) = A - A^3";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NoSignChange>(m, "NoSignChange", PyExc_RuntimeError);
  py::register_exception<BlowUp>(m, "BlowUp", PyExc_RuntimeError);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double>())
      .def(py::init<double, double>())
      .def_property_readonly("lo", &Interval::lo)
      .def_property_readonly("hi", &Interval::hi)
      .def("mid", &Interval::mid)
      .def("width", &Interval::width)
      .def("mag", &Interval::mag)
      .def("mig", &Interval::mig)
      .def("sign", &Interval::sign)
      .def("contains", &Interval::contains)
      .def("contains_zero", &Interval::contains_zero)
      .def("subset_of", &Interval::subset_of)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__str__", [](const Interval& x) { return to_string(x); })
      .def("__repr__", [](const Interval& x) { return "Interval" + to_string(x); });

  m.def("sqrt", [](const Interval& x) { return sqrt(x); });
  m.def("exp", [](const Interval& x) { return exp(x); });
  m.def("log", [](const Interval& x) { return log(x); });
  m.def("hull", [](const Interval& a, const Interval& b) { return hull(a, b); });
  m.def("intersect", [](const Interval& a, const Interval& b) { return intersect(a, b); });
  m.def("to_decimal", &to_decimal);
  m.def("parse_decimal", &parse_decimal);
  m.def("to_compressed", &to_compressed, py::arg("x"), py::arg("extra_digits") = 2);
  m.def("parse_compressed", &parse_compressed);

  py::enum_<Verdict>(m, "Verdict")
      .value("Proved", Verdict::Proved)
      .value("Failed", Verdict::Failed)
      .value("Inconclusive", Verdict::Inconclusive);

  py::class_<OrbitCandidate>(m, "OrbitCandidate")
      .def(py::init([](int n, double r_hat, double delta_r) { return OrbitCandidate{n, r_hat, delta_r}; }),
           py::arg("n"), py::arg("r_hat"), py::arg("delta_r"))
      .def_readwrite("n", &OrbitCandidate::n)
      .def_readwrite("r_hat", &OrbitCandidate::r_hat)
      .def_readwrite("delta_r", &OrbitCandidate::delta_r)
      .def_property_readonly("r_minus", &OrbitCandidate::r_minus)
      .def_property_readonly("r_plus", &OrbitCandidate::r_plus)
      .def_property_readonly("end_side", &OrbitCandidate::end_side)
      .def_property_readonly("crossings_to_section", &OrbitCandidate::crossings_to_section)
      .def("__repr__", [](const OrbitCandidate& c) {
        return "OrbitCandidate(n=" + std::to_string(c.n) + ", r_hat=" + to_decimal(c.r_hat) +
               ", delta_r=" + to_decimal(c.delta_r) + ")";
      });

  py::class_<ProofSettings>(m, "ProofSettings")
      .def(py::init<>())
      .def_readwrite("db1", &ProofSettings::db1)
      .def_readwrite("db2", &ProofSettings::db2)
      .def_readwrite("de1", &ProofSettings::de1)
      .def_readwrite("de2", &ProofSettings::de2)
      .def_readwrite("r_star", &ProofSettings::r_star)
      .def_readwrite("a", &ProofSettings::a)
      .def_readwrite("rho_star", &ProofSettings::rho_star)
      .def_readwrite("order", &ProofSettings::order)
      .def_readwrite("tol", &ProofSettings::tol)
      .def_readwrite("t_max", &ProofSettings::t_max)
      .def_readwrite("r_subdivisions", &ProofSettings::r_subdivisions)
      .def_readwrite("y_subdivisions", &ProofSettings::y_subdivisions)
      .def_readwrite("max_y_subdivisions", &ProofSettings::max_y_subdivisions)
      .def_readwrite("threads", &ProofSettings::threads);

  py::class_<ManifoldCertificate>(m, "ManifoldCertificate")
      .def_readonly("E", &ManifoldCertificate::E)
      .def_readonly("m", &ManifoldCertificate::m)
      .def_readonly("lip_t", &ManifoldCertificate::lip_t);

  py::class_<OrbitProofCertificate>(m, "OrbitProofCertificate")
      .def_readonly("candidate", &OrbitProofCertificate::candidate)
      .def_readonly("bounds_b", &OrbitProofCertificate::bounds_b)
      .def_readonly("bounds_e", &OrbitProofCertificate::bounds_e)
      .def_readonly("return_time", &OrbitProofCertificate::return_time)
      .def_readonly("cover_minus", &OrbitProofCertificate::cover_minus)
      .def_readonly("cover_plus", &OrbitProofCertificate::cover_plus)
      .def_readonly("crossing_count", &OrbitProofCertificate::crossing_count)
      .def_readonly("F_prime", &OrbitProofCertificate::F_prime)
      .def_property_readonly("DP", [](const OrbitProofCertificate& c) { return matrix_rows(c.DP); })
      .def_readonly("section_side", &OrbitProofCertificate::section_side)
      .def_readonly("r_subdivisions", &OrbitProofCertificate::r_subdivisions)
      .def_readonly("y_subdivisions", &OrbitProofCertificate::y_subdivisions)
      .def_readonly("seconds", &OrbitProofCertificate::seconds)
      .def_readonly("verdict", &OrbitProofCertificate::verdict)
      .def_readonly("reason", &OrbitProofCertificate::reason);

  m.def("default_candidates", &default_candidates);
  m.def("prove_orbit", &prove_orbit, py::arg("candidate"), py::arg("settings") = ProofSettings{},
        py::call_guard<py::gil_scoped_release>());
  m.def("prove_all", &prove_all, py::arg("candidates"), py::arg("settings") = ProofSettings{},
        py::call_guard<py::gil_scoped_release>());
  m.def("recheck", &recheck);

  py::class_<ProofConfig>(m, "ProofConfig")
      .def(py::init<>())
      .def_readwrite("settings", &ProofConfig::settings)
      .def_readwrite("candidates", &ProofConfig::candidates)
      .def_readwrite("refine_r_subdivisions", &ProofConfig::refine_r_subdivisions)
      .def("resolved", &ProofConfig::resolved);
  m.def("parse_config", &parse_config);
  m.def("load_config", &load_config);
  m.def("to_ini", &to_ini);
  m.def("config_hash", &config_hash);

  m.def("serialize", [](const ProofConfig& c, const std::vector<OrbitProofCertificate>& certs) {
    return serialize(CertificateFile{c, certs});
  });
  m.def("parse_certificates", [](const std::string& text) {
    CertificateFile f = parse_certificates(text);
    return py::make_tuple(f.config, f.certificates);
  });
  m.def("recheck_all", [](const ProofConfig& c, const std::vector<OrbitProofCertificate>& certs) {
    return recheck_all(CertificateFile{c, certs});
  });
  m.def("report", [](const ProofConfig& c, const std::vector<OrbitProofCertificate>& certs) {
    return report(CertificateFile{c, certs});
  });

  py::enum_<SimScale>(m, "SimScale")
      .value("Rho", SimScale::Rho)
      .value("R", SimScale::R)
      .value("Mixed", SimScale::Mixed);

  py::class_<ScoutSettings>(m, "ScoutSettings")
      .def(py::init<>())
      .def_readwrite("d1", &ScoutSettings::d1)
      .def_readwrite("de1", &ScoutSettings::de1)
      .def_readwrite("de2", &ScoutSettings::de2)
      .def_readwrite("tol", &ScoutSettings::tol)
      .def_readwrite("t_max", &ScoutSettings::t_max)
      .def_readwrite("delta_cap", &ScoutSettings::delta_cap);

  // samples come back as (t, A, A') tuples
  m.def(
      "simulate",
      [](double r0, double y_b, double t_end, double tol, SimScale scale, double d1) {
        SimTrajectory tr = simulate(r0, y_b, t_end, tol, scale, d1);
        std::vector<std::tuple<double, double, double>> out;
        out.reserve(tr.samples.size());
        for (const auto& s : tr.samples) out.emplace_back(s.t, s.A, s.Aprime);
        return py::make_tuple(out, tr.extrema());
      },
      py::arg("r0"), py::arg("y_b") = 0.0, py::arg("t_end") = 10.0, py::arg("tol") = 1e-12,
      py::arg("scale") = SimScale::Mixed, py::arg("d1") = 0.125);
  m.def("shooting_value", &shooting_value);
  m.def("scan_brackets", &scan_brackets, py::arg("n"), py::arg("lo") = 1e-4, py::arg("hi") = 1e-2,
        py::arg("samples") = 60, py::arg("settings") = ScoutSettings{});
  m.def("bisect_candidates", &bisect_candidates, py::arg("n"), py::arg("bracket"),
        py::arg("settings") = ScoutSettings{});
}

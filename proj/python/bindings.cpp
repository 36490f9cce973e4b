#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcl/atlas.hpp"
#include "qcl/classifier.hpp"
#include "qcl/cw.hpp"
#include "qcl/errors.hpp"
#include "qcl/simulator.hpp"

namespace py = pybind11;
using namespace qcl;

namespace {

Pifs make_pifs(const Mat3& u, std::optional<Complex> omega, std::optional<Vec3> z) {
  if (omega.has_value() == z.has_value()) throw py::value_error("pass exactly one of omega and z");
  return Pifs(u, z ? *z : z_from_omega(u, *omega));
}

py::dict chain_dict(const ChainType& t) {
  py::dict d;
  d["type"] = to_string(t.kind);
  d["code"] = t.code();
  d["kappa"] = t.kappa;
  d["label"] = to_string(t);
  return d;
}

}  // namespace

PYBIND11_MODULE(_qcl, m) {
  m.doc() = "Classification and simulation of ball & point qutrit chains";

  // translators run in reverse registration order: base class first
  py::register_exception<Error>(m, "QclError", PyExc_RuntimeError);
  py::register_exception<NotUnitary>(m, "NotUnitary", PyExc_ValueError);
  py::register_exception<OutsideRange>(m, "OutsideRange", PyExc_ValueError);

  m.def("eig_unitary3", [](const Mat3& u) {
    const Spectrum3 s = eig_unitary3(u);
    Mat3 v;
    for (int j = 0; j < 3; ++j) v.col(j) = s.vectors[j];
    return py::make_tuple(std::vector<double>(s.phases.begin(), s.phases.end()), v);
  }, py::arg("u"), "Phases in [0, 2pi) ascending and eigenvectors as columns.");

  m.def("eig2", [](const Mat2& a) { return eig2(a); }, py::arg("a"));

  m.def("subsystem", [](const Mat3& u, std::optional<Complex> omega, std::optional<Vec3> z) {
    const SubsystemMap s = build_subsystem(make_pifs(u, omega, z));
    py::dict d;
    d["a"] = s.a;
    d["omega"] = s.omega;
    d["z"] = Vec3(s.pifs.z());
    d["lambda1"] = s.lambda1;
    d["lambda2"] = s.lambda2;
    d["psi"] = s.psi;
    d["mobius"] = to_string(mobius_class(s));
    return d;
  }, py::arg("u"), py::arg("omega") = py::none(), py::arg("z") = py::none());

  m.def("classify", [](const Mat3& u, std::optional<Complex> omega, std::optional<Vec3> z, int q_max, double eps_rat) {
    ClassifierConfig cfg;
    cfg.q_max = q_max;
    cfg.eps_rat = eps_rat;
    const SubsystemMap s = build_subsystem(make_pifs(u, omega, z));
    py::dict d = chain_dict(classify_by_eigen(s, cfg));
    d["range_route"] = chain_dict(classify_by_range(u, s.omega, cfg));
    d["omega"] = s.omega;
    return d;
  }, py::arg("u"), py::arg("omega") = py::none(), py::arg("z") = py::none(), py::arg("q_max") = tol::kQMax,
     py::arg("eps_rat") = tol::kRat);

  m.def("classify_by_range", [](const Mat3& u, Complex omega) { return chain_dict(classify_by_range(u, omega)); },
        py::arg("u"), py::arg("omega"));

  m.def("commensurability", [](double upsilon, int q_max, double eps_rat) {
    const Commensurability c = commensurability(upsilon, q_max, eps_rat);
    py::dict d;
    d["rational"] = c.rational;
    d["p"] = c.p;
    d["q"] = c.q;
    d["kappa"] = c.kappa;
    return d;
  }, py::arg("upsilon"), py::arg("q_max") = tol::kQMax, py::arg("eps_rat") = tol::kRat);

  m.def("numerical_range", [](const Mat3& u) {
    const NumericalRange w = numerical_range(u);
    py::dict d;
    d["vertices"] = std::vector<Complex>(w.vertices.begin(), w.vertices.end());
    d["kind"] = to_string(w.kind);
    return d;
  }, py::arg("u"));

  m.def("z_from_omega", [](const Mat3& u, Complex omega) { return z_from_omega(u, omega); }, py::arg("u"),
        py::arg("omega"));

  m.def("conjugator", &conjugator, py::arg("u"), py::arg("z"), py::arg("z_tilde"));

  m.def("musselman", [](const Mat3& u, Complex omega) {
    const CubicFrame f = cubic_frame(u);
    const Complex w = f.to_frame(omega);
    return musselman_eval(f, w.real(), w.imag());
  }, py::arg("u"), py::arg("omega"), "Cubic evaluated at omega, after rotating to the det U = 1 frame.");

  m.def("render_atlas", [](const Mat3& u, int resolution) {
    const RangeAtlas at = render_atlas(u, resolution);
    std::vector<std::tuple<double, double, int, int>> rows;
    rows.reserve(at.cells.size());
    for (const auto& c : at.cells) rows.emplace_back(c.x, c.y, c.type.code(), c.type.kappa);
    return rows;
  }, py::arg("u"), py::arg("resolution"), "Rows (x, y, type code, kappa) per non-empty cell.");

  m.def("atlas_csv", [](const Mat3& u, int resolution) {
    std::ostringstream os;
    write_atlas_csv(render_atlas(u, resolution), os);
    return os.str();
  }, py::arg("u"), py::arg("resolution"));

  m.def("simulate", [](const Mat3& u, std::optional<Complex> omega, std::optional<Vec3> z, std::size_t steps,
                       std::uint64_t seed, double match_tol) {
    return to_json(simulate(make_pifs(u, omega, z), SimConfig{seed, steps, match_tol}));
  }, py::arg("u"), py::arg("omega") = py::none(), py::arg("z") = py::none(), py::arg("steps") = 100000,
     py::arg("seed") = 1, py::arg("match_tol") = tol::kMatch, "Deterministic JSON report.");

  m.def("cw_unitary", &cw::unitary);
  m.def("cw_checks", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& c : cw::run_checks()) out.emplace_back(c.name, c.passed, c.detail);
    return out;
  });
}

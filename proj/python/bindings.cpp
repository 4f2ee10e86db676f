#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "epcgh/acceptance.hpp"
#include "epcgh/cli.hpp"
#include "epcgh/curves.hpp"
#include "epcgh/duality.hpp"
#include "epcgh/epc.hpp"
#include "epcgh/experiments.hpp"
#include "epcgh/fiber3.hpp"
#include "epcgh/verifier.hpp"

namespace py = pybind11;
using namespace epcgh;

namespace {

py::dict row_dict(const ResultRow& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["subject"] = r.subject;
  d["metric"] = r.metric;
  d["value"] = r.value;
  d["reference"] = r.reference ? py::cast(*r.reference) : py::none();
  d["tolerance"] = r.tolerance ? py::cast(*r.tolerance) : py::none();
  d["passed"] = r.pass ? py::cast(*r.pass) : py::none();
  return d;
}

py::list rows_list(const std::vector<ResultRow>& rows) {
  py::list l;
  for (const auto& r : rows) l.append(row_dict(r));
  return l;
}

}  // namespace

PYBIND11_MODULE(_epcgh, m) {
  m.doc() = "Embedding-projection correspondences between spheres";

  m.def("delta_k", &delta_k, py::arg("k"));
  m.def("zeta_m", &zeta_m, py::arg("m"));
  m.def("gamma_odd", [](int k, double t) { return gamma_odd(k, t).vec(); }, py::arg("k"), py::arg("t"));
  m.def("h_closed", &h_closed, py::arg("k"), py::arg("t"));
  m.def("h_sum", &h_sum, py::arg("k"), py::arg("t"));
  m.def("dis_gamma", py::overload_cast<int>(&dis_gamma), py::arg("k"));

  m.def(
      "psi",
      [](const std::string& spec, std::vector<double> y) {
        const Param p = psi(EpcSpec::parse(spec), SpherePoint::normalized(std::move(y)));
        return py::make_tuple(p.a, p.b);
      },
      py::arg("spec"), py::arg("y"));
  m.def(
      "estimate_distortion",
      [](const std::string& spec, std::uint64_t budget, std::uint64_t seed, int threads) {
        py::gil_scoped_release nogil;
        return estimate_distortion(EpcSpec::parse(spec), budget, seed, true, threads).value;
      },
      py::arg("spec"), py::arg("budget"), py::arg("seed") = 42, py::arg("threads") = 0);
  m.def(
      "disc_estimate",
      [](const std::string& spec, std::uint64_t budget, std::uint64_t seed, int threads) {
        py::gil_scoped_release nogil;
        return disc_estimate(EpcSpec::parse(spec), budget, seed, threads);
      },
      py::arg("spec"), py::arg("budget"), py::arg("seed") = 42, py::arg("threads") = 0);
  m.def(
      "covering_radius",
      [](const std::string& spec, std::uint64_t samples, std::uint64_t seed, int threads) {
        py::gil_scoped_release nogil;
        return covering_radius(EpcSpec::parse(spec), samples, seed, threads);
      },
      py::arg("spec"), py::arg("samples"), py::arg("seed") = 42, py::arg("threads") = 0);

  m.def("rho3", &rho3, py::arg("theta"));
  m.def("rho3_extrema", [](int grid) {
    const Rho3Extrema e = rho3_extrema(grid);
    py::dict d;
    d["max"] = e.max_value;
    d["argmax"] = e.argmax;
    d["min"] = e.min_value;
    d["argmin"] = e.argmin;
    return d;
  }, py::arg("grid") = 20000);
  m.def(
      "classify_maxima",
      [](double zeta, double theta) {
        const MaximaClass c = classify_maxima(zeta, theta);
        return py::make_tuple(c.count, c.locations);
      },
      py::arg("zeta"), py::arg("theta"));

  m.def(
      "verify_bstar",
      [](double slack, int max_depth, int threads) {
        VerifyOptions o;
        o.slack = slack;
        o.max_depth = max_depth;
        o.threads = threads;
        py::gil_scoped_release nogil;
        const auto [up, lo] = verify_Bstar_k1(o);
        return transcript_json(up, lo);
      },
      py::arg("slack") = 1e-6, py::arg("max_depth") = 50, py::arg("threads") = 0);

  m.def("edge_predicate", &edge_predicate, py::arg("k"), py::arg("t1"), py::arg("t2"));
  m.def(
      "duality_witness",
      [](int k, std::vector<double> params) {
        const DualityWitness w = duality_witness(FaceCandidate::make(k, std::move(params)));
        py::dict d;
        d["found"] = w.found;
        d["center"] = w.center;
        d["radius"] = w.radius;
        d["equidistance_error"] = w.equidistance_error;
        d["min_curve_distance"] = w.min_curve_distance;
        return d;
      },
      py::arg("k"), py::arg("params"));

  m.def("table_dis_gamma", [](int kmax) { return rows_list(run_table_dis_gamma(kmax)); }, py::arg("kmax") = 6);

  m.def(
      "run_criterion",
      [](int id, std::uint64_t seed, int threads) {
        AcceptanceOptions o;
        o.seed = seed;
        o.threads = threads;
        CriterionResult r;
        {
          py::gil_scoped_release nogil;
          r = run_criterion(id, o);
        }
        return py::make_tuple(r.pass, format_criterion(r));
      },
      py::arg("id"), py::arg("seed") = 42, py::arg("threads") = 0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}

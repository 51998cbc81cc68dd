#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spcs/experiment.hpp"
#include "spcs/metrics.hpp"
#include "spcs/sensing.hpp"
#include "spcs/simulate.hpp"
#include "spcs/solver.hpp"
#include "spcs/spline.hpp"
#include "spcs/srm.hpp"
#include "spcs/wavelet.hpp"

namespace py = pybind11;
using namespace spcs;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Grid to_grid(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
  return Grid(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Array to_array(const Grid& g) {
  Array out({g.rows(), g.cols()});
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

Array vector_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["iterations"] = r.iterations;
  d["objective"] = r.objective;
  d["residual_norm"] = r.residual_norm;
  d["sparsity"] = r.sparsity;
  d["wall_seconds"] = r.wall_seconds;
  d["lipschitz"] = r.lipschitz;
  d["restarts"] = r.restarts;
  d["converged"] = r.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spline-domain compressive sensing with structurally random matrices";

  // Translators run newest first, so the derived type goes last.
  py::register_exception<Error>(m, "SpcsError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

  m.def("bspline", [](int degree, double t) { return bspline_value(degree, t); }, py::arg("degree"),
        py::arg("t"));
  m.def("crosscorr_taps", [](int p) { return crosscorr_seq(SplineOrder{p}).taps; }, py::arg("p"));
  m.def("filter_bank_names", &filter_bank_names);
  m.def("coefficients_for_samples",
        [](const Array& c, int p) { return to_array(coefficients_for_samples(to_grid(c), SplineOrder{p})); },
        py::arg("samples"), py::arg("p"));
  m.def("render_box_samples",
        [](const Array& a0, int p) { return to_array(render_box_samples(to_grid(a0), SplineOrder{p})); },
        py::arg("a0"), py::arg("p"));
  m.def("render_pointwise",
        [](const Array& a0, int p) { return to_array(render_pointwise(to_grid(a0), SplineOrder{p})); },
        py::arg("a0"), py::arg("p"));

  m.def(
      "dwt2",
      [](const Array& a0, const std::string& bank, int levels) {
        return vector_array(dwt2(to_grid(a0), filter_bank(bank), levels).data);
      },
      py::arg("a0"), py::arg("bank") = "bior2.2", py::arg("levels") = 4);
  m.def(
      "idwt2",
      [](const Array& x, std::size_t rows, std::size_t cols, const std::string& bank, int levels) {
        const FilterBank fb = filter_bank(bank);
        WaveletVec v{WaveletLayout(rows, cols, levels, fb), to_vector(x)};
        if (v.data.size() != v.layout.size()) throw DimensionError("idwt2: coefficient count does not match shape");
        return to_array(idwt2(v, fb));
      },
      py::arg("x"), py::arg("rows"), py::arg("cols"), py::arg("bank") = "bior2.2", py::arg("levels") = 4);

  py::class_<SrmConfig>(m, "SrmConfig")
      .def_static("make", &SrmConfig::make, py::arg("n"), py::arg("m"), py::arg("seed"),
                  py::arg("keep_dc") = false)
      .def_readonly("n", &SrmConfig::n)
      .def_readonly("m", &SrmConfig::m)
      .def_readonly("seed", &SrmConfig::seed)
      .def_readonly("keep_dc", &SrmConfig::keep_dc)
      .def_readonly("permutation", &SrmConfig::permutation)
      .def_readonly("row_select", &SrmConfig::row_select);
  m.def("srm_forward", [](const SrmConfig& c, const Array& v) { return vector_array(srm_forward(c, to_vector(v))); },
        py::arg("srm"), py::arg("v"));
  m.def("srm_adjoint", [](const SrmConfig& c, const Array& y) { return vector_array(srm_adjoint(c, to_vector(y))); },
        py::arg("srm"), py::arg("y"));

  py::class_<SensingOp>(m, "SensingOp")
      .def(py::init([](const SrmConfig& srm, int p, const std::string& bank, int levels, std::size_t k,
                       std::size_t l) { return SensingOp(srm, SplineOrder{p}, filter_bank(bank), levels, k, l); }),
           py::arg("srm"), py::arg("p"), py::arg("bank"), py::arg("levels"), py::arg("mask_rows"),
           py::arg("mask_cols"))
      .def_property_readonly("shape", [](const SensingOp& op) { return py::make_tuple(op.rows(), op.cols()); })
      .def("apply", [](const SensingOp& op, const Array& x) { return vector_array(op.apply(to_vector(x))); })
      .def("adjoint", [](const SensingOp& op, const Array& y) { return vector_array(op.adjoint(to_vector(y))); });

  m.def(
      "solve_l1",
      [](const SensingOp& op, const Array& y, double lambda, int max_iters, double rel_tol, bool continuation) {
        SolverConfig cfg;
        cfg.lambda = lambda;
        cfg.max_iters = max_iters;
        cfg.rel_tol = rel_tol;
        cfg.continuation = continuation;
        const auto r = solve_l1(op, to_vector(y), cfg);
        return py::make_tuple(vector_array(r.x.data), report_dict(r.report));
      },
      py::arg("op"), py::arg("y"), py::arg("lam"), py::arg("max_iters") = 2000, py::arg("rel_tol") = 1e-6,
      py::arg("continuation") = true);

  m.def(
      "acquire",
      [](const Array& image, const SrmConfig& srm, double noise_sigma, int synthetic_order) {
        const Scene scene = synthetic_order < 0 ? Scene::pixel_image(to_grid(image))
                                                : Scene::spline_synthetic(to_grid(image), SplineOrder{synthetic_order});
        const MeasurementSet ms = acquire(scene, srm, noise_sigma);
        std::ostringstream os;
        write_measurements(os, ms);
        return py::make_tuple(vector_array(ms.y), py::bytes(os.str()));
      },
      py::arg("image"), py::arg("srm"), py::arg("noise_sigma") = 0.0, py::arg("synthetic_order") = -1,
      "Returns (y, serialized measurement file).");
  m.def(
      "reconstruct",
      [](const py::bytes& measurements, int p, const std::string& bank, int levels, double lambda_rel,
         int max_iters, double rel_tol) {
        std::istringstream is{std::string(measurements)};
        const MeasurementSet ms = read_measurements(is);
        SolverConfig sc;
        sc.max_iters = max_iters;
        sc.rel_tol = rel_tol;
        sc.continuation = true;
        const Reconstruction r = reconstruct(ms, SplineOrder{p}, filter_bank(bank), levels, lambda_rel, sc);
        py::dict d;
        d["x"] = vector_array(r.x.data);
        d["a0"] = to_array(r.a0);
        d["samples"] = to_array(r.samples);
        d["lambda"] = r.lambda;
        d["report"] = report_dict(r.report);
        return d;
      },
      py::arg("measurements"), py::arg("p"), py::arg("bank") = "bior2.2", py::arg("levels") = 4,
      py::arg("lambda_rel") = 1e-3, py::arg("max_iters") = 2000, py::arg("rel_tol") = 1e-6);

  m.def("psnr", [](const Array& a, const Array& b, double peak) { return psnr(to_grid(a), to_grid(b), peak); },
        py::arg("ref"), py::arg("test"), py::arg("peak") = 1.0);
  m.def("ssim", [](const Array& a, const Array& b, double peak) { return ssim(to_grid(a), to_grid(b), peak); },
        py::arg("ref"), py::arg("test"), py::arg("peak") = 1.0);
}

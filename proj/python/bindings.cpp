// pybind11 bindings: numpy-facing wrappers over the dense operator core.
// Arrays cross the boundary by copy; the matrices involved are small enough
// that zero-copy plumbing is not worth the aliasing rules it would impose.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mpi1d/assembly.hpp"
#include "mpi1d/config.hpp"
#include "mpi1d/csvio.hpp"
#include "mpi1d/imaging.hpp"
#include "mpi1d/linalg.hpp"
#include "mpi1d/physics.hpp"
#include "mpi1d/spectral.hpp"

namespace py = pybind11;
using namespace mpi1d;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> matrix_to_array(const OperatorMatrix& m) {
    py::array_t<double> out({static_cast<py::ssize_t>(m.rows), static_cast<py::ssize_t>(m.cols)});
    std::copy(m.data.begin(), m.data.end(), out.mutable_data());
    return out;
}

OperatorMatrix array_to_matrix(const DoubleArray& a, GridTag dom, GridTag cod) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    OperatorMatrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                     dom, cod);
    std::copy(a.data(), a.data() + a.size(), m.data.begin());
    return m;
}

std::vector<double> to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    return std::vector<double>(a.data(), a.data() + a.shape(0));
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

void maybe_warn(const std::string& w) {
    if (!w.empty()) py::module_::import("warnings").attr("warn")(w);
}

Signal signal_from_array(const DoubleArray& samples) {
    Signal s;
    s.kind = SignalKind::time;
    s.samples = to_vector(samples);
    s.abscissa.assign(s.samples.size(), 0.0);
    return s;
}

} // namespace

PYBIND11_MODULE(_mpi1d, m) {
    m.doc() = "Dense 1-D magnetic-particle-imaging operators, spectra, and reconstruction";

    py::class_<PhysicalParams>(m, "PhysicalParams",
                               "Scanner model: drive amplitude A, gradient G, period T, "
                               "signal scale a, saturation steepness beta.")
        .def(py::init([](double A, double G, double T, double a, double beta) {
                 PhysicalParams p{A, G, T, a, beta};
                 p.validate();
                 return p;
             }),
             py::arg("A") = 20.0, py::arg("G") = 1.0, py::arg("T") = 1.0, py::arg("a") = 1.0,
             py::arg("beta") = 1.0)
        .def_readwrite("A", &PhysicalParams::A)
        .def_readwrite("G", &PhysicalParams::G)
        .def_readwrite("T", &PhysicalParams::T)
        .def_readwrite("a", &PhysicalParams::a)
        .def_readwrite("beta", &PhysicalParams::beta)
        .def("validate", &PhysicalParams::validate)
        .def("fov_half_width", &PhysicalParams::fov_half_width)
        .def("__repr__", [](const PhysicalParams& p) {
            return "PhysicalParams(A=" + csv::format_double(p.A) +
                   ", G=" + csv::format_double(p.G) + ", T=" + csv::format_double(p.T) +
                   ", a=" + csv::format_double(p.a) + ", beta=" + csv::format_double(p.beta) +
                   ")";
        });

    // scalar physics
    m.def("langevin", &langevin, py::arg("x"), "Langevin function coth(x) - 1/x.");
    m.def("langevin_deriv", &langevin_deriv, py::arg("x"), "L'(x) with L'(0) = 1/3.");
    m.def("langevin_deriv_fourier", &langevin_deriv_fourier, py::arg("omega"),
          "Unitary-convention Fourier transform of L'.");
    m.def("kernel_mg_deriv", &kernel_mg_deriv, py::arg("x"), py::arg("params"),
          "Convolution kernel a*beta*G*L'(beta*G*x).");
    m.def("kernel_fourier", &kernel_fourier, py::arg("omega"), py::arg("params"));
    m.def("elliptic_k", &elliptic_k, py::arg("t"),
          "Complete elliptic integral of the first kind, modulus convention.");
    m.def("widom_rate", &widom_rate, py::arg("beta_times_a"),
          "Predicted per-index decay rate pi*K(sech(bA))/K(tanh(bA)) of ln sigma_n.");

    // grids
    m.def(
        "fov_points",
        [](std::size_t n_space, const PhysicalParams& p) {
            return vector_to_array(SpaceGrid::fov(n_space, p).points());
        },
        py::arg("n_space"), py::arg("params"), "Nodes of the FOV grid [-A/G, A/G].");
    m.def(
        "fov_weights",
        [](std::size_t n_space, const PhysicalParams& p) {
            return vector_to_array(SpaceGrid::fov(n_space, p).weights());
        },
        py::arg("n_space"), py::arg("params"), "Trapezoid quadrature weights on the FOV grid.");

    // dense system operators on the FOV grid
    m.def(
        "s_conv",
        [](std::size_t n_space, const PhysicalParams& p, bool symmetrized) {
            return matrix_to_array(build_s_conv(SpaceGrid::fov(n_space, p), p, symmetrized));
        },
        py::arg("n_space"), py::arg("params"), py::arg("symmetrized") = true,
        "Convolution operator on the FOV grid (symmetrized by default).");
    m.def(
        "s_time",
        [](std::size_t n_space, const PhysicalParams& p, const std::string& trajectory,
           std::size_t oversample, const std::string& window) {
            const SpaceGrid g = SpaceGrid::fov(n_space, p);
            const TimeGrid tg(oversample, n_space, window_from_string(window), p.T);
            return matrix_to_array(build_s_time(trajectory_from_string(trajectory), tg, g, p));
        },
        py::arg("n_space"), py::arg("params"), py::arg("trajectory") = "cosine",
        py::arg("oversample") = 4, py::arg("window") = "half",
        "Time-domain system operator (oversample*n_space samples).");
    m.def(
        "s_freq",
        [](std::size_t n_space, const PhysicalParams& p, std::size_t n_max,
           const std::string& trajectory, std::size_t oversample, const std::string& window,
           const std::string& path) {
            const SpaceGrid g = SpaceGrid::fov(n_space, p);
            const TimeGrid tg(oversample, n_space, window_from_string(window), p.T);
            FreqPath fp;
            if (path == "fft") {
                fp = FreqPath::fft_time;
            } else if (path == "chebyshev") {
                fp = FreqPath::chebyshev;
            } else {
                throw std::invalid_argument("unknown path '" + path +
                                            "' (expected fft or chebyshev)");
            }
            return matrix_to_array(
                build_s_freq(trajectory_from_string(trajectory), tg, g, n_max, p, fp));
        },
        py::arg("n_space"), py::arg("params"), py::arg("n_max"),
        py::arg("trajectory") = "cosine", py::arg("oversample") = 4, py::arg("window") = "half",
        py::arg("path") = "fft", "Frequency-domain system operator (harmonics 1..n_max).");

    // spectra
    m.def(
        "singular_values",
        [](const DoubleArray& a) {
            if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
            return vector_to_array(linalg::singular_values(static_cast<std::size_t>(a.shape(0)),
                                                           static_cast<std::size_t>(a.shape(1)),
                                                           a.data()));
        },
        py::arg("matrix"), "Singular values, descending.");
    m.def(
        "fit_decay_rate",
        [](const DoubleArray& sigmas, std::size_t n0, std::size_t n1) {
            SpectrumReport rep;
            rep.sigmas = to_vector(sigmas);
            const FitResult f = mpi1d::fit_decay_rate(rep, n0, n1);
            return py::make_tuple(f.slope, f.intercept, f.residual);
        },
        py::arg("sigmas"), py::arg("n0"), py::arg("n1"),
        "OLS fit of ln sigma_n over the 1-based window [n0, n1]; "
        "returns (slope, intercept, residual).");

    // imaging
    m.def(
        "phantom",
        [](const std::string& kind,
           const std::vector<std::tuple<double, double, double>>& bumps, std::size_t n_space,
           const PhysicalParams& p) {
            std::vector<BumpSpec> bs;
            bs.reserve(bumps.size());
            for (const auto& [center, width, amplitude] : bumps) {
                bs.push_back({center, width, amplitude});
            }
            const Phantom ph =
                make_phantom(phantom_kind_from_string(kind), bs, SpaceGrid::fov(n_space, p));
            maybe_warn(ph.warning);
            return vector_to_array(ph.values);
        },
        py::arg("kind"), py::arg("bumps"), py::arg("n_space"), py::arg("params"),
        "Sample a phantom ('gaussian', 'rect', 'two_bumps') from (center, width, amplitude) "
        "bumps onto the FOV grid.");
    m.def(
        "add_noise",
        [](const DoubleArray& samples, double sigma, std::uint64_t seed) {
            return vector_to_array(mpi1d::add_noise(signal_from_array(samples), sigma, seed)
                                       .samples);
        },
        py::arg("samples"), py::arg("sigma"), py::arg("seed"),
        "Gaussian noise of sd sigma*max|samples|, reproducible for a fixed seed.");
    m.def(
        "reconstruct_tsvd",
        [](const DoubleArray& op, const DoubleArray& signal, std::size_t k) {
            const OperatorMatrix om = array_to_matrix(op, GridTag::fov, GridTag::time);
            const SpaceGrid g(om.cols, -1.0, 1.0); // only the node count matters here
            const Phantom ph = mpi1d::reconstruct_tsvd(om, signal_from_array(signal), k, g);
            maybe_warn(ph.warning);
            return vector_to_array(ph.values);
        },
        py::arg("op"), py::arg("signal"), py::arg("k"),
        "Truncated-SVD reconstruction at rank k.");
    m.def(
        "reconstruct_tikhonov",
        [](const DoubleArray& op, const DoubleArray& signal, double lam) {
            const OperatorMatrix om = array_to_matrix(op, GridTag::fov, GridTag::time);
            const SpaceGrid g(om.cols, -1.0, 1.0);
            const Phantom ph = mpi1d::reconstruct_tikhonov(om, signal_from_array(signal), lam, g);
            maybe_warn(ph.warning);
            return vector_to_array(ph.values);
        },
        py::arg("op"), py::arg("signal"), py::arg("lam"),
        "Tikhonov reconstruction with filter factors sigma/(sigma^2 + lam).");
    m.def(
        "rel_error",
        [](const DoubleArray& c, const DoubleArray& c_hat, const PhysicalParams& p) {
            Phantom a, b;
            a.grid = b.grid = SpaceGrid::fov(static_cast<std::size_t>(c.shape(0)), p);
            a.values = to_vector(c);
            b.values = to_vector(c_hat);
            return mpi1d::rel_error(a, b);
        },
        py::arg("c"), py::arg("c_hat"), py::arg("params"),
        "Quadrature-weighted relative L2 error on the FOV grid.");

    // matrix file format
    m.def(
        "save_matrix",
        [](const DoubleArray& a, const std::string& path, const std::string& domain,
           const std::string& codomain) {
            write_matrix(array_to_matrix(a, grid_tag_from_string(domain),
                                         grid_tag_from_string(codomain)),
                         path);
        },
        py::arg("matrix"), py::arg("path"), py::arg("domain") = "fov",
        py::arg("codomain") = "fov", "Write the binary matrix format used by the CLI.");
    m.def(
        "load_matrix",
        [](const std::string& path) {
            const OperatorMatrix om = read_matrix(path);
            return py::make_tuple(matrix_to_array(om), to_string(om.domain),
                                  to_string(om.codomain));
        },
        py::arg("path"), "Read the binary matrix format; returns (array, domain, codomain).");
}

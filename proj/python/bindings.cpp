#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "measurelab/extension.hpp"
#include "measurelab/fourier.hpp"
#include "measurelab/identities.hpp"
#include "measurelab/io.hpp"
#include "measurelab/kernels.hpp"
#include "measurelab/support.hpp"

namespace py = pybind11;
using namespace measurelab;

namespace {

QuadratureSpec quad(double radius, std::size_t points, double tol) {
    QuadratureSpec q{radius, points, tol, QuadratureSpec{}.max_refinements};
    q.validate();
    return q;
}

FiniteMeasure parse_measure(const std::string& text) { return io::measure_from_json(io::Json::parse(text)); }

SupportSet parse_support(const std::string& text) { return io::support_from_json(io::Json::parse(text)); }

py::tuple result(const IntegrationResult& r) { return py::make_tuple(r.value, r.error_estimate, r.converged); }

// Python callables become bounded functions; the GIL is released around the
// computation and retaken for each evaluation.
BoundedFunction python_function(std::size_t dim, py::function f, double bound, double frequency) {
    BoundedFunction g;
    g.dim = dim;
    g.bound = bound;
    g.frequency = frequency;
    auto holder = std::make_shared<py::function>(std::move(f));
    g.evaluate = [holder](std::span<const double> x) {
        py::gil_scoped_acquire gil;
        return (*holder)(std::vector<double>(x.begin(), x.end())).cast<Complex>();
    };
    return g;
}

template <typename F>
auto released(F&& f) {
    py::gil_scoped_release nogil;
    return f();
}

#define QUAD_ARGS py::arg("radius") = 8.0, py::arg("points") = 129, py::arg("tol") = 1e-10

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite complex measures: transforms, convolutions, tube domains";

    py::register_exception<MeasureError>(m, "MeasureError", PyExc_ValueError);

    py::class_<FiniteMeasure>(m, "Measure")
        .def_static("from_json", &parse_measure, py::arg("text"))
        .def("to_json", [](const FiniteMeasure& mu) { return io::dump(io::measure_to_json(mu)); })
        .def_property_readonly("dim", &FiniteMeasure::dim)
        .def_property_readonly("is_atomic", &FiniteMeasure::is_atomic)
        .def("canonical", &FiniteMeasure::canonical)
        .def("__eq__", [](const FiniteMeasure& a, const FiniteMeasure& b) { return a == b; });

    m.def("gauss_G", [](double alpha, std::vector<Complex> z) { return gauss_G(alpha, ComplexVector(std::move(z))); });
    m.def("gauss_W", [](double alpha, std::vector<Complex> z) { return gauss_W(alpha, ComplexVector(std::move(z))); });
    m.def("e_kernel", [](std::vector<Complex> zeta, std::vector<Complex> z) {
        return e_kernel(ComplexVector(std::move(zeta)), ComplexVector(std::move(z)));
    });

    m.def(
        "total_variation_norm",
        [](const FiniteMeasure& mu, double r, std::size_t n, double tol) {
            return result(released([&] { return total_variation_norm(mu, quad(r, n, tol)); }));
        },
        py::arg("mu"), QUAD_ARGS);
    m.def(
        "apply",
        [](const FiniteMeasure& mu, py::function f, double bound, double frequency, double r, std::size_t n, double tol) {
            const BoundedFunction g = python_function(mu.dim(), std::move(f), bound, frequency);
            return result(released([&] { return apply(mu, g, quad(r, n, tol)); }));
        },
        py::arg("mu"), py::arg("f"), py::arg("bound"), py::arg("frequency") = 0.0, QUAD_ARGS);
    m.def("add", &add);
    m.def("scale", &scale);
    m.def("product", &product);
    m.def("convolve", &convolve_measures);
    m.def("compact_approximation", &compact_approximation);

    m.def(
        "fourier",
        [](const FiniteMeasure& mu, std::vector<double> xi, double r, std::size_t n, double tol) {
            return result(released([&] { return fourier(mu, xi, quad(r, n, tol)); }));
        },
        py::arg("mu"), py::arg("xi"), QUAD_ARGS);
    m.def(
        "fourier_grid",
        [](const FiniteMeasure& mu, const std::string& grid, double r, std::size_t n, double tol) {
            SpectrumGrid s;
            {
                py::gil_scoped_release nogil;
                s = fourier_grid(mu, parse_grid_spec(grid), quad(r, n, tol));
            }
            return io::dump(io::spectrum_to_json(s));
        },
        py::arg("mu"), py::arg("grid"), QUAD_ARGS, "Spectrum JSON (grid schema with \"space\": \"frequency\").");
    m.def(
        "fourier_complex",
        [](const FiniteMeasure& mu, std::vector<Complex> zeta, std::optional<std::string> support, double r, std::size_t n,
           double tol) {
            const ComplexVector z(std::move(zeta));
            const std::optional<SupportSet> a = support ? std::optional(parse_support(*support)) : std::nullopt;
            return result(released([&] { return a ? fourier_complex(mu, z, *a, quad(r, n, tol)) : fourier_complex(mu, z, quad(r, n, tol)); }));
        },
        py::arg("mu"), py::arg("zeta"), py::arg("support") = py::none(), QUAD_ARGS);
    m.def(
        "mollify",
        [](const FiniteMeasure& mu, double alpha, std::vector<double> x, double r, std::size_t n, double tol) {
            return result(released([&] { return mollify(mu, alpha, x, quad(r, n, tol)); }));
        },
        py::arg("mu"), py::arg("alpha"), py::arg("x"), QUAD_ARGS);
    m.def(
        "mollified_inversion",
        [](const FiniteMeasure& mu, double alpha, std::vector<double> x, double r, std::size_t n, double tol) {
            const QuadratureSpec q = quad(r, n, tol);
            return result(released([&] {
                const SpectrumSource s = mu.is_atomic() ? SpectrumSource::of_atoms(mu) : SpectrumSource::of_measure(mu, q);
                return mollified_inversion(s, alpha, x, q);
            }));
        },
        py::arg("mu"), py::arg("alpha"), py::arg("x"), QUAD_ARGS);
    m.def(
        "invert",
        [](const std::string& spectrum, std::vector<double> x, double r, std::size_t n, double tol) {
            const SpectrumSource s = SpectrumSource::of_grid(io::spectrum_from_json(io::Json::parse(spectrum)));
            return result(released([&] { return invert(s, x, quad(r, n, tol)); }));
        },
        py::arg("spectrum"), py::arg("x"), QUAD_ARGS);
    m.def(
        "half_plane_extension",
        [](const std::string& spectrum, Complex z, double r, std::size_t n, double tol) {
            const SpectrumSource s = SpectrumSource::of_grid(io::spectrum_from_json(io::Json::parse(spectrum)));
            return result(released([&] { return half_plane_extension(s, z, quad(r, n, tol)); }));
        },
        py::arg("spectrum"), py::arg("z"), QUAD_ARGS);

    m.def("dual_cone", [](const std::string& support) { return dual_cone(parse_support(support)).canonical().normals; });
    m.def("growth_indicator", [](const std::string& support, std::vector<double> eta) {
        const GrowthIndicator g = growth_indicator(parse_support(support), eta);
        return g.value();
    });
    m.def("tube_membership", [](const std::string& support, std::vector<Complex> zeta) {
        return tube_membership(parse_support(support), ComplexVector(std::move(zeta)));
    });

    m.def("identity_names", [] {
        std::vector<std::string> names;
        for (Identity id : kAllIdentities) names.emplace_back(identity_name(id));
        return names;
    });
    m.def(
        "run_identity",
        [](const std::string& name, const std::string& payload, std::optional<double> tolerance) {
            const Identity id = parse_identity(name);
            IdentityCase c{id, "python", io::Json::parse(payload), tolerance.value_or(default_tolerance(id)), 0, false};
            return released([&] { return to_json_line(run_identity(c)); });
        },
        py::arg("name"), py::arg("payload"), py::arg("tolerance") = py::none());
    m.def(
        "verify",
        [](std::uint64_t seed, const std::string& profile) {
            const SuiteReport s = released([&] { return run_suite(seed, TolerancesProfile::named(profile)); });
            return py::make_tuple(to_json_lines(s), s.pinned_pass);
        },
        py::arg("seed") = 0, py::arg("profile") = "default");
}

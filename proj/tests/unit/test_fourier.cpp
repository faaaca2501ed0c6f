#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "measurelab/fourier.hpp"
#include "measurelab/kernels.hpp"
#include "measurelab/support.hpp"

using namespace measurelab;
using std::numbers::pi;

namespace {

FiniteMeasure atoms1(std::initializer_list<std::pair<double, Complex>> list) {
    std::vector<Atom> a;
    for (const auto& [p, w] : list) a.push_back(Atom{{p}, w});
    return FiniteMeasure(1, std::move(a));
}

const double inf = std::numeric_limits<double>::infinity();

SpectrumSource half_line() {
    return SpectrumSource::closed_form(
        1, [](std::span<const double> xi) { return Complex(xi[0] >= 0.0 ? std::exp(-xi[0]) : 0.0); }, 1.0,
        Box{{0.0}, {inf}}, 0.0, 1.0);
}

// h(x) = 1 / (1 - 2 pi i x), the inverse transform of exp(-xi) on xi >= 0
Complex half_line_oracle(double x) { return 1.0 / Complex(1.0, -2 * pi * x); }

}  // namespace

TEST_CASE("transforms of point masses") {
    const auto delta = atoms1({{0.0, 1.0}});
    const auto pair = atoms1({{-1.0, 0.5}, {1.0, 0.5}});
    for (double xi : {-1.3, 0.0, 0.2, 2.75}) {
        const double p[] = {xi};
        CHECK(fourier(delta, p).value == Complex(1.0));
        CHECK(std::abs(fourier(pair, p).value - std::cos(2 * pi * xi)) < 1e-14);
        CHECK(fourier(pair, p).error_estimate == 0.0);
    }
}

TEST_CASE("Gaussian pair") {
    QuadratureSpec q;
    q.target_tol = 1e-10;
    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto g = FiniteMeasure::from_density(DensityPart::gaussian_G(1, alpha));
        for (double xi : {-0.4, 0.0, 0.1, 0.3}) {
            const double p[] = {xi};
            const auto r = fourier(g, p, q);
            CHECK(r.converged);
            CHECK(std::abs(r.value - gauss_W(alpha, p)) <= 1e-8);
        }
    }
}

TEST_CASE("transform grids") {
    const UniformGrid g(Box::cube(1, 3.0), {13});
    const auto ones = fourier_grid(atoms1({{0.0, 1.0}}), g);
    for (const auto& v : ones.values) CHECK(v == Complex(1.0));
    const auto zeros = fourier_grid(atoms1({{0.0, 1.0}, {0.0, -1.0}}), g);
    for (const auto& v : zeros.values) CHECK(v == Complex(0.0));

    // sampled W_0.5 transforms to G_0.5
    UniformGrid x(Box::cube(1, 8.0), {513});
    std::vector<Complex> s(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) s[k] = gauss_W(0.5, x.node(k));
    const auto w = FiniteMeasure::from_density(DensityPart::grid(x, s));
    const UniformGrid fg(Box::cube(1, 1.0), {21});
    const auto spec = fourier_grid(w, fg);
    for (std::size_t k = 0; k < fg.size(); ++k) CHECK(std::abs(spec.values[k] - gauss_G(0.5, fg.node(k))) < 1e-7);
    CHECK(spec.sup_abs() <= total_variation_norm(w).value.real() + 1e-12);
}

TEST_CASE("complex frequencies") {
    CHECK(std::abs(fourier_complex(atoms1({{0.0, 1.0}}), ComplexVector({Complex(0.3, -2.0)})).value - 1.0) < 1e-15);
    const Complex zeta(0.7, 0.2);
    CHECK(std::abs(fourier_complex(atoms1({{1.5, 1.0}}), ComplexVector({zeta})).value -
                   std::exp(Complex(0, -2 * pi) * zeta * 1.5)) < 1e-13);
    CHECK(std::abs(fourier_complex(atoms1({{1.0, 1.0}}), ComplexVector({Complex(0, 1)})).value - std::exp(2 * pi)) <
          1e-12 * std::exp(2 * pi));

    // the Gaussian pair continues to complex frequencies
    QuadratureSpec q;
    q.target_tol = 1e-10;
    const auto mu = FiniteMeasure::from_density(DensityPart::gaussian_G(1, 1.0));
    const auto z = ComplexVector({Complex(0.1, 0.05)});
    const auto r = fourier_complex(mu, z, q);
    CHECK(std::abs(r.value - gauss_W(1.0, z)) < 1e-8);

    // support in x >= 0 forces Im zeta <= 0
    SupportSet half;
    half.dim = 1;
    half.vertices = {{0.0}};
    half.generators = {{1.0}};
    CHECK(std::abs(fourier_complex(atoms1({{2.0, 1.0}}), ComplexVector({Complex(0.0, -1.0)}), half).value - std::exp(-4 * pi)) <
          1e-15);
    try {
        fourier_complex(atoms1({{2.0, 1.0}}), ComplexVector({Complex(0.0, 1.0)}), half);
        FAIL("expected an outside-tube error");
    } catch (const MeasureError& e) {
        CHECK(e.kind() == ErrorKind::outside_tube_domain);
    }
}

TEST_CASE("mollification") {
    for (double x : {0.0, 0.4, -1.1}) {
        const double p[] = {x};
        CHECK(std::abs(mollify(atoms1({{0.0, 1.0}}), 0.3, p).value - gauss_W(0.3, p)) < 1e-16);
        const double shifted[] = {x - 0.5};
        CHECK(std::abs(mollify(atoms1({{0.5, 1.0}}), 0.3, p).value - gauss_W(0.3, shifted)) < 1e-16);
    }
    const double zero[] = {0.0};
    const double expected = std::exp(-0.25) / std::sqrt(4 * pi);
    CHECK(std::abs(mollify(atoms1({{-1.0, 0.5}, {1.0, 0.5}}), 1.0, zero).value - expected) < 1e-15);
    CHECK_THROWS_AS(mollify(atoms1({{0.0, 1.0}}), 0.0, zero), MeasureError);
}

TEST_CASE("mollified inversion") {
    QuadratureSpec q;
    q.target_tol = 1e-10;
    for (double alpha : {1.0, 0.1}) {
        for (double x : {0.0, 0.35, -0.8}) {
            const double p[] = {x};
            const auto r = mollified_inversion(SpectrumSource::of_atoms(atoms1({{0.0, 1.0}})), alpha, p, q);
            CHECK(std::abs(r.value - gauss_W(alpha, p)) < 1e-8);
        }
    }
    const auto pair = atoms1({{-1.0, 0.5}, {1.0, 0.5}});
    const double zero[] = {0.0};
    const auto r = mollified_inversion(SpectrumSource::of_atoms(pair), 1.0, zero, q);
    CHECK(std::abs(r.value - mollify(pair, 1.0, zero).value) < 1e-7);
    CHECK(std::abs(r.value.imag()) < 1e-12);
}

TEST_CASE("inversion of integrable spectra") {
    QuadratureSpec q;
    q.target_tol = 1e-10;
    const auto g1 = SpectrumSource::closed_form(
        1, [](std::span<const double> xi) { return Complex(gauss_G(1.0, xi)); }, 1.0, Box::whole_space(1), 0.0);
    for (double x : {0.0, 0.5, 1.7, -2.9}) {
        const double p[] = {x};
        CHECK(std::abs(invert(g1, p, q).value - gauss_W(1.0, p)) < 1e-8);
    }

    const auto one = SpectrumSource::of_atoms(atoms1({{0.0, 1.0}}));
    CHECK_FALSE(check_integrability(one, q).integrable);
    const double zero[] = {0.0};
    try {
        invert(one, zero, q);
        FAIL("expected a non-integrable spectrum error");
    } catch (const MeasureError& e) {
        CHECK(e.kind() == ErrorKind::non_integrable_spectrum);
    }

    const auto s = half_line();
    CHECK(check_integrability(s, q).integrable);
    for (double x : {-1.0, -0.25, 0.0, 0.3, 2.0}) {
        const double p[] = {x};
        CHECK(std::abs(invert(s, p, q).value - half_line_oracle(x)) < 1e-7);
    }
}

TEST_CASE("positive-definite densities") {
    // grids span nine widths of the transform on each side
    const UniformGrid grid(Box::cube(1, 9.0 / (2 * pi * std::sqrt(2.0))), {73});
    const std::vector<double> alphas{1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8, 1e-10};
    QuadratureSpec q;
    q.target_tol = 1e-10;

    const auto w = positive_definite_check(DensityPart::gaussian_W(1, 1.0), alphas, grid, q);
    CHECK(w.monotone);
    CHECK(w.origin_value == doctest::Approx(1.0 / std::sqrt(4 * pi)).epsilon(1e-14));
    CHECK(std::abs(w.values.back() - 1.0 / std::sqrt(4 * pi)) < 1e-7);
    CHECK(w.limit_residual < 1e-7);

    const UniformGrid wide(Box::cube(1, 9.0 * std::sqrt(2.0)), {73});
    const auto g = positive_definite_check(DensityPart::gaussian_G(1, 1.0), alphas, wide, q);
    CHECK(g.monotone);
    CHECK(std::abs(g.values.back() - 1.0) < 1e-7);
    for (std::size_t k = 1; k < g.values.size(); ++k) CHECK(g.values[k] >= g.values[k - 1] - 1e-12);

    // transform cos(2 pi xi) G_1(xi) belongs to the density (W_1(x-1) + W_1(x+1)) / 2
    DensityPart cosine = DensityPart::gaussian_W(1, 1.0).with_translates({Translate{{1.0}, 0.5}, Translate{{-1.0}, 0.5}});
    try {
        positive_definite_check(cosine, alphas, grid, q);
        FAIL("expected a not-positive-definite error");
    } catch (const MeasureError& e) {
        CHECK(e.kind() == ErrorKind::not_positive_definite);
    }
}

TEST_CASE("convolution theorem and eigenrelation on atoms") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto random = [&](std::size_t n) {
        std::vector<Atom> a;
        for (std::size_t k = 0; k < n; ++k) a.push_back(Atom{{u(rng)}, Complex(u(rng), u(rng))});
        return FiniteMeasure(1, std::move(a));
    };
    for (int k = 0; k < 25; ++k) {
        const auto mu = random(4), nu = random(3);
        const double xi[] = {u(rng)};
        const Complex lhs = fourier(convolve_measures(mu, nu), xi).value;
        const Complex rhs = fourier(mu, xi).value * fourier(nu, xi).value;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));

        const double x[] = {u(rng)};
        const double minus[] = {-xi[0]};
        const Complex conv = convolve_with_function(mu, BoundedFunction::exponential({xi[0]}), x).value;
        CHECK(std::abs(conv - fourier(mu, minus).value * e_kernel(xi, x)) < 1e-10);
    }
}

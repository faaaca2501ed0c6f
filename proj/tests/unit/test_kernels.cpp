#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "measurelab/kernels.hpp"

using namespace measurelab;
using std::numbers::pi;

namespace {

ComplexVector cv(std::initializer_list<Complex> c) { return ComplexVector(std::vector<Complex>(c)); }

}  // namespace

TEST_CASE("e_kernel closed forms") {
    CHECK(std::abs(e_kernel(cv({0.0}), cv({3.7})) - 1.0) < 1e-15);
    CHECK(std::abs(e_kernel(cv({1.0}), cv({1.0})) - 1.0) < 1e-15);
    CHECK(std::abs(e_kernel(cv({0.25}), cv({1.0})) - Complex(0.0, -1.0)) < 1e-15);

    // modulus exp(2 pi eta . x) for zeta = xi + i eta, x real
    const double xi = 0.3, eta = -0.7, x = 1.9;
    CHECK(std::abs(std::abs(e_kernel(cv({{xi, eta}}), cv({x}))) - std::exp(2 * pi * eta * x)) < 1e-13);
    // real overload agrees with an independent phase
    const double a[] = {0.4, -1.2};
    const double b[] = {2.5, 0.75};
    const double t = a[0] * b[0] + a[1] * b[1];
    CHECK(std::abs(e_kernel(a, b) - Complex(std::cos(2 * pi * t), -std::sin(2 * pi * t))) < 1e-14);
}

TEST_CASE("e_kernel is multiplicative in zeta") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const auto z1 = cv({{u(rng), u(rng) * 0.2}, {u(rng), u(rng) * 0.2}});
        const auto z2 = cv({{u(rng), u(rng) * 0.2}, {u(rng), u(rng) * 0.2}});
        const auto x = cv({u(rng), u(rng)});
        const Complex lhs = e_kernel(z1 + z2, x);
        const Complex rhs = e_kernel(z1, x) * e_kernel(z2, x);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("Gauss-Weierstrass kernels") {
    CHECK(std::abs(gauss_G(1.0, cv({0.0})) - 1.0) < 1e-15);
    CHECK(std::abs(gauss_G(1.0, cv({1.0})) - std::exp(-4 * pi * pi)) < 1e-30);
    CHECK(std::abs(gauss_G(1.0, cv({{0.0, 1.0}})) - std::exp(4 * pi * pi)) <= 1e-12 * std::exp(4 * pi * pi));

    CHECK(std::abs(gauss_W(1.0 / (4 * pi), cv({0.0})) - 1.0) < 1e-15);
    CHECK(std::abs(gauss_W(1.0, cv({0.0})) - 1.0 / std::sqrt(4 * pi)) < 1e-15);
    CHECK(std::abs(gauss_W(1.0, cv({0.0, 0.0})) - 1.0 / (4 * pi)) < 1e-15);

    const double x[] = {0.3, -0.4};
    CHECK(gauss_W(0.5, x) == doctest::Approx(std::exp(-0.25 / 2.0) / (2 * pi)).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_G(0.0, cv({0.0})), MeasureError);
    CHECK_THROWS_AS(gauss_W(-1.0, cv({0.0})), MeasureError);
}

TEST_CASE("G_alpha equals a multiple of W_beta") {
    for (double alpha : {0.1, 1.0, 3.0}) {
        const double beta = gauss_G_dual_alpha(alpha);
        CHECK(beta == doctest::Approx(1.0 / (16 * pi * pi * alpha)));
        for (double xv : {0.0, 0.1, 0.37}) {
            const double x[] = {xv, -xv};
            CHECK(gauss_G(alpha, x) == doctest::Approx(gauss_G_as_W_factor(alpha, 2) * gauss_W(beta, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("kernels satisfy Cauchy-Riemann along complex lines") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 20; ++k) {
        const Complex z0(u(rng), u(rng));
        auto fg = [](Complex z) { return gauss_G(0.3, cv({z})); };
        auto fw = [](Complex z) { return gauss_W(0.3, cv({z})); };
        for (auto f : {+fg, +fw}) {
            double prev = 0.0;
            for (double h : {1e-2, 5e-3}) {
                const Complex i(0, 1);
                const Complex dx = (f(z0 + h) - f(z0 - h)) / (2 * h);
                const Complex dy = (f(z0 + i * h) - f(z0 - i * h)) / (2 * h);
                const double r = std::abs(dy - i * dx);
                if (prev > 0.0) CHECK(r < prev / 3.0);
                prev = r;
            }
        }
    }
}

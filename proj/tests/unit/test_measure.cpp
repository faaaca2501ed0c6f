#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "measurelab/kernels.hpp"
#include "measurelab/measure.hpp"

using namespace measurelab;
using std::numbers::pi;

namespace {

FiniteMeasure atoms1(std::initializer_list<std::pair<double, Complex>> list) {
    std::vector<Atom> a;
    for (const auto& [p, w] : list) a.push_back(Atom{{p}, w});
    return FiniteMeasure(1, std::move(a));
}

BoundedFunction fn(std::function<Complex(double)> f, double bound) {
    BoundedFunction g;
    g.dim = 1;
    g.bound = bound;
    g.evaluate = [f](std::span<const double> x) { return f(x[0]); };
    return g;
}

FiniteMeasure sampled_W(double alpha, double radius, std::size_t points) {
    UniformGrid g(Box::cube(1, radius), {points});
    std::vector<Complex> s(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) s[k] = gauss_W(alpha, g.node(k));
    return FiniteMeasure::from_density(DensityPart::grid(std::move(g), std::move(s)));
}

bool same_atoms(const FiniteMeasure& a, const FiniteMeasure& b, double tol) {
    const auto ca = a.canonical(), cb = b.canonical();
    if (ca.atoms().size() != cb.atoms().size()) return false;
    for (std::size_t k = 0; k < ca.atoms().size(); ++k) {
        if (ca.atoms()[k].point != cb.atoms()[k].point) return false;
        if (std::abs(ca.atoms()[k].weight - cb.atoms()[k].weight) > tol) return false;
    }
    return true;
}

FiniteMeasure random_atomic(std::mt19937_64& rng, std::size_t count) {
    std::uniform_int_distribution<int> pos(-4, 4);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    std::vector<Atom> a;
    for (std::size_t k = 0; k < count; ++k) a.push_back(Atom{{0.5 * pos(rng)}, Complex(w(rng), w(rng))});
    return FiniteMeasure(1, std::move(a));
}

}  // namespace

TEST_CASE("total variation norm") {
    const auto r = total_variation_norm(atoms1({{0.0, 1.0}, {1.0, Complex(0, -2)}}));
    CHECK(r.value.real() == 3.0);
    CHECK(r.error_estimate == 0.0);
    CHECK(total_variation_norm(FiniteMeasure::zero(2)).value == Complex(0.0));

    QuadratureSpec q;
    q.target_tol = 1e-10;
    const auto w = total_variation_norm(FiniteMeasure::from_density(DensityPart::gaussian_W(1, 1.0)), q);
    CHECK(w.converged);
    CHECK(std::abs(w.value.real() - 1.0) < 1e-9);
    // G_alpha has mass (4 pi alpha)^{-n/2}
    const auto g = total_variation_norm(FiniteMeasure::from_density(DensityPart::gaussian_G(2, 0.3)), q);
    CHECK(std::abs(g.value.real() - 1.0 / (4 * pi * 0.3)) < 1e-9);
}

TEST_CASE("pairing with bounded functions") {
    CHECK(apply(atoms1({{0.0, 1.0}}), BoundedFunction::constant(1, 1.0)).value == Complex(1.0));
    CHECK(std::abs(apply(atoms1({{1.0, 1.0}, {-1.0, 1.0}}), fn([](double x) { return x; }, 1.0)).value) == 0.0);

    QuadratureSpec q;
    q.target_tol = 1e-11;
    const auto r = apply(FiniteMeasure::from_density(DensityPart::gaussian_W(1, 1.0)), BoundedFunction::exponential({1.0}), q);
    CHECK(std::abs(r.value - std::exp(-4 * pi * pi)) < 1e-9);

    CHECK_THROWS_AS(apply(atoms1({{0.0, 1.0}}), BoundedFunction::constant(2, 1.0)), MeasureError);
    CHECK_THROWS_AS(apply(atoms1({{3.0, 1.0}}), fn([](double x) { return x; }, 1.0)), MeasureError);

    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const auto mu = random_atomic(rng, 6);
        const auto f = BoundedFunction::gauss_W(1, 0.2);
        CHECK(std::abs(apply(mu, f).value) <= total_variation_norm(mu).value.real() * f.bound + 1e-14);
    }
}

TEST_CASE("modulation") {
    std::mt19937_64 rng(9);
    const auto mu = random_atomic(rng, 5);
    CHECK(modulate(mu, BoundedFunction::constant(1, 1.0)) == mu);
    const auto d = FiniteMeasure(1, mu.atoms(), DensityPart::gaussian_W(1, 0.5));
    CHECK(modulate(d, BoundedFunction::constant(1, 1.0)) == d);

    const auto sq = modulate(atoms1({{2.0, 3.0}}), fn([](double x) { return x * x; }, 4.0));
    CHECK(same_atoms(sq, atoms1({{2.0, 12.0}}), 0.0));

    const auto cut = modulate(atoms1({{0.0, 1.0}, {5.0, 1.0}}), BoundedFunction::smooth_cutoff(1, 1.0, 2.0));
    CHECK(same_atoms(cut, atoms1({{0.0, 1.0}}), 0.0));
    CHECK(total_variation_norm(cut).value.real() == 1.0);

    // preset modulation keeps the pairing within the quadrature tolerance
    QuadratureSpec q;
    const auto phi = BoundedFunction::exponential({0.3});
    const auto m = modulate(FiniteMeasure::from_density(DensityPart::gaussian_W(1, 1.0)), phi, q);
    const Complex direct = apply(m, BoundedFunction::constant(1, 1.0), q).value;
    CHECK(std::abs(direct - std::exp(-4 * pi * pi * 0.09)) < 1e-8);
    CHECK(total_variation_norm(m, q).value.real() <= 1.0 + 1e-8);
}

TEST_CASE("product measures") {
    const auto ab = product(atoms1({{0.5, 1.0}}), atoms1({{-2.0, 1.0}}));
    REQUIRE(ab.dim() == 2);
    REQUIRE(ab.atoms().size() == 1);
    CHECK(ab.atoms()[0].point == RealVector{0.5, -2.0});

    const auto mu = atoms1({{0.0, 1.0}, {1.0, Complex(0, 2)}});
    const auto nu = atoms1({{3.0, -2.0}});
    CHECK(total_variation_norm(product(mu, nu)).value.real() == 6.0);

    const auto p = product(atoms1({{0.0, 1.0}, {1.0, -1.0}}), atoms1({{2.0, Complex(0, 1)}})).canonical();
    REQUIRE(p.atoms().size() == 2);
    CHECK(p.atoms()[0].point == RealVector{0.0, 2.0});
    CHECK(p.atoms()[0].weight == Complex(0, 1));
    CHECK(p.atoms()[1].point == RealVector{1.0, 2.0});
    CHECK(p.atoms()[1].weight == Complex(0, -1));

    // Fubini symmetry with swapped arguments
    std::mt19937_64 rng(17);
    BoundedFunction F;
    F.dim = 2;
    F.bound = 1.0;
    F.evaluate = [](std::span<const double> x) { return Complex(std::cos(x[0] - 2 * x[1]), std::sin(x[0] * x[1])) / std::sqrt(2.0); };
    BoundedFunction Fswap = F;
    Fswap.evaluate = [F](std::span<const double> x) {
        const double y[] = {x[1], x[0]};
        return F(y);
    };
    for (int k = 0; k < 10; ++k) {
        const auto a = random_atomic(rng, 4), b = random_atomic(rng, 3);
        CHECK(std::abs(apply(product(a, b), F).value - apply(product(b, a), Fswap).value) < 1e-14);
    }

    CHECK_THROWS_AS(product(atoms1({{0.0, 1.0}}), FiniteMeasure(1, {Atom{{1.0}, 1.0}}, DensityPart::gaussian_W(1, 1.0))),
                    MeasureError);
}

TEST_CASE("measure convolution") {
    const auto ab = convolve_measures(atoms1({{1.5, 1.0}}), atoms1({{-0.5, 1.0}}));
    CHECK(same_atoms(ab, atoms1({{1.0, 1.0}}), 0.0));

    std::mt19937_64 rng(23);
    const auto mu = random_atomic(rng, 6);
    CHECK(same_atoms(convolve_measures(atoms1({{0.0, 1.0}}), mu), mu, 0.0));

    const auto half = atoms1({{0.0, 0.5}, {1.0, 0.5}});
    CHECK(same_atoms(convolve_measures(half, half), atoms1({{0.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}}), 0.0));

    for (int k = 0; k < 20; ++k) {
        const auto a = random_atomic(rng, 4), b = random_atomic(rng, 5), c = random_atomic(rng, 3);
        CHECK(same_atoms(convolve_measures(a, b), convolve_measures(b, a), 1e-15));
        CHECK(same_atoms(convolve_measures(convolve_measures(a, b), c), convolve_measures(a, convolve_measures(b, c)), 1e-15));
        CHECK(total_variation_norm(convolve_measures(a, b)).value.real() <=
              total_variation_norm(a).value.real() * total_variation_norm(b).value.real() + 1e-14);
    }

    // point masses shift a Gaussian density: pairing against 1 keeps the mass
    const auto shifted = convolve_measures(atoms1({{1.0, 0.5}, {-2.0, 0.25}}), FiniteMeasure::from_density(DensityPart::gaussian_W(1, 0.4)));
    QuadratureSpec q;
    CHECK(std::abs(apply(shifted, BoundedFunction::constant(1, 1.0), q).value - 0.75) < 1e-9);
    CHECK_THROWS_AS(convolve_measures(atoms1({{0.0, 1.0}}), FiniteMeasure::zero(2)), MeasureError);
}

TEST_CASE("convolution with a function") {
    const double x[] = {0.7};
    const auto f = fn([](double y) { return y * y; }, 100.0);
    CHECK(convolve_with_function(atoms1({{2.0, 1.0}}), f, x).value == Complex((0.7 - 2.0) * (0.7 - 2.0)));
    const auto w = BoundedFunction::gauss_W(1, 0.5);
    CHECK(std::abs(convolve_with_function(atoms1({{0.0, 1.0}}), w, x).value - gauss_W(0.5, x)) < 1e-16);
    const double zero[] = {0.0};
    CHECK(convolve_with_function(atoms1({{-1.0, 0.5}, {1.0, 0.5}}), f, zero).value == Complex(1.0));

    QuadratureSpec q;
    q.target_tol = 1e-10;
    const auto g = convolve_with_function(FiniteMeasure::from_density(DensityPart::gaussian_W(1, 0.5)), BoundedFunction::constant(1, 1.0), x, q);
    CHECK(std::abs(g.value - 1.0) < 1e-9);
}

TEST_CASE("compact approximation") {
    std::mt19937_64 rng(31);
    const auto inside = random_atomic(rng, 5);
    CHECK(compact_approximation(inside, 3.0) == inside);

    const auto two = atoms1({{0.0, 1.0}, {10.0, 1.0}});
    CHECK(same_atoms(compact_approximation(two, 5.0), atoms1({{0.0, 1.0}}), 0.0));
    CHECK(discarded_norm(two, 5.0).value.real() == 1.0);

    // sampled W_1 on [-8, 8]: the discarded part is the Gaussian tail erfc(1).
    // The trapezoid rule on [-2, 2] errs by about h^2 |W_1'(2)| / 6.
    const std::size_t points = 2049;
    const double h = 16.0 / (points - 1);
    const double deriv = 2.0 / 2.0 * gauss_W(1.0, std::vector<double>{2.0});
    const double allowance = h * h * deriv / 6.0 * 1.5 + 1e-10;
    QuadratureSpec q;
    const auto d = discarded_norm(sampled_W(1.0, 8.0, points), 2.0, q);
    CHECK(std::abs(d.value.real() - std::erfc(1.0)) <= allowance);

    // a clip between nodes still integrates the interpolant exactly: norms of
    // the pieces add up for a piecewise-linear profile
    UniformGrid g(Box::cube(1, 1.0), {5});
    const auto tent = FiniteMeasure::from_density(DensityPart::grid(g, {0.0, 1.0, 2.0, 1.0, 0.0}));
    const double kept = total_variation_norm(compact_approximation(tent, 0.25)).value.real();
    // integral of 2 - 2|x| over [-1/4, 1/4]
    CHECK(kept == doctest::Approx(2 * (2 * 0.25 - 0.25 * 0.25)).epsilon(1e-14));

    // the discarded norm shrinks to zero as the box grows
    double prev = 2.0;
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
        const double v = discarded_norm(sampled_W(1.0, 8.0, 513), r, q).value.real();
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-12);
    CHECK_THROWS_AS(compact_approximation(two, 0.0), MeasureError);
}

TEST_CASE("norm subadditivity") {
    std::mt19937_64 rng(41);
    QuadratureSpec q;
    for (int k = 0; k < 30; ++k) {
        const auto a = random_atomic(rng, 4), b = random_atomic(rng, 4);
        CHECK(total_variation_norm(add(a, b)).value.real() <=
              total_variation_norm(a).value.real() + total_variation_norm(b).value.real() + 1e-14);
    }
    const auto g1 = FiniteMeasure::from_density(DensityPart::gaussian_W(1, 0.5));
    const auto g2 = scale(g1, Complex(0, -2));
    const auto s = total_variation_norm(add(g1, g2), q).value.real();
    CHECK(s <= 1.0 + 2.0 + 2 * q.target_tol);
    CHECK(s == doctest::Approx(std::sqrt(5.0)).epsilon(1e-8));
}

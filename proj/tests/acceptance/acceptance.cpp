// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "measurelab/extension.hpp"
#include "measurelab/fourier.hpp"
#include "measurelab/io.hpp"
#include "measurelab/kernels.hpp"
#include "measurelab/support.hpp"

using namespace measurelab;
using std::numbers::pi;

namespace {

constexpr double kGaussianPairTol = 1e-8;
constexpr double kConvolutionTheoremTol = 1e-12;
constexpr double kMultiplicationAtomicTol = 1e-12;
constexpr double kMultiplicationDensityTol = 1e-6;
constexpr double kMollifiedInversionTol = 1e-7;
constexpr double kInversionTol = 1e-7;
constexpr double kEigenrelationTol = 1e-10;
constexpr double kNormLawTol = 1e-12;
constexpr double kModulationTol = 1e-10;
constexpr double kConeTol = 1e-12;
constexpr double kPaleyWienerRelTol = 1e-10;
constexpr double kHalfPlaneTol = 1e-7;
constexpr double kCauchyRiemannOrder = 1.8;

const double inf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

class Random {
public:
    explicit Random(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    RealVector point(std::size_t dim, double lo, double hi) {
        RealVector p(dim);
        for (auto& x : p) x = uniform(lo, hi);
        return p;
    }

    FiniteMeasure atomic(std::size_t dim, double lo = -2.0, double hi = 2.0) {
        std::vector<Atom> atoms;
        const std::size_t n = index(1, 8);
        for (std::size_t k = 0; k < n; ++k) {
            const double r = uniform(0.0, 2.0), t = uniform(0.0, 2 * pi);
            atoms.push_back(Atom{point(dim, lo, hi), std::polar(r, t)});
        }
        return FiniteMeasure(dim, std::move(atoms));
    }

private:
    std::mt19937_64 rng_;
};

double norm(const FiniteMeasure& mu) { return total_variation_norm(mu).checked_value().real(); }

Complex phase_sum(const FiniteMeasure& mu, std::span<const double> xi) {
    Complex s = 0.0;
    for (const auto& a : mu.atoms()) s += a.weight * e_kernel(xi, a.point);
    return s;
}

SupportSet box_set(std::size_t dim, double r) {
    SupportSet s;
    s.dim = dim;
    for (std::size_t m = 0; m < (std::size_t{1} << dim); ++m) {
        RealVector v(dim);
        for (std::size_t j = 0; j < dim; ++j) v[j] = (m >> j) & 1 ? r : -r;
        s.vertices.push_back(v);
    }
    return s;
}

SpectrumSource half_line_spectrum() {
    return SpectrumSource::closed_form(
        1, [](std::span<const double> xi) { return Complex(xi[0] >= 0.0 ? std::exp(-xi[0]) : 0.0); }, 1.0,
        Box{{0.0}, {inf}}, 0.0, 1.0);
}

Complex half_line_oracle(Complex z) { return 1.0 / (1.0 - Complex(0, 2 * pi) * z); }

Outcome gaussian_pair() {
    QuadratureSpec q;
    q.target_tol = 1e-10;
    double worst = 0.0;
    for (double alpha : {0.5, 1.0, 2.0}) {
        for (std::size_t dim : {1u, 2u}) {
            const auto g = FiniteMeasure::from_density(DensityPart::gaussian_G(dim, alpha));
            const std::size_t count = dim == 1 ? 81 : 17;
            const UniformGrid grid(Box::cube(dim, 4.0), std::vector<std::size_t>(dim, count));
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const RealVector xi = grid.node(k);
                const auto r = fourier(g, xi, q);
                worst = std::max(worst, std::abs(r.checked_value() - gauss_W(alpha, xi)));
            }
        }
    }
    return {worst <= kGaussianPairTol, "max error " + sci(worst)};
}

Outcome convolution_theorem() {
    Random rng(101);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t dim = 1 + k % 2;
        const auto mu = rng.atomic(dim), nu = rng.atomic(dim);
        const RealVector xi = rng.point(dim, -3.0, 3.0);
        const Complex lhs = fourier(convolve_measures(mu, nu), xi).value;
        worst = std::max(worst, std::abs(lhs - phase_sum(mu, xi) * phase_sum(nu, xi)));
    }
    return {worst <= kConvolutionTheoremTol, "max residual " + sci(worst) + " over 100 instances"};
}

Outcome multiplication_formula() {
    Random rng(202);
    double atomic = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t dim = 1 + k % 2;
        const auto mu = rng.atomic(dim), nu = rng.atomic(dim);
        Complex lhs = 0.0, rhs = 0.0;
        for (const auto& a : mu.atoms()) lhs += a.weight * phase_sum(nu, a.point);
        for (const auto& b : nu.atoms()) rhs += b.weight * phase_sum(mu, b.point);
        atomic = std::max(atomic, std::abs(lhs - rhs));
    }
    double density = 0.0;
    QuadratureSpec q;
    q.target_tol = 1e-9;
    for (int k = 0; k < 20; ++k) {
        const std::size_t dim = 1 + k % 2;
        const double alpha = rng.uniform(0.25, 4.0);
        const auto mu = rng.atomic(dim);
        const auto nu = FiniteMeasure::from_density(DensityPart::gaussian_W(dim, alpha));
        // mu(hat nu) with hat W_alpha = G_alpha in closed form
        Complex lhs = 0.0;
        for (const auto& a : mu.atoms()) lhs += a.weight * gauss_G(alpha, a.point);
        BoundedFunction hat_mu;
        hat_mu.dim = dim;
        hat_mu.bound = norm(mu);
        hat_mu.frequency = mu.extent();
        hat_mu.evaluate = [&mu](std::span<const double> x) { return phase_sum(mu, x); };
        const Complex rhs = apply(nu, hat_mu, q).checked_value();
        density = std::max(density, std::abs(lhs - rhs));
    }
    return {atomic <= kMultiplicationAtomicTol && density <= kMultiplicationDensityTol,
            "atomic " + sci(atomic) + ", atomic vs W density " + sci(density)};
}

Outcome mollified_inversion_identity() {
    Random rng(303);
    QuadratureSpec q;
    q.target_tol = 1e-10;
    double worst = 0.0;
    for (double alpha : {1.0, 0.1}) {
        for (int m = 0; m < 5; ++m) {
            const auto mu = rng.atomic(1);
            const SpectrumSource s = SpectrumSource::of_atoms(mu);
            for (int k = 0; k < 20; ++k) {
                const RealVector x = rng.point(1, -3.0, 3.0);
                const Complex lhs = mollified_inversion(s, alpha, x, q).checked_value();
                const Complex rhs = mollify(mu, alpha, x, q).checked_value();
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return {worst <= kMollifiedInversionTol, "max residual " + sci(worst)};
}

Outcome inversion_round_trip() {
    QuadratureSpec q;
    q.target_tol = 1e-11;
    const auto w = FiniteMeasure::from_density(DensityPart::gaussian_W(1, 1.0));
    const SpectrumGrid spec = fourier_grid(w, UniformGrid(Box::cube(1, 1.5), {241}), q);
    const SpectrumSource source = SpectrumSource::of_grid(spec);
    double gaussian = 0.0;
    const UniformGrid xs(Box::cube(1, 3.0), {61});
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const RealVector x = xs.node(k);
        gaussian = std::max(gaussian, std::abs(invert(source, x, q).checked_value() - gauss_W(1.0, x)));
    }
    double rational = 0.0;
    const SpectrumSource half = half_line_spectrum();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const RealVector x = xs.node(k);
        rational = std::max(rational, std::abs(invert(half, x, q).checked_value() - half_line_oracle(x[0])));
    }
    return {spec.integrable && gaussian <= kInversionTol && rational <= kInversionTol,
            "W_1 sup error " + sci(gaussian) + ", 1/(1-2 pi i x) sup error " + sci(rational)};
}

Outcome eigenrelation() {
    Random rng(404);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t dim = 1 + k % 2;
        const auto mu = rng.atomic(dim);
        const RealVector xi = rng.point(dim, -3.0, 3.0), x = rng.point(dim, -3.0, 3.0);
        RealVector minus = xi;
        for (auto& v : minus) v = -v;
        const Complex lhs = convolve_with_function(mu, BoundedFunction::exponential(xi), x).value;
        const Complex rhs = fourier(mu, minus).value * e_kernel(xi, x);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return {worst <= kEigenrelationTol, "max residual " + sci(worst)};
}

Outcome norm_laws() {
    Random rng(505);
    double conv_excess = 0.0, product_gap = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t dim = 1 + k % 2;
        const auto mu = rng.atomic(dim), nu = rng.atomic(dim);
        const double a = norm(mu), b = norm(nu);
        conv_excess = std::max(conv_excess, norm(convolve_measures(mu, nu)) - a * b);
        product_gap = std::max(product_gap, std::abs(norm(product(mu, nu)) - a * b));
    }
    double modulation_excess = 0.0;
    QuadratureSpec q;
    q.target_tol = 1e-11;
    for (int k = 0; k < 40; ++k) {
        const std::size_t dim = 1 + k % 2;
        FiniteMeasure mu = rng.atomic(dim);
        if (k % 4 == 3) mu = FiniteMeasure(dim, mu.atoms(), DensityPart::gaussian_W(dim, rng.uniform(0.25, 4.0)));
        const double alpha = rng.uniform(0.25, 4.0);
        BoundedFunction phi;
        switch (k % 3) {
            case 0: phi = BoundedFunction::gauss_G(dim, alpha); break;
            case 1: phi = BoundedFunction::gauss_W(dim, alpha); break;
            default: phi = BoundedFunction::exponential(rng.point(dim, -2.0, 2.0)); break;
        }
        const double modulated = total_variation_norm(modulate(mu, phi, q), q).checked_value().real();
        const double base = total_variation_norm(mu, q).checked_value().real();
        modulation_excess = std::max(modulation_excess, modulated - phi.bound * base);
    }
    const bool pass = conv_excess <= kNormLawTol && product_gap <= kNormLawTol && modulation_excess <= kModulationTol;
    return {pass, "convolution excess " + sci(std::max(conv_excess, 0.0)) + ", product gap " + sci(product_gap) +
                      ", modulation excess " + sci(std::max(modulation_excess, 0.0))};
}

Outcome cone_geometry() {
    bool orthant = true;
    for (std::size_t dim : {1u, 2u, 3u}) {
        SupportSet a;
        a.dim = dim;
        a.vertices = {RealVector(dim, 0.0)};
        ConvexCone expected;
        expected.dim = dim;
        for (std::size_t j = 0; j < dim; ++j) {
            RealVector e(dim, 0.0);
            e[j] = 1.0;
            a.generators.push_back(e);
            expected.normals.push_back(e);
        }
        orthant = orthant && dual_cone(a).canonical() == expected.canonical();
    }

    Random rng(606);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        SupportSet a;
        a.dim = 2;
        for (std::size_t v = 0, n = rng.index(1, 4); v < n; ++v) a.vertices.push_back(rng.point(2, -2.0, 2.0));
        // generators in the open first quadrant keep the dual cone nontrivial
        for (std::size_t g = 0, n = rng.index(0, 2); g < n; ++g) a.generators.push_back(rng.point(2, 0.1, 1.0));
        const RealVector e1 = rng.point(2, -1.0, 0.0), e2 = rng.point(2, -1.0, 0.0);
        const RealVector s{e1[0] + e2[0], e1[1] + e2[1]};
        const auto g1 = growth_indicator(a, e1), g2 = growth_indicator(a, e2), gs = growth_indicator(a, s);
        if (g1.infinite || g2.infinite || gs.infinite) {
            worst = inf;
            continue;
        }
        worst = std::max(worst, gs.exponent - g1.exponent - g2.exponent);
        for (double t : {0.0, 0.5, 1.0, 2.0}) {
            const RealVector te{t * e1[0], t * e1[1]};
            const auto gt = growth_indicator(a, te);
            worst = std::max(worst, gt.infinite ? inf : std::abs(gt.exponent - t * g1.exponent));
        }
    }
    return {orthant && worst <= kConeTol,
            std::string("orthant duals ") + (orthant ? "equal" : "differ") + ", max law violation " + sci(std::max(worst, 0.0))};
}

Outcome paley_wiener() {
    Random rng(707);
    QuadratureSpec q;
    double worst = 0.0;
    bool pass = true;
    for (int k = 0; k < 200; ++k) {
        const std::size_t dim = 1 + k % 2;
        const auto mu = rng.atomic(dim, -1.0, 1.0);
        std::vector<ComplexVector> zetas;
        for (int z = 0; z < 50; ++z) {
            std::vector<Complex> c(dim);
            for (auto& v : c) v = Complex(rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0));
            zetas.emplace_back(std::move(c));
        }
        const auto r = paley_wiener_check(mu, box_set(dim, 1.0), zetas, kPaleyWienerRelTol, q);
        pass = pass && r.pass && r.samples == 50;
        worst = std::max(worst, r.max_ratio);
    }
    return {pass, "max |hat|/(norm a) " + sci(worst) + " over 200 x 50 points"};
}

Outcome half_plane() {
    QuadratureSpec q;
    q.target_tol = 1e-12;
    const SpectrumSource s = half_line_spectrum();
    Random rng(808);
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) {
        const Complex z(rng.uniform(-2.0, 2.0), rng.uniform(0.05, 2.0));
        worst = std::max(worst, std::abs(half_plane_extension(s, z, q).checked_value() - half_line_oracle(z)));
    }
    double order = inf;
    const auto f = [&](Complex z) { return half_plane_extension(s, z, q).checked_value(); };
    for (int k = 0; k < 5; ++k) {
        const Complex z(rng.uniform(-1.0, 1.0), rng.uniform(0.3, 1.5));
        const double r1 = cauchy_riemann_residual(f, z, 1e-2);
        const double r2 = cauchy_riemann_residual(f, z, 5e-3);
        const double r3 = cauchy_riemann_residual(f, z, 2.5e-3);
        order = std::min({order, std::log2(r1 / r2), std::log2(r2 / r3)});
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, ", Cauchy-Riemann order %.3f", order);
    return {worst <= kHalfPlaneTol && order >= kCauchyRiemannOrder, "max error " + sci(worst) + buf};
}

Outcome weak_convergence() {
    Random rng(909);
    QuadratureSpec q;
    q.target_tol = 1e-12;
    bool pass = true;
    double margin = inf;
    for (int k = 0; k < 20; ++k) {
        const auto mu = rng.atomic(1);
        RealVector xi = rng.point(1, -2.0, 2.0);
        while (std::abs(phase_sum(mu, xi)) < 0.1) xi = rng.point(1, -2.0, 2.0);
        const BoundedFunction f = BoundedFunction::exponential(xi);
        const Complex exact = apply(mu, f).value;
        double prev = inf, prev_err = 0.0;
        for (double alpha : {1.0, 0.1, 0.01}) {
            const auto smooth = convolve_measures(mu, FiniteMeasure::from_density(DensityPart::gaussian_W(1, alpha)));
            const auto res = apply(smooth, f, q);
            const double r = std::abs(res.checked_value() - exact);
            const double err = res.error_estimate;
            if (std::isfinite(prev)) {
                const double m = (prev - r) / std::max(prev_err + err, std::numeric_limits<double>::min());
                margin = std::min(margin, m);
                if (!(m > 1.0)) pass = false;
            }
            prev = r;
            prev_err = err;
        }
    }
    return {pass, "smallest decrease " + sci(margin) + " x combined error estimate"};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome suite_determinism() {
    const auto dir = std::filesystem::temp_directory_path() / ("measurelab_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::string outputs[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
        const auto out = dir / ("verify" + std::to_string(k) + ".jsonl");
        const std::string cmd = std::string("\"") + MEASURELAB_CLI + "\" verify --seed 7 --out \"" + out.string() +
                                "\" 2> \"" + (dir / "summary.txt").string() + "\"";
        const int status = std::system(cmd.c_str());
        codes[k] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        outputs[k] = read_file(out);
    }
    std::filesystem::remove_all(dir);
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    return {same && codes[0] == 0 && codes[1] == 0,
            std::to_string(outputs[0].size()) + " bytes, " + (same ? "identical" : "different") + ", exit codes " +
                std::to_string(codes[0]) + "/" + std::to_string(codes[1])};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"gaussian pair", gaussian_pair},
        {"convolution theorem", convolution_theorem},
        {"multiplication formula", multiplication_formula},
        {"mollified inversion", mollified_inversion_identity},
        {"inversion round trip", inversion_round_trip},
        {"modulation eigenrelation", eigenrelation},
        {"norm laws", norm_laws},
        {"cone geometry", cone_geometry},
        {"Paley-Wiener bound", paley_wiener},
        {"half-plane extension", half_plane},
        {"weak convergence", weak_convergence},
        {"suite determinism", suite_determinism},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d %-26s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}

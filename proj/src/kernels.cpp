#include "measurelab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace measurelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw MeasureError(ErrorKind::invalid_argument, "alpha must be positive and finite, got " + std::to_string(alpha));
    }
}

// exp(w) for complex w, as real exp times (cos, sin).
Complex exp_split(Complex w) {
    const double m = std::exp(w.real());
    return {m * std::cos(w.imag()), m * std::sin(w.imag())};
}

}  // namespace

Complex unit_phase(double turns) {
    const double r = turns - std::nearbyint(turns);
    const double angle = kTwoPi * r;
    return {std::cos(angle), -std::sin(angle)};
}

Complex e_kernel(const ComplexVector& zeta, const ComplexVector& z) {
    const Complex p = zeta.dot(z);
    // -2 pi i (a + i b) = 2 pi b - 2 pi i a
    return std::exp(kTwoPi * p.imag()) * unit_phase(p.real());
}

Complex e_kernel(std::span<const double> xi, std::span<const double> x) {
    require_same_dim(xi.size(), x.size(), "point");
    return unit_phase(dot(xi, x));
}

Complex gauss_G(double alpha, const ComplexVector& z) {
    require_positive_alpha(alpha);
    const Complex zz = z.dot(z);
    return exp_split(-4.0 * std::numbers::pi * std::numbers::pi * alpha * zz);
}

double gauss_G(double alpha, std::span<const double> x) {
    require_positive_alpha(alpha);
    return std::exp(-4.0 * std::numbers::pi * std::numbers::pi * alpha * dot(x, x));
}

double gauss_W_prefactor(double alpha, std::size_t dim) {
    require_positive_alpha(alpha);
    return std::exp(-0.5 * static_cast<double>(dim) * std::log(4.0 * std::numbers::pi * alpha));
}

Complex gauss_W(double alpha, const ComplexVector& z) {
    const double pre = gauss_W_prefactor(alpha, z.dim());
    const Complex zz = z.dot(z);
    return pre * exp_split(-zz / (4.0 * alpha));
}

double gauss_W(double alpha, std::span<const double> x) {
    const double pre = gauss_W_prefactor(alpha, x.size());
    return pre * std::exp(-dot(x, x) / (4.0 * alpha));
}

double gauss_G_dual_alpha(double alpha) {
    require_positive_alpha(alpha);
    return 1.0 / (16.0 * std::numbers::pi * std::numbers::pi * alpha);
}

double gauss_G_as_W_factor(double alpha, std::size_t dim) {
    return gauss_W_prefactor(alpha, dim);
}

}  // namespace measurelab

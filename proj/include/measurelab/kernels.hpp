#ifndef MEASURELAB_KERNELS_HPP
#define MEASURELAB_KERNELS_HPP

#include <cstddef>
#include <span>

#include "measurelab/types.hpp"

namespace measurelab {

/// exp(-2 pi i zeta . z).
Complex e_kernel(const ComplexVector& zeta, const ComplexVector& z);

/// exp(-2 pi i xi . x) for real arguments; the phase is reduced modulo one
/// turn before the trigonometric evaluation.
Complex e_kernel(std::span<const double> xi, std::span<const double> x);

/// exp(-2 pi i t) for a real phase t counted in turns.
Complex unit_phase(double turns);

/// G_alpha(z) = exp(-4 pi^2 alpha z . z).
Complex gauss_G(double alpha, const ComplexVector& z);
double gauss_G(double alpha, std::span<const double> x);

/// W_alpha(z) = (4 pi alpha)^(-n/2) exp(-z . z / (4 alpha)).
Complex gauss_W(double alpha, const ComplexVector& z);
double gauss_W(double alpha, std::span<const double> x);

/// (4 pi alpha)^(-n/2), evaluated through the logarithm of the positive base.
double gauss_W_prefactor(double alpha, std::size_t dim);

/// G_alpha is a multiple of W_beta with beta = 1 / (16 pi^2 alpha);
/// this returns the factor (4 pi beta)^(n/2) = (4 pi alpha)^(-n/2).
double gauss_G_as_W_factor(double alpha, std::size_t dim);
double gauss_G_dual_alpha(double alpha);

}  // namespace measurelab

#endif

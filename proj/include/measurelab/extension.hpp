#ifndef MEASURELAB_EXTENSION_HPP
#define MEASURELAB_EXTENSION_HPP

#include <functional>
#include <span>
#include <vector>

#include "measurelab/fourier.hpp"
#include "measurelab/measure.hpp"
#include "measurelab/support.hpp"

namespace measurelab {

struct PaleyWienerReport {
    std::size_t samples = 0;
    double norm = 0.0;
    double max_ratio = 0.0;  ///< max |hat-mu(zeta)| / (norm a(i Im zeta))
    double max_slack = 0.0;  ///< max(0, max_ratio - 1)
    ComplexVector witness;
    bool pass = true;
};

/// Checks |hat-mu(zeta)| <= ||mu|| a(i Im zeta) (1 + rel_tol) at each sample.
/// Samples outside the tube domain are rejected.
PaleyWienerReport paley_wiener_check(const FiniteMeasure& mu, const SupportSet& support,
                                     std::span<const ComplexVector> zetas, double rel_tol = 1e-10,
                                     const QuadratureSpec& q = {});

/// True when every atom and every density box of mu lies in the set.
bool supported_in(const FiniteMeasure& mu, const SupportSet& support);

struct BandLimitedValue {
    IntegrationResult result;
    double bound = 0.0;  ///< (integral |hat|) exp(2 pi sum_j rho_j |y_j|)
    bool within_bound = true;
};

/// Entire extension of the inverse transform of a compactly supported
/// spectrum.
BandLimitedValue band_limited_extension(const SpectrumSource& spectrum, const ComplexVector& z,
                                        const QuadratureSpec& q = {});

/// H(z) = integral over xi >= 0 of hat(xi) exp(2 pi i z xi), Im z > 0, n = 1.
IntegrationResult half_plane_extension(const SpectrumSource& spectrum, Complex z, const QuadratureSpec& q = {});

/// Centered finite-difference residual |dF/dy - i dF/dx| at z.
double cauchy_riemann_residual(const std::function<Complex(Complex)>& f, Complex z, double step);

}  // namespace measurelab

#endif

#ifndef MEASURELAB_FOURIER_HPP
#define MEASURELAB_FOURIER_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "measurelab/grid.hpp"
#include "measurelab/measure.hpp"
#include "measurelab/quadrature.hpp"
#include "measurelab/support.hpp"
#include "measurelab/types.hpp"

namespace measurelab {

/// Samples of a transform on a uniform frequency grid.
struct SpectrumGrid {
    UniformGrid grid;
    std::vector<Complex> values;
    bool integrable = false;
    double abs_integral = 0.0;
    double abs_integral_error = 0.0;
    /// Known exponential decay rate of |values| in xi (used by the
    /// half-plane extension); zero when unknown.
    double decay_rate = 0.0;

    std::size_t dim() const noexcept { return grid.dim(); }
    double sup_abs() const;
};

/// Verdict on whether the absolute integral of a transform stabilizes.
struct IntegrabilityVerdict {
    bool integrable = false;
    double abs_integral = 0.0;
    double abs_integral_outer = 0.0;
    double error_estimate = 0.0;
};

/// A transform available either in closed form or as grid samples.
class SpectrumSource {
public:
    using Evaluator = std::function<Complex(std::span<const double>)>;

    /// Exact phase sums for an atomic measure.
    static SpectrumSource of_atoms(const FiniteMeasure& mu);
    /// fourier(mu, xi, q) per evaluation.
    static SpectrumSource of_measure(const FiniteMeasure& mu, const QuadratureSpec& q);
    static SpectrumSource of_grid(SpectrumGrid grid);
    /// `support` may have infinite bounds; `extent` bounds the spatial reach
    /// of the underlying measure (sets the oscillation resolution);
    /// `decay_rate` is a known rate with |value(xi)| <= bound exp(-rate |xi|).
    static SpectrumSource closed_form(std::size_t dim, Evaluator f, double sup_bound, Box support,
                                      double extent = 0.0, double decay_rate = 0.0);

    std::size_t dim() const noexcept { return dim_; }
    Complex operator()(std::span<const double> xi) const;
    double sup_bound() const noexcept { return sup_bound_; }
    const Box& support() const noexcept { return support_; }
    double extent() const noexcept { return extent_; }
    double decay_rate() const noexcept { return decay_rate_; }
    const std::optional<SpectrumGrid>& grid() const noexcept { return grid_; }
    const std::optional<IntegrabilityVerdict>& verdict() const noexcept { return verdict_; }

    /// Copy with the integrability verdict computed over [-R, R]^n and
    /// [-2R, 2R]^n (closed forms) or taken from the grid flag.
    SpectrumSource with_integrability(const QuadratureSpec& q) const;

private:
    std::size_t dim_ = 0;
    Evaluator eval_;
    double sup_bound_ = 0.0;
    Box support_;
    double extent_ = 0.0;
    double decay_rate_ = 0.0;
    std::optional<SpectrumGrid> grid_;
    std::optional<IntegrabilityVerdict> verdict_;
};

/// Relative change of the absolute integral between the inner and outer
/// boxes below which a closed-form transform counts as integrable.
inline constexpr double kIntegrabilityRtol = 1e-6;

IntegrabilityVerdict check_integrability(const SpectrumSource& source, const QuadratureSpec& q);

/// Radius of the box closed-form spectra are integrated over: q.radius, or
/// larger when a known decay rate says the tail beyond q.radius exceeds a
/// tenth of the target.
double truncation_radius(const SpectrumSource& source, const QuadratureSpec& q);

/// hat-mu(xi) = mu(e_xi).
IntegrationResult fourier(const FiniteMeasure& mu, std::span<const double> xi, const QuadratureSpec& q = {});

SpectrumGrid fourier_grid(const FiniteMeasure& mu, const UniformGrid& grid, const QuadratureSpec& q = {});

/// hat-mu(zeta) = mu(e_zeta) for complex zeta. With a declared support set,
/// zeta must lie in its tube domain.
IntegrationResult fourier_complex(const FiniteMeasure& mu, const ComplexVector& zeta, const QuadratureSpec& q = {});
IntegrationResult fourier_complex(const FiniteMeasure& mu, const ComplexVector& zeta, const SupportSet& support,
                                  const QuadratureSpec& q = {});

/// (mu * W_alpha)(x).
IntegrationResult mollify(const FiniteMeasure& mu, double alpha, std::span<const double> x,
                          const QuadratureSpec& q = {});

/// integral of hat-mu(xi) G_alpha(xi) exp(2 pi i x . xi) over R^n.
IntegrationResult mollified_inversion(const SpectrumSource& spectrum, double alpha, std::span<const double> x,
                                      const QuadratureSpec& q = {});

/// integral of hat-mu(xi) exp(2 pi i x . xi); refuses transforms whose
/// integrability is not established.
IntegrationResult invert(const SpectrumSource& spectrum, std::span<const double> x, const QuadratureSpec& q = {});

/// Shared oscillatory integral over the spectrum support:
/// integral of s(xi) weight(xi) exp(2 pi i z . xi) for complex z.
IntegrationResult spectral_integral(const SpectrumSource& spectrum, const ComplexVector& z,
                                    const std::function<double(std::span<const double>)>& weight, const Box& box,
                                    const QuadratureSpec& q);

struct PositiveDefiniteReport {
    std::vector<double> alphas;
    std::vector<double> values;  ///< integral of hat-h G_alpha, per alpha
    bool monotone = false;
    double integrability_estimate = 0.0;  ///< sup over alpha of the values
    double origin_value = 0.0;            ///< h(0)
    double limit_residual = 0.0;          ///< |h(0) - value at the smallest alpha|
    double min_spectrum = 0.0;
};

/// Samples hat-h on `grid`, rejects negative values beyond tolerance, then
/// integrates hat-h G_alpha along the decreasing schedule.
PositiveDefiniteReport positive_definite_check(const DensityPart& h, std::span<const double> alphas,
                                               const UniformGrid& grid, const QuadratureSpec& q = {});

}  // namespace measurelab

#endif

#ifndef MEASURELAB_MEASURE_HPP
#define MEASURELAB_MEASURE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "measurelab/grid.hpp"
#include "measurelab/quadrature.hpp"
#include "measurelab/types.hpp"

namespace measurelab {

struct Atom {
    RealVector point;
    Complex weight;
};

enum class DensityKind { gaussian_G, gaussian_W, grid };

const char* to_string(DensityKind kind);

/// A weighted copy h(x - offset) of the base profile.
struct Translate {
    RealVector offset;
    Complex weight{1.0, 0.0};
};

/// Absolutely continuous part of a measure.
///
/// The density is sum_k w_k p(x - c_k) restricted to the optional clip box,
/// where p is the base profile: G_alpha or W_alpha in closed form, or a grid
/// of samples. Grid profiles act through the composite trapezoid rule on
/// their nodes, so pairing a grid density with f is the finite sum
/// sum_j t_j s_j f(x_j) with trapezoid weights t_j.
class DensityPart {
public:
    static DensityPart gaussian_G(std::size_t dim, double alpha);
    static DensityPart gaussian_W(std::size_t dim, double alpha);
    static DensityPart grid(UniformGrid grid, std::vector<Complex> values);

    DensityKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    double alpha() const noexcept { return alpha_; }
    const UniformGrid& sample_grid() const noexcept { return grid_; }
    const std::vector<Complex>& samples() const noexcept { return samples_; }
    const std::vector<Translate>& translates() const noexcept { return translates_; }
    const std::optional<Box>& clip() const noexcept { return clip_; }
    bool is_preset() const noexcept { return kind_ != DensityKind::grid; }

    DensityPart with_translates(std::vector<Translate> translates) const;
    DensityPart with_clip(std::optional<Box> clip) const;
    DensityPart with_samples(std::vector<Complex> samples) const;

    /// Base profile p(x) of a preset.
    double preset_profile(std::span<const double> x) const;

    /// Density value at x; for grids, the multilinear interpolant of the
    /// samples.
    Complex value(std::span<const double> x) const;

    /// Share of a grid node's trapezoid weight kept by the clip: the
    /// integral of the node's hat function over the clip box divided by the
    /// hat's full integral. y is the translated node position.
    double clip_fraction(std::size_t flat, std::span<const double> y) const;

    /// A preset profile equals preset_w_factor() * W_beta with
    /// beta = preset_w_alpha(); sigma = sqrt(2 beta) is its width.
    double preset_w_alpha() const;
    double preset_w_factor() const;
    double preset_sigma() const;

    /// Box containing the effective support: the clip box for grids and
    /// clipped presets, or the bounding box of translates widened by the
    /// tail radius for presets.
    Box integration_box(double tail_budget) const;

    /// Upper bound on the mass of |density| outside the box (presets only;
    /// grids report the exact trapezoid mass outside).
    double tail_mass(const Box& box) const;

    /// Total mass sum_k |w_k| of the translates times the profile mass
    /// (an upper bound on the norm).
    double mass_bound() const;

    void validate() const;

    friend bool operator==(const DensityPart& a, const DensityPart& b);

private:
    DensityKind kind_ = DensityKind::gaussian_W;
    std::size_t dim_ = 0;
    double alpha_ = 1.0;
    UniformGrid grid_;
    std::vector<Complex> samples_;
    std::vector<Translate> translates_;
    std::optional<Box> clip_;
};

/// Finite complex measure on R^n: finitely many point masses plus an
/// optional density.
class FiniteMeasure {
public:
    FiniteMeasure() = default;
    FiniteMeasure(std::size_t dim, std::vector<Atom> atoms, std::optional<DensityPart> density = std::nullopt);

    static FiniteMeasure zero(std::size_t dim);
    static FiniteMeasure dirac(RealVector point, Complex weight = 1.0);
    static FiniteMeasure from_density(DensityPart density);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::optional<DensityPart>& density() const noexcept { return density_; }
    bool is_atomic() const noexcept { return !density_.has_value(); }

    /// Atoms sorted lexicographically by point, exactly coincident points
    /// merged by adding weights, zero weights dropped.
    FiniteMeasure canonical() const;

    /// Largest sup-norm of an atom point or density reach (used to size
    /// oscillatory quadratures).
    double extent(double tail_budget = 1e-16) const;

    friend bool operator==(const FiniteMeasure& a, const FiniteMeasure& b);

private:
    std::size_t dim_ = 0;
    std::vector<Atom> atoms_;
    std::optional<DensityPart> density_;
};

/// Bounded complex function with a declared sup bound.
///
/// `frequency` is a resolution hint: the quadrature keeps at least eight
/// nodes per 1/frequency length.
struct BoundedFunction {
    std::size_t dim = 0;
    std::function<Complex(std::span<const double>)> evaluate;
    double bound = 0.0;
    double frequency = 0.0;
    /// Set for functions known to be constant; modulation by a constant
    /// scales weights without resampling.
    std::optional<Complex> constant_value;

    Complex operator()(std::span<const double> x) const { return evaluate(x); }

    static BoundedFunction constant(std::size_t dim, Complex c);
    /// e_xi(x) = exp(-2 pi i xi . x).
    static BoundedFunction exponential(RealVector xi);
    static BoundedFunction gauss_W(std::size_t dim, double alpha);
    static BoundedFunction gauss_G(std::size_t dim, double alpha);
    /// 1 on [-inner, inner]^n, 0 outside [-outer, outer]^n, C^1 smoothstep in
    /// between, per axis product.
    static BoundedFunction smooth_cutoff(std::size_t dim, double inner, double outer);
    /// x -> f(shift - x).
    BoundedFunction reflected_shift(RealVector shift) const;
};

IntegrationResult total_variation_norm(const FiniteMeasure& mu, const QuadratureSpec& q = {});

/// mu(f) = sum_k w_k f(p_k) + integral h f.
IntegrationResult apply(const FiniteMeasure& mu, const BoundedFunction& f, const QuadratureSpec& q = {});

/// The measure f -> mu(phi f). Gaussian presets are sampled onto a grid
/// spanning their integration box with q.points nodes per axis (refined to
/// resolve the profile width).
FiniteMeasure modulate(const FiniteMeasure& mu, const BoundedFunction& phi, const QuadratureSpec& q = {});

FiniteMeasure add(const FiniteMeasure& mu, const FiniteMeasure& nu);
FiniteMeasure scale(const FiniteMeasure& mu, Complex c);

FiniteMeasure product(const FiniteMeasure& mu, const FiniteMeasure& nu);

FiniteMeasure convolve_measures(const FiniteMeasure& mu, const FiniteMeasure& nu);

/// (mu * f)(x) = mu(y -> f(x - y)).
IntegrationResult convolve_with_function(const FiniteMeasure& mu, const BoundedFunction& f,
                                         std::span<const double> x, const QuadratureSpec& q = {});

/// Restriction to the closed cube [-R, R]^n.
FiniteMeasure compact_approximation(const FiniteMeasure& mu, double radius);

/// Norm of mu minus its restriction to [-R, R]^n.
IntegrationResult discarded_norm(const FiniteMeasure& mu, double radius, const QuadratureSpec& q = {});

/// Expands a grid density into its trapezoid-weighted point masses.
std::vector<Atom> grid_atoms(const DensityPart& density);

}  // namespace measurelab

#endif

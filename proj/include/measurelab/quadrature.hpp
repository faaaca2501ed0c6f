#ifndef MEASURELAB_QUADRATURE_HPP
#define MEASURELAB_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>

#include "measurelab/grid.hpp"
#include "measurelab/types.hpp"

namespace measurelab {

/// Truncation box [-radius, radius]^n, starting resolution, and the
/// refinement budget for every integral the library evaluates.
struct QuadratureSpec {
    double radius = 8.0;
    std::size_t points = 129;
    double target_tol = 1e-10;
    std::size_t max_refinements = 8;

    void validate() const;
};

struct IntegrationResult {
    Complex value{};
    double error_estimate = 0.0;
    std::size_t refinements_used = 0;
    bool converged = true;

    /// Returns value, or throws when the estimate never met the target.
    Complex checked_value() const;
};

using Integrand = std::function<Complex(std::span<const double>)>;

/// Composite trapezoid on [-R, R]^dim with Romberg extrapolation across
/// levels N, 2N-1, 4N-3, ...; error_estimate is the change between the last
/// two extrapolated values.
IntegrationResult integrate(const Integrand& f, std::size_t dim, const QuadratureSpec& q);

/// Same rule on an arbitrary bounded box.
IntegrationResult integrate_box(const Integrand& f, const Box& box, std::size_t points,
                                double target_tol, std::size_t max_refinements);

/// Weighted trapezoid sum over a fixed grid: sum_k w_k f(k, x_k).
/// When the grid has a coarse sub-grid the estimate is the change against
/// the every-other-node sum; otherwise it is zero.
using GridTerm = std::function<Complex(std::size_t flat, std::span<const double> x)>;
IntegrationResult grid_sum(const UniformGrid& grid, const GridTerm& term, double target_tol);

/// Mass of W_alpha outside the cube [-R, R]^n (computed exactly from the
/// per-axis complementary error functions).
double tail_bound_gaussian(double alpha, double radius, std::size_t dim);

/// Mass of W_alpha(. - center) outside [-R, R]^n.
double shifted_gaussian_tail(double alpha, std::span<const double> center, double radius);

/// Mass of W_alpha(. - center) outside an arbitrary box.
double box_gaussian_tail(double alpha, std::span<const double> center, const Box& box);

/// Smallest radius (to a 1/64 step) with tail_bound_gaussian <= budget.
double gaussian_radius_for(double alpha, std::size_t dim, double budget);

/// Node count per axis so that an oscillation of the given frequency over
/// [-half_width, half_width] gets at least eight nodes per period.
std::size_t points_for_frequency(double half_width, double frequency);

/// Upper bound on worker threads; MEASURELAB_THREADS caps the default.
/// Results do not depend on this value.
std::size_t max_threads();
void set_max_threads(std::size_t threads);

/// Deterministic sum of per-node terms: the node range is cut into fixed
/// blocks whose partial sums are combined pairwise.
Complex deterministic_sum(std::size_t count, const std::function<Complex(std::size_t)>& term);

}  // namespace measurelab

#endif

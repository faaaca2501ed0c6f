#include "measurelab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "measurelab/kernels.hpp"

namespace measurelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double half_width(const Box& box) {
    double h = 0.0;
    for (std::size_t a = 0; a < box.dim(); ++a) h = std::max(h, 0.5 * (box.hi[a] - box.lo[a]));
    return h;
}

// exp(2 pi i z . xi) for real xi.
Complex inverse_phase(const ComplexVector& z, std::span<const double> xi) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
        a += z[j].real() * xi[j];
        b += z[j].imag() * xi[j];
    }
    return std::exp(-kTwoPi * b) * unit_phase(-a);
}

// Integral of a preset density against e_zeta. Each translate factors over
// the axes: W_a(x - c) e_zeta(x) is a product of one-dimensional Gaussians
// centred on the shifted peaks c + 4 pi a eta, so the transform is a sum of
// products of 1-D trapezoid integrals.
IntegrationResult preset_complex_transform(const DensityPart& d, const ComplexVector& zeta, const QuadratureSpec& q) {
    const std::size_t n = d.dim();
    const double a = d.preset_w_alpha();
    const double factor = d.preset_w_factor();
    const double sigma = d.preset_sigma();
    const RealVector xi = zeta.real_part();
    const RealVector eta = zeta.imag_part();
    const double eta_sq = dot(eta, eta);
    if (d.translates().empty()) return {0.0, 0.0, 0, true};

    // |W_a(x - c) exp(2 pi eta . x)| = exp(2 pi eta . c + 4 pi^2 a |eta|^2) W_a(x - c - 4 pi a eta)
    std::vector<double> magnitudes;
    double total = 0.0;
    for (const auto& t : d.translates()) {
        const double m =
            std::abs(t.weight) * factor * std::exp(kTwoPi * dot(eta, t.offset) + 4.0 * std::numbers::pi * std::numbers::pi * a * eta_sq);
        magnitudes.push_back(m);
        total += m;
    }
    if (total == 0.0) return {0.0, 0.0, 0, true};
    const double axis_tol = 0.9 * q.target_tol / (static_cast<double>(n) * total);
    const double r = gaussian_radius_for(a, 1, std::min(0.5, 0.1 * q.target_tol / (static_cast<double>(n) * total)));
    const double axis_tail = tail_bound_gaussian(a, r, 1);
    const double norm_1d = 1.0 / std::sqrt(4.0 * std::numbers::pi * a);

    IntegrationResult out;
    for (std::size_t k = 0; k < d.translates().size(); ++k) {
        const auto& t = d.translates()[k];
        const double log_m = kTwoPi * dot(eta, t.offset) + 4.0 * std::numbers::pi * std::numbers::pi * a * eta_sq;
        Complex prod = t.weight * factor * std::exp(log_m);
        double rel_err = 0.0;
        bool empty = false;
        for (std::size_t j = 0; j < n && !empty; ++j) {
            const double peak = t.offset[j] + 2.0 * kTwoPi * a * eta[j];
            Box axis{{peak - r}, {peak + r}};
            if (d.clip()) axis = axis.intersect(Box{{d.clip()->lo[j]}, {d.clip()->hi[j]}});
            if (axis.lo[0] >= axis.hi[0]) {
                empty = true;
                break;
            }
            const double half = 0.5 * (axis.hi[0] - axis.lo[0]);
            const auto by_width = static_cast<std::size_t>(std::ceil(4.0 * half / sigma)) + 1;
            const std::size_t points = std::max({q.points, by_width, points_for_frequency(half, std::abs(xi[j]))});
            const double fx = xi[j];
            auto res = integrate_box(
                [&](std::span<const double> x) {
                    const double u = x[0] - peak;
                    return norm_1d * std::exp(-u * u / (4.0 * a)) * unit_phase(fx * x[0]);
                },
                axis, points, axis_tol, q.max_refinements);
            prod *= res.value;
            rel_err += res.error_estimate + axis_tail;
            out.refinements_used = std::max(out.refinements_used, res.refinements_used);
            out.converged = out.converged && res.converged;
        }
        if (empty) continue;
        out.value += prod;
        out.error_estimate += magnitudes[k] * rel_err;
    }
    return out;
}

Box closed_form_box(const SpectrumSource& s, double radius) {
    return s.support().intersect(Box::cube(s.dim(), radius));
}

}  // namespace

double SpectrumGrid::sup_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// SpectrumSource

SpectrumSource SpectrumSource::of_atoms(const FiniteMeasure& mu) {
    if (!mu.is_atomic()) {
        throw MeasureError(ErrorKind::unsupported_representation, "closed-form phase sums need an atomic measure");
    }
    const FiniteMeasure c = mu.canonical();
    double norm = 0.0;
    for (const auto& a : c.atoms()) norm += std::abs(a.weight);
    auto atoms = c.atoms();
    return closed_form(
        mu.dim(),
        [atoms = std::move(atoms)](std::span<const double> xi) {
            Complex s = 0.0;
            for (const auto& a : atoms) s += a.weight * unit_phase(dot(a.point, xi));
            return s;
        },
        norm, Box::whole_space(mu.dim()), c.extent());
}

SpectrumSource SpectrumSource::of_measure(const FiniteMeasure& mu, const QuadratureSpec& q) {
    const IntegrationResult norm = total_variation_norm(mu, q);
    return closed_form(
        mu.dim(), [mu, q](std::span<const double> xi) { return fourier(mu, xi, q).value; },
        norm.value.real() + norm.error_estimate, Box::whole_space(mu.dim()), mu.extent(q.target_tol));
}

SpectrumSource SpectrumSource::of_grid(SpectrumGrid grid) {
    SpectrumSource s;
    s.dim_ = grid.dim();
    s.sup_bound_ = grid.sup_abs();
    s.support_ = grid.grid.box();
    s.decay_rate_ = grid.decay_rate;
    auto shared = std::make_shared<const SpectrumGrid>(grid);
    s.eval_ = [shared](std::span<const double> xi) { return interpolate(shared->grid, shared->values, xi); };
    if (grid.integrable || grid.abs_integral > 0.0) {
        s.verdict_ = IntegrabilityVerdict{grid.integrable, grid.abs_integral, grid.abs_integral, grid.abs_integral_error};
    }
    s.grid_ = std::move(grid);
    return s;
}

SpectrumSource SpectrumSource::closed_form(std::size_t dim, Evaluator f, double sup_bound, Box support, double extent,
                                           double decay_rate) {
    require_same_dim(dim, support.dim(), "spectrum support");
    SpectrumSource s;
    s.dim_ = dim;
    s.eval_ = std::move(f);
    s.sup_bound_ = sup_bound;
    s.support_ = std::move(support);
    s.extent_ = extent;
    s.decay_rate_ = decay_rate;
    return s;
}

Complex SpectrumSource::operator()(std::span<const double> xi) const {
    require_same_dim(dim_, xi.size(), "frequency");
    return support_.contains(xi) ? eval_(xi) : Complex(0.0);
}

SpectrumSource SpectrumSource::with_integrability(const QuadratureSpec& q) const {
    SpectrumSource s = *this;
    s.verdict_ = check_integrability(*this, q);
    return s;
}

double truncation_radius(const SpectrumSource& source, const QuadratureSpec& q) {
    const double rate = source.decay_rate();
    if (!(rate > 0.0)) return q.radius;
    const double scale = std::max(source.sup_bound(), 1e-300);
    return std::max(q.radius, std::log(10.0 * scale / (q.target_tol * rate)) / rate);
}

IntegrabilityVerdict check_integrability(const SpectrumSource& source, const QuadratureSpec& q) {
    q.validate();
    if (source.grid()) {
        const auto& g = *source.grid();
        return IntegrabilityVerdict{g.integrable, g.abs_integral, g.abs_integral, g.abs_integral_error};
    }
    auto abs_integral = [&](double radius) {
        const Box box = closed_form_box(source, radius);
        const std::size_t points = std::max(q.points, points_for_frequency(half_width(box), source.extent()));
        return integrate_box([&](std::span<const double> xi) { return Complex(std::abs(source(xi))); }, box, points,
                             q.target_tol, q.max_refinements);
    };
    const double radius = truncation_radius(source, q);
    const IntegrationResult inner = abs_integral(radius);
    const IntegrationResult outer = abs_integral(2.0 * radius);
    IntegrabilityVerdict v;
    v.abs_integral = inner.value.real();
    v.abs_integral_outer = outer.value.real();
    v.error_estimate = inner.error_estimate + outer.error_estimate;
    const double change = std::abs(v.abs_integral_outer - v.abs_integral);
    v.integrable = std::isfinite(v.abs_integral_outer) &&
                   change <= std::max(q.target_tol, kIntegrabilityRtol * v.abs_integral_outer);
    return v;
}

// ---------------------------------------------------------------------------
// Transforms

IntegrationResult fourier(const FiniteMeasure& mu, std::span<const double> xi, const QuadratureSpec& q) {
    require_same_dim(mu.dim(), xi.size(), "frequency");
    if (mu.density() && mu.density()->is_preset()) {
        q.validate();
        Complex atoms = 0.0;
        for (const auto& a : mu.atoms()) atoms += a.weight * unit_phase(dot(a.point, xi));
        IntegrationResult r = preset_complex_transform(*mu.density(), ComplexVector::real(xi), q);
        r.value += atoms;
        return r;
    }
    return apply(mu, BoundedFunction::exponential(RealVector(xi.begin(), xi.end())), q);
}

SpectrumGrid fourier_grid(const FiniteMeasure& mu, const UniformGrid& grid, const QuadratureSpec& q) {
    require_same_dim(mu.dim(), grid.dim(), "frequency grid");
    SpectrumGrid s;
    s.grid = grid;
    s.values.resize(grid.size());
    RealVector xi(grid.dim());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        grid.node(k, xi);
        s.values[k] = fourier(mu, xi, q).value;
    }

    // Integrability: |hat| over the full box against the central half box.
    const IntegrationResult full =
        grid_sum(grid, [&](std::size_t k, std::span<const double>) { return Complex(std::abs(s.values[k])); }, q.target_tol);
    Box inner = grid.box();
    for (std::size_t a = 0; a < grid.dim(); ++a) {
        const double c = 0.5 * (inner.lo[a] + inner.hi[a]);
        const double h = 0.25 * (inner.hi[a] - inner.lo[a]);
        inner.lo[a] = c - h;
        inner.hi[a] = c + h;
    }
    const Complex inner_sum = deterministic_sum(grid.size(), [&](std::size_t k) {
        const RealVector x = grid.node(k);
        return inner.contains(x, 1e-12 * half_width(grid.box())) ? grid.trapezoid_weight(k) * std::abs(s.values[k]) : 0.0;
    });
    s.abs_integral = full.value.real();
    s.abs_integral_error = full.error_estimate;
    const double change = std::abs(s.abs_integral - inner_sum.real());
    s.integrable = change <= std::max(q.target_tol, kIntegrabilityRtol * s.abs_integral);
    return s;
}

IntegrationResult fourier_complex(const FiniteMeasure& mu, const ComplexVector& zeta, const QuadratureSpec& q) {
    require_same_dim(mu.dim(), zeta.dim(), "complex frequency");
    Complex atoms = 0.0;
    for (const auto& a : mu.atoms()) atoms += a.weight * e_kernel(zeta, ComplexVector::real(a.point));
    if (!mu.density()) return {atoms, 0.0, 0, true};
    const DensityPart& d = *mu.density();
    IntegrationResult r;
    if (d.kind() == DensityKind::grid) {
        const auto& samples = d.samples();
        r = grid_sum(
            d.sample_grid(),
            [&](std::size_t k, std::span<const double> x) {
                Complex acc = 0.0;
                RealVector y(x.size());
                for (const auto& t : d.translates()) {
                    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + t.offset[j];
                    const double keep = d.clip_fraction(k, y);
                    if (keep == 0.0) continue;
                    acc += keep * t.weight * samples[k] * e_kernel(zeta, ComplexVector::real(y));
                }
                return acc;
            },
            q.target_tol);
    } else {
        r = preset_complex_transform(d, zeta, q);
    }
    r.value += atoms;
    return r;
}

IntegrationResult fourier_complex(const FiniteMeasure& mu, const ComplexVector& zeta, const SupportSet& support,
                                  const QuadratureSpec& q) {
    require_same_dim(support.dim, zeta.dim(), "complex frequency");
    if (!tube_membership(support, zeta)) {
        throw MeasureError(ErrorKind::outside_tube_domain, "Im zeta is not in the dual cone of the support set");
    }
    return fourier_complex(mu, zeta, q);
}

IntegrationResult mollify(const FiniteMeasure& mu, double alpha, std::span<const double> x, const QuadratureSpec& q) {
    return convolve_with_function(mu, BoundedFunction::gauss_W(mu.dim(), alpha), x, q);
}

IntegrationResult spectral_integral(const SpectrumSource& spectrum, const ComplexVector& z,
                                    const std::function<double(std::span<const double>)>& weight, const Box& box,
                                    const QuadratureSpec& q) {
    require_same_dim(spectrum.dim(), z.dim(), "evaluation point");
    if (spectrum.grid()) {
        const auto& g = *spectrum.grid();
        return grid_sum(
            g.grid,
            [&](std::size_t k, std::span<const double> xi) {
                if (!box.contains(xi)) return Complex(0.0);
                return g.values[k] * weight(xi) * inverse_phase(z, xi);
            },
            q.target_tol);
    }
    if (!box.bounded()) throw MeasureError(ErrorKind::invalid_argument, "spectral integral needs a bounded box");
    const double freq = spectrum.extent() + max_abs(z.real_part());
    const std::size_t points = std::max(q.points, points_for_frequency(half_width(box), freq));
    return integrate_box([&](std::span<const double> xi) { return spectrum(xi) * weight(xi) * inverse_phase(z, xi); },
                         box, points, q.target_tol, q.max_refinements);
}

IntegrationResult mollified_inversion(const SpectrumSource& spectrum, double alpha, std::span<const double> x,
                                      const QuadratureSpec& q) {
    q.validate();
    require_same_dim(spectrum.dim(), x.size(), "evaluation point");
    const std::size_t n = spectrum.dim();
    const ComplexVector z = ComplexVector::real(x);
    auto weight = [alpha](std::span<const double> xi) { return gauss_G(alpha, xi); };
    if (spectrum.grid()) return spectral_integral(spectrum, z, weight, spectrum.grid()->grid.box(), q);

    // G_alpha = factor * W_beta; truncate where the spectrum-weighted tail is
    // below a tenth of the target.
    const double beta = gauss_G_dual_alpha(alpha);
    const double factor = gauss_G_as_W_factor(alpha, n);
    const double scale = std::max(spectrum.sup_bound() * factor, 1e-300);
    const double radius = gaussian_radius_for(beta, n, std::min(0.5, 0.1 * q.target_tol / scale));
    const Box box = closed_form_box(spectrum, radius);
    QuadratureSpec inner = q;
    inner.target_tol = 0.9 * q.target_tol;
    const double sigma = std::sqrt(2.0 * beta);
    inner.points = std::max(q.points, static_cast<std::size_t>(std::ceil(4.0 * half_width(box) / sigma)) + 1);
    IntegrationResult r = spectral_integral(spectrum, z, weight, box, inner);
    r.error_estimate += scale * tail_bound_gaussian(beta, radius, n);
    return r;
}

IntegrationResult invert(const SpectrumSource& spectrum, std::span<const double> x, const QuadratureSpec& q) {
    q.validate();
    require_same_dim(spectrum.dim(), x.size(), "evaluation point");
    const IntegrabilityVerdict v = spectrum.verdict() ? *spectrum.verdict() : check_integrability(spectrum, q);
    if (!v.integrable) {
        throw MeasureError(ErrorKind::non_integrable_spectrum,
                           "absolute integral did not stabilize (" + std::to_string(v.abs_integral) + " vs " +
                               std::to_string(v.abs_integral_outer) + ")");
    }
    const Box box = spectrum.grid() ? spectrum.grid()->grid.box() : closed_form_box(spectrum, truncation_radius(spectrum, q));
    return spectral_integral(spectrum, ComplexVector::real(x), [](std::span<const double>) { return 1.0; }, box, q);
}

PositiveDefiniteReport positive_definite_check(const DensityPart& h, std::span<const double> alphas,
                                               const UniformGrid& grid, const QuadratureSpec& q) {
    if (alphas.empty()) throw MeasureError(ErrorKind::invalid_argument, "alpha schedule is empty");
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        if (!(alphas[k] > 0.0) || (k > 0 && !(alphas[k] < alphas[k - 1]))) {
            throw MeasureError(ErrorKind::invalid_argument, "alpha schedule must be positive and strictly decreasing");
        }
    }
    const SpectrumGrid spectrum = fourier_grid(FiniteMeasure::from_density(h), grid, q);
    const double negativity_tol = 100.0 * q.target_tol + 1e-12 * spectrum.sup_abs();

    PositiveDefiniteReport rep;
    rep.min_spectrum = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
        const Complex v = spectrum.values[k];
        rep.min_spectrum = std::min(rep.min_spectrum, v.real());
        if (v.real() < -negativity_tol || std::abs(v.imag()) > negativity_tol) {
            throw MeasureError(ErrorKind::not_positive_definite,
                               "transform value (" + std::to_string(v.real()) + ", " + std::to_string(v.imag()) +
                                   ") at node " + std::to_string(k) + " is not a nonnegative real");
        }
    }

    rep.alphas.assign(alphas.begin(), alphas.end());
    rep.monotone = true;
    for (double alpha : alphas) {
        const IntegrationResult r = grid_sum(
            grid, [&](std::size_t k, std::span<const double> xi) { return spectrum.values[k].real() * gauss_G(alpha, xi); },
            q.target_tol);
        const double v = r.value.real();
        if (!rep.values.empty() && v < rep.values.back() - 1e-12) rep.monotone = false;
        rep.values.push_back(v);
        rep.integrability_estimate = std::max(rep.integrability_estimate, v);
    }
    const RealVector origin(h.dim(), 0.0);
    rep.origin_value = h.value(origin).real();
    rep.limit_residual = std::abs(rep.origin_value - rep.values.back());
    return rep;
}

}  // namespace measurelab

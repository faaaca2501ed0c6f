#include "measurelab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "measurelab/kernels.hpp"

namespace measurelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool box_in_set(const Box& box, const SupportSet& support) {
    if (!box.bounded()) return false;
    if (box.empty()) return true;
    const std::size_t n = box.dim();
    RealVector corner(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t j = 0; j < n; ++j) corner[j] = (mask >> j) & 1U ? box.hi[j] : box.lo[j];
        if (!support.contains(corner)) return false;
    }
    return true;
}

Box shifted(const Box& box, std::span<const double> offset) {
    Box b = box;
    for (std::size_t j = 0; j < offset.size(); ++j) {
        b.lo[j] += offset[j];
        b.hi[j] += offset[j];
    }
    return b;
}

double abs_spectral_integral(const SpectrumSource& s, const Box& box, const QuadratureSpec& q) {
    if (s.grid()) {
        const auto& g = *s.grid();
        return grid_sum(g.grid, [&](std::size_t k, std::span<const double>) { return Complex(std::abs(g.values[k])); },
                        q.target_tol)
            .value.real();
    }
    const std::size_t points = std::max(q.points, points_for_frequency(max_abs(box.hi), s.extent()));
    return integrate_box([&](std::span<const double> xi) { return Complex(std::abs(s(xi))); }, box, points, q.target_tol,
                         q.max_refinements)
        .value.real();
}

}  // namespace

bool supported_in(const FiniteMeasure& mu, const SupportSet& support) {
    require_same_dim(support.dim, mu.dim(), "measure");
    for (const auto& a : mu.atoms()) {
        if (a.weight != Complex(0.0) && !support.contains(a.point)) return false;
    }
    if (!mu.density()) return true;
    const DensityPart& d = *mu.density();
    if (support.discrete) return false;
    if (d.kind() != DensityKind::grid) return d.clip() && box_in_set(*d.clip(), support);
    for (const auto& t : d.translates()) {
        Box b = shifted(d.sample_grid().box(), t.offset);
        if (d.clip()) b = b.intersect(*d.clip());
        if (!box_in_set(b, support)) return false;
    }
    return true;
}

PaleyWienerReport paley_wiener_check(const FiniteMeasure& mu, const SupportSet& support,
                                     std::span<const ComplexVector> zetas, double rel_tol, const QuadratureSpec& q) {
    support.validate();
    if (!supported_in(mu, support)) {
        throw MeasureError(ErrorKind::not_supported_in_set, "measure has mass outside the declared support set");
    }
    const IntegrationResult norm = total_variation_norm(mu, q);
    PaleyWienerReport rep;
    rep.norm = norm.value.real();
    for (const auto& zeta : zetas) {
        const IntegrationResult f = fourier_complex(mu, zeta, support, q);
        const GrowthIndicator a = growth_indicator(support, zeta.imag_part());
        const double bound = rep.norm * a.value();
        const double mag = std::abs(f.value);
        const double ratio = bound > 0.0 ? mag / bound : (mag > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (rep.samples == 0 || ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.witness = zeta;
        }
        if (mag > bound * (1.0 + rel_tol) + f.error_estimate + norm.error_estimate * a.value()) rep.pass = false;
        ++rep.samples;
    }
    rep.max_slack = std::max(0.0, rep.max_ratio - 1.0);
    return rep;
}

BandLimitedValue band_limited_extension(const SpectrumSource& spectrum, const ComplexVector& z,
                                        const QuadratureSpec& q) {
    require_same_dim(spectrum.dim(), z.dim(), "evaluation point");
    const Box box = spectrum.grid() ? spectrum.grid()->grid.box() : spectrum.support();
    if (!box.bounded()) {
        throw MeasureError(ErrorKind::invalid_argument, "band-limited extension needs a compactly supported spectrum");
    }
    BandLimitedValue out;
    out.result = spectral_integral(spectrum, z, [](std::span<const double>) { return 1.0; }, box, q);
    const RealVector y = z.imag_part();
    double exponent = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) exponent += std::max(std::abs(box.lo[j]), std::abs(box.hi[j])) * std::abs(y[j]);
    out.bound = abs_spectral_integral(spectrum, box, q) * std::exp(kTwoPi * exponent);
    out.within_bound = std::abs(out.result.value) <= out.bound * (1.0 + 1e-9) + out.result.error_estimate;
    return out;
}

IntegrationResult half_plane_extension(const SpectrumSource& spectrum, Complex z, const QuadratureSpec& q) {
    q.validate();
    if (spectrum.dim() != 1) throw MeasureError(ErrorKind::dimension_mismatch, "half-plane extension needs n = 1");
    if (!(z.imag() > 0.0)) {
        throw MeasureError(ErrorKind::outside_upper_half_plane, "Im z must be positive, got " + std::to_string(z.imag()));
    }
    const double negative_tol = q.target_tol + 1e-12 * spectrum.sup_bound();
    auto reject_negative = [&](double xi, Complex v) {
        if (xi < 0.0 && std::abs(v) > negative_tol) {
            throw MeasureError(ErrorKind::spectrum_not_half_line,
                               "spectrum is nonzero at xi = " + std::to_string(xi));
        }
    };

    const ComplexVector zv(std::vector<Complex>{z});
    const double rate = spectrum.decay_rate() + kTwoPi * z.imag();
    const double bound = std::max(spectrum.sup_bound(), 1e-300);
    auto one = [](std::span<const double>) { return 1.0; };

    if (spectrum.grid()) {
        const auto& g = *spectrum.grid();
        RealVector xi(1);
        for (std::size_t k = 0; k < g.grid.size(); ++k) {
            g.grid.node(k, xi);
            reject_negative(xi[0], g.values[k]);
        }
        Box box = g.grid.box();
        box.lo[0] = std::max(box.lo[0], 0.0);
        IntegrationResult r = spectral_integral(spectrum, zv, one, box, q);
        r.error_estimate += bound * std::exp(-rate * box.hi[0]) / rate;
        return r;
    }

    const Box& support = spectrum.support();
    const double lo = std::max(support.lo[0], -q.radius);
    if (lo < 0.0) {
        const std::size_t m = q.points;
        for (std::size_t k = 0; k < m; ++k) {
            const double xi = lo + (0.0 - lo) * static_cast<double>(k) / static_cast<double>(m);
            reject_negative(xi, spectrum(std::span<const double>(&xi, 1)));
        }
    }
    const double cut = std::log(10.0 * bound / (q.target_tol * rate)) / rate;
    Box box{{std::max(support.lo[0], 0.0)}, {std::min(support.hi[0], std::max(cut, 0.0))}};
    if (!(box.lo[0] < box.hi[0])) return {0.0, 0.0, 0, true};
    QuadratureSpec inner = q;
    inner.target_tol = 0.9 * q.target_tol;
    inner.points = std::max(q.points, static_cast<std::size_t>(std::ceil(8.0 * (box.hi[0] - box.lo[0]) * rate)) + 1);
    IntegrationResult r = spectral_integral(spectrum, zv, one, box, inner);
    if (std::isfinite(support.hi[0]) && support.hi[0] <= box.hi[0]) return r;
    r.error_estimate += bound * std::exp(-rate * box.hi[0]) / rate;
    return r;
}

double cauchy_riemann_residual(const std::function<Complex(Complex)>& f, Complex z, double step) {
    if (!(step > 0.0)) throw MeasureError(ErrorKind::invalid_argument, "finite-difference step must be positive");
    const Complex i(0.0, 1.0);
    const Complex dx = (f(z + step) - f(z - step)) / (2.0 * step);
    const Complex dy = (f(z + i * step) - f(z - i * step)) / (2.0 * step);
    return std::abs(dy - i * dx);
}

}  // namespace measurelab

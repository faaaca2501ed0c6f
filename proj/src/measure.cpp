#include "measurelab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "measurelab/kernels.hpp"

namespace measurelab {

namespace {

constexpr std::size_t kMaxExplodedPairs = 20'000'000;

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

bool finite(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

RealVector concat(std::span<const double> a, std::span<const double> b) {
    RealVector r(a.begin(), a.end());
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

RealVector sum(std::span<const double> a, std::span<const double> b) {
    RealVector r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
    return r;
}

double w_alpha(const DensityPart& d) { return d.preset_w_alpha(); }

double w_factor(const DensityPart& d) { return d.preset_w_factor(); }

bool in_clip(const DensityPart& d, std::span<const double> x) { return !d.clip() || d.clip()->contains(x); }

void check_bound(const BoundedFunction& f, Complex v, std::span<const double> x) {
    if (std::abs(v) > f.bound * (1.0 + 1e-9) + 1e-300) {
        std::string where;
        for (double c : x) where += (where.empty() ? "" : ", ") + std::to_string(c);
        throw MeasureError(ErrorKind::invalid_argument, "function value " + std::to_string(std::abs(v)) +
                                                            " exceeds declared bound " + std::to_string(f.bound) +
                                                            " at (" + where + ")");
    }
}

Complex eval_checked(const BoundedFunction& f, std::span<const double> x) {
    const Complex v = f(x);
    check_bound(f, v, x);
    return v;
}

struct PresetPlan {
    Box box;
    std::size_t points = 2;
    double tail = 0.0;  // bound * mass outside box
};

// Integration box, resolution and truncation error for pairing a preset
// density against a function with the given bound and frequency hint.
PresetPlan plan_preset(const DensityPart& d, double bound, double frequency, const QuadratureSpec& q) {
    q.validate();
    PresetPlan plan;
    const double budget = 0.1 * q.target_tol / std::max(bound, 1e-300);
    plan.box = d.integration_box(budget);
    plan.tail = bound * d.tail_mass(plan.box);
    double half = 0.0;
    for (std::size_t a = 0; a < plan.box.dim(); ++a) half = std::max(half, 0.5 * (plan.box.hi[a] - plan.box.lo[a]));
    const double sigma = d.preset_sigma();
    const auto by_width = static_cast<std::size_t>(std::ceil(4.0 * half / sigma)) + 1;
    plan.points = std::max({q.points, by_width, points_for_frequency(half, frequency)});
    return plan;
}

Complex preset_density_value(const DensityPart& d, std::span<const double> x) {
    thread_local RealVector shifted;
    shifted.resize(x.size());
    if (!in_clip(d, x)) return 0.0;
    Complex acc = 0.0;
    for (const auto& t : d.translates()) {
        for (std::size_t j = 0; j < x.size(); ++j) shifted[j] = x[j] - t.offset[j];
        acc += t.weight * d.preset_profile(shifted);
    }
    return acc;
}

IntegrationResult pair_density(const DensityPart& d, const BoundedFunction& f, const QuadratureSpec& q) {
    if (d.kind() == DensityKind::grid) {
        const auto& samples = d.samples();
        return grid_sum(
            d.sample_grid(),
            [&](std::size_t flat, std::span<const double> x) {
                thread_local RealVector y;
                y.resize(x.size());
                Complex acc = 0.0;
                if (samples[flat] == Complex(0.0)) return acc;
                for (const auto& t : d.translates()) {
                    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + t.offset[j];
                    const double keep = d.clip_fraction(flat, y);
                    if (keep == 0.0) continue;
                    acc += keep * t.weight * samples[flat] * eval_checked(f, y);
                }
                return acc;
            },
            q.target_tol);
    }
    const PresetPlan plan = plan_preset(d, f.bound, f.frequency, q);
    auto r = integrate_box([&](std::span<const double> x) { return preset_density_value(d, x) * eval_checked(f, x); },
                           plan.box, plan.points, 0.9 * q.target_tol, q.max_refinements);
    r.error_estimate += plan.tail;
    return r;
}

IntegrationResult density_norm(const DensityPart& d, const QuadratureSpec& q) {
    if (d.kind() == DensityKind::grid) {
        if (d.translates().size() == 1) {
            const auto& t = d.translates().front();
            const auto& samples = d.samples();
            return grid_sum(
                d.sample_grid(),
                [&](std::size_t flat, std::span<const double> x) {
                    thread_local RealVector y;
                    y.resize(x.size());
                    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + t.offset[j];
                    return Complex(d.clip_fraction(flat, y) * std::abs(t.weight * samples[flat]));
                },
                q.target_tol);
        }
        // Overlapping translates: exact sum over merged nodes.
        const FiniteMeasure exploded = FiniteMeasure(d.dim(), grid_atoms(d)).canonical();
        double s = 0.0;
        for (const auto& a : exploded.atoms()) s += std::abs(a.weight);
        return {s, 0.0, 0, true};
    }
    const PresetPlan plan = plan_preset(d, 1.0, 0.0, q);
    auto r = integrate_box([&](std::span<const double> x) { return Complex(std::abs(preset_density_value(d, x))); },
                           plan.box, plan.points, 0.9 * q.target_tol, q.max_refinements);
    r.error_estimate += plan.tail;
    return r;
}

IntegrationResult combine(Complex exact, const std::optional<IntegrationResult>& part) {
    if (!part) return {exact, 0.0, 0, true};
    IntegrationResult r = *part;
    r.value += exact;
    return r;
}

bool same_profile(const DensityPart& a, const DensityPart& b) {
    if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
    if (a.is_preset()) return a.alpha() == b.alpha();
    return a.sample_grid().same_layout(b.sample_grid()) && a.samples() == b.samples();
}

bool same_clip(const DensityPart& a, const DensityPart& b) {
    if (a.clip().has_value() != b.clip().has_value()) return false;
    return !a.clip() || (a.clip()->lo == b.clip()->lo && a.clip()->hi == b.clip()->hi);
}

DensityPart add_densities(const DensityPart& a, const DensityPart& b) {
    if (same_profile(a, b) && same_clip(a, b)) {
        auto translates = a.translates();
        translates.insert(translates.end(), b.translates().begin(), b.translates().end());
        return a.with_translates(std::move(translates));
    }
    if (a.kind() == DensityKind::grid && b.kind() == DensityKind::grid &&
        a.sample_grid().same_layout(b.sample_grid()) && same_clip(a, b) && a.translates().size() == 1 &&
        b.translates().size() == 1 && a.translates()[0].offset == b.translates()[0].offset) {
        // Aligned grids: add the (weighted) samples.
        std::vector<Complex> s(a.samples().size());
        const Complex wa = a.translates()[0].weight;
        const Complex wb = b.translates()[0].weight;
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = wa * a.samples()[k] + wb * b.samples()[k];
        return a.with_samples(std::move(s)).with_translates({Translate{a.translates()[0].offset, 1.0}});
    }
    throw MeasureError(ErrorKind::unsupported_representation,
                       std::string("cannot add densities of kinds ") + to_string(a.kind()) + " and " +
                           to_string(b.kind()) + " with different profiles, layouts or clips");
}

std::optional<DensityPart> add_optional(const std::optional<DensityPart>& a, const std::optional<DensityPart>& b) {
    if (!a) return b;
    if (!b) return a;
    return add_densities(*a, *b);
}

std::vector<Atom> atom_pairs_sum(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    if (a.size() * b.size() > kMaxExplodedPairs) {
        throw MeasureError(ErrorKind::unsupported_representation, "atomic convolution exceeds the pair budget");
    }
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) out.push_back(Atom{sum(x.point, y.point), x.weight * y.weight});
    }
    return out;
}

std::optional<Box> product_clip(const DensityPart& a, const DensityPart& b) {
    if (!a.clip() && !b.clip()) return std::nullopt;
    const Box ca = a.clip().value_or(Box::whole_space(a.dim()));
    const Box cb = b.clip().value_or(Box::whole_space(b.dim()));
    return Box{concat(ca.lo, cb.lo), concat(ca.hi, cb.hi)};
}

std::vector<Translate> translate_pairs(const DensityPart& a, const DensityPart& b, bool concat_offsets) {
    std::vector<Translate> out;
    for (const auto& s : a.translates()) {
        for (const auto& t : b.translates()) {
            out.push_back(Translate{concat_offsets ? concat(s.offset, t.offset) : sum(s.offset, t.offset),
                                    s.weight * t.weight});
        }
    }
    return out;
}

// Atoms placed against a density: the density shifted to each atom.
DensityPart shift_by_atoms(const DensityPart& d, const std::vector<Atom>& atoms) {
    std::vector<Translate> out;
    for (const auto& a : atoms) {
        for (const auto& t : d.translates()) out.push_back(Translate{sum(t.offset, a.point), a.weight * t.weight});
    }
    return d.with_translates(std::move(out));
}

std::optional<DensityPart> grid_convolution(const DensityPart& a, const DensityPart& b) {
    if (a.kind() != DensityKind::grid || b.kind() != DensityKind::grid) return std::nullopt;
    if (a.clip() || b.clip() || a.translates().size() != 1 || b.translates().size() != 1) return std::nullopt;
    const auto& ga = a.sample_grid();
    const auto& gb = b.sample_grid();
    const std::size_t n = ga.dim();
    for (std::size_t ax = 0; ax < n; ++ax) {
        if (std::abs(ga.spacing(ax) - gb.spacing(ax)) > 1e-12 * ga.spacing(ax)) return std::nullopt;
    }
    if (ga.size() * gb.size() > kMaxExplodedPairs) return std::nullopt;

    Box box{RealVector(n), RealVector(n)};
    std::vector<std::size_t> counts(n);
    for (std::size_t ax = 0; ax < n; ++ax) {
        counts[ax] = ga.counts()[ax] + gb.counts()[ax] - 1;
        box.lo[ax] = ga.box().lo[ax] + gb.box().lo[ax];
        box.hi[ax] = box.lo[ax] + ga.spacing(ax) * static_cast<double>(counts[ax] - 1);
    }
    UniformGrid out_grid(box, counts);
    std::vector<Complex> mass(out_grid.size(), 0.0);
    for (std::size_t i = 0; i < ga.size(); ++i) {
        const Complex mi = ga.trapezoid_weight(i) * a.samples()[i];
        if (mi == Complex(0.0)) continue;
        const auto ii = ga.unflatten(i);
        for (std::size_t j = 0; j < gb.size(); ++j) {
            const auto jj = gb.unflatten(j);
            std::size_t k = 0;
            for (std::size_t ax = 0; ax < n; ++ax) k = k * counts[ax] + ii[ax] + jj[ax];
            mass[k] += mi * gb.trapezoid_weight(j) * b.samples()[j];
        }
    }
    for (std::size_t k = 0; k < mass.size(); ++k) mass[k] /= out_grid.trapezoid_weight(k);
    const auto& ta = a.translates()[0];
    const auto& tb = b.translates()[0];
    return DensityPart::grid(out_grid, std::move(mass))
        .with_translates({Translate{sum(ta.offset, tb.offset), ta.weight * tb.weight}});
}

}  // namespace

const char* to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::gaussian_G: return "gaussian-G";
        case DensityKind::gaussian_W: return "gaussian-W";
        case DensityKind::grid: return "grid";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// DensityPart

DensityPart DensityPart::gaussian_G(std::size_t dim, double alpha) {
    DensityPart d;
    d.kind_ = DensityKind::gaussian_G;
    d.dim_ = dim;
    d.alpha_ = alpha;
    d.translates_ = {Translate{RealVector(dim, 0.0), 1.0}};
    d.validate();
    return d;
}

DensityPart DensityPart::gaussian_W(std::size_t dim, double alpha) {
    DensityPart d = gaussian_G(dim, alpha);
    d.kind_ = DensityKind::gaussian_W;
    return d;
}

DensityPart DensityPart::grid(UniformGrid grid, std::vector<Complex> values) {
    DensityPart d;
    d.kind_ = DensityKind::grid;
    d.dim_ = grid.dim();
    d.grid_ = std::move(grid);
    d.samples_ = std::move(values);
    d.translates_ = {Translate{RealVector(d.dim_, 0.0), 1.0}};
    d.validate();
    return d;
}

DensityPart DensityPart::with_translates(std::vector<Translate> translates) const {
    DensityPart d = *this;
    d.translates_ = std::move(translates);
    d.validate();
    return d;
}

double DensityPart::clip_fraction(std::size_t flat, std::span<const double> y) const {
    if (!clip_) return 1.0;
    double f = 1.0;
    for (std::size_t a = dim_; a-- > 0;) {
        const std::size_t count = grid_.counts()[a];
        const std::size_t i = flat % count;
        flat /= count;
        const double lo = clip_->lo[a], hi = clip_->hi[a], c = y[a];
        if (count < 2) {
            if (c < lo || c > hi) return 0.0;
            continue;
        }
        const double h = grid_.spacing(a);
        double kept = 0.0, full = 0.0;
        if (i > 0) {
            const double u = std::clamp(lo, c - h, c), v = std::clamp(hi, c - h, c);
            kept += ((v - c + h) * (v - c + h) - (u - c + h) * (u - c + h)) / (2.0 * h);
            full += 0.5 * h;
        }
        if (i + 1 < count) {
            const double u = std::clamp(lo, c, c + h), v = std::clamp(hi, c, c + h);
            kept += ((c + h - u) * (c + h - u) - (c + h - v) * (c + h - v)) / (2.0 * h);
            full += 0.5 * h;
        }
        f *= std::clamp(kept / full, 0.0, 1.0);
        if (f == 0.0) return 0.0;
    }
    return f;
}

DensityPart DensityPart::with_clip(std::optional<Box> clip) const {
    DensityPart d = *this;
    d.clip_ = std::move(clip);
    d.validate();
    return d;
}

DensityPart DensityPart::with_samples(std::vector<Complex> samples) const {
    DensityPart d = *this;
    d.samples_ = std::move(samples);
    d.validate();
    return d;
}

double DensityPart::preset_profile(std::span<const double> x) const {
    switch (kind_) {
        case DensityKind::gaussian_G: return measurelab::gauss_G(alpha_, x);
        case DensityKind::gaussian_W: return measurelab::gauss_W(alpha_, x);
        case DensityKind::grid: break;
    }
    throw MeasureError(ErrorKind::invalid_argument, "grid densities have no closed-form profile");
}

Complex DensityPart::value(std::span<const double> x) const {
    require_same_dim(dim_, x.size(), "density point");
    if (is_preset()) return preset_density_value(*this, x);
    if (!in_clip(*this, x)) return 0.0;
    RealVector y(x.size());
    Complex acc = 0.0;
    for (const auto& t : translates_) {
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] - t.offset[j];
        acc += t.weight * interpolate(grid_, samples_, y);
    }
    return acc;
}

double DensityPart::preset_w_alpha() const {
    return kind_ == DensityKind::gaussian_W ? alpha_ : gauss_G_dual_alpha(alpha_);
}

double DensityPart::preset_w_factor() const {
    return kind_ == DensityKind::gaussian_W ? 1.0 : gauss_G_as_W_factor(alpha_, dim_);
}

double DensityPart::preset_sigma() const { return std::sqrt(2.0 * w_alpha(*this)); }

Box DensityPart::integration_box(double tail_budget) const {
    Box box{RealVector(dim_, std::numeric_limits<double>::infinity()),
            RealVector(dim_, -std::numeric_limits<double>::infinity())};
    double reach_lo = 0.0;
    double reach_hi = 0.0;
    if (is_preset()) {
        double mass = 0.0;
        for (const auto& t : translates_) mass += std::abs(t.weight);
        mass *= w_factor(*this);
        const double per_unit = mass > 0.0 ? tail_budget / mass : 1.0;
        const double r = gaussian_radius_for(w_alpha(*this), dim_, std::min(per_unit, 0.5));
        reach_lo = -r;
        reach_hi = r;
    }
    for (const auto& t : translates_) {
        for (std::size_t j = 0; j < dim_; ++j) {
            const double lo = is_preset() ? reach_lo : grid_.box().lo[j];
            const double hi = is_preset() ? reach_hi : grid_.box().hi[j];
            box.lo[j] = std::min(box.lo[j], t.offset[j] + lo);
            box.hi[j] = std::max(box.hi[j], t.offset[j] + hi);
        }
    }
    if (translates_.empty()) box = Box::cube(dim_, 1.0);
    if (clip_) box = box.intersect(*clip_);
    return box;
}

double DensityPart::tail_mass(const Box& box) const {
    if (is_preset()) {
        double tail = 0.0;
        const double a = w_alpha(*this);
        for (const auto& t : translates_) tail += std::abs(t.weight) * box_gaussian_tail(a, t.offset, box);
        return tail * w_factor(*this);
    }
    double tail = 0.0;
    RealVector y(dim_);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        const RealVector x = grid_.node(k);
        for (const auto& t : translates_) {
            for (std::size_t j = 0; j < dim_; ++j) y[j] = x[j] + t.offset[j];
            if (!box.contains(y)) {
                tail += clip_fraction(k, y) * grid_.trapezoid_weight(k) * std::abs(t.weight * samples_[k]);
            }
        }
    }
    return tail;
}

double DensityPart::mass_bound() const {
    double w = 0.0;
    for (const auto& t : translates_) w += std::abs(t.weight);
    if (is_preset()) return w * w_factor(*this);
    double s = 0.0;
    for (std::size_t k = 0; k < grid_.size(); ++k) s += grid_.trapezoid_weight(k) * std::abs(samples_[k]);
    return w * s;
}

void DensityPart::validate() const {
    if (dim_ == 0) throw MeasureError(ErrorKind::invalid_argument, "density dimension must be positive");
    if (is_preset()) {
        if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
            throw MeasureError(ErrorKind::invalid_argument, "Gaussian density needs alpha > 0");
        }
    } else {
        require_same_dim(dim_, grid_.dim(), "density grid");
        if (samples_.size() != grid_.size()) {
            throw MeasureError(ErrorKind::invalid_argument, "grid density has " + std::to_string(samples_.size()) +
                                                                " samples, expected " + std::to_string(grid_.size()));
        }
        double total = 0.0;
        for (const auto& s : samples_) {
            if (!finite(s)) throw MeasureError(ErrorKind::invalid_argument, "grid density sample is not finite");
            total += std::abs(s);
        }
        if (!std::isfinite(total)) throw MeasureError(ErrorKind::invalid_argument, "grid density mass overflows");
    }
    for (const auto& t : translates_) {
        require_same_dim(dim_, t.offset.size(), "density translate");
        if (!finite(t.offset) || !finite(t.weight)) {
            throw MeasureError(ErrorKind::invalid_argument, "density translate is not finite");
        }
    }
    if (clip_) {
        require_same_dim(dim_, clip_->dim(), "density clip box");
        for (std::size_t j = 0; j < dim_; ++j) {
            if (std::isnan(clip_->lo[j]) || std::isnan(clip_->hi[j]) || clip_->lo[j] > clip_->hi[j]) {
                throw MeasureError(ErrorKind::invalid_argument, "density clip box is inverted");
            }
        }
    }
}

bool operator==(const DensityPart& a, const DensityPart& b) {
    if (!same_profile(a, b) || !same_clip(a, b)) return false;
    if (a.translates_.size() != b.translates_.size()) return false;
    for (std::size_t k = 0; k < a.translates_.size(); ++k) {
        if (a.translates_[k].offset != b.translates_[k].offset || a.translates_[k].weight != b.translates_[k].weight) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// FiniteMeasure

FiniteMeasure::FiniteMeasure(std::size_t dim, std::vector<Atom> atoms, std::optional<DensityPart> density)
    : dim_(dim), atoms_(std::move(atoms)), density_(std::move(density)) {
    if (dim_ == 0) throw MeasureError(ErrorKind::invalid_argument, "measure dimension must be positive");
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        require_same_dim(dim_, atoms_[k].point.size(), "atom point");
        if (!finite(atoms_[k].point) || !finite(atoms_[k].weight)) {
            throw MeasureError(ErrorKind::invalid_argument, "atom " + std::to_string(k) + " is not finite");
        }
    }
    if (density_) {
        require_same_dim(dim_, density_->dim(), "density");
        density_->validate();
    }
}

FiniteMeasure FiniteMeasure::zero(std::size_t dim) { return FiniteMeasure(dim, {}); }

FiniteMeasure FiniteMeasure::dirac(RealVector point, Complex weight) {
    const std::size_t n = point.size();
    return FiniteMeasure(n, {Atom{std::move(point), weight}});
}

FiniteMeasure FiniteMeasure::from_density(DensityPart density) {
    const std::size_t n = density.dim();
    return FiniteMeasure(n, {}, std::move(density));
}

FiniteMeasure FiniteMeasure::canonical() const {
    std::vector<Atom> sorted = atoms_;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) {
        return std::lexicographical_compare(a.point.begin(), a.point.end(), b.point.begin(), b.point.end());
    });
    std::vector<Atom> merged;
    for (auto& a : sorted) {
        if (!merged.empty() && merged.back().point == a.point) {
            merged.back().weight += a.weight;
        } else {
            merged.push_back(std::move(a));
        }
    }
    std::erase_if(merged, [](const Atom& a) { return a.weight == Complex(0.0); });
    return FiniteMeasure(dim_, std::move(merged), density_);
}

double FiniteMeasure::extent(double tail_budget) const {
    double e = 0.0;
    for (const auto& a : atoms_) e = std::max(e, max_abs(a.point));
    if (density_) {
        const Box b = density_->integration_box(tail_budget);
        e = std::max({e, max_abs(b.lo), max_abs(b.hi)});
    }
    return e;
}

bool operator==(const FiniteMeasure& a, const FiniteMeasure& b) {
    if (a.dim_ != b.dim_ || a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t k = 0; k < a.atoms_.size(); ++k) {
        if (a.atoms_[k].point != b.atoms_[k].point || a.atoms_[k].weight != b.atoms_[k].weight) return false;
    }
    if (a.density_.has_value() != b.density_.has_value()) return false;
    return !a.density_ || *a.density_ == *b.density_;
}

// ---------------------------------------------------------------------------
// BoundedFunction

BoundedFunction BoundedFunction::constant(std::size_t dim, Complex c) {
    BoundedFunction f;
    f.dim = dim;
    f.evaluate = [c](std::span<const double>) { return c; };
    f.bound = std::abs(c);
    f.constant_value = c;
    return f;
}

BoundedFunction BoundedFunction::exponential(RealVector xi) {
    BoundedFunction f;
    f.dim = xi.size();
    f.frequency = max_abs(xi);
    f.bound = 1.0;
    f.evaluate = [xi = std::move(xi)](std::span<const double> x) { return e_kernel(xi, x); };
    return f;
}

BoundedFunction BoundedFunction::gauss_W(std::size_t dim, double alpha) {
    BoundedFunction f;
    f.dim = dim;
    f.bound = gauss_W_prefactor(alpha, dim);
    f.frequency = 0.5 / std::sqrt(2.0 * alpha);
    f.evaluate = [alpha](std::span<const double> x) { return Complex(measurelab::gauss_W(alpha, x)); };
    return f;
}

BoundedFunction BoundedFunction::gauss_G(std::size_t dim, double alpha) {
    BoundedFunction f;
    f.dim = dim;
    f.bound = 1.0;
    f.frequency = 0.5 / std::sqrt(2.0 * gauss_G_dual_alpha(alpha));
    f.evaluate = [alpha](std::span<const double> x) { return Complex(measurelab::gauss_G(alpha, x)); };
    return f;
}

BoundedFunction BoundedFunction::smooth_cutoff(std::size_t dim, double inner, double outer) {
    if (!(inner >= 0.0) || !(outer > inner)) {
        throw MeasureError(ErrorKind::invalid_argument, "smooth cutoff needs 0 <= inner < outer");
    }
    BoundedFunction f;
    f.dim = dim;
    f.bound = 1.0;
    f.frequency = 1.0 / (outer - inner);
    f.evaluate = [inner, outer](std::span<const double> x) {
        double v = 1.0;
        for (double c : x) {
            const double r = std::abs(c);
            if (r >= outer) return Complex(0.0);
            if (r > inner) {
                const double t = (r - inner) / (outer - inner);
                v *= 1.0 - t * t * (3.0 - 2.0 * t);
            }
        }
        return Complex(v);
    };
    return f;
}

BoundedFunction BoundedFunction::reflected_shift(RealVector shift) const {
    require_same_dim(dim, shift.size(), "shift point");
    BoundedFunction g = *this;
    g.evaluate = [f = evaluate, shift = std::move(shift)](std::span<const double> y) {
        thread_local RealVector z;
        z.resize(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) z[j] = shift[j] - y[j];
        return f(z);
    };
    return g;
}

// ---------------------------------------------------------------------------
// Operations

IntegrationResult total_variation_norm(const FiniteMeasure& mu, const QuadratureSpec& q) {
    double atoms = 0.0;
    const FiniteMeasure merged = mu.canonical();
    for (const auto& a : merged.atoms()) atoms += std::abs(a.weight);
    if (!mu.density()) return {atoms, 0.0, 0, true};
    return combine(atoms, density_norm(*mu.density(), q));
}

IntegrationResult apply(const FiniteMeasure& mu, const BoundedFunction& f, const QuadratureSpec& q) {
    require_same_dim(mu.dim(), f.dim, "function");
    Complex atoms = 0.0;
    for (const auto& a : mu.atoms()) atoms += a.weight * eval_checked(f, a.point);
    if (!mu.density()) return {atoms, 0.0, 0, true};
    return combine(atoms, pair_density(*mu.density(), f, q));
}

FiniteMeasure modulate(const FiniteMeasure& mu, const BoundedFunction& phi, const QuadratureSpec& q) {
    require_same_dim(mu.dim(), phi.dim, "modulating function");
    if (phi.constant_value) return scale(mu, *phi.constant_value);

    std::vector<Atom> atoms;
    atoms.reserve(mu.atoms().size());
    for (const auto& a : mu.atoms()) atoms.push_back(Atom{a.point, a.weight * eval_checked(phi, a.point)});
    if (!mu.density()) return FiniteMeasure(mu.dim(), std::move(atoms));

    const DensityPart& d = *mu.density();
    if (d.kind() == DensityKind::grid && d.translates().size() == 1) {
        const auto& t = d.translates().front();
        const auto& g = d.sample_grid();
        std::vector<Complex> s(g.size());
        RealVector y(mu.dim());
        for (std::size_t k = 0; k < g.size(); ++k) {
            const RealVector x = g.node(k);
            for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + t.offset[j];
            s[k] = d.samples()[k] * (d.clip_fraction(k, y) > 0.0 ? eval_checked(phi, y) : Complex(0.0));
        }
        return FiniteMeasure(mu.dim(), std::move(atoms), d.with_samples(std::move(s)));
    }
    if (d.kind() == DensityKind::grid) {
        for (auto& a : grid_atoms(d)) atoms.push_back(Atom{a.point, a.weight * eval_checked(phi, a.point)});
        return FiniteMeasure(mu.dim(), std::move(atoms));
    }

    // Preset: sample h phi on a grid covering the preset's integration box.
    PresetPlan plan = plan_preset(d, 1.0, phi.frequency, q);
    if (plan.box.empty()) return FiniteMeasure(mu.dim(), std::move(atoms));
    std::size_t points = plan.points % 2 == 0 ? plan.points + 1 : plan.points;
    UniformGrid g(plan.box, std::vector<std::size_t>(mu.dim(), points));
    std::vector<Complex> s(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const RealVector x = g.node(k);
        s[k] = preset_density_value(d, x) * eval_checked(phi, x);
    }
    return FiniteMeasure(mu.dim(), std::move(atoms), DensityPart::grid(std::move(g), std::move(s)));
}

FiniteMeasure add(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    require_same_dim(mu.dim(), nu.dim(), "measure");
    std::vector<Atom> atoms = mu.atoms();
    atoms.insert(atoms.end(), nu.atoms().begin(), nu.atoms().end());
    return FiniteMeasure(mu.dim(), std::move(atoms), add_optional(mu.density(), nu.density()));
}

FiniteMeasure scale(const FiniteMeasure& mu, Complex c) {
    std::vector<Atom> atoms = mu.atoms();
    for (auto& a : atoms) a.weight *= c;
    std::optional<DensityPart> d = mu.density();
    if (d) {
        auto translates = d->translates();
        for (auto& t : translates) t.weight *= c;
        d = d->with_translates(std::move(translates));
    }
    return FiniteMeasure(mu.dim(), std::move(atoms), std::move(d));
}

std::vector<Atom> grid_atoms(const DensityPart& d) {
    if (d.kind() != DensityKind::grid) {
        throw MeasureError(ErrorKind::unsupported_representation, "only grid densities expand into point masses");
    }
    const auto& g = d.sample_grid();
    std::vector<Atom> out;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (d.samples()[k] == Complex(0.0)) continue;
        const RealVector x = g.node(k);
        const double w = g.trapezoid_weight(k);
        for (const auto& t : d.translates()) {
            RealVector y = sum(x, t.offset);
            const double keep = d.clip_fraction(k, y);
            if (keep == 0.0) continue;
            out.push_back(Atom{std::move(y), keep * t.weight * w * d.samples()[k]});
        }
    }
    return out;
}

FiniteMeasure product(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    const std::size_t dim = mu.dim() + nu.dim();
    auto pair_atoms = [](const std::vector<Atom>& a, const std::vector<Atom>& b, std::vector<Atom>& out) {
        if (a.size() * b.size() > kMaxExplodedPairs) {
            throw MeasureError(ErrorKind::unsupported_representation, "product exceeds the pair budget");
        }
        for (const auto& x : a) {
            for (const auto& y : b) out.push_back(Atom{concat(x.point, y.point), x.weight * y.weight});
        }
    };
    auto singular_part = [](const std::optional<DensityPart>& d, bool other_has_atoms) -> std::vector<Atom> {
        if (!d || !other_has_atoms) return {};
        if (d->kind() == DensityKind::grid) return grid_atoms(*d);
        throw MeasureError(ErrorKind::unsupported_representation,
                           "product of point masses with a Gaussian density is not a density on the product space");
    };

    std::vector<Atom> atoms;
    pair_atoms(mu.atoms(), nu.atoms(), atoms);
    pair_atoms(mu.atoms(), singular_part(nu.density(), !mu.atoms().empty()), atoms);
    pair_atoms(singular_part(mu.density(), !nu.atoms().empty()), nu.atoms(), atoms);

    std::optional<DensityPart> density;
    if (mu.density() && nu.density()) {
        const DensityPart& a = *mu.density();
        const DensityPart& b = *nu.density();
        if (a.kind() == DensityKind::grid && b.kind() == DensityKind::grid) {
            const auto& ga = a.sample_grid();
            const auto& gb = b.sample_grid();
            Box box{concat(ga.box().lo, gb.box().lo), concat(ga.box().hi, gb.box().hi)};
            std::vector<std::size_t> counts = ga.counts();
            counts.insert(counts.end(), gb.counts().begin(), gb.counts().end());
            std::vector<Complex> s(ga.size() * gb.size());
            for (std::size_t i = 0; i < ga.size(); ++i) {
                for (std::size_t j = 0; j < gb.size(); ++j) s[i * gb.size() + j] = a.samples()[i] * b.samples()[j];
            }
            density = DensityPart::grid(UniformGrid(box, counts), std::move(s))
                          .with_translates(translate_pairs(a, b, true))
                          .with_clip(product_clip(a, b));
        } else if (a.is_preset() && a.kind() == b.kind() && a.alpha() == b.alpha()) {
            DensityPart p = a.kind() == DensityKind::gaussian_W ? DensityPart::gaussian_W(dim, a.alpha())
                                                                : DensityPart::gaussian_G(dim, a.alpha());
            density = p.with_translates(translate_pairs(a, b, true)).with_clip(product_clip(a, b));
        } else {
            throw MeasureError(ErrorKind::unsupported_representation,
                               std::string("product of ") + to_string(a.kind()) + " and " + to_string(b.kind()) +
                                   " densities is not representable");
        }
    }
    return FiniteMeasure(dim, std::move(atoms), std::move(density));
}

FiniteMeasure convolve_measures(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    require_same_dim(mu.dim(), nu.dim(), "measure");
    const std::size_t dim = mu.dim();

    std::vector<Atom> atoms = atom_pairs_sum(mu.atoms(), nu.atoms());
    std::optional<DensityPart> density;
    std::vector<Atom> extra;  // grid parts that had to be expanded

    auto cross = [&](const std::optional<DensityPart>& d, const std::vector<Atom>& other_atoms) {
        if (!d || other_atoms.empty()) return;
        if (d->clip()) {
            if (d->kind() != DensityKind::grid) {
                throw MeasureError(ErrorKind::unsupported_representation,
                                   "convolution of point masses with a clipped Gaussian density");
            }
            auto e = atom_pairs_sum(grid_atoms(*d), other_atoms);
            extra.insert(extra.end(), e.begin(), e.end());
            return;
        }
        const DensityPart shifted = shift_by_atoms(*d, other_atoms);
        if (!density) {
            density = shifted;
        } else if (same_profile(*density, shifted) && same_clip(*density, shifted)) {
            density = add_densities(*density, shifted);
        } else if (shifted.kind() == DensityKind::grid) {
            auto e = grid_atoms(shifted);
            extra.insert(extra.end(), e.begin(), e.end());
        } else {
            throw MeasureError(ErrorKind::unsupported_representation, "convolution mixes different density profiles");
        }
    };
    cross(nu.density(), mu.atoms());
    cross(mu.density(), nu.atoms());

    if (mu.density() && nu.density()) {
        const DensityPart& a = *mu.density();
        const DensityPart& b = *nu.density();
        if (a.kind() != DensityKind::grid || b.kind() != DensityKind::grid) {
            throw MeasureError(ErrorKind::unsupported_representation,
                               std::string("convolution of ") + to_string(a.kind()) + " and " + to_string(b.kind()) +
                                   " densities is not representable");
        }
        std::optional<DensityPart> conv = grid_convolution(a, b);
        if (conv && (!density || (same_profile(*density, *conv) && same_clip(*density, *conv)))) {
            density = density ? add_densities(*density, *conv) : *conv;
        } else {
            auto e = atom_pairs_sum(grid_atoms(a), grid_atoms(b));
            extra.insert(extra.end(), e.begin(), e.end());
        }
    }
    atoms.insert(atoms.end(), extra.begin(), extra.end());
    const FiniteMeasure merged = FiniteMeasure(dim, std::move(atoms)).canonical();
    return FiniteMeasure(dim, merged.atoms(), std::move(density));
}

IntegrationResult convolve_with_function(const FiniteMeasure& mu, const BoundedFunction& f, std::span<const double> x,
                                         const QuadratureSpec& q) {
    require_same_dim(mu.dim(), x.size(), "evaluation point");
    require_same_dim(mu.dim(), f.dim, "function");
    return apply(mu, f.reflected_shift(RealVector(x.begin(), x.end())), q);
}

FiniteMeasure compact_approximation(const FiniteMeasure& mu, double radius) {
    if (!(radius > 0.0)) throw MeasureError(ErrorKind::invalid_argument, "approximation radius must be positive");
    const Box cube = Box::cube(mu.dim(), radius);
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms()) {
        if (cube.contains(a.point)) atoms.push_back(a);
    }
    std::optional<DensityPart> density;
    if (mu.density()) {
        const Box clip = mu.density()->clip() ? mu.density()->clip()->intersect(cube) : cube;
        bool empty = false;
        for (std::size_t j = 0; j < clip.dim(); ++j) empty = empty || clip.lo[j] > clip.hi[j];
        if (!empty) density = mu.density()->with_clip(clip);
    }
    return FiniteMeasure(mu.dim(), std::move(atoms), std::move(density));
}

IntegrationResult discarded_norm(const FiniteMeasure& mu, double radius, const QuadratureSpec& q) {
    const Box cube = Box::cube(mu.dim(), radius);
    double atoms = 0.0;
    const FiniteMeasure merged = mu.canonical();
    for (const auto& a : merged.atoms()) {
        if (!cube.contains(a.point)) atoms += std::abs(a.weight);
    }
    if (!mu.density()) return {atoms, 0.0, 0, true};
    const FiniteMeasure kept = compact_approximation(FiniteMeasure::from_density(*mu.density()), radius);
    const IntegrationResult full = density_norm(*mu.density(), q);
    const IntegrationResult inside = kept.density() ? density_norm(*kept.density(), q) : IntegrationResult{};
    return IntegrationResult{atoms + full.value.real() - inside.value.real(),
                             full.error_estimate + inside.error_estimate,
                             std::max(full.refinements_used, inside.refinements_used),
                             full.converged && inside.converged};
}

}  // namespace measurelab

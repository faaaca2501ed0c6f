#include "measurelab/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

namespace measurelab {

UniformGrid::UniformGrid(Box box, std::vector<std::size_t> counts) : box_(std::move(box)), counts_(std::move(counts)) {
    box_.validate("grid box");
    if (!box_.bounded()) throw MeasureError(ErrorKind::invalid_argument, "grid box must be bounded");
    require_same_dim(box_.dim(), counts_.size(), "grid sample counts");
    size_ = 1;
    for (std::size_t c : counts_) {
        if (c < 2) throw MeasureError(ErrorKind::invalid_argument, "grid needs at least 2 samples per axis");
        size_ *= c;
    }
}

double UniformGrid::spacing(std::size_t axis) const {
    return (box_.hi[axis] - box_.lo[axis]) / static_cast<double>(counts_[axis] - 1);
}

std::vector<std::size_t> UniformGrid::unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t a = dim(); a-- > 0;) {
        idx[a] = flat % counts_[a];
        flat /= counts_[a];
    }
    return idx;
}

void UniformGrid::node(std::size_t flat, std::span<double> out) const {
    for (std::size_t a = dim(); a-- > 0;) {
        const std::size_t i = flat % counts_[a];
        flat /= counts_[a];
        // Endpoints are reproduced exactly.
        if (i + 1 == counts_[a]) {
            out[a] = box_.hi[a];
        } else {
            const double t = static_cast<double>(i) / static_cast<double>(counts_[a] - 1);
            out[a] = box_.lo[a] + t * (box_.hi[a] - box_.lo[a]);
        }
    }
}

RealVector UniformGrid::node(std::size_t flat) const {
    RealVector x(dim());
    node(flat, x);
    return x;
}

double UniformGrid::trapezoid_weight(std::size_t flat) const {
    double w = 1.0;
    for (std::size_t a = dim(); a-- > 0;) {
        const std::size_t i = flat % counts_[a];
        flat /= counts_[a];
        const double h = spacing(a);
        w *= (i == 0 || i + 1 == counts_[a]) ? 0.5 * h : h;
    }
    return w;
}

bool UniformGrid::has_coarse() const {
    for (std::size_t c : counts_) {
        if (c < 3 || c % 2 == 0) return false;
    }
    return !counts_.empty();
}

bool UniformGrid::same_layout(const UniformGrid& other) const {
    return counts_ == other.counts_ && box_.lo == other.box_.lo && box_.hi == other.box_.hi;
}

UniformGrid parse_grid_spec(const std::string& text) {
    Box box;
    std::vector<std::size_t> counts;
    std::stringstream axes(text);
    std::string axis;
    while (std::getline(axes, axis, ',')) {
        std::stringstream fields(axis);
        std::string lo, hi, n;
        if (!std::getline(fields, lo, ':') || !std::getline(fields, hi, ':') || !std::getline(fields, n, ':')) {
            throw MeasureError(ErrorKind::schema, "grid axis '" + axis + "' is not lo:hi:count");
        }
        try {
            std::size_t used = 0;
            box.lo.push_back(std::stod(lo, &used));
            box.hi.push_back(std::stod(hi, &used));
            const long long c = std::stoll(n, &used);
            if (used != n.size() || c < 2) throw std::invalid_argument("count");
            counts.push_back(static_cast<std::size_t>(c));
        } catch (const std::logic_error&) {
            throw MeasureError(ErrorKind::schema, "grid axis '" + axis + "' is not lo:hi:count");
        }
    }
    if (counts.empty()) throw MeasureError(ErrorKind::schema, "empty grid specification");
    return UniformGrid(std::move(box), std::move(counts));
}

Complex interpolate(const UniformGrid& grid, std::span<const Complex> values, std::span<const double> x) {
    const std::size_t n = grid.dim();
    require_same_dim(n, x.size(), "interpolation point");
    if (!grid.box().contains(x)) return 0.0;
    std::vector<std::size_t> base(n);
    std::vector<double> frac(n);
    for (std::size_t a = 0; a < n; ++a) {
        const double u = (x[a] - grid.box().lo[a]) / grid.spacing(a);
        auto i = static_cast<std::size_t>(std::floor(u));
        if (i + 1 >= grid.counts()[a]) i = grid.counts()[a] - 2;
        base[a] = i;
        frac[a] = u - static_cast<double>(i);
    }
    Complex acc = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
        double w = 1.0;
        std::size_t flat = 0;
        for (std::size_t a = 0; a < n; ++a) {
            const bool up = (corner >> a) & 1U;
            w *= up ? frac[a] : 1.0 - frac[a];
            flat = flat * grid.counts()[a] + base[a] + (up ? 1 : 0);
        }
        if (w != 0.0) acc += w * values[flat];
    }
    return acc;
}

}  // namespace measurelab

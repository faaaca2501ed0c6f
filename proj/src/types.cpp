#include "measurelab/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace measurelab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid argument";
        case ErrorKind::dimension_mismatch: return "dimension mismatch";
        case ErrorKind::unsupported_representation: return "unsupported representation";
        case ErrorKind::non_finite_sample: return "non-finite sample";
        case ErrorKind::non_integrable_spectrum: return "non-integrable spectrum";
        case ErrorKind::outside_tube_domain: return "outside tube domain";
        case ErrorKind::outside_upper_half_plane: return "outside upper half-plane";
        case ErrorKind::spectrum_not_half_line: return "spectrum not half-line supported";
        case ErrorKind::not_positive_definite: return "not positive-definite";
        case ErrorKind::not_supported_in_set: return "measure not supported in A";
        case ErrorKind::schema: return "schema error";
        case ErrorKind::unknown_identity: return "unknown identity";
    }
    return "error";
}

MeasureError::MeasureError(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void require_same_dim(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual) {
        throw MeasureError(ErrorKind::dimension_mismatch, std::string(what) + " has dimension " +
                                                              std::to_string(actual) + ", expected " +
                                                              std::to_string(expected));
    }
}

ComplexVector::ComplexVector(std::vector<Complex> components) : components_(std::move(components)) {}

ComplexVector ComplexVector::real(std::span<const double> xi) {
    std::vector<Complex> c(xi.begin(), xi.end());
    return ComplexVector(std::move(c));
}

ComplexVector ComplexVector::from_parts(std::span<const double> xi, std::span<const double> eta) {
    require_same_dim(xi.size(), eta.size(), "imaginary part");
    std::vector<Complex> c(xi.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = Complex(xi[j], eta[j]);
    return ComplexVector(std::move(c));
}

RealVector ComplexVector::real_part() const {
    RealVector r(dim());
    for (std::size_t j = 0; j < dim(); ++j) r[j] = components_[j].real();
    return r;
}

RealVector ComplexVector::imag_part() const {
    RealVector r(dim());
    for (std::size_t j = 0; j < dim(); ++j) r[j] = components_[j].imag();
    return r;
}

Complex ComplexVector::dot(const ComplexVector& other) const {
    require_same_dim(dim(), other.dim(), "complex vector");
    Complex s = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) s += components_[j] * other.components_[j];
    return s;
}

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
    require_same_dim(a.dim(), b.dim(), "complex vector");
    std::vector<Complex> c(a.dim());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = a[j] + b[j];
    return ComplexVector(std::move(c));
}

ComplexVector operator*(Complex s, const ComplexVector& a) {
    std::vector<Complex> c(a.dim());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = s * a[j];
    return ComplexVector(std::move(c));
}

Box Box::cube(std::size_t dim, double radius) {
    return Box{RealVector(dim, -radius), RealVector(dim, radius)};
}

Box Box::whole_space(std::size_t dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return Box{RealVector(dim, -inf), RealVector(dim, inf)};
}

bool Box::bounded() const {
    for (std::size_t j = 0; j < dim(); ++j) {
        if (!std::isfinite(lo[j]) || !std::isfinite(hi[j])) return false;
    }
    return true;
}

bool Box::contains(std::span<const double> x, double slack) const {
    for (std::size_t j = 0; j < dim(); ++j) {
        if (x[j] < lo[j] - slack || x[j] > hi[j] + slack) return false;
    }
    return true;
}

Box Box::intersect(const Box& other) const {
    require_same_dim(dim(), other.dim(), "box");
    Box r = *this;
    for (std::size_t j = 0; j < dim(); ++j) {
        r.lo[j] = std::max(lo[j], other.lo[j]);
        r.hi[j] = std::min(hi[j], other.hi[j]);
    }
    return r;
}

bool Box::empty() const {
    for (std::size_t j = 0; j < dim(); ++j) {
        if (!(lo[j] < hi[j])) return true;
    }
    return false;
}

void Box::validate(const char* what) const {
    if (lo.size() != hi.size() || lo.empty()) {
        throw MeasureError(ErrorKind::invalid_argument, std::string(what) + ": lo/hi must have equal nonzero length");
    }
    for (std::size_t j = 0; j < dim(); ++j) {
        if (std::isnan(lo[j]) || std::isnan(hi[j]) || !(lo[j] < hi[j])) {
            throw MeasureError(ErrorKind::invalid_argument,
                               std::string(what) + ": degenerate axis " + std::to_string(j) + " (need lo < hi)");
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace measurelab

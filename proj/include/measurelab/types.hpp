#ifndef MEASURELAB_TYPES_HPP
#define MEASURELAB_TYPES_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace measurelab {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;

enum class ErrorKind {
    invalid_argument,
    dimension_mismatch,
    unsupported_representation,
    non_finite_sample,
    non_integrable_spectrum,
    outside_tube_domain,
    outside_upper_half_plane,
    spectrum_not_half_line,
    not_positive_definite,
    not_supported_in_set,
    schema,
    unknown_identity,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the ErrorKind tags.
class MeasureError : public std::runtime_error {
public:
    MeasureError(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

void require_same_dim(std::size_t expected, std::size_t actual, const char* what);

/// A point of C^n, split as zeta = xi + i eta.
class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::vector<Complex> components);
    static ComplexVector real(std::span<const double> xi);
    static ComplexVector from_parts(std::span<const double> xi, std::span<const double> eta);

    std::size_t dim() const noexcept { return components_.size(); }
    const std::vector<Complex>& components() const noexcept { return components_; }
    Complex operator[](std::size_t j) const { return components_[j]; }

    RealVector real_part() const;
    RealVector imag_part() const;

    /// Bilinear pairing sum_j z_j zeta_j (no conjugation).
    Complex dot(const ComplexVector& other) const;

    friend ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
    friend ComplexVector operator*(Complex s, const ComplexVector& a);

private:
    std::vector<Complex> components_;
};

/// Closed axis-aligned box; bounds may be infinite.
struct Box {
    RealVector lo;
    RealVector hi;

    static Box cube(std::size_t dim, double radius);
    static Box whole_space(std::size_t dim);

    std::size_t dim() const noexcept { return lo.size(); }
    bool bounded() const;
    bool contains(std::span<const double> x, double slack = 0.0) const;
    Box intersect(const Box& other) const;
    bool empty() const;
    void validate(const char* what) const;
};

double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);

}  // namespace measurelab

#endif

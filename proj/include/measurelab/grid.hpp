#ifndef MEASURELAB_GRID_HPP
#define MEASURELAB_GRID_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "measurelab/types.hpp"

namespace measurelab {

/// Tensor grid of equispaced nodes on a box, flattened row-major
/// (last axis varies fastest).
class UniformGrid {
public:
    UniformGrid() = default;
    UniformGrid(Box box, std::vector<std::size_t> counts);

    std::size_t dim() const noexcept { return box_.dim(); }
    const Box& box() const noexcept { return box_; }
    const std::vector<std::size_t>& counts() const noexcept { return counts_; }
    std::size_t size() const noexcept { return size_; }
    double spacing(std::size_t axis) const;

    RealVector node(std::size_t flat) const;
    void node(std::size_t flat, std::span<double> out) const;
    std::vector<std::size_t> unflatten(std::size_t flat) const;

    /// Composite trapezoid weight of a node (product of per-axis weights).
    double trapezoid_weight(std::size_t flat) const;

    /// The grid obtained by keeping every other node, when every axis has an
    /// odd count of at least three.
    bool has_coarse() const;

    bool same_layout(const UniformGrid& other) const;

private:
    Box box_;
    std::vector<std::size_t> counts_;
    std::size_t size_ = 0;
};

/// Parses "lo:hi:count" per axis, axes separated by commas.
UniformGrid parse_grid_spec(const std::string& text);

/// Multilinear interpolation of row-major samples; zero outside the box.
Complex interpolate(const UniformGrid& grid, std::span<const Complex> values, std::span<const double> x);

}  // namespace measurelab

#endif

#ifndef MEASURELAB_SUPPORT_HPP
#define MEASURELAB_SUPPORT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "measurelab/types.hpp"

namespace measurelab {

/// Polyhedral support set: convex hull of the vertices plus the cone of the
/// recession generators, or (discrete) exactly the vertex list.
struct SupportSet {
    std::size_t dim = 0;
    std::vector<RealVector> vertices;
    std::vector<RealVector> generators;
    bool discrete = false;

    void validate() const;
    bool bounded() const noexcept { return generators.empty(); }

    /// Membership of a point, up to `tol` in the sup norm.
    bool contains(std::span<const double> x, double tol = 1e-9) const;
};

/// Cone {eta : eta . v <= 0 for each normal v}.
struct ConvexCone {
    std::size_t dim = 0;
    std::vector<RealVector> normals;

    bool contains(std::span<const double> eta, double tol = 1e-12) const;
    bool is_whole_space() const noexcept { return normals.empty(); }

    /// Unit-length normals, sorted, duplicates removed.
    ConvexCone canonical() const;

    friend bool operator==(const ConvexCone& a, const ConvexCone& b) = default;
};

/// a(i eta) = sup over A of exp(2 pi eta . x); infinite outside the dual cone.
struct GrowthIndicator {
    bool infinite = false;
    double exponent = 0.0;  ///< 2 pi max_x eta . x when finite

    double value() const;
};

ConvexCone dual_cone(const SupportSet& support);

GrowthIndicator growth_indicator(const SupportSet& support, std::span<const double> eta);

bool tube_membership(const SupportSet& support, const ComplexVector& zeta);

}  // namespace measurelab

#endif

#include "measurelab/support.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace measurelab {

namespace {

// Lawson-Hanson nonnegative least squares: min |A x - b| subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::Index m = A.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    std::vector<bool> passive(static_cast<std::size_t>(m), false);
    const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());

    for (int outer = 0; outer < 3 * static_cast<int>(m) + 10; ++outer) {
        const Eigen::VectorXd w = A.transpose() * (b - A * x);
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < 3 * static_cast<int>(m) + 10; ++inner) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < m; ++j) {
                if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
            }
            Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
            for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
            const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
            Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
            for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<Eigen::Index>(k)];

            bool feasible = true;
            for (Eigen::Index j : idx) feasible = feasible && z[j] > 0.0;
            if (feasible) {
                x = z;
                break;
            }
            double step = 1.0;
            for (Eigen::Index j : idx) {
                if (z[j] <= 0.0) step = std::min(step, x[j] / (x[j] - z[j]));
            }
            x += step * (z - x);
            for (Eigen::Index j : idx) {
                if (x[j] <= tol) {
                    x[j] = 0.0;
                    passive[static_cast<std::size_t>(j)] = false;
                }
            }
        }
    }
    return x;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

}  // namespace

void SupportSet::validate() const {
    if (dim == 0) throw MeasureError(ErrorKind::invalid_argument, "support set dimension must be positive");
    if (vertices.empty()) throw MeasureError(ErrorKind::invalid_argument, "support set needs at least one vertex");
    if (discrete && !generators.empty()) {
        throw MeasureError(ErrorKind::invalid_argument, "a discrete support set cannot have generators");
    }
    for (const auto& v : vertices) {
        require_same_dim(dim, v.size(), "support vertex");
        for (double c : v) {
            if (!std::isfinite(c)) throw MeasureError(ErrorKind::invalid_argument, "support vertex is not finite");
        }
    }
    for (const auto& g : generators) {
        require_same_dim(dim, g.size(), "recession generator");
        if (max_abs(g) == 0.0) throw MeasureError(ErrorKind::invalid_argument, "recession generator is zero");
        for (double c : g) {
            if (!std::isfinite(c)) throw MeasureError(ErrorKind::invalid_argument, "recession generator is not finite");
        }
    }
}

bool SupportSet::contains(std::span<const double> x, double tol) const {
    require_same_dim(dim, x.size(), "point");
    for (const auto& v : vertices) {
        if (sup_distance(v, x) <= tol) return true;
    }
    if (discrete) return false;

    // x = V lambda + G mu with lambda in the simplex and mu >= 0.
    const auto nv = static_cast<Eigen::Index>(vertices.size());
    const auto ng = static_cast<Eigen::Index>(generators.size());
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, nv + ng);
    Eigen::VectorXd b(n + 1);
    for (Eigen::Index j = 0; j < nv; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) A(i, j) = vertices[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        A(n, j) = 1.0;
    }
    for (Eigen::Index j = 0; j < ng; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) A(i, nv + j) = generators[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 0; i < n; ++i) b[i] = x[static_cast<std::size_t>(i)];
    b[n] = 1.0;
    const Eigen::VectorXd c = nnls(A, b);
    const Eigen::VectorXd r = A * c - b;
    return r.cwiseAbs().maxCoeff() <= tol;
}

bool ConvexCone::contains(std::span<const double> eta, double tol) const {
    require_same_dim(dim, eta.size(), "cone direction");
    for (const auto& v : normals) {
        double scale = 0.0;
        for (std::size_t j = 0; j < dim; ++j) scale += std::abs(v[j] * eta[j]);
        if (dot(v, eta) > tol * std::max(1.0, scale)) return false;
    }
    return true;
}

ConvexCone ConvexCone::canonical() const {
    ConvexCone c{dim, {}};
    for (const auto& v : normals) {
        const double len = std::sqrt(dot(v, v));
        if (len == 0.0) continue;
        RealVector u(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) u[j] = v[j] / len;
        c.normals.push_back(std::move(u));
    }
    std::sort(c.normals.begin(), c.normals.end());
    c.normals.erase(std::unique(c.normals.begin(), c.normals.end(),
                                [](const RealVector& a, const RealVector& b) { return sup_distance(a, b) <= 1e-12; }),
                    c.normals.end());
    return c;
}

double GrowthIndicator::value() const {
    return infinite ? std::numeric_limits<double>::infinity() : std::exp(exponent);
}

ConvexCone dual_cone(const SupportSet& support) {
    support.validate();
    return ConvexCone{support.dim, support.generators};
}

GrowthIndicator growth_indicator(const SupportSet& support, std::span<const double> eta) {
    require_same_dim(support.dim, eta.size(), "growth direction");
    if (!dual_cone(support).contains(eta)) return GrowthIndicator{true, 0.0};
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : support.vertices) m = std::max(m, dot(eta, v));
    return GrowthIndicator{false, 2.0 * std::numbers::pi * m};
}

bool tube_membership(const SupportSet& support, const ComplexVector& zeta) {
    require_same_dim(support.dim, zeta.dim(), "tube point");
    return dual_cone(support).contains(zeta.imag_part());
}

}  // namespace measurelab

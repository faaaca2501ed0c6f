#include "measurelab/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace measurelab {

namespace {

constexpr std::size_t kBlock = 2048;
constexpr std::size_t kMaxNodes = std::size_t{1} << 25;
constexpr std::size_t kMaxIntegrationDim = 3;

std::size_t initial_thread_cap() {
    std::size_t cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MEASURELAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) cap = std::min<std::size_t>(cap, static_cast<std::size_t>(v));
    }
    return cap;
}

std::atomic<std::size_t>& thread_cap() {
    static std::atomic<std::size_t> cap{initial_thread_cap()};
    return cap;
}

Complex pairwise(const Complex* v, std::size_t n) {
    if (n <= 8) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise(v, half) + pairwise(v + half, n - half);
}

std::string format_point(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
    os << ')';
    return os.str();
}

Complex checked(Complex v, std::span<const double> x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw MeasureError(ErrorKind::non_finite_sample, "integrand is not finite at node " + format_point(x));
    }
    return v;
}

// Trapezoid sum over the tensor grid on `box` with `n` nodes per axis.
Complex trapezoid(const Integrand& f, const Box& box, std::size_t n) {
    const std::size_t dim = box.dim();
    std::size_t total = 1;
    for (std::size_t a = 0; a < dim; ++a) total *= n;
    RealVector h(dim);
    for (std::size_t a = 0; a < dim; ++a) h[a] = (box.hi[a] - box.lo[a]) / static_cast<double>(n - 1);
    return deterministic_sum(total, [&](std::size_t flat) {
        thread_local RealVector x;
        x.resize(dim);
        double w = 1.0;
        std::size_t rem = flat;
        for (std::size_t a = dim; a-- > 0;) {
            const std::size_t i = rem % n;
            rem /= n;
            x[a] = (i + 1 == n) ? box.hi[a] : box.lo[a] + static_cast<double>(i) * h[a];
            w *= (i == 0 || i + 1 == n) ? 0.5 * h[a] : h[a];
        }
        return w * checked(f(x), x);
    });
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw MeasureError(ErrorKind::invalid_argument, "quadrature radius must be positive");
    }
    if (points < 2) throw MeasureError(ErrorKind::invalid_argument, "quadrature needs at least 2 points per axis");
    if (!(target_tol > 0.0)) throw MeasureError(ErrorKind::invalid_argument, "target tolerance must be positive");
}

Complex IntegrationResult::checked_value() const {
    if (!converged) {
        std::ostringstream os;
        os << "quadrature unconverged after " << refinements_used << " refinements (error estimate "
           << error_estimate << ")";
        throw MeasureError(ErrorKind::invalid_argument, os.str());
    }
    return value;
}

std::size_t max_threads() { return thread_cap().load(); }

void set_max_threads(std::size_t threads) { thread_cap().store(std::max<std::size_t>(1, threads)); }

Complex deterministic_sum(std::size_t count, const std::function<Complex(std::size_t)>& term) {
    if (count == 0) return 0.0;
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<Complex> partial(blocks);
    std::vector<std::exception_ptr> errors(blocks);

    auto run_block = [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(count, lo + kBlock);
        Complex local[kBlock];
        try {
            for (std::size_t i = lo; i < hi; ++i) local[i - lo] = term(i);
            partial[b] = pairwise(local, hi - lo);
        } catch (...) {
            errors[b] = std::current_exception();
        }
    };

    const std::size_t workers = std::min(max_threads(), blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            run_block(b);
            if (errors[b]) break;
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) run_block(b);
            });
        }
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return pairwise(partial.data(), blocks);
}

IntegrationResult integrate_box(const Integrand& f, const Box& box, std::size_t points, double target_tol,
                                std::size_t max_refinements) {
    const std::size_t dim = box.dim();
    if (dim == 0 || dim > kMaxIntegrationDim) {
        throw MeasureError(ErrorKind::invalid_argument, "integration supports 1 <= n <= 3, got n = " + std::to_string(dim));
    }
    if (!box.bounded()) throw MeasureError(ErrorKind::invalid_argument, "integration box must be bounded");
    if (points < 2) throw MeasureError(ErrorKind::invalid_argument, "quadrature needs at least 2 points per axis");
    if (box.empty()) return IntegrationResult{0.0, 0.0, 0, true};

    // Romberg table, one row per level.
    std::vector<std::vector<Complex>> table;
    std::size_t n = points;
    IntegrationResult result;
    for (std::size_t level = 0;; ++level) {
        std::vector<Complex> row(level + 1);
        row[0] = trapezoid(f, box, n);
        double factor = 4.0;
        for (std::size_t j = 1; j <= level; ++j) {
            row[j] = row[j - 1] + (row[j - 1] - table[level - 1][j - 1]) / (factor - 1.0);
            factor *= 4.0;
        }
        table.push_back(std::move(row));
        result.value = table[level][level];
        result.refinements_used = level;
        if (level > 0) {
            result.error_estimate = std::abs(table[level][level] - table[level - 1][level - 1]);
            result.converged = result.error_estimate <= target_tol;
            if (result.converged) return result;
        }
        const std::size_t next = 2 * n - 1;
        std::size_t next_total = 1;
        for (std::size_t a = 0; a < dim; ++a) next_total *= next;
        if (level >= max_refinements || next_total > kMaxNodes) break;
        n = next;
    }
    if (result.refinements_used == 0) {
        // No refinement allowed: compare against the every-other-node rule.
        if (n >= 3 && n % 2 == 1) {
            result.error_estimate = std::abs(table[0][0] - trapezoid(f, box, (n + 1) / 2));
        } else {
            result.error_estimate = std::numeric_limits<double>::infinity();
        }
        result.converged = result.error_estimate <= target_tol;
        return result;
    }
    result.converged = false;
    return result;
}

IntegrationResult integrate(const Integrand& f, std::size_t dim, const QuadratureSpec& q) {
    q.validate();
    return integrate_box(f, Box::cube(dim, q.radius), q.points, q.target_tol, q.max_refinements);
}

IntegrationResult grid_sum(const UniformGrid& grid, const GridTerm& term, double target_tol) {
    const std::size_t dim = grid.dim();
    const Complex fine = deterministic_sum(grid.size(), [&](std::size_t flat) {
        thread_local RealVector x;
        x.resize(dim);
        grid.node(flat, x);
        return grid.trapezoid_weight(flat) * checked(term(flat, x), x);
    });
    IntegrationResult r{fine, 0.0, 0, true};
    if (!grid.has_coarse()) return r;

    std::vector<std::size_t> coarse_counts(dim);
    std::size_t coarse_total = 1;
    for (std::size_t a = 0; a < dim; ++a) {
        coarse_counts[a] = (grid.counts()[a] + 1) / 2;
        coarse_total *= coarse_counts[a];
    }
    const Complex coarse = deterministic_sum(coarse_total, [&](std::size_t c) {
        thread_local RealVector x;
        x.resize(dim);
        std::size_t flat = 0;
        double w = 1.0;
        std::vector<std::size_t> idx(dim);
        std::size_t rem = c;
        for (std::size_t a = dim; a-- > 0;) {
            idx[a] = rem % coarse_counts[a];
            rem /= coarse_counts[a];
            const double h = 2.0 * grid.spacing(a);
            w *= (idx[a] == 0 || idx[a] + 1 == coarse_counts[a]) ? 0.5 * h : h;
        }
        for (std::size_t a = 0; a < dim; ++a) flat = flat * grid.counts()[a] + 2 * idx[a];
        grid.node(flat, x);
        return w * checked(term(flat, x), x);
    });
    r.error_estimate = std::abs(fine - coarse);
    r.converged = r.error_estimate <= target_tol;
    return r;
}

double tail_bound_gaussian(double alpha, double radius, std::size_t dim) {
    const RealVector center(dim, 0.0);
    return shifted_gaussian_tail(alpha, center, radius);
}

double shifted_gaussian_tail(double alpha, std::span<const double> center, double radius) {
    if (!(alpha > 0.0) || !(radius > 0.0)) {
        throw MeasureError(ErrorKind::invalid_argument, "tail bound needs alpha > 0 and R > 0");
    }
    const double s = 2.0 * std::sqrt(alpha);
    double log_inside = 0.0;
    for (double c : center) {
        const double q = 0.5 * std::erfc((radius - c) / s) + 0.5 * std::erfc((radius + c) / s);
        if (q >= 1.0) return 1.0;
        log_inside += std::log1p(-q);
    }
    return -std::expm1(log_inside);
}

double box_gaussian_tail(double alpha, std::span<const double> center, const Box& box) {
    if (!(alpha > 0.0)) throw MeasureError(ErrorKind::invalid_argument, "tail bound needs alpha > 0");
    require_same_dim(box.dim(), center.size(), "tail center");
    const double s = 2.0 * std::sqrt(alpha);
    double log_inside = 0.0;
    for (std::size_t j = 0; j < center.size(); ++j) {
        const double q = 0.5 * std::erfc((box.hi[j] - center[j]) / s) + 0.5 * std::erfc((center[j] - box.lo[j]) / s);
        if (q >= 1.0) return 1.0;
        log_inside += std::log1p(-q);
    }
    return -std::expm1(log_inside);
}

double gaussian_radius_for(double alpha, std::size_t dim, double budget) {
    double hi = std::max(std::sqrt(alpha), 1.0 / 64.0);
    while (tail_bound_gaussian(alpha, hi, dim) > budget) hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1.0 / 64.0) {
        const double mid = 0.5 * (lo + hi);
        (tail_bound_gaussian(alpha, mid, dim) <= budget ? hi : lo) = mid;
    }
    return std::ceil(hi * 64.0) / 64.0;
}

std::size_t points_for_frequency(double half_width, double frequency) {
    if (!(frequency > 0.0) || !(half_width > 0.0)) return 2;
    return static_cast<std::size_t>(std::ceil(16.0 * half_width * frequency)) + 1;
}

}  // namespace measurelab

#ifndef MEASURELAB_IDENTITIES_HPP
#define MEASURELAB_IDENTITIES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "measurelab/io.hpp"
#include "measurelab/quadrature.hpp"

namespace measurelab {

enum class Identity {
    norm_subadditivity,
    pairing_bound,
    modulation_norm,
    product_norm,
    convolution_norm,
    convolution_theorem,
    multiplication_formula,
    modulation_eigenrelation,
    fourier_sup_bound,
    gaussian_pair,
    mollified_inversion,
    weak_convergence,
    uniqueness_regression,
    positive_definite,
    paley_wiener,
    cone_laws,
    band_limit_bound,
    half_plane_boundary,
};

inline constexpr std::array<Identity, 18> kAllIdentities = {
    Identity::norm_subadditivity,     Identity::pairing_bound,       Identity::modulation_norm,
    Identity::product_norm,           Identity::convolution_norm,    Identity::convolution_theorem,
    Identity::multiplication_formula, Identity::modulation_eigenrelation, Identity::fourier_sup_bound,
    Identity::gaussian_pair,          Identity::mollified_inversion, Identity::weak_convergence,
    Identity::uniqueness_regression,  Identity::positive_definite,   Identity::paley_wiener,
    Identity::cone_laws,              Identity::band_limit_bound,    Identity::half_plane_boundary,
};

std::string_view identity_name(Identity id);
Identity parse_identity(std::string_view name);

/// One runnable instance of an identity. The payload holds measures in the
/// measure JSON schema plus identity-specific parameters.
struct IdentityCase {
    Identity identity = Identity::norm_subadditivity;
    std::string label;
    io::Json payload;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    bool pinned = false;
};

struct CheckReport {
    Identity identity = Identity::norm_subadditivity;
    std::string label;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool pinned = false;
    io::Json witness;
    std::string reason;  ///< set when the check could not be evaluated
};

/// Default tolerance of each identity: exact algebra 1e-12, single
/// quadratures 1e-8, nested quadratures 1e-6.
double default_tolerance(Identity id);

CheckReport run_identity(const IdentityCase& c);

/// Reproducible random instances: at most 8 atoms with points in [-2, 2]^n
/// and |w| <= 2, Gaussian densities with alpha in [0.25, 4], n in {1, 2}.
std::vector<IdentityCase> generate_instances(Identity id, std::size_t count, std::uint64_t seed);

/// Fixed regression instances.
std::vector<IdentityCase> pinned_instances(Identity id);

struct TolerancesProfile {
    std::string name = "default";
    std::size_t generated_per_identity = 6;
    double tolerance_scale = 1.0;

    static TolerancesProfile named(std::string_view name);
};

struct IdentitySummary {
    Identity identity;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
};

struct SuiteReport {
    std::vector<CheckReport> reports;  ///< canonical order: identity, pinned first, label
    std::vector<IdentitySummary> summary;
    bool pinned_pass = true;
    bool all_pass = true;
};

SuiteReport run_suite(std::uint64_t seed, const TolerancesProfile& profile);

/// One line per report, stable field order, no timing data.
std::string to_json_line(const CheckReport& r);
std::string to_json_lines(const SuiteReport& s);
std::string summary_table(const SuiteReport& s);

/// Validates a generated measure against the module invariants.
void validate_measure(const FiniteMeasure& mu);

}  // namespace measurelab

#endif

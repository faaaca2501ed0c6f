#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "measurelab/extension.hpp"
#include "measurelab/fourier.hpp"
#include "measurelab/identities.hpp"
#include "measurelab/io.hpp"
#include "measurelab/support.hpp"

using namespace measurelab;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

struct Options {
    std::vector<std::string> inputs;
    std::string out;
    std::string grid;
    std::string support;
    std::vector<std::string> zetas;
    double alpha = 1.0;
    double quad_r = QuadratureSpec{}.radius;
    std::size_t quad_n = QuadratureSpec{}.points;
    double tol = QuadratureSpec{}.target_tol;
    std::string profile = "default";
    std::uint64_t seed = 0;
};

QuadratureSpec quadrature(const Options& o) {
    QuadratureSpec q;
    q.radius = o.quad_r;
    q.points = o.quad_n;
    q.target_tol = o.tol;
    q.validate();
    return q;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty() || o.out == "-") {
        std::cout << text;
    } else {
        io::write_file_atomic(o.out, text);
    }
}

bool wants_json(const Options& o) { return o.out.size() >= 5 && o.out.substr(o.out.size() - 5) == ".json"; }

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Loads a file and tags schema errors with its path.
template <typename F>
auto load(const std::string& path, F&& parse) {
    const io::Json j = io::load_json_file(path);
    try {
        return parse(j);
    } catch (const MeasureError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const io::Json::exception& e) {
        throw InputError(path + ": schema error: " + e.what());
    }
}

FiniteMeasure input_measure(const Options& o, std::size_t k = 0) {
    if (o.inputs.size() <= k) throw InputError("missing --in file");
    return load(o.inputs[k], io::measure_from_json);
}

// "re,im;re,im;..." with one pair per component.
ComplexVector parse_zeta(const std::string& text) {
    std::vector<Complex> comps;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        const auto comma = part.find(',');
        try {
            if (comma == std::string::npos) {
                comps.emplace_back(std::stod(part), 0.0);
            } else {
                comps.emplace_back(std::stod(part.substr(0, comma)), std::stod(part.substr(comma + 1)));
            }
        } catch (const std::exception&) {
            throw InputError("--zeta: cannot parse '" + part + "'");
        }
    }
    if (comps.empty()) throw InputError("--zeta: empty value");
    return ComplexVector(std::move(comps));
}

std::vector<ComplexVector> zetas(const Options& o) {
    if (o.zetas.empty()) throw InputError("at least one --zeta is required");
    std::vector<ComplexVector> out;
    for (const auto& z : o.zetas) out.push_back(parse_zeta(z));
    return out;
}

std::vector<std::string> zeta_columns(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t j = 1; j <= n; ++j) {
        names.push_back("re_zeta" + std::to_string(j));
        names.push_back("im_zeta" + std::to_string(j));
    }
    return names;
}

RealVector flatten(const ComplexVector& z) {
    RealVector v;
    for (const auto& c : z.components()) {
        v.push_back(c.real());
        v.push_back(c.imag());
    }
    return v;
}

UniformGrid grid_flag(const Options& o) {
    if (o.grid.empty()) throw InputError("--grid is required");
    return parse_grid_spec(o.grid);
}

int cmd_transform(const Options& o) {
    const FiniteMeasure mu = input_measure(o);
    const UniformGrid grid = grid_flag(o);
    const SpectrumGrid s = fourier_grid(mu, grid, quadrature(o));
    emit(o, wants_json(o) ? io::dump(io::spectrum_to_json(s), 2) + "\n" : io::grid_csv(s.grid, s.values));
    return kOk;
}

int cmd_transform_complex(const Options& o) {
    const FiniteMeasure mu = input_measure(o);
    const QuadratureSpec q = quadrature(o);
    std::optional<SupportSet> a;
    if (!o.support.empty()) a = load(o.support, io::support_from_json);
    std::vector<RealVector> rows;
    std::vector<Complex> values;
    for (const auto& z : zetas(o)) {
        values.push_back((a ? fourier_complex(mu, z, *a, q) : fourier_complex(mu, z, q)).value);
        rows.push_back(flatten(z));
    }
    emit(o, io::points_csv(rows, values, zeta_columns(mu.dim())));
    return kOk;
}

int cmd_convolve(const Options& o) {
    if (o.inputs.size() != 2) throw InputError("convolve needs two --in files");
    const FiniteMeasure c = convolve_measures(input_measure(o, 0), input_measure(o, 1)).canonical();
    emit(o, io::dump(io::measure_to_json(c), 2) + "\n");
    return kOk;
}

int cmd_mollify(const Options& o) {
    const FiniteMeasure mu = input_measure(o);
    const UniformGrid grid = grid_flag(o);
    require_same_dim(mu.dim(), grid.dim(), "evaluation grid");
    const QuadratureSpec q = quadrature(o);
    std::vector<Complex> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = mollify(mu, o.alpha, grid.node(k), q).value;
    emit(o, io::grid_csv(grid, values));
    return kOk;
}

SpectrumSource input_spectrum(const Options& o) {
    if (o.inputs.empty()) throw InputError("missing --in file");
    return SpectrumSource::of_grid(load(o.inputs[0], io::spectrum_from_json));
}

int cmd_invert(const Options& o) {
    const SpectrumSource s = input_spectrum(o);
    const UniformGrid grid = grid_flag(o);
    require_same_dim(s.dim(), grid.dim(), "evaluation grid");
    const QuadratureSpec q = quadrature(o);
    std::vector<Complex> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = invert(s, grid.node(k), q).value;
    emit(o, io::grid_csv(grid, values));
    return kOk;
}

int cmd_cone(const Options& o) {
    if (o.inputs.empty()) throw InputError("missing --in file");
    const SupportSet a = load(o.inputs[0], io::support_from_json);
    emit(o, io::dump(io::cone_to_json(dual_cone(a).canonical()), 2) + "\n");
    return kOk;
}

int cmd_pw_check(const Options& o) {
    const FiniteMeasure mu = input_measure(o);
    if (o.support.empty()) throw InputError("--support is required");
    const SupportSet a = load(o.support, io::support_from_json);
    const std::vector<ComplexVector> zs = zetas(o);
    const PaleyWienerReport rep = paley_wiener_check(mu, a, zs, 1e-10, quadrature(o));
    io::Json j = io::Json::object();
    j["samples"] = rep.samples;
    j["norm"] = rep.norm;
    j["max_ratio"] = rep.max_ratio;
    j["max_slack"] = rep.max_slack;
    j["pass"] = rep.pass;
    emit(o, io::dump(j, 2) + "\n");
    return rep.pass ? kOk : kCheckFailure;
}

int cmd_halfplane(const Options& o) {
    const SpectrumSource s = input_spectrum(o);
    const QuadratureSpec q = quadrature(o);
    std::vector<RealVector> rows;
    std::vector<Complex> values;
    for (const auto& z : zetas(o)) {
        if (z.dim() != 1) throw InputError("--zeta: half-plane points have one component");
        values.push_back(half_plane_extension(s, z[0], q).value);
        rows.push_back(flatten(z));
    }
    emit(o, io::points_csv(rows, values, {"re_z", "im_z"}));
    return kOk;
}

int cmd_verify(const Options& o) {
    const SuiteReport s = run_suite(o.seed, TolerancesProfile::named(o.profile));
    emit(o, to_json_lines(s));
    std::cerr << summary_table(s);
    return s.pinned_pass ? kOk : kCheckFailure;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::schema:
        case ErrorKind::invalid_argument:
        case ErrorKind::dimension_mismatch:
        case ErrorKind::unknown_identity:
            return kUsage;
        default:
            return kCheckFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite complex measures: transforms, convolutions, tube domains, identity checks"};
    app.require_subcommand(1, 1);
    Options o;

    auto add_in = [&](CLI::App* c) { c->add_option("--in", o.inputs, "input JSON file(s)")->required(); };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file (stdout when omitted)"); };
    auto add_quad = [&](CLI::App* c) {
        c->add_option("--quad-R", o.quad_r, "truncation radius");
        c->add_option("--quad-N", o.quad_n, "starting points per axis");
        c->add_option("--quad-tol", o.tol, "target quadrature tolerance");
    };
    auto add_grid = [&](CLI::App* c) { c->add_option("--grid", o.grid, "lo:hi:count per axis, comma-separated")->required(); };

    auto* transform = app.add_subcommand("transform", "sample the Fourier transform on a grid (CSV, or JSON spectrum for .json)");
    add_in(transform), add_out(transform), add_quad(transform), add_grid(transform);

    auto* tc = app.add_subcommand("transform-complex", "evaluate the transform at complex points");
    add_in(tc), add_out(tc), add_quad(tc);
    tc->add_option("--zeta", o.zetas, "complex point, components re,im separated by ';' (repeatable)")->required();
    tc->add_option("--support", o.support, "support set JSON; points must lie in its tube domain");

    auto* conv = app.add_subcommand("convolve", "convolve two measures");
    add_in(conv), add_out(conv);

    auto* moll = app.add_subcommand("mollify", "evaluate the convolution with W_alpha on a grid");
    add_in(moll), add_out(moll), add_quad(moll), add_grid(moll);
    moll->add_option("--alpha", o.alpha, "mollifier parameter")->required();

    auto* inv = app.add_subcommand("invert", "invert an integrable spectrum on a grid");
    add_in(inv), add_out(inv), add_quad(inv), add_grid(inv);

    auto* cone = app.add_subcommand("cone", "dual cone of a support set");
    add_in(cone), add_out(cone);

    auto* pw = app.add_subcommand("pw-check", "check the Paley-Wiener bound at complex points");
    add_in(pw), add_out(pw), add_quad(pw);
    pw->add_option("--support", o.support, "support set JSON")->required();
    pw->add_option("--zeta", o.zetas, "complex point (repeatable)")->required();

    auto* hp = app.add_subcommand("halfplane", "upper half-plane extension of a half-line spectrum");
    add_in(hp), add_out(hp), add_quad(hp);
    hp->add_option("--zeta", o.zetas, "point re,im with positive imaginary part (repeatable)")->required();

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    add_out(verify);
    verify->add_option("--seed", o.seed, "generator seed");
    verify->add_option("--tol-profile", o.profile, "tolerance profile")->check(CLI::IsMember({"strict", "default"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*transform) return cmd_transform(o);
        if (*tc) return cmd_transform_complex(o);
        if (*conv) return cmd_convolve(o);
        if (*moll) return cmd_mollify(o);
        if (*inv) return cmd_invert(o);
        if (*cone) return cmd_cone(o);
        if (*pw) return cmd_pw_check(o);
        if (*hp) return cmd_halfplane(o);
        if (*verify) return cmd_verify(o);
    } catch (const InputError& e) {
        std::cerr << "measurelab: " << e.what() << "\n";
        return kUsage;
    } catch (const MeasureError& e) {
        std::cerr << "measurelab: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "measurelab: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

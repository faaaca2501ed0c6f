#include "measurelab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace measurelab::io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw MeasureError(ErrorKind::schema, path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(path + "." + key, "missing");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path, "expected a number");
    return j.get<double>();
}

std::size_t count(const Json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) schema_error(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

RealVector vector(const Json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array");
    RealVector v;
    for (std::size_t k = 0; k < j.size(); ++k) v.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
    return v;
}

Complex complex_of(const Json& j, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected an object with \"re\" and \"im\"");
    const double re = j.contains("re") ? number(j["re"], path + ".re") : 0.0;
    const double im = j.contains("im") ? number(j["im"], path + ".im") : 0.0;
    return {re, im};
}

Json complex_json(Complex c) {
    Json j = Json::object();
    j["re"] = c.real();
    j["im"] = c.imag();
    return j;
}

Json box_json(const Box& b) {
    Json j = Json::object();
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    return j;
}

Box box_of(const Json& j, const std::string& path) {
    Box b{vector(field(j, "lo", path), path + ".lo"), vector(field(j, "hi", path), path + ".hi")};
    if (b.lo.size() != b.hi.size()) schema_error(path, "lo and hi differ in length");
    return b;
}

UniformGrid grid_of(const Json& d, const std::string& path) {
    const Box box = box_of(field(d, "box", path), path + ".box");
    const Json& spa = field(d, "samples_per_axis", path);
    if (!spa.is_array()) schema_error(path + ".samples_per_axis", "expected an array");
    std::vector<std::size_t> counts;
    for (std::size_t k = 0; k < spa.size(); ++k) {
        counts.push_back(count(spa[k], path + ".samples_per_axis[" + std::to_string(k) + "]"));
    }
    try {
        return UniformGrid(box, counts);
    } catch (const MeasureError& e) {
        schema_error(path, e.what());
    }
}

std::vector<Complex> values_of(const Json& d, std::size_t expected, const std::string& path) {
    const Json& vals = field(d, "values", path);
    if (!vals.is_array()) schema_error(path + ".values", "expected an array");
    if (vals.size() != expected) {
        schema_error(path + ".values", "expected " + std::to_string(expected) + " samples, got " + std::to_string(vals.size()));
    }
    std::vector<Complex> out;
    out.reserve(expected);
    for (std::size_t k = 0; k < vals.size(); ++k) out.push_back(complex_of(vals[k], path + ".values[" + std::to_string(k) + "]"));
    return out;
}

Json grid_json(const UniformGrid& g, const std::vector<Complex>& values) {
    Json j = Json::object();
    j["kind"] = "grid";
    j["box"] = box_json(g.box());
    j["samples_per_axis"] = g.counts();
    Json vals = Json::array();
    for (const auto& v : values) vals.push_back(complex_json(v));
    j["values"] = std::move(vals);
    return j;
}

bool default_translates(const DensityPart& d) {
    const auto& t = d.translates();
    return t.size() == 1 && max_abs(t[0].offset) == 0.0 && t[0].weight == Complex(1.0);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json measure_to_json(const FiniteMeasure& mu) {
    Json j = Json::object();
    j["dim"] = mu.dim();
    Json atoms = Json::array();
    for (const auto& a : mu.atoms()) {
        Json aj = Json::object();
        aj["point"] = a.point;
        aj["re"] = a.weight.real();
        aj["im"] = a.weight.imag();
        atoms.push_back(std::move(aj));
    }
    j["atoms"] = std::move(atoms);
    if (mu.density()) {
        const DensityPart& d = *mu.density();
        Json dj;
        if (d.kind() == DensityKind::grid) {
            dj = grid_json(d.sample_grid(), d.samples());
        } else {
            dj = Json::object();
            dj["kind"] = to_string(d.kind());
            dj["alpha"] = d.alpha();
        }
        if (!default_translates(d)) {
            Json ts = Json::array();
            for (const auto& t : d.translates()) {
                Json tj = Json::object();
                tj["offset"] = t.offset;
                tj["re"] = t.weight.real();
                tj["im"] = t.weight.imag();
                ts.push_back(std::move(tj));
            }
            dj["translates"] = std::move(ts);
        }
        if (d.clip()) dj["clip"] = box_json(*d.clip());
        j["density"] = std::move(dj);
    }
    return j;
}

FiniteMeasure measure_from_json(const Json& j) {
    const std::string root = "$";
    const std::size_t dim = count(field(j, "dim", root), "$.dim");
    if (dim == 0) schema_error("$.dim", "must be positive");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        const Json& aj = j["atoms"];
        if (!aj.is_array()) schema_error("$.atoms", "expected an array");
        for (std::size_t k = 0; k < aj.size(); ++k) {
            const std::string p = "$.atoms[" + std::to_string(k) + "]";
            if (!aj[k].is_object()) schema_error(p, "expected an object");
            for (const auto& [key, value] : aj[k].items()) {
                if (key != "point" && key != "re" && key != "im") schema_error(p + "." + key, "unknown field");
            }
            RealVector point = vector(field(aj[k], "point", p), p + ".point");
            if (point.size() != dim) schema_error(p + ".point", "expected " + std::to_string(dim) + " coordinates");
            atoms.push_back(Atom{std::move(point), complex_of(aj[k], p)});
        }
    }
    std::optional<DensityPart> density;
    if (j.contains("density") && !j["density"].is_null()) {
        const Json& dj = j["density"];
        const std::string p = "$.density";
        const Json& kind = field(dj, "kind", p);
        if (!kind.is_string()) schema_error(p + ".kind", "expected a string");
        const std::string k = kind.get<std::string>();
        try {
            if (k == "gaussian-G" || k == "gaussian-W") {
                const double alpha = number(field(dj, "alpha", p), p + ".alpha");
                if (!(alpha > 0.0) || !std::isfinite(alpha)) schema_error(p + ".alpha", "must be a positive finite number");
                density = k == "gaussian-G" ? DensityPart::gaussian_G(dim, alpha) : DensityPart::gaussian_W(dim, alpha);
            } else if (k == "grid") {
                UniformGrid g = grid_of(dj, p);
                if (g.dim() != dim) schema_error(p + ".box", "dimension differs from $.dim");
                auto values = values_of(dj, g.size(), p);
                density = DensityPart::grid(std::move(g), std::move(values));
            } else {
                schema_error(p + ".kind", "unknown density kind '" + k + "'");
            }
        } catch (const MeasureError& e) {
            if (e.kind() == ErrorKind::schema) throw;
            schema_error(p, e.what());
        }
        if (dj.contains("translates")) {
            const Json& tj = dj["translates"];
            if (!tj.is_array()) schema_error(p + ".translates", "expected an array");
            std::vector<Translate> ts;
            for (std::size_t m = 0; m < tj.size(); ++m) {
                const std::string tp = p + ".translates[" + std::to_string(m) + "]";
                RealVector off = vector(field(tj[m], "offset", tp), tp + ".offset");
                if (off.size() != dim) schema_error(tp + ".offset", "expected " + std::to_string(dim) + " coordinates");
                ts.push_back(Translate{std::move(off), complex_of(tj[m], tp)});
            }
            density = density->with_translates(std::move(ts));
        }
        if (dj.contains("clip")) {
            Box clip = box_of(dj["clip"], p + ".clip");
            if (clip.dim() != dim) schema_error(p + ".clip", "dimension differs from $.dim");
            density = density->with_clip(std::move(clip));
        }
    }
    try {
        return FiniteMeasure(dim, std::move(atoms), std::move(density));
    } catch (const MeasureError& e) {
        if (e.kind() == ErrorKind::schema) throw;
        schema_error(root, e.what());
    }
}

Json support_to_json(const SupportSet& s) {
    Json j = Json::object();
    j["dim"] = s.dim;
    j["vertices"] = s.vertices;
    j["generators"] = s.generators;
    j["discrete"] = s.discrete;
    return j;
}

SupportSet support_from_json(const Json& j) {
    SupportSet s;
    s.dim = count(field(j, "dim", "$"), "$.dim");
    auto list = [&](const char* key) {
        std::vector<RealVector> out;
        if (!j.contains(key)) return out;
        const Json& a = j[key];
        const std::string p = std::string("$.") + key;
        if (!a.is_array()) schema_error(p, "expected an array");
        for (std::size_t k = 0; k < a.size(); ++k) {
            RealVector v = vector(a[k], p + "[" + std::to_string(k) + "]");
            if (v.size() != s.dim) schema_error(p + "[" + std::to_string(k) + "]", "expected " + std::to_string(s.dim) + " coordinates");
            out.push_back(std::move(v));
        }
        return out;
    };
    s.vertices = list("vertices");
    s.generators = list("generators");
    if (j.contains("discrete")) {
        if (!j["discrete"].is_boolean()) schema_error("$.discrete", "expected a boolean");
        s.discrete = j["discrete"].get<bool>();
    }
    try {
        s.validate();
    } catch (const MeasureError& e) {
        schema_error("$", e.what());
    }
    return s;
}

Json cone_to_json(const ConvexCone& c) {
    Json j = Json::object();
    j["dim"] = c.dim;
    j["normals"] = c.normals;
    j["inequalities"] = Json::array();
    for (const auto& v : c.normals) {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k] == 0.0) continue;
            const double a = std::abs(v[k]);
            s += s.empty() ? (v[k] < 0 ? "-" : "") : (v[k] < 0 ? " - " : " + ");
            if (a != 1.0) s += format_double(a) + "*";
            s += "eta" + std::to_string(k + 1);
        }
        j["inequalities"].push_back(s + " <= 0");
    }
    return j;
}

Json spectrum_to_json(const SpectrumGrid& s) {
    Json j = grid_json(s.grid, s.values);
    j["space"] = "frequency";
    j["integrable"] = s.integrable;
    j["abs_integral"] = s.abs_integral;
    j["abs_integral_error"] = s.abs_integral_error;
    j["decay_rate"] = s.decay_rate;
    Json out = Json::object();
    out["dim"] = s.dim();
    out["atoms"] = Json::array();
    out["density"] = std::move(j);
    return out;
}

SpectrumGrid spectrum_from_json(const Json& root) {
    const Json& j = root.contains("density") ? root["density"] : root;
    const std::string p = root.contains("density") ? "$.density" : "$";
    if (!j.contains("space") || j["space"] != "frequency") schema_error(p + ".space", "expected \"frequency\"");
    const Json& kind = field(j, "kind", p);
    if (kind != "grid") schema_error(p + ".kind", "a spectrum must be a grid");
    SpectrumGrid s;
    s.grid = grid_of(j, p);
    s.values = values_of(j, s.grid.size(), p);
    if (j.contains("integrable")) s.integrable = j["integrable"].get<bool>();
    if (j.contains("abs_integral")) s.abs_integral = number(j["abs_integral"], p + ".abs_integral");
    if (j.contains("abs_integral_error")) s.abs_integral_error = number(j["abs_integral_error"], p + ".abs_integral_error");
    if (j.contains("decay_rate")) s.decay_rate = number(j["decay_rate"], p + ".decay_rate");
    return s;
}

std::string grid_csv(const UniformGrid& grid, const std::vector<Complex>& values) {
    std::vector<RealVector> points;
    points.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) points.push_back(grid.node(k));
    std::vector<std::string> names;
    for (std::size_t a = 0; a < grid.dim(); ++a) names.push_back("x" + std::to_string(a + 1));
    return points_csv(points, values, names);
}

std::string points_csv(const std::vector<RealVector>& points, const std::vector<Complex>& values,
                       const std::vector<std::string>& coord_names) {
    std::string out;
    for (const auto& n : coord_names) out += n + ",";
    out += "re,im\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
        for (double c : points[k]) out += format_double(c) + ",";
        out += format_double(values[k].real()) + "," + format_double(values[k].imag()) + "\n";
    }
    return out;
}

std::string dump(const Json& j, int indent) { return j.dump(indent); }

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeasureError(ErrorKind::schema, path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw MeasureError(ErrorKind::schema, path + ": " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw MeasureError(ErrorKind::invalid_argument, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw MeasureError(ErrorKind::invalid_argument, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw MeasureError(ErrorKind::invalid_argument, "cannot rename onto " + path + ": " + ec.message());
    }
}

}  // namespace measurelab::io

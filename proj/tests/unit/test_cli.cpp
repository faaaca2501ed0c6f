#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "measurelab/io.hpp"
#include "measurelab/kernels.hpp"

namespace fs = std::filesystem;
using namespace measurelab;
using io::Json;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("measurelab_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string cli() { return MEASURELAB_CLI; }

int run(const std::string& args, const std::string& err_file = "stderr.txt") {
    const std::string cmd = "\"" + cli() + "\" " + args + " 2> \"" + (workdir() / err_file).string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

void write(const std::string& name, const std::string& text) { std::ofstream(path(name)) << text; }

std::string read(const std::string& name) {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<double>> csv_rows(const std::string& name) {
    std::istringstream in(read(name));
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string c;
        while (std::getline(cells, c, ',')) row.push_back(std::stod(c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("transform of a point mass is all ones") {
    write("delta0.json", R"({"dim": 1, "atoms": [{"point": [0], "re": 1, "im": 0}]})");
    REQUIRE(run("transform --in " + path("delta0.json") + " --grid -4:4:257 --out " + path("spec.csv")) == 0);
    const auto rows = csv_rows("spec.csv");
    REQUIRE(rows.size() == 257);
    for (const auto& r : rows) {
        CHECK(r[1] == 1.0);
        CHECK(r[2] == 0.0);
    }
    CHECK(rows.front()[0] == -4.0);
    CHECK(rows.back()[0] == 4.0);
}

TEST_CASE("dual cone of the half line") {
    write("halfline.json", R"({"dim": 1, "vertices": [[0]], "generators": [[1]], "discrete": false})");
    REQUIRE(run("cone --in " + path("halfline.json") + " --out " + path("cone.json")) == 0);
    const Json j = Json::parse(read("cone.json"));
    CHECK(j.at("normals") == Json::parse("[[1.0]]"));
    CHECK(j.at("inequalities").at(0) == "eta1 <= 0");
}

TEST_CASE("verify is byte-identical across runs") {
    REQUIRE(run("verify --seed 7 --out " + path("v1.jsonl")) == 0);
    REQUIRE(run("verify --seed 7 --out " + path("v2.jsonl")) == 0);
    const std::string a = read("v1.jsonl"), b = read("v2.jsonl");
    CHECK_FALSE(a.empty());
    CHECK(a == b);
    std::istringstream lines(a);
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
        const Json j = Json::parse(line);
        CHECK(j.contains("identity"));
        CHECK(j.contains("residual"));
        ++n;
    }
    CHECK(n > 100);
}

TEST_CASE("exit codes") {
    write("bad.json", R"({"dim": 1, "atoms": [{"point": [0, 1], "re": 1, "im": 0}]})");
    CHECK(run("transform --in " + path("bad.json") + " --grid -1:1:3", "bad.txt") == 2);
    CHECK(read("bad.txt").find("$.atoms[0].point") != std::string::npos);
    CHECK(read("bad.txt").find("bad.json") != std::string::npos);
    CHECK(run("transform --in " + path("missing.json") + " --grid -1:1:3") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("verify --tol-profile loose") == 2);

    // an outside-tube point is a failed computation, not a usage error
    write("far.json", R"({"dim": 1, "atoms": [{"point": [1], "re": 1, "im": 0}]})");
    CHECK(run("pw-check --in " + path("far.json") + " --support " + path("halfline.json") + " --zeta \"0,1\"") == 1);
    CHECK(run("pw-check --in " + path("far.json") + " --support " + path("halfline.json") + " --zeta \"0,-1\" --out " +
              path("pw.json")) == 0);
}

TEST_CASE("transform then invert reproduces the density") {
    // W_1 sampled on [-10, 10]; its transform G_1 is negligible beyond |xi| = 1.2
    UniformGrid g(Box::cube(1, 10.0), {801});
    std::vector<Complex> s(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) s[k] = gauss_W(1.0, g.node(k));
    write("w1.json", io::dump(io::measure_to_json(FiniteMeasure::from_density(DensityPart::grid(g, s)))));
    REQUIRE(run("transform --in " + path("w1.json") + " --grid -1.2:1.2:241 --out " + path("w1spec.json")) == 0);
    REQUIRE(run("invert --in " + path("w1spec.json") + " --grid -3:3:25 --out " + path("w1back.csv")) == 0);
    const auto rows = csv_rows("w1back.csv");
    REQUIRE(rows.size() == 25);
    double worst = 0.0;
    for (const auto& r : rows) {
        const double x[] = {r[0]};
        worst = std::max(worst, std::hypot(r[1] - gauss_W(1.0, x), r[2]));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("half-plane extension from a spectrum file") {
    UniformGrid g(Box{{0.0}, {40.0}}, {4001});
    std::vector<Complex> s(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) s[k] = std::exp(-g.node(k)[0]);
    SpectrumGrid sg{g, s, true, 1.0, 0.0, 1.0};
    write("half.json", io::dump(io::spectrum_to_json(sg)));
    REQUIRE(run("halfplane --in " + path("half.json") + " --zeta \"0.5,1\" --out " + path("half.csv")) == 0);
    const auto rows = csv_rows("half.csv");
    REQUIRE(rows.size() == 1);
    const Complex z(0.5, 1.0);
    const Complex expect = 1.0 / (1.0 - Complex(0, 2 * std::numbers::pi) * z);
    // trapezoid error on the node grid: h^2 / 12 |f'(0)| for f = exp((2 pi i z - 1) xi)
    const double h = 0.01;
    const double allowance = 1.5 * h * h / 12.0 * std::abs(Complex(0, 2 * std::numbers::pi) * z - 1.0);
    CHECK(std::abs(Complex(rows[0][2], rows[0][3]) - expect) < allowance);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <nnwave/cli.hpp>

using namespace nnwave;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "nnwave");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Fresh, empty directory under the system temp path.
fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("nnwave_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

io::CsvTable table(const std::string& text) {
    std::istringstream is(text);
    return io::read_csv(is);
}

double num(const io::CsvTable& t, std::size_t row, std::string_view col) {
    return std::stod(t.rows[row].fields[static_cast<std::size_t>(t.column(col))]);
}

}  // namespace

TEST_CASE("geometry export") {
    Result r = run({"geometry", "--alpha", "pi/3", "--depth", "1", "--format", "csv"});
    REQUIRE(r.code == 0);
    io::CsvTable t = table(r.out);
    CHECK(t.columns == std::vector<std::string>{"y", "re", "im"});
    REQUIRE(t.rows.size() == 5);
    CHECK(num(t, 0, "re") == 0.0);
    CHECK(num(t, 0, "im") == 0.0);
    CHECK(num(t, 4, "re") == 1.0);
    CHECK(num(t, 4, "im") == 0.0);
    CHECK(num(t, 2, "im") == Approx(std::sqrt(3.0) / 6).epsilon(1e-12));

    CHECK(table(run({"geometry", "--depth", "0"}).out).rows.size() == 2);
    CHECK(run({"geometry", "--alpha", "2"}).code == 1);
    CHECK(run({"geometry", "--alpha", "pi/"}).code == 1);
    CHECK(run({"geometry", "--depth", "13"}).code == 1);
    CHECK(run({"geometry", "--format", "json"}).code == 1);
    CHECK(run({"geometry", "--bogus"}).code == 1);
    CHECK(run({}).code == 1);

    Result svg = run({"geometry", "--depth", "2", "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.find("<svg") != std::string::npos);
    CHECK(svg.out.find("<polyline") != std::string::npos);
    CHECK(svg.out.find("<!-- nnwave geometry -->") != std::string::npos);
}

TEST_CASE("geometry with several angles writes one file each") {
    fs::path dir = scratch("alphas");
    Result r = run({"geometry", "--alpha", "0,pi/3,pi/2", "--depth", "1", "--out", (dir / "koch.csv").string()});
    REQUIRE(r.code == 0);
    for (int i = 0; i < 3; ++i) CHECK(fs::exists(dir / ("koch_" + std::to_string(i) + ".csv")));
    io::CsvTable flat = table(slurp(dir / "koch_0.csv"));
    for (std::size_t i = 0; i < flat.rows.size(); ++i) CHECK(num(flat, i, "im") == Approx(0.0).margin(1e-15));
}

TEST_CASE("calc examples") {
    Result d = run({"calc", "deriv", "--fx", "cubic", "--fy", "cubic", "--expr", "cbrt(sin(x^3))", "--at", "1"});
    REQUIRE(d.code == 0);
    auto j = nlohmann::json::parse(d.out);
    CHECK(j["value"].get<double>() == Approx(std::cbrt(std::cos(1.0))).epsilon(1e-8));
    CHECK(j["h"].get<double>() == Approx(1e-6));
    CHECK(j["chart"]["fx"] == "cubic");
    CHECK(j["config"]["command"] == "calc deriv");

    Result i = run({"calc", "integ", "--fx", "identity", "--fy", "identity", "--expr", "x", "--from", "0", "--to", "1"});
    REQUIRE(i.code == 0);
    CHECK(nlohmann::json::parse(i.out)["value"].get<double>() == Approx(0.5).epsilon(1e-14));

    Result l = run({"calc", "deriv", "--fx", "log", "--fy", "cubic", "--expr", "cbrt(x)", "--at", "8"});
    REQUIRE(l.code == 0);
    CHECK(nlohmann::json::parse(l.out)["value"].get<double>() == Approx(2.0).epsilon(1e-8));

    Result many = run({"calc", "deriv", "--expr", "x^2", "--at", "1,2,3", "--step", "1e-4"});
    REQUIRE(many.code == 0);
    auto results = nlohmann::json::parse(many.out)["results"];
    REQUIRE(results.size() == 3);
    CHECK(results[2]["value"].get<double>() == Approx(6.0).epsilon(1e-8));
    CHECK(results[2]["h"].get<double>() == 1e-4);
}

TEST_CASE("calc errors report locations") {
    Result parse = run({"calc", "deriv", "--expr", "sin(x", "--at", "1"});
    CHECK(parse.code == 1);
    CHECK(parse.err.find("offset") != std::string::npos);
    Result domain = run({"calc", "deriv", "--fx", "log", "--expr", "x", "--at", "-1"});
    CHECK(domain.code == 1);
    CHECK(run({"calc", "deriv", "--expr", "x"}).code == 1);
    CHECK(run({"calc", "deriv", "--expr", "x", "--at", "1", "--step", "-1"}).code == 1);
    CHECK(run({"calc", "deriv", "--fx", "quartic", "--expr", "x", "--at", "1"}).code == 1);
    CHECK(run({"calc"}).code == 1);
}

TEST_CASE("wave snapshots and energy trace") {
    fs::path dir = scratch("wave");
    Result r = run({"wave", "--times", "0,1,2,3,4,5", "--y-min", "-8", "--y-max", "12", "--samples", "2001",
                    "--panels", "4096", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    double previous = 0.0;
    for (int k = 0; k < 6; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%03d.csv", k);
        REQUIRE(fs::exists(dir / name));
        io::CsvTable t = table(slurp(dir / name));
        CHECK(t.columns == std::vector<std::string>{"t", "y", "re", "im", "phi"});
        std::size_t best = 0;
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (num(t, i, "phi") > num(t, best, "phi")) best = i;
        double peak = num(t, best, "y");
        if (k) CHECK(std::fabs(peak - previous - 1.0) <= 0.01);
        previous = peak;
    }
    io::CsvTable e = table(slurp(dir / "energy.csv"));
    REQUIRE(e.rows.size() == 6);
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        lo = std::min(lo, num(e, i, "E"));
        hi = std::max(hi, num(e, i, "E"));
    }
    CHECK((hi - lo) / hi <= 1e-6);
    CHECK(hi == Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-6));
}

TEST_CASE("zero profiles give zero snapshots") {
    fs::path dir = scratch("zero");
    REQUIRE(run({"wave", "--profile-b", "zero", "--times", "0,1", "--out", dir.string()}).code == 0);
    io::CsvTable t = table(slurp(dir / "snapshot_001.csv"));
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(num(t, i, "phi") == 0.0);
    io::CsvTable e = table(slurp(dir / "energy.csv"));
    CHECK(num(e, 0, "E") == 0.0);
    CHECK(num(e, 1, "E") == 0.0);
}

TEST_CASE("wave formats, strict mode and validation") {
    fs::path dir = scratch("formats");
    REQUIRE(run({"wave", "--format", "svg", "--times", "0", "--out", dir.string()}).code == 0);
    CHECK(slurp(dir / "snapshot_000.svg").find("<polyline") != std::string::npos);

    REQUIRE(run({"wave", "--format", "json", "--times", "0,0.5", "--samples", "11", "--out", dir.string()}).code == 0);
    auto j = nlohmann::json::parse(slurp(dir / "snapshots.json"));
    REQUIRE(j["snapshots"].size() == 2);
    CHECK(j["snapshots"][1]["t"].get<double>() == 0.5);
    CHECK(j["snapshots"][0]["samples"].size() == 11);

    Result loose = run({"wave", "--y-min", "-1", "--y-max", "1", "--out", dir.string()});
    CHECK(loose.code == 0);
    CHECK(loose.err.find("warning") != std::string::npos);
    CHECK(run({"wave", "--y-min", "-1", "--y-max", "1", "--strict", "--out", dir.string()}).code == 3);

    CHECK(run({"wave", "--c", "0", "--out", dir.string()}).code == 1);
    CHECK(run({"wave", "--samples", "1", "--out", dir.string()}).code == 1);
    CHECK(run({"wave", "--y-min", "3", "--y-max", "1", "--out", dir.string()}).code == 1);
    CHECK(run({"wave", "--profile-b", "gaussian:width=1", "--out", dir.string()}).code == 1);

    fs::path blocker = dir / "file";
    std::ofstream(blocker) << "x";
    CHECK(run({"wave", "--out", (blocker / "sub").string()}).code == 2);
}

TEST_CASE("output directory from the environment") {
    fs::path dir = scratch("env");
    ::setenv(cli::kOutputDirEnv, dir.string().c_str(), 1);
    Result r = run({"wave", "--times", "0", "--samples", "5"});
    ::unsetenv(cli::kOutputDirEnv);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "snapshot_000.csv"));
    CHECK(fs::exists(dir / "energy.csv"));
}

TEST_CASE("lorentz on points and files") {
    Result p = run({"lorentz", "--chi", "1", "--point", "0,1"});
    REQUIRE(p.code == 0);
    io::CsvTable t = table(p.out);
    CHECK(num(t, 0, "x0") == Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(num(t, 0, "y") == Approx(std::cosh(1.0)).epsilon(1e-15));

    // Identity chart against the textbook boost.
    Result lin = run({"lorentz", "--chi", "0.5", "--chart", "identity", "--point", "2,3"});
    io::CsvTable lt = table(lin.out);
    CHECK(num(lt, 0, "x0") == Approx(2 * std::cosh(0.5) + 3 * std::sinh(0.5)));
    CHECK(num(lt, 0, "y") == Approx(2 * std::sinh(0.5) + 3 * std::cosh(0.5)));

    fs::path dir = scratch("lorentz");
    const std::string data = "x0,y,label\n0.1,0.25,a\n-1.5e-3,2.000,b\n3,-0.75,c\n";
    std::ofstream(dir / "in.csv") << data;

    Result id = run({"lorentz", "--chi", "0", "--input", (dir / "in.csv").string()});
    REQUIRE(id.code == 0);
    io::CsvTable same = table(id.out);
    io::CsvTable orig = table(data);
    REQUIRE(same.rows.size() == orig.rows.size());
    for (std::size_t i = 0; i < orig.rows.size(); ++i) CHECK(same.rows[i].fields == orig.rows[i].fields);

    REQUIRE(run({"lorentz", "--chi", "0.8", "--input", (dir / "in.csv").string(), "--out", (dir / "b.csv").string()}).code == 0);
    REQUIRE(run({"lorentz", "--chi", "-0.8", "--input", (dir / "b.csv").string(), "--out", (dir / "back.csv").string()}).code == 0);
    io::CsvTable back = table(slurp(dir / "back.csv"));
    for (std::size_t i = 0; i < orig.rows.size(); ++i) {
        CHECK(num(back, i, "x0") == Approx(num(orig, i, "x0")).margin(1e-9));
        CHECK(num(back, i, "y") == Approx(num(orig, i, "y")).margin(1e-9));
        CHECK(back.rows[i].fields[2] == orig.rows[i].fields[2]);
    }
}

TEST_CASE("lorentz re-embeds snapshot files") {
    fs::path dir = scratch("lorentz_snap");
    REQUIRE(run({"wave", "--times", "0.5", "--samples", "9", "--c", "2", "--out", dir.string()}).code == 0);
    Result r = run({"lorentz", "--chi", "0.3", "--c", "2", "--input", (dir / "snapshot_000.csv").string()});
    REQUIRE(r.code == 0);
    io::CsvTable t = table(r.out);
    CHECK(t.columns == std::vector<std::string>{"x0", "y", "re", "im", "phi"});
    koch::KochParams p;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        auto z = koch::embed(p, koch::Address::at(num(t, i, "y")), 8).point;
        CHECK(num(t, i, "re") == z.real());
        CHECK(num(t, i, "im") == z.imag());
    }
}

TEST_CASE("lorentz input errors") {
    fs::path dir = scratch("lorentz_bad");
    std::ofstream(dir / "bad.csv") << "x0,y\n1,2\n3,oops\n";
    Result bad = run({"lorentz", "--chi", "0.1", "--input", (dir / "bad.csv").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line 3") != std::string::npos);

    std::ofstream(dir / "short.csv") << "x0,y\n1\n";
    CHECK(run({"lorentz", "--input", (dir / "short.csv").string()}).code == 1);
    std::ofstream(dir / "cols.csv") << "a,b\n1,2\n";
    CHECK(run({"lorentz", "--input", (dir / "cols.csv").string()}).code == 1);
    CHECK(run({"lorentz", "--input", (dir / "missing.csv").string()}).code == 2);
    CHECK(run({"lorentz"}).code == 1);
    CHECK(run({"lorentz", "--chi", "1", "--chart", "log", "--point", "0,-1"}).code == 1);
}

TEST_CASE("outputs are deterministic and carry the configuration") {
    fs::path dir = scratch("determinism");
    for (int k = 0; k < 2; ++k)
        REQUIRE(run({"wave", "--times", "0,1", "--samples", "33", "--out", (dir / std::to_string(k)).string()}).code == 0);
    CHECK(slurp(dir / "0" / "snapshot_001.csv") == slurp(dir / "1" / "snapshot_001.csv"));
    CHECK(slurp(dir / "0" / "energy.csv") == slurp(dir / "1" / "energy.csv"));

    std::string geo = run({"geometry", "--depth", "3"}).out;
    CHECK(geo == run({"geometry", "--depth", "3"}).out);
    CHECK(geo.starts_with("# nnwave geometry\n# config: {"));
    CHECK(geo.find("\"depth\":3") != std::string::npos);

    std::string snap = slurp(dir / "0" / "snapshot_000.csv");
    CHECK(snap.starts_with("# nnwave wave\n# config: {"));
    CHECK(snap.find("\"samples\":33") != std::string::npos);
}

TEST_CASE("config files fill in options and flags win") {
    fs::path dir = scratch("config");
    std::ofstream(dir / "cfg.json") << R"({"depth": 2, "alpha": ["pi/3"], "format": "csv"})";
    Result r = run({"--config", (dir / "cfg.json").string(), "geometry"});
    REQUIRE(r.code == 0);
    CHECK(table(r.out).rows.size() == 17);
    Result flag = run({"--config", (dir / "cfg.json").string(), "geometry", "--depth", "1"});
    REQUIRE(flag.code == 0);
    CHECK(table(flag.out).rows.size() == 5);

    std::ofstream(dir / "calc.json") << R"js({"fx": "cubic", "fy": "cubic", "expr": "cbrt(sin(x^3))", "at": [1]})js";
    Result c = run({"--config", (dir / "calc.json").string(), "calc", "deriv"});
    REQUIRE(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["value"].get<double>() == Approx(std::cbrt(std::cos(1.0))).epsilon(1e-8));

    std::ofstream(dir / "unknown.json") << R"({"dept": 2})";
    CHECK(run({"--config", (dir / "unknown.json").string(), "geometry"}).code == 1);
    std::ofstream(dir / "broken.json") << "{";
    CHECK(run({"--config", (dir / "broken.json").string(), "geometry"}).code == 1);
    CHECK(run({"--config", (dir / "nope.json").string(), "geometry"}).code == 2);
}

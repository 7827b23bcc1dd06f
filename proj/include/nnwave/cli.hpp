#pragma once

// Command-line front end: geometry export, calculus evaluation, wave
// snapshots with energy traces, and boosts of point files.
//
// Exit codes: 0 success, 1 validation/parse/domain failure, 2 I/O failure,
// 3 energy support truncation under --strict.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arithmetic.hpp"
#include "calculus.hpp"
#include "errors.hpp"
#include "exprlang.hpp"
#include "format.hpp"
#include "io.hpp"
#include "koch.hpp"
#include "lorentz.hpp"
#include "wave.hpp"

namespace nnwave::cli {

inline constexpr const char* kOutputDirEnv = "NNWAVE_OUTPUT_DIR";

class IoError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    std::vector<std::string> alpha{"pi/3"};
    int depth = 8;
    long long cell = 0;

    std::string fx = "identity";
    std::string fy = "identity";
    std::string expr;
    std::vector<double> at;
    double from = 0.0;
    double to = 1.0;
    double h = 0.0;  // 0 selects the default step
    int panels = kDefaultPanels;

    std::string profile_a = "zero";
    std::string profile_b = "gaussian";
    double c = 1.0;
    std::vector<double> times{0.0};
    double y_min = -5.0;
    double y_max = 5.0;
    int samples = 1025;
    double offset_scale = 0.05;
    bool strict = false;

    double chi = 0.0;
    std::string chart = "koch";
    std::string input;
    std::string point;

    std::string format = "csv";
    std::string out;
};

/// Angles as decimals or constant expressions such as "pi/3".
inline double parse_angle(const std::string& text) { return expr::evaluate_constant(text); }

namespace detail {

inline nlohmann::json echo(const std::string& command, const RunConfig& c) {
    nlohmann::json j;
    j["command"] = command;
    if (command == "geometry") {
        j["alpha"] = c.alpha;
        j["depth"] = c.depth;
        j["cell"] = c.cell;
    } else if (command.starts_with("calc")) {
        j["fx"] = c.fx;
        j["fy"] = c.fy;
        j["expr"] = c.expr;
        if (command == "calc deriv") {
            j["at"] = c.at;
            j["step"] = c.h;
        } else {
            j["from"] = c.from;
            j["to"] = c.to;
            j["panels"] = c.panels;
        }
    } else if (command == "wave") {
        j["alpha"] = c.alpha;
        j["depth"] = c.depth;
        j["profile-a"] = c.profile_a;
        j["profile-b"] = c.profile_b;
        j["c"] = c.c;
        j["times"] = c.times;
        j["y-min"] = c.y_min;
        j["y-max"] = c.y_max;
        j["samples"] = c.samples;
        j["panels"] = c.panels;
        j["offset-scale"] = c.offset_scale;
        j["strict"] = c.strict;
    } else if (command == "lorentz") {
        j["chi"] = c.chi;
        j["chart"] = c.chart;
        j["c"] = c.c;
        j["input"] = c.input;
        j["point"] = c.point;
        j["alpha"] = c.alpha;
        j["depth"] = c.depth;
    }
    j["format"] = c.format;
    return j;
}

inline std::vector<std::string> header_lines(const std::string& command, const RunConfig& c) {
    return {"nnwave " + command, "config: " + echo(command, c).dump()};
}

/// Opens `path` for writing or returns nullptr for stdout ("" or "-").
inline std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    if (path.empty() || path == "-") return nullptr;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

inline void finish(std::ofstream* f, const std::string& path) {
    if (!f) return;
    f->flush();
    if (!*f) throw IoError("failed writing '" + path + "'");
}

inline std::string indexed_path(const std::string& path, std::size_t index) {
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + std::to_string(index) + p.extension().string())).string();
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

inline void validate_common(const RunConfig& c) {
    require(c.format == "csv" || c.format == "json" || c.format == "svg", "format must be csv, json or svg");
    require(c.depth >= 0, "depth must be non-negative");
    require(c.panels >= 1, "panels must be at least 1");
}

// Applies JSON config values to options not given on the command line.
inline void apply_config(CLI::App& app, CLI::App* sub, const nlohmann::json& cfg) {
    if (!cfg.is_object()) throw DomainError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        if (key == "config") continue;
        CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
        if (!opt) opt = app.get_option_no_throw("--" + key);
        if (!opt) throw DomainError("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;
        std::vector<std::string> results;
        auto as_text = [](const nlohmann::json& v) {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_number()) return format_double(v.get<double>());
            throw DomainError("unsupported config value type");
        };
        if (value.is_array())
            for (const auto& v : value) results.push_back(as_text(v));
        else
            results.push_back(as_text(value));
        opt->clear();
        opt->add_result(results);
        opt->run_callback();
    }
}

}  // namespace detail

inline int cmd_geometry(const RunConfig& c, std::ostream& out) {
    detail::validate_common(c);
    detail::require(c.format != "json", "geometry supports csv or svg");
    detail::require(!c.alpha.empty(), "at least one --alpha is required");
    std::vector<koch::KochParams> params;
    for (const auto& a : c.alpha) params.emplace_back(parse_angle(a));
    const std::vector<double> ys = koch::polyline_addresses(c.depth, c.cell);
    const auto header = detail::header_lines("geometry", c);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const std::string path = params.size() > 1 && !c.out.empty() && c.out != "-" ? detail::indexed_path(c.out, i) : c.out;
        auto pts = koch::polyline(params[i], c.depth, c.cell);
        auto file = detail::open_output(path);
        std::ostream& os = file ? *file : out;
        if (c.format == "csv") io::write_geometry_csv(os, ys, pts, header);
        else io::write_polyline_svg(os, pts, header);
        detail::finish(file.get(), path);
    }
    return 0;
}

inline int cmd_calc(const std::string& mode, const RunConfig& c, std::ostream& out) {
    detail::validate_common(c);
    detail::require(!c.expr.empty(), "--expr is required");
    detail::require(c.h >= 0.0, "--step must be positive (or 0 for the default)");
    const Arithmetic X(chart_by_name(c.fx));
    const Arithmetic Y(chart_by_name(c.fy));
    const expr::Expr e = expr::parse(c.expr);
    const ChartedFunction f{X, Y, [e](double x) { return e(x); }};
    const nlohmann::json chart = {{"fx", c.fx}, {"fy", c.fy}};
    const std::string command = "calc " + mode;

    nlohmann::json result;
    if (mode == "deriv") {
        detail::require(!c.at.empty(), "--at is required");
        std::vector<nlohmann::json> items;
        for (double x : c.at) {
            const double step = c.h > 0.0 ? c.h : default_step(X.to_real(x));
            items.push_back({{"at", x}, {"value", derivative(f, x, step)}, {"h", step}, {"chart", chart}, {"expr", c.expr}});
        }
        result = items.size() == 1 ? items.front() : nlohmann::json(items);
    } else {
        const double width = (X.to_real(c.to) - X.to_real(c.from)) / c.panels;
        result = {{"from", c.from}, {"to", c.to},       {"value", integral(f, c.from, c.to, c.panels)},
                  {"h", width},     {"panels", c.panels}, {"chart", chart}, {"expr", c.expr}};
    }
    nlohmann::json doc = result.is_array() ? nlohmann::json{{"results", result}} : result;
    doc["config"] = detail::echo(command, c);

    auto file = detail::open_output(c.out);
    std::ostream& os = file ? *file : out;
    os << doc.dump(2) << '\n';
    detail::finish(file.get(), c.out);
    return 0;
}

inline int cmd_wave(const RunConfig& c, std::ostream& out, std::ostream& err) {
    detail::validate_common(c);
    detail::require(c.alpha.size() == 1, "wave takes exactly one --alpha");
    detail::require(c.samples >= 2, "--samples must be at least 2");
    detail::require(c.y_max > c.y_min, "--y-max must exceed --y-min");
    detail::require(!c.times.empty(), "at least one time is required");
    detail::require(c.depth <= 60, "--depth must be at most 60");

    wave::WaveField field(wave::WaveProfile{wave::parse_profile(c.profile_a), wave::parse_profile(c.profile_b)}, c.c,
                          koch::KochParams(parse_angle(c.alpha.front())));
    std::string dir = c.out;
    if (dir.empty()) {
        const char* env = std::getenv(kOutputDirEnv);
        dir = env && *env ? env : ".";
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "'");

    const auto header = detail::header_lines("wave", c);
    std::vector<double> energies;
    bool truncated = false;
    nlohmann::json json_snapshots = nlohmann::json::array();
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        const double t = c.times[i];
        wave::Snapshot s = wave::snapshot(field, t, c.y_min, c.y_max, static_cast<std::size_t>(c.samples), c.depth);
        wave::Energy e = wave::energy(field, t, c.y_min, c.y_max, c.panels);
        energies.push_back(e.value);
        if (e.truncated) {
            truncated = true;
            err << "warning: energy integrand at range ends is " << format_double(e.edge_density) << " at t="
                << format_double(t) << " (support truncated)\n";
        }
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.%s", i, c.format.c_str());
        if (c.format == "json") {
            nlohmann::json samples = nlohmann::json::array();
            for (const auto& p : s.samples)
                samples.push_back({{"y", p.y}, {"re", p.point.real()}, {"im", p.point.imag()}, {"phi", p.phi}});
            json_snapshots.push_back({{"t", t}, {"samples", samples}});
            continue;
        }
        const std::string path = (std::filesystem::path(dir) / name).string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open '" + path + "' for writing");
        if (c.format == "csv") io::write_snapshot_csv(f, s, header);
        else io::write_snapshot_svg(f, s, c.offset_scale, header);
        detail::finish(&f, path);
        out << path << '\n';
    }
    if (c.format == "json") {
        const std::string path = (std::filesystem::path(dir) / "snapshots.json").string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open '" + path + "' for writing");
        f << nlohmann::json{{"config", detail::echo("wave", c)}, {"snapshots", json_snapshots}}.dump() << '\n';
        detail::finish(&f, path);
        out << path << '\n';
    }
    const std::string energy_path = (std::filesystem::path(dir) / "energy.csv").string();
    std::ofstream f(energy_path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + energy_path + "' for writing");
    io::write_energy_csv(f, c.times, energies, header);
    detail::finish(&f, energy_path);
    out << energy_path << '\n';
    return truncated && c.strict ? 3 : 0;
}

inline int cmd_lorentz(const RunConfig& c, std::ostream& out) {
    detail::require(c.c > 0.0, "--c must be positive");
    detail::require(c.input.empty() != c.point.empty(), "give exactly one of --input or --point");
    const Chart space = chart_by_name(c.chart);
    const lorentz::Boost boost(c.chi);
    const bool passthrough = c.chi == 0.0;

    io::CsvTable table;
    if (!c.point.empty()) {
        std::istringstream is("x0,y\n" + c.point + "\n");
        table = io::read_csv(is);
    } else {
        std::ifstream is(c.input, std::ios::binary);
        if (!is) throw IoError("cannot open '" + c.input + "'");
        table = io::read_csv(is);
    }

    const auto x0_col = table.column("x0");
    const auto t_col = table.column("t");
    const auto y_col = table.column("y");
    if (y_col < 0 || (x0_col < 0 && t_col < 0)) throw io::CsvError("need columns x0 (or t) and y", 1);
    const auto re_col = table.column("re");
    const auto im_col = table.column("im");
    const bool reembed = re_col >= 0 && im_col >= 0;
    const koch::KochParams params(parse_angle(c.alpha.empty() ? "pi/3" : c.alpha.front()));

    std::vector<std::size_t> extras;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        auto col = static_cast<std::ptrdiff_t>(i);
        if (col != x0_col && col != t_col && col != y_col && col != re_col && col != im_col) extras.push_back(i);
    }

    auto file = detail::open_output(c.out);
    std::ostream& os = file ? *file : out;
    io::write_comment_lines(os, detail::header_lines("lorentz", c));
    os << "x0,y";
    if (reembed) os << ",re,im";
    for (auto i : extras) os << ',' << table.columns[i];
    os << '\n';

    for (const auto& row : table.rows) {
        auto number = [&](std::ptrdiff_t col) {
            double v = 0.0;
            if (!parse_double(row.fields[static_cast<std::size_t>(col)], v) || !std::isfinite(v))
                throw io::CsvError("malformed number '" + row.fields[static_cast<std::size_t>(col)] + "'", row.line);
            return v;
        };
        const double x0 = x0_col >= 0 ? number(x0_col) : c.c * number(t_col);
        const double y = number(y_col);
        std::string x0_text, y_text;
        double y_new = y;
        if (passthrough) {
            x0_text = x0_col >= 0 ? row.fields[static_cast<std::size_t>(x0_col)] : format_double(x0);
            y_text = row.fields[static_cast<std::size_t>(y_col)];
        } else {
            lorentz::SpacetimePoint p = lorentz::boost_point(boost, {x0, y}, space);
            x0_text = format_double(p.x0);
            y_text = format_double(p.x1);
            y_new = p.x1;
        }
        os << x0_text << ',' << y_text;
        if (reembed) {
            if (passthrough) {
                os << ',' << row.fields[static_cast<std::size_t>(re_col)] << ',' << row.fields[static_cast<std::size_t>(im_col)];
            } else {
                auto z = koch::embed(params, koch::Address::at(y_new), c.depth).point;
                os << ',' << format_double(z.real()) << ',' << format_double(z.imag());
            }
        }
        for (auto i : extras) os << ',' << row.fields[i];
        os << '\n';
    }
    detail::finish(file.get(), c.out);
    return 0;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig cfg;
    std::string config_path;
    CLI::App app{"Non-Newtonian calculus on Koch-type curves: geometry, calculus, waves and boosts", "nnwave"};
    app.set_version_flag("--version", "nnwave 1.0.0");
    app.require_subcommand(1);
    app.add_option("--config", config_path, "JSON file with option values (command-line flags win)");

    auto add_alpha = [&](CLI::App* s) {
        s->add_option("--alpha", cfg.alpha, "angle in radians; decimals or expressions like pi/3")->delimiter(',');
    };
    auto add_format = [&](CLI::App* s, const std::string& help) { s->add_option("--format", cfg.format, help); };

    auto* geometry = app.add_subcommand("geometry", "export Koch polylines");
    add_alpha(geometry);
    geometry->add_option("--depth", cfg.depth, "number of quaternary digits");
    geometry->add_option("--cell", cfg.cell, "cell index k of the periodic curve");
    add_format(geometry, "csv or svg");
    geometry->add_option("--out", cfg.out, "output file (default stdout)");

    auto* calc = app.add_subcommand("calc", "non-Newtonian derivative or integral");
    calc->require_subcommand(1);
    auto* deriv = calc->add_subcommand("deriv", "derivative DA/Dx");
    auto* integ = calc->add_subcommand("integ", "integral of A(x) Dx");
    for (auto* s : {deriv, integ}) {
        s->add_option("--fx", cfg.fx, "domain chart");
        s->add_option("--fy", cfg.fy, "codomain chart");
        s->add_option("--expr", cfg.expr, "function A(x)");
        s->add_option("--out", cfg.out, "output file (default stdout)");
    }
    deriv->add_option("--at", cfg.at, "evaluation points")->delimiter(',');
    deriv->add_option("--step", cfg.h, "chart-space step (default 1e-6*max(1,|f_X(x)|))");
    integ->add_option("--from", cfg.from, "lower bound");
    integ->add_option("--to", cfg.to, "upper bound");
    integ->add_option("--panels", cfg.panels, "Simpson panels");

    auto* wave_cmd = app.add_subcommand("wave", "d'Alembert wave snapshots and energy trace");
    add_alpha(wave_cmd);
    wave_cmd->add_option("--depth", cfg.depth, "embedding depth");
    wave_cmd->add_option("--profile-a", cfg.profile_a, "left-moving profile a");
    wave_cmd->add_option("--profile-b", cfg.profile_b, "right-moving profile b");
    wave_cmd->add_option("--c", cfg.c, "wave speed");
    wave_cmd->add_option("--times", cfg.times, "snapshot times")->delimiter(',');
    wave_cmd->add_option("--y-min", cfg.y_min, "lower end of the address range");
    wave_cmd->add_option("--y-max", cfg.y_max, "upper end of the address range");
    wave_cmd->add_option("--samples", cfg.samples, "samples per snapshot");
    wave_cmd->add_option("--panels", cfg.panels, "Simpson panels for the energy");
    wave_cmd->add_option("--offset-scale", cfg.offset_scale, "SVG normal offset per unit of phi");
    wave_cmd->add_flag("--strict", cfg.strict, "exit 3 when the energy integrand is truncated");
    add_format(wave_cmd, "csv, json or svg");
    wave_cmd->add_option("--out", cfg.out, "output directory (default $NNWAVE_OUTPUT_DIR or .)");

    auto* lorentz_cmd = app.add_subcommand("lorentz", "boost x0,y points");
    lorentz_cmd->add_option("--chi", cfg.chi, "rapidity");
    lorentz_cmd->add_option("--chart", cfg.chart, "spatial chart");
    lorentz_cmd->add_option("--c", cfg.c, "wave speed used when the input has a t column");
    lorentz_cmd->add_option("--input", cfg.input, "CSV with columns x0 (or t) and y");
    lorentz_cmd->add_option("--point", cfg.point, "single point x0,y");
    lorentz_cmd->add_option("--out", cfg.out, "output file (default stdout)");
    add_alpha(lorentz_cmd);
    lorentz_cmd->add_option("--depth", cfg.depth, "embedding depth for re,im columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        CLI::App* active = nullptr;
        for (auto* s : {geometry, deriv, integ, wave_cmd, lorentz_cmd})
            if (s->parsed()) active = s;
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw IoError("cannot open config '" + config_path + "'");
            nlohmann::json j;
            try {
                is >> j;
            } catch (const nlohmann::json::parse_error& e) {
                throw DomainError(std::string("config is not valid JSON: ") + e.what());
            }
            detail::apply_config(app, active, j);
        }
        if (geometry->parsed()) return cmd_geometry(cfg, out);
        if (deriv->parsed()) return cmd_calc("deriv", cfg, out);
        if (integ->parsed()) return cmd_calc("integ", cfg, out);
        if (wave_cmd->parsed()) return cmd_wave(cfg, out, err);
        if (lorentz_cmd->parsed()) return cmd_lorentz(cfg, out);
        return 1;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace nnwave::cli

#pragma once

// Non-Diophantine arithmetic: a bijection f between a represented set and the
// real line turns the set into a field isomorphic to R,
//
//   x (+) y = f^-1(f(x) + f(y))     x (*) y = f^-1(f(x) * f(y))
//
// and likewise for subtraction and division. Values are stored in the set's
// native representation; the chart coordinate f(x) is computed on demand.

#include <algorithm>
#include <cmath>
#include <compare>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exprlang.hpp"
#include "format.hpp"

namespace nnwave {

/// Open interval of admissible represented values.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return std::isfinite(x) && x > lo && x < hi; }
    static Interval real_line() { return {}; }
    static Interval positive() { return {0.0, std::numeric_limits<double>::infinity()}; }
};

using RealFn = std::function<double(double)>;

/// A bijection f: X -> R with its inverse.
class Chart {
public:
    Chart(std::string name, RealFn forward, RealFn inverse, Interval domain = Interval::real_line())
        : name_(std::move(name)), forward_(std::move(forward)), inverse_(std::move(inverse)), domain_(domain) {}

    const std::string& name() const { return name_; }
    const Interval& domain() const { return domain_; }
    bool contains(double x) const { return domain_.contains(x); }

    /// f(x). Throws DomainError outside the domain.
    double forward(double x) const {
        if (!contains(x))
            throw DomainError("value " + format_double(x) + " outside domain of chart '" + name_ + "'");
        double r = call(forward_, x);
        if (!std::isfinite(r))
            throw NumericError("chart '" + name_ + "' forward map is not finite at " + format_double(x));
        return r;
    }

    /// f^-1(r). Throws DomainError when r is outside the range of f.
    double inverse(double r) const {
        if (!std::isfinite(r)) throw NumericError("chart '" + name_ + "' inverse of non-finite value");
        double x = call(inverse_, r);
        if (!contains(x))
            throw DomainError("value " + format_double(r) + " outside range of chart '" + name_ + "'");
        return x;
    }

private:
    std::string name_;
    RealFn forward_;
    RealFn inverse_;
    Interval domain_;

    double call(const RealFn& fn, double v) const {
        try {
            return fn(v);
        } catch (const NumericError& e) {
            throw DomainError("chart '" + name_ + "': " + e.what());
        }
    }
};

inline Chart identity_chart() {
    return Chart("identity", [](double x) { return x; }, [](double r) { return r; });
}

inline Chart cubic_chart() {
    return Chart("cubic", [](double x) { return x * x * x; }, [](double r) { return std::cbrt(r); });
}

inline Chart log_chart() {
    return Chart("log", [](double x) { return std::log(x); }, [](double r) { return std::exp(r); },
                 Interval::positive());
}

/// Chart of the periodic Koch curve: points are stored by their address
/// coordinate, so the bijection acts as the identity on stored values.
inline Chart koch_chart() {
    return Chart("koch", [](double y) { return y; }, [](double r) { return r; });
}

namespace detail {

inline bool roughly_equal(double a, double b, double rel) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= rel * scale;
}

}  // namespace detail

/// Builds a chart from a forward/inverse expression pair. The domain is
/// inferred on a probe grid over [-8, 8]; the pair is rejected unless it
/// round-trips and is strictly monotone there.
inline Chart expression_chart(std::string_view forward_text, std::string_view inverse_text) {
    expr::Expr fwd = expr::parse(forward_text);
    expr::Expr inv = expr::parse(inverse_text);
    const std::string name = "expr:" + std::string(forward_text) + ";" + std::string(inverse_text);

    constexpr int kProbe = 257;
    std::vector<double> xs, rs;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool seen_success = false, gap = false;
    for (int i = 0; i < kProbe; ++i) {
        double x = -8.0 + 16.0 * i / (kProbe - 1);
        double r = 0.0;
        bool ok = true;
        try {
            r = fwd(x);
        } catch (const NumericError&) {
            ok = false;
        }
        if (ok) {
            if (seen_success && hi != std::numeric_limits<double>::infinity()) gap = true;
            seen_success = true;
            xs.push_back(x);
            rs.push_back(r);
        } else if (!seen_success) {
            lo = x;
        } else if (hi == std::numeric_limits<double>::infinity()) {
            hi = x;
        }
    }
    if (xs.size() < 8 || gap)
        throw DomainError("chart '" + name + "': forward map is not defined on an interval of the probe grid");

    const bool increasing = rs[1] > rs[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && ((rs[i] > rs[i - 1]) != increasing || rs[i] == rs[i - 1]))
            throw DomainError("chart '" + name + "': forward map is not strictly monotone");
        double back = 0.0;
        try {
            back = inv(rs[i]);
        } catch (const NumericError& e) {
            throw DomainError("chart '" + name + "': inverse fails: " + e.what());
        }
        if (!detail::roughly_equal(back, xs[i], 1e-9))
            throw DomainError("chart '" + name + "': inverse does not undo forward at " + format_double(xs[i]));
    }
    return Chart(name, [fwd](double x) { return fwd(x); }, [inv](double r) { return inv(r); }, Interval{lo, hi});
}

/// Resolves "identity" | "cubic" | "log" | "koch" | "expr:<fwd>;<inv>".
inline Chart chart_by_name(std::string_view name) {
    if (name == "identity") return identity_chart();
    if (name == "cubic") return cubic_chart();
    if (name == "log") return log_chart();
    if (name == "koch") return koch_chart();
    if (name.starts_with("expr:")) {
        std::string_view body = name.substr(5);
        auto sep = body.find(';');
        if (sep == std::string_view::npos)
            throw ParseError("expression chart needs '<forward>;<inverse>'", 5 + body.size());
        return expression_chart(body.substr(0, sep), body.substr(sep + 1));
    }
    throw DomainError("unknown chart '" + std::string(name) + "'");
}

/// Field structure induced on a charted set.
class Arithmetic {
public:
    explicit Arithmetic(Chart chart) : chart_(std::move(chart)), zero_(chart_.inverse(0.0)), one_(chart_.inverse(1.0)) {}

    const Chart& chart() const { return chart_; }
    double zero() const { return zero_; }
    double one() const { return one_; }

    double to_real(double x) const { return chart_.forward(x); }
    double from_real(double r) const { return chart_.inverse(r); }

private:
    Chart chart_;
    double zero_;
    double one_;
};

inline double add(const Arithmetic& a, double x, double y) { return a.from_real(a.to_real(x) + a.to_real(y)); }
inline double sub(const Arithmetic& a, double x, double y) { return a.from_real(a.to_real(x) - a.to_real(y)); }
inline double mul(const Arithmetic& a, double x, double y) { return a.from_real(a.to_real(x) * a.to_real(y)); }

inline double div(const Arithmetic& a, double x, double y) {
    double den = a.to_real(y);
    if (den == 0.0) throw DivisionError("division by the arithmetic zero of chart '" + a.chart().name() + "'");
    return a.from_real(a.to_real(x) / den);
}

/// Additive inverse, 0 (-) x.
inline double neg(const Arithmetic& a, double x) { return a.from_real(-a.to_real(x)); }

/// The image f^-1(n) of an integer; from_int(0) is zero, from_int(1) is one.
inline double from_int(const Arithmetic& a, long long n) { return a.from_real(static_cast<double>(n)); }

/// Order pulled back through the chart.
inline std::weak_ordering compare(const Arithmetic& a, double x, double y) {
    double fx = a.to_real(x), fy = a.to_real(y);
    if (fx < fy) return std::weak_ordering::less;
    if (fx > fy) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

}  // namespace nnwave

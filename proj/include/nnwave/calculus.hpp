#pragma once

// Non-Newtonian derivative and integral of A: X -> Y. Everything is computed
// on the chart-space representative
//
//   A~ = f_Y o A o f_X^-1 : R -> R
//
// and pulled back: DA/Dx = f_Y^-1(dA~/dr at r = f_X(x)).

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "arithmetic.hpp"
#include "errors.hpp"

namespace nnwave {

/// A: X -> Y together with the arithmetics of its domain and codomain.
struct ChartedFunction {
    Arithmetic domain;
    Arithmetic codomain;
    RealFn map;

    double operator()(double x) const {
        double y = map(x);
        if (!std::isfinite(y)) throw NumericError("charted function returned a non-finite value");
        return y;
    }

    /// A~(r) = f_Y(A(f_X^-1(r))).
    double induced(double r) const { return codomain.to_real((*this)(domain.from_real(r))); }
};

/// G o F for F: X -> Y and G: Y -> Z.
inline ChartedFunction compose(const ChartedFunction& f, const ChartedFunction& g) {
    return ChartedFunction{f.domain, g.codomain, [f, g](double x) { return g(f(x)); }};
}

inline constexpr double kDefaultRelativeStep = 1e-6;
inline constexpr int kDefaultPanels = 2048;

/// Default chart-space step 1e-6 * max(1, |r|).
inline double default_step(double r) { return kDefaultRelativeStep * std::max(1.0, std::fabs(r)); }

namespace detail {

inline double resolve_step(std::optional<double> h, double r) {
    double step = h.value_or(default_step(r));
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step size must be positive and finite");
    return step;
}

inline double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericError(what);
    return v;
}

// Pairwise summation keeps the reduction order fixed and the error O(log n).
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace detail

/// dA~/dr at f_X(x) by central difference, before pulling back to Y.
inline double chart_derivative(const ChartedFunction& f, double x, std::optional<double> h = std::nullopt) {
    const double r = f.domain.to_real(x);
    const double step = detail::resolve_step(h, r);
    const double d = (f.induced(r + step) - f.induced(r - step)) / (2.0 * step);
    return detail::finite_or_throw(d, "non-finite difference quotient");
}

/// DA/Dx at x: central difference of A~ in chart space, pulled back by f_Y^-1.
inline double derivative(const ChartedFunction& f, double x, std::optional<double> h = std::nullopt) {
    return f.codomain.from_real(chart_derivative(f, x, h));
}

/// DA/Dx from the limit form
///   (A(x (+)_X f_X^-1(h)) (-)_Y A(x)) (/)_Y f_Y^-1(h)
/// evaluated with the induced arithmetics at finite h. First order in h.
inline double derivative_via_limit(const ChartedFunction& f, double x, std::optional<double> h = std::nullopt) {
    const Arithmetic& X = f.domain;
    const Arithmetic& Y = f.codomain;
    const double step = detail::resolve_step(h, X.to_real(x));
    const double shifted = add(X, x, X.from_real(step));
    const double rise = sub(Y, f(shifted), f(x));
    return div(Y, rise, Y.from_real(step));
}

/// Composite Simpson rule over [a, b] with `panels` panels (2 * panels + 1
/// samples). Reversed bounds give the negated integral.
template <class Fn>
double simpson(const Fn& fn, double a, double b, int panels = kDefaultPanels) {
    if (panels < 1) throw DomainError("panel count must be at least 1");
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integration bounds must be finite");
    if (a == b) return 0.0;
    const double width = (b - a) / panels;
    std::vector<double> nodes(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) {
        double r = i == panels ? b : a + width * i;
        nodes[static_cast<std::size_t>(i)] = detail::finite_or_throw(fn(r), "non-finite integrand sample");
    }
    std::vector<double> contrib(static_cast<std::size_t>(panels));
    for (int i = 0; i < panels; ++i) {
        double left = a + width * i;
        double mid = detail::finite_or_throw(fn(left + 0.5 * width), "non-finite integrand sample");
        auto k = static_cast<std::size_t>(i);
        contrib[k] = nodes[k] + 4.0 * mid + nodes[k + 1];
    }
    return detail::pairwise_sum(contrib) * width / 6.0;
}

/// Integral of A from `lower` to `upper`: f_Y^-1 of the ordinary integral of
/// A~ between the chart coordinates of the bounds.
inline double integral(const ChartedFunction& f, double lower, double upper, int panels = kDefaultPanels) {
    const double a = f.domain.to_real(lower);
    const double b = f.domain.to_real(upper);
    return f.codomain.from_real(simpson([&](double r) { return f.induced(r); }, a, b, panels));
}

/// Non-Newtonian exponent f_Y^-1(e^{f_X(x)}); solves DA/Dx = A, A(0_X) = 1_Y.
inline double exp_map(const Arithmetic& X, const Arithmetic& Y, double x) {
    double v = std::exp(X.to_real(x));
    if (!std::isfinite(v)) throw NumericError("exponent overflow");
    return Y.from_real(v);
}

inline double sin_map(const Arithmetic& X, const Arithmetic& Y, double x) {
    return Y.from_real(std::sin(X.to_real(x)));
}

inline double cos_map(const Arithmetic& X, const Arithmetic& Y, double x) {
    return Y.from_real(std::cos(X.to_real(x)));
}

inline ChartedFunction exp_function(const Arithmetic& X, const Arithmetic& Y) {
    return {X, Y, [X, Y](double x) { return exp_map(X, Y, x); }};
}

inline ChartedFunction sin_function(const Arithmetic& X, const Arithmetic& Y) {
    return {X, Y, [X, Y](double x) { return sin_map(X, Y, x); }};
}

inline ChartedFunction cos_function(const Arithmetic& X, const Arithmetic& Y) {
    return {X, Y, [X, Y](double x) { return cos_map(X, Y, x); }};
}

struct ChainSides {
    double lhs;
    double rhs;
};

/// Both sides of the chain rule for G o F:
///   D(G o F)/Dx  vs  f_Z^-1[ f_Z(DG(F(x))/DF(x)) * f_Y(DF(x)/Dx) ].
inline ChainSides chain_check(const ChartedFunction& f, const ChartedFunction& g, double x,
                              std::optional<double> h = std::nullopt) {
    const Arithmetic& Y = f.codomain;
    const Arithmetic& Z = g.codomain;
    double lhs = derivative(compose(f, g), x, h);
    double dg = derivative(g, f(x), h);
    double df = derivative(f, x, h);
    return {lhs, Z.from_real(Z.to_real(dg) * Y.to_real(df))};
}

/// Three-factor chain rule for H o G o F with F: W -> X, G: X -> Y, H: Y -> Z.
inline ChainSides chain_check(const ChartedFunction& f, const ChartedFunction& g, const ChartedFunction& k,
                              double x, std::optional<double> h = std::nullopt) {
    const Arithmetic& X = f.codomain;
    const Arithmetic& Y = g.codomain;
    const Arithmetic& Z = k.codomain;
    double lhs = derivative(compose(compose(f, g), k), x, h);
    double fx = f(x);
    double dk = derivative(k, g(fx), h);
    double dg = derivative(g, fx, h);
    double df = derivative(f, x, h);
    return {lhs, Z.from_real(Z.to_real(dk) * Y.to_real(dg) * X.to_real(df))};
}

/// Splits A: X -> Y into f_X: X -> R, A~: R -> R and f_Y^-1: R -> Y.
struct ChartFactors {
    ChartedFunction to_chart;
    ChartedFunction representative;
    ChartedFunction from_chart;
};

inline ChartFactors chart_factors(const ChartedFunction& f) {
    Arithmetic R(identity_chart());
    const Arithmetic& X = f.domain;
    const Arithmetic& Y = f.codomain;
    return {
        ChartedFunction{X, R, [X](double x) { return X.to_real(x); }},
        ChartedFunction{R, R, [f](double r) { return f.induced(r); }},
        ChartedFunction{R, Y, [Y](double r) { return Y.from_real(r); }},
    };
}

}  // namespace nnwave

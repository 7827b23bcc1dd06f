#pragma once

// Waves on the periodic Koch curve. With f_Y = id the wave equation in the
// chart coordinate y = f_X(x) is the ordinary 1+1 equation, so every
// solution is d'Alembert's
//
//   Phi_t(x) = a(y + c t) + b(y - c t),
//
// evaluated exactly; the equation itself is checked through residuals.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "calculus.hpp"
#include "errors.hpp"
#include "exprlang.hpp"
#include "format.hpp"
#include "koch.hpp"

namespace nnwave::wave {

inline constexpr double kProfileStep = 1e-6;

/// A real profile r -> p(r) with an optional analytic slope. Profiles without
/// one are differentiated by central differences with step 1e-6.
struct Profile {
    std::function<double(double)> value;
    std::function<double(double)> slope;
    std::string description;

    double operator()(double r) const {
        double v = value(r);
        if (!std::isfinite(v)) throw NumericError("profile '" + description + "' is not finite at " + format_double(r));
        return v;
    }

    double derivative(double r) const {
        if (slope) return slope(r);
        const double h = kProfileStep * std::max(1.0, std::fabs(r));
        return ((*this)(r + h) - (*this)(r - h)) / (2.0 * h);
    }
};

inline Profile zero_profile() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, "zero"};
}

/// amplitude * exp(-((r - center) / sigma)^2)
inline Profile gaussian(double sigma = 1.0, double center = 0.0, double amplitude = 1.0) {
    if (!(sigma > 0.0)) throw DomainError("gaussian width must be positive");
    return {[=](double r) {
                double u = (r - center) / sigma;
                return amplitude * std::exp(-u * u);
            },
            [=](double r) {
                double u = (r - center) / sigma;
                return -2.0 * u / sigma * amplitude * std::exp(-u * u);
            },
            "gaussian:sigma=" + format_double(sigma) + ",center=" + format_double(center) +
                ",amp=" + format_double(amplitude)};
}

/// exp(-((r - center) / sigma)^2) * sin(k (r - center))
inline Profile sine_packet(double sigma = 1.0, double wavenumber = 6.0, double center = 0.0) {
    if (!(sigma > 0.0)) throw DomainError("sine-packet width must be positive");
    return {[=](double r) {
                double u = (r - center) / sigma;
                return std::exp(-u * u) * std::sin(wavenumber * (r - center));
            },
            [=](double r) {
                double s = r - center, u = s / sigma, env = std::exp(-u * u);
                return env * (wavenumber * std::cos(wavenumber * s) - 2.0 * u / sigma * std::sin(wavenumber * s));
            },
            "sine-packet:sigma=" + format_double(sigma) + ",k=" + format_double(wavenumber) +
                ",center=" + format_double(center)};
}

/// exp(-((r - center) / sigma)^2) * sin(k (r - center)^3), a windowed chirp.
inline Profile chirp(double sigma = 1.5, double rate = 4.0, double center = 0.0) {
    if (!(sigma > 0.0)) throw DomainError("chirp width must be positive");
    return {[=](double r) {
                double s = r - center, u = s / sigma;
                return std::exp(-u * u) * std::sin(rate * s * s * s);
            },
            [=](double r) {
                double s = r - center, u = s / sigma, env = std::exp(-u * u);
                return env * (3.0 * rate * s * s * std::cos(rate * s * s * s) - 2.0 * u / sigma * std::sin(rate * s * s * s));
            },
            "chirp:sigma=" + format_double(sigma) + ",k=" + format_double(rate) + ",center=" + format_double(center)};
}

inline Profile expression_profile(std::string_view text) {
    expr::Expr e = expr::parse(text);
    return {[e](double r) { return e(r); }, {}, std::string(text)};
}

/// "zero" | "gaussian[:sigma=..,center=..,amp=..]" |
/// "sine-packet[:sigma=..,k=..,center=..]" | "chirp[:sigma=..,k=..,center=..]" |
/// any expression in x.
inline Profile parse_profile(std::string_view text) {
    auto colon = text.find(':');
    std::string_view head = text.substr(0, colon);
    if (head != "zero" && head != "gaussian" && head != "sine-packet" && head != "chirp")
        return expression_profile(text);

    std::map<std::string, double, std::less<>> kv;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        std::size_t base = colon + 1;
        while (!rest.empty()) {
            auto comma = rest.find(',');
            std::string_view item = rest.substr(0, comma);
            auto eq = item.find('=');
            double v = 0.0;
            if (eq == std::string_view::npos || !parse_double(item.substr(eq + 1), v))
                throw ParseError("expected key=value in profile parameters", base);
            kv.emplace(std::string(item.substr(0, eq)), v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
            base += comma + 1;
        }
    }
    auto take = [&](std::string_view key, double fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        double v = it->second;
        kv.erase(it);
        return v;
    };
    Profile p;
    if (head == "zero") p = zero_profile();
    else if (head == "gaussian") p = gaussian(take("sigma", 1.0), take("center", 0.0), take("amp", 1.0));
    else if (head == "sine-packet") p = sine_packet(take("sigma", 1.0), take("k", 6.0), take("center", 0.0));
    else p = chirp(take("sigma", 1.5), take("k", 4.0), take("center", 0.0));
    if (!kv.empty()) throw ParseError("unknown profile parameter '" + kv.begin()->first + "'", colon + 1);
    return p;
}

/// Left-mover a and right-mover b.
struct WaveProfile {
    Profile a = zero_profile();
    Profile b = zero_profile();
};

class WaveField {
public:
    WaveField(WaveProfile profile, double c = 1.0, koch::KochParams params = koch::KochParams{})
        : profile_(std::move(profile)), c_(c), params_(params) {
        if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("wave speed must be positive");
    }

    const WaveProfile& profile() const { return profile_; }
    const koch::KochParams& params() const { return params_; }
    double speed() const { return c_; }

    /// a(y + ct) + b(y - ct) at chart coordinate y.
    double evaluate(double t, double y) const {
        const double ct = c_ * t;
        return profile_.a(y + ct) + profile_.b(y - ct);
    }

    /// d/dt Phi, from the profiles' slopes.
    double time_derivative(double t, double y) const {
        const double ct = c_ * t;
        return c_ * (profile_.a.derivative(y + ct) - profile_.b.derivative(y - ct));
    }

    /// D/Dx Phi, which in the chart coordinate is d/dy.
    double space_derivative(double t, double y) const {
        const double ct = c_ * t;
        return profile_.a.derivative(y + ct) + profile_.b.derivative(y - ct);
    }

private:
    WaveProfile profile_;
    double c_;
    koch::KochParams params_;
};

/// Anything sampled as Phi(t, y) with a wave speed.
template <class F>
concept ScalarField = requires(const F& f, double t, double y) {
    { f.evaluate(t, y) } -> std::convertible_to<double>;
    { f.speed() } -> std::convertible_to<double>;
};

inline double evaluate(const WaveField& field, double t, const koch::Address& addr) {
    return field.evaluate(t, addr.coordinate);
}

struct Sample {
    double y;
    koch::PlanePoint point;
    double phi;
};

struct Snapshot {
    double t = 0.0;
    std::vector<Sample> samples;
};

inline constexpr std::size_t kMaxSnapshotSamples = 50'000'000;

/// n uniformly spaced addresses over [y_lo, y_hi], each embedded at `depth`.
template <ScalarField F>
Snapshot snapshot(const F& field, const koch::KochParams& params, double t, double y_lo, double y_hi,
                  std::size_t n, int depth) {
    if (n < 2) throw DomainError("snapshot needs at least 2 samples");
    if (n > kMaxSnapshotSamples) throw ResourceError("snapshot sample count too large");
    if (!(y_hi > y_lo)) throw DomainError("snapshot range must be increasing");
    Snapshot s;
    s.t = t;
    s.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = i + 1 == n ? y_hi : y_lo + (y_hi - y_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        s.samples.push_back({y, koch::embed(params, koch::Address::at(y), depth).point, field.evaluate(t, y)});
    }
    return s;
}

inline Snapshot snapshot(const WaveField& field, double t, double y_lo, double y_hi, std::size_t n, int depth) {
    return snapshot(field, field.params(), t, y_lo, y_hi, n, depth);
}

inline constexpr double kTruncationThreshold = 1e-10;

struct Energy {
    double value = 0.0;
    double edge_density = 0.0;  // larger integrand value at the two range ends
    bool truncated = false;     // edge_density exceeds 1e-10
};

/// 1/2 of the integral over [y_lo, y_hi] of (1/c^2)|dPhi/dt|^2 + |DPhi/Dx|^2,
/// by composite Simpson in the chart coordinate.
inline Energy energy(const WaveField& field, double t, double y_lo, double y_hi, int panels = kDefaultPanels) {
    const double c2 = field.speed() * field.speed();
    auto density = [&](double y) {
        double dt = field.time_derivative(t, y);
        double dy = field.space_derivative(t, y);
        return 0.5 * (dt * dt / c2 + dy * dy);
    };
    Energy e;
    e.value = simpson(density, y_lo, y_hi, panels);
    e.edge_density = std::max(std::fabs(density(y_lo)), std::fabs(density(y_hi)));
    e.truncated = e.edge_density > kTruncationThreshold;
    return e;
}

/// (1/c^2) d^2phi/dt^2 - d^2phi/dy^2 from three-point second differences with
/// step h in t and in y.
template <ScalarField F>
double pde_residual(const F& field, double t, double y, double h) {
    if (!(h > 0.0)) throw DomainError("residual step must be positive");
    const double c = field.speed();
    const double mid = field.evaluate(t, y);
    const double tt = (field.evaluate(t + h, y) - 2.0 * mid + field.evaluate(t - h, y)) / (h * h);
    const double yy = (field.evaluate(t, y + h) - 2.0 * mid + field.evaluate(t, y - h)) / (h * h);
    const double r = tt / (c * c) - yy;
    if (!std::isfinite(r)) throw NumericError("non-finite residual stencil");
    return r;
}

template <ScalarField F>
double pde_residual(const F& field, double t, const koch::Address& addr, double h) {
    return pde_residual(field, t, addr.coordinate, h);
}

}  // namespace nnwave::wave

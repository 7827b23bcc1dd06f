#pragma once

// SO(1,1) acting on charted space-time. Points are (x0, x1) with x1 a
// represented value of the spatial chart; the group acts linearly on
// (x0, f(x1)) and nonlinearly on x1 itself.

#include <array>
#include <cmath>

#include "arithmetic.hpp"
#include "errors.hpp"
#include "wave.hpp"

namespace nnwave::lorentz {

/// Proper orthochronous boost with rapidity chi.
class Boost {
public:
    explicit Boost(double chi = 0.0) : chi_(chi), cosh_(std::cosh(chi)), sinh_(std::sinh(chi)) {
        if (!std::isfinite(cosh_)) throw NumericError("rapidity too large");
    }

    double rapidity() const { return chi_; }
    double cosh() const { return cosh_; }
    double sinh() const { return sinh_; }

    /// Row-major matrix [[L00, L01], [L10, L11]].
    std::array<std::array<double, 2>, 2> matrix() const { return {{{cosh_, sinh_}, {sinh_, cosh_}}}; }
    double determinant() const { return cosh_ * cosh_ - sinh_ * sinh_; }
    Boost inverse() const { return Boost(-chi_); }

private:
    double chi_;
    double cosh_;
    double sinh_;
};

/// Rapidities add.
inline Boost compose(const Boost& outer, const Boost& inner) { return Boost(outer.rapidity() + inner.rapidity()); }

struct SpacetimePoint {
    double x0 = 0.0;
    double x1 = 0.0;
};

/// x'0 = L00 x0 + L01 f(x1),  x'1 = f^-1(L10 x0 + L11 f(x1)).
inline SpacetimePoint boost_point(const Boost& b, const SpacetimePoint& p, const Chart& space = koch_chart()) {
    const double r = space.forward(p.x1);
    return {b.cosh() * p.x0 + b.sinh() * r, space.inverse(b.sinh() * p.x0 + b.cosh() * r)};
}

/// Both coordinates pushed through their own charts.
inline SpacetimePoint boost_point_general(const Boost& b, const SpacetimePoint& p, const Chart& time_chart,
                                          const Chart& space_chart) {
    const double r0 = time_chart.forward(p.x0);
    const double r1 = space_chart.forward(p.x1);
    return {time_chart.inverse(b.cosh() * r0 + b.sinh() * r1), space_chart.inverse(b.sinh() * r0 + b.cosh() * r1)};
}

/// (x0)^2 - f(x1)^2.
inline double interval(const SpacetimePoint& p, const Chart& space = koch_chart()) {
    const double r = space.forward(p.x1);
    return p.x0 * p.x0 - r * r;
}

/// Lazy view of the boosted scalar field Phi'(p') = Phi(p), p = boost^-1(p').
/// Coordinates are chart coordinates of the Koch curve.
class BoostedField {
public:
    BoostedField(wave::WaveField field, Boost boost) : field_(std::move(field)), boost_(boost) {}

    double speed() const { return field_.speed(); }
    const Boost& boost() const { return boost_; }
    const wave::WaveField& original() const { return field_; }

    double evaluate(double t, double y) const {
        if (boost_.rapidity() == 0.0) return field_.evaluate(t, y);
        const double c = field_.speed();
        // Inverse boost in chart coordinates; the Koch chart is the identity there.
        const double x0 = c * t;
        const double ch = boost_.cosh(), sh = boost_.sinh();
        return field_.evaluate((ch * x0 - sh * y) / c, ch * y - sh * x0);
    }

private:
    wave::WaveField field_;
    Boost boost_;
};

inline BoostedField transform_field(const wave::WaveField& field, const Boost& b) { return BoostedField(field, b); }

}  // namespace nnwave::lorentz

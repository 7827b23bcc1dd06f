#pragma once

// Koch-type curves K_[0,1] generated by the four similarities
//
//   0^(z) = L z              1^(z) = L (1 + a z)
//   2^(z) = L (1 + a + a* z) 3^(z) = L (1 + 2 cos(alpha) + z)
//
// with a = e^{i alpha}, L = 1 / (2 + 2 cos(alpha)). The point with quaternary
// address y = (0.q1 q2 ... qn)_4 is q1^ o q2^ o ... o qn^ (0), and the
// periodic curve K_R places cell k at z + k.

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "format.hpp"

namespace nnwave::koch {

using PlanePoint = std::complex<double>;

/// Similarity dimension log 4 / log(2 + 2 cos alpha), alpha in [0, pi/2].
inline double dimension(double alpha) {
    if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 2))
        throw DomainError("angle " + format_double(alpha) + " outside [0, pi/2]");
    return std::log(4.0) / std::log(2.0 + 2.0 * std::cos(alpha));
}

class KochParams {
public:
    explicit KochParams(double alpha = std::numbers::pi / 3)
        : alpha_(alpha), dim_(dimension(alpha)), contraction_(1.0 / (2.0 + 2.0 * std::cos(alpha))),
          rotation_(std::polar(1.0, alpha)) {}

    double alpha() const { return alpha_; }
    double contraction() const { return contraction_; }
    PlanePoint rotation() const { return rotation_; }
    double dim() const { return dim_; }

private:
    double alpha_;
    double dim_;
    double contraction_;
    PlanePoint rotation_;
};

inline PlanePoint ifs_map(const KochParams& p, int digit, PlanePoint z) {
    const double L = p.contraction();
    const PlanePoint a = p.rotation();
    switch (digit) {
    case 0: return L * z;
    case 1: return L * (1.0 + a * z);
    case 2: return L * (1.0 + a + std::conj(a) * z);
    case 3: return L * (1.0 + 2.0 * std::cos(p.alpha()) + z);
    default: throw DomainError("IFS digit must be 0..3, got " + std::to_string(digit));
    }
}

/// A point of K_R: its real chart coordinate, optionally with an explicit
/// base-4 spelling (cell index plus fractional digits). When digits are
/// present they take precedence over the coordinate for embedding, which
/// makes the trailing-3s spelling of quaternary rationals representable.
struct Address {
    double coordinate = 0.0;
    struct Digits {
        std::int64_t cell = 0;
        std::vector<std::uint8_t> fraction;
    };
    std::optional<Digits> digits;

    static Address at(double y) { return Address{y, std::nullopt}; }

    /// Builds an address from its digit spelling: y = cell + (0.d1 d2 ...)_4.
    static Address from_digits(std::int64_t cell, std::vector<std::uint8_t> fraction) {
        double frac = 0.0;
        for (auto it = fraction.rbegin(); it != fraction.rend(); ++it) {
            if (*it > 3) throw DomainError("base-4 digit out of range");
            frac = (frac + *it) / 4.0;
        }
        return Address{static_cast<double>(cell) + frac, Digits{cell, std::move(fraction)}};
    }
};

/// Cell index and the first `depth` fractional base-4 digits of an address.
inline Address::Digits digits_to_depth(const Address& addr, int depth) {
    if (depth < 0) throw DomainError("digit depth must be non-negative");
    Address::Digits out;
    if (addr.digits) {
        out.cell = addr.digits->cell;
        out.fraction.assign(addr.digits->fraction.begin(),
                            addr.digits->fraction.begin() +
                                static_cast<std::ptrdiff_t>(std::min<std::size_t>(addr.digits->fraction.size(),
                                                                                 static_cast<std::size_t>(depth))));
        out.fraction.resize(static_cast<std::size_t>(depth), 0);
        return out;
    }
    if (!std::isfinite(addr.coordinate)) throw NumericError("address coordinate is not finite");
    const double cell = std::floor(addr.coordinate);
    if (std::fabs(cell) > 9.0e15) throw DomainError("address coordinate too large for a cell index");
    out.cell = static_cast<std::int64_t>(cell);
    // Both the subtraction and the multiplications by 4 are exact in binary.
    double frac = addr.coordinate - cell;
    out.fraction.reserve(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i) {
        frac *= 4.0;
        double d = std::floor(frac);
        out.fraction.push_back(static_cast<std::uint8_t>(d));
        frac -= d;
    }
    return out;
}

struct Embedding {
    PlanePoint point;
    double err_bound;  // |point - limit point| <= err_bound
};

/// Plane point of `addr` truncated to `depth` digits. The true curve point
/// lies within the depth-n cell, whose diameter is at most 2 L^n.
inline Embedding embed(const KochParams& p, const Address& addr, int depth) {
    Address::Digits d = digits_to_depth(addr, depth);
    PlanePoint z{0.0, 0.0};
    for (auto it = d.fraction.rbegin(); it != d.fraction.rend(); ++it) z = ifs_map(p, *it, z);
    return {z + static_cast<double>(d.cell), 2.0 * std::pow(p.contraction(), depth)};
}

inline constexpr int kDefaultDecimalDigits = 32;

/// Parses either a base-4 literal `[-]INT[.DIGITS]_4` (all digits 0..3) or a
/// decimal real. Decimal inputs get `depth` fractional digits by repeated
/// multiplication by 4.
inline Address parse_address(std::string_view text, int depth = kDefaultDecimalDigits) {
    if (text.empty()) throw ParseError("empty address", 0);
    if (!text.ends_with("_4")) {
        double y = 0.0;
        if (!parse_double(text, y) || !std::isfinite(y)) throw ParseError("malformed decimal address", 0);
        Address a = Address::at(y);
        a.digits = digits_to_depth(a, depth);
        return a;
    }

    std::string_view body = text.substr(0, text.size() - 2);
    std::size_t pos = 0;
    bool negative = false;
    if (pos < body.size() && body[pos] == '-') {
        negative = true;
        ++pos;
    }
    auto read_digits = [&](std::vector<std::uint8_t>& out) {
        while (pos < body.size() && body[pos] >= '0' && body[pos] <= '9') {
            if (body[pos] > '3') throw ParseError("digit '" + std::string(1, body[pos]) + "' is not base 4", pos);
            out.push_back(static_cast<std::uint8_t>(body[pos] - '0'));
            ++pos;
        }
    };
    std::vector<std::uint8_t> integer, fraction;
    read_digits(integer);
    if (integer.empty()) throw ParseError("expected base-4 integer part", pos);
    if (pos < body.size() && body[pos] == '.') {
        ++pos;
        read_digits(fraction);
        if (fraction.empty()) throw ParseError("expected base-4 digits after '.'", pos);
    }
    if (pos != body.size()) throw ParseError("unexpected character in base-4 literal", pos);

    std::int64_t cell = 0;
    for (auto d : integer) {
        if (cell > (INT64_MAX >> 3)) throw ParseError("base-4 integer part too large", 0);
        cell = cell * 4 + d;
    }
    while (!fraction.empty() && fraction.back() == 0) fraction.pop_back();

    if (negative) {
        // -(I + F) = -(I + 1) + (1 - F); 1 - F by base-4 complement.
        if (fraction.empty()) return Address::from_digits(-cell, {});
        for (std::size_t i = 0; i + 1 < fraction.size(); ++i) fraction[i] = static_cast<std::uint8_t>(3 - fraction[i]);
        fraction.back() = static_cast<std::uint8_t>(4 - fraction.back());
        return Address::from_digits(-cell - 1, std::move(fraction));
    }
    return Address::from_digits(cell, std::move(fraction));
}

/// Base-4 spelling `[-]INT.DIGITS_4` of an address with `depth` digits.
inline std::string format_address(const Address& addr, int depth) {
    Address::Digits d = digits_to_depth(addr, depth);
    while (!d.fraction.empty() && d.fraction.back() == 0) d.fraction.pop_back();
    std::string out;
    std::int64_t cell = d.cell;
    if (cell < 0 && !d.fraction.empty()) {
        // Convert back to sign-magnitude: -(|cell| - 1) - (1 - F).
        out += '-';
        cell = -cell - 1;
        for (std::size_t i = 0; i + 1 < d.fraction.size(); ++i) d.fraction[i] = static_cast<std::uint8_t>(3 - d.fraction[i]);
        d.fraction.back() = static_cast<std::uint8_t>(4 - d.fraction.back());
    } else if (cell < 0) {
        out += '-';
        cell = -cell;
    }
    std::string integer;
    do {
        integer.insert(integer.begin(), static_cast<char>('0' + cell % 4));
        cell /= 4;
    } while (cell > 0);
    out += integer;
    if (!d.fraction.empty()) {
        out += '.';
        for (auto q : d.fraction) out += static_cast<char>('0' + q);
    }
    return out + "_4";
}

inline constexpr int kMaxPolylineDepth = 12;

/// Addresses k + j 4^-n, j = 0..4^n, of the depth-n polyline of cell k.
inline std::vector<double> polyline_addresses(int depth, std::int64_t cell = 0) {
    if (depth < 0) throw DomainError("polyline depth must be non-negative");
    if (depth > kMaxPolylineDepth)
        throw ResourceError("polyline depth " + std::to_string(depth) + " exceeds limit " +
                            std::to_string(kMaxPolylineDepth));
    const std::size_t count = (std::size_t{1} << (2 * depth)) + 1;
    const double scale = std::ldexp(1.0, -2 * depth);
    std::vector<double> ys(count);
    for (std::size_t j = 0; j < count; ++j) ys[j] = static_cast<double>(cell) + static_cast<double>(j) * scale;
    return ys;
}

/// Embedded vertices of the depth-n approximation of cell k, from (k, 0) to (k + 1, 0).
inline std::vector<PlanePoint> polyline(const KochParams& p, int depth, std::int64_t cell = 0) {
    std::vector<double> ys = polyline_addresses(depth, cell);
    std::vector<PlanePoint> pts;
    pts.reserve(ys.size());
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        // Digits of j written directly so large cells do not lose precision.
        std::vector<std::uint8_t> frac(static_cast<std::size_t>(depth));
        std::size_t v = j;
        for (int i = depth - 1; i >= 0; --i) {
            frac[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 3u);
            v >>= 2;
        }
        pts.push_back(embed(p, Address::from_digits(cell, std::move(frac)), depth).point);
    }
    pts.push_back(embed(p, Address::from_digits(cell + 1, {}), depth).point);
    return pts;
}

}  // namespace nnwave::koch

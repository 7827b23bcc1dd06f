#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace nnwave {

/// Shortest round-trip decimal text for a double, independent of locale.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Locale-independent parse of a whole string as a double.
inline bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

}  // namespace nnwave

#pragma once

#include <charconv>
#include <string>

namespace casimir::detail {

/// Shortest round-trip decimal rendering of a double.
inline std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace casimir::detail

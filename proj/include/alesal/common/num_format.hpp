// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "alesal/common/error.hpp"

namespace alesal {

// Shortest round-trip decimal form. All text artifacts (session files,
// CSV dumps, reports) go through this so identical values always print
// identically.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Error(std::string("invalid number for ") + what + ": '" + std::string(s) + "'");
    return v;
}

inline long parse_long(std::string_view s, const char* what) {
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Error(std::string("invalid integer for ") + what + ": '" + std::string(s) + "'");
    return v;
}

}  // namespace alesal

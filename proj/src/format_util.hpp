#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace lexnet::detail {

// Shortest round-trip representation; stable across runs and platforms.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace lexnet::detail

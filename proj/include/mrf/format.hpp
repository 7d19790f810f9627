#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace mrf {

// Shortest text form that round-trips an IEEE double exactly.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

inline double parse_double(const std::string& s) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a real number: '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("not a real number: '" + s + "'");
    return v;
}

} // namespace mrf

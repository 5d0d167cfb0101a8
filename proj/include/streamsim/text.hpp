// text.hpp - Deterministic number formatting for journals and reports.
//
// Machine-readable outputs (csv, frame journal) use the shortest decimal
// string that round-trips to the exact double, so re-parsing reproduces the
// run bit for bit and repeated runs are byte-identical. Human-readable
// outputs use fixed decimals per the display conventions (Mbps with 2,
// fractions with 4, costs as half-up integers plus the exact value).

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace streamsim::text {

// Shortest decimal representation that parses back to exactly `value`.
// Integral doubles render without an exponent (285000, not 2.85e+05).
inline std::string format_double(double value) {
    char buf[64];
    if (value == std::floor(value) && std::abs(value) < 9007199254740992.0) {  // 2^53
        std::snprintf(buf, sizeof(buf), "%.0f", value);
        return buf;
    }
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

inline std::string format_mbps(double bps) { return format_fixed(bps / 1e6, 2) + " Mbps"; }

inline std::string format_fraction(double value) { return format_fixed(value, 4); }

}  // namespace streamsim::text

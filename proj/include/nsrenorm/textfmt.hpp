#pragma once

#include <cstdio>
#include <string>

namespace nsrenorm {

/// Locale-independent shortest round-trip formatting; every CSV and
/// report goes through these so replays are byte-identical.
inline std::string fmt_d(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_ld(long double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.21Lg", v);
    return buf;
}

} // namespace nsrenorm

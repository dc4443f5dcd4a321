// format.hpp: deterministic number formatting shared by CSV output and
// scenario digests.
#pragma once

#include <cstdio>
#include <string>

namespace cohdyn {

/// Render a double with 17 significant digits, enough to round-trip any
/// IEEE-754 binary64 value exactly.
inline std::string format_sig17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace cohdyn

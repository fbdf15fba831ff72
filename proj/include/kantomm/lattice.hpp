#pragma once

// Max/min ("join"/"meet") primitives used by the nonlinear operators.

#include <algorithm>
#include <limits>
#include <span>

namespace kantomm::lattice {

inline double meet(double a, double b) noexcept { return std::min(a, b); }
inline double join(double a, double b) noexcept { return std::max(a, b); }

/// Maximum of the entries; -inf for an empty span.
inline double sup(std::span<const double> a) noexcept {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : a) m = std::max(m, v);
    return m;
}

/// Minimum of the entries; +inf for an empty span.
inline double inf(std::span<const double> a) noexcept {
    double m = std::numeric_limits<double>::infinity();
    for (double v : a) m = std::min(m, v);
    return m;
}

} // namespace kantomm::lattice

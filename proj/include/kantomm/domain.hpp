#pragma once

#include "error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace kantomm {

/// Closed interval [a, b] with a < b.
class Domain {
public:
    Domain(double a, double b) : a_(a), b_(b) {
        detail::require(std::isfinite(a) && std::isfinite(b) && a < b,
                        "domain requires finite a < b, got [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]");
    }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }
    bool contains(double x) const noexcept { return x >= a_ && x <= b_; }

    bool operator==(const Domain&) const = default;

private:
    double a_;
    double b_;
};

/// `count` equally spaced points from a to b, both endpoints included.
inline std::vector<double> uniform_grid(const Domain& d, std::size_t count) {
    detail::require(count >= 2, "uniform grid needs at least two points");
    std::vector<double> xs(count);
    const double h = d.length() / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) xs[i] = d.a() + h * static_cast<double>(i);
    xs.back() = d.b();
    return xs;
}

/// Midpoints of `cells` equal cells partitioning [a, b].
inline std::vector<double> midpoint_grid(const Domain& d, std::size_t cells) {
    detail::require(cells >= 1, "midpoint grid needs at least one cell");
    std::vector<double> xs(cells);
    const double h = d.length() / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) xs[i] = d.a() + h * (static_cast<double>(i) + 0.5);
    return xs;
}

} // namespace kantomm

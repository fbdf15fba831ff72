#pragma once

/**
 * @file quadrature.hpp
 * @brief Kantorovich cell averages n * integral_{k/n}^{(k+1)/n} f(u) du.
 */

#include "domain.hpp"
#include "error.hpp"
#include "operators.hpp"
#include "signals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kantomm {

enum class QuadratureKind { ExactPiecewise, RiemannRefined, Trapezoid, PairwiseMean };

inline constexpr long kDefaultRefinement = 16;

struct QuadratureRule {
    QuadratureKind kind = QuadratureKind::ExactPiecewise;
    long refinement = kDefaultRefinement; // sub-samples per cell (Riemann / trapezoid)

    static QuadratureRule exact() { return {QuadratureKind::ExactPiecewise, 1}; }
    static QuadratureRule riemann(long r) { return checked({QuadratureKind::RiemannRefined, r}); }
    static QuadratureRule trapezoid(long r) { return checked({QuadratureKind::Trapezoid, r}); }
    static QuadratureRule pairwise_mean() { return {QuadratureKind::PairwiseMean, 2}; }

private:
    static QuadratureRule checked(QuadratureRule q) {
        detail::require(q.refinement >= 1, "quadrature refinement must be at least 1");
        return q;
    }
};

/// Parses "exact", "riemann:<r>", "trapezoid:<r>" or "pairmean".
inline QuadratureRule parse_quadrature(const std::string& s) {
    if (s == "exact") return QuadratureRule::exact();
    if (s == "pairmean") return QuadratureRule::pairwise_mean();
    auto refinement = [&](std::size_t prefix) {
        const std::string tail = s.substr(prefix);
        detail::require(!tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos,
                        "bad quadrature refinement in '" + s + "'");
        return std::stol(tail);
    };
    if (s.starts_with("riemann:")) return QuadratureRule::riemann(refinement(8));
    if (s.starts_with("trapezoid:")) return QuadratureRule::trapezoid(refinement(10));
    detail::fail(ErrorKind::InvalidArgument, "unknown quadrature '" + s + "'");
}

inline std::string to_string(const QuadratureRule& q) {
    switch (q.kind) {
    case QuadratureKind::ExactPiecewise: return "exact";
    case QuadratureKind::RiemannRefined: return "riemann:" + std::to_string(q.refinement);
    case QuadratureKind::Trapezoid: return "trapezoid:" + std::to_string(q.refinement);
    case QuadratureKind::PairwiseMean: return "pairmean";
    }
    return "unknown";
}

namespace detail {

// Rounding may push an average a hair outside the range of what was averaged.
inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace detail

/// Exact cell averages of a step function over the Kantorovich nodes of (domain, n).
/// Averages are clamped to the range of the piece values.
inline NodeData cell_averages_exact(const PiecewiseConstant& f, const Domain& domain, long n) {
    detail::require(f.domain().a() <= domain.a() && domain.b() <= f.domain().b(),
                    "operator domain must lie inside the function's domain");
    const NodeRange r = node_range(Mode::Kantorovich, n, domain);
    const double nn = static_cast<double>(n);
    const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
    std::vector<double> v;
    v.reserve(r.size());
    for (long k = r.lo; k <= r.hi; ++k)
        v.push_back(std::clamp(nn * f.integral(k / nn, (k + 1) / nn), *lo, *hi));
    return NodeData(r.lo, std::move(v));
}

/// Exact cell averages from an antiderivative: n (F((k+1)/n) - F(k/n)).
inline NodeData cell_averages_exact(const AnalyticFunction& f, const Domain& domain, long n) {
    const NodeRange r = node_range(Mode::Kantorovich, n, domain);
    const double nn = static_cast<double>(n);
    std::vector<double> v;
    v.reserve(r.size());
    for (long k = r.lo; k <= r.hi; ++k)
        v.push_back(detail::clamp_unit(nn * (f.antiderivative((k + 1) / nn) - f.antiderivative(k / nn))));
    return NodeData(r.lo, std::move(v));
}

/// Cell averages from a sampled signal.
///
/// RiemannRefined: mean of `refinement` left-endpoint sub-samples per cell.
/// Trapezoid: composite trapezoid over refinement + 1 sub-samples per cell.
/// Sub-samples take the nearest signal sample. PairwiseMean: cell j is the mean
/// of samples 2j and 2j + 1, so the signal must hold exactly two samples per cell.
inline NodeData cell_averages_sampled(const Signal& s, long n, const QuadratureRule& rule) {
    const NodeRange r = node_range(Mode::Kantorovich, n, s.domain());
    const double nn = static_cast<double>(n);
    std::vector<double> v;
    v.reserve(r.size());

    switch (rule.kind) {
    case QuadratureKind::ExactPiecewise:
        detail::fail(ErrorKind::InvalidArgument, "exact quadrature needs an analytic function, not samples");
    case QuadratureKind::PairwiseMean: {
        if (s.size() != 2 * r.size())
            detail::fail(ErrorKind::SignalTooCoarse,
                         "pairwise mean needs exactly " + std::to_string(2 * r.size()) +
                             " samples for " + std::to_string(r.size()) + " cells, got " +
                             std::to_string(s.size()));
        for (std::size_t j = 0; j < r.size(); ++j)
            v.push_back(detail::clamp_unit(0.5 * (s.samples()[2 * j] + s.samples()[2 * j + 1])));
        break;
    }
    case QuadratureKind::RiemannRefined:
    case QuadratureKind::Trapezoid: {
        const double rr = static_cast<double>(rule.refinement);
        const double intervals_per_cell = 1.0 / (nn * s.spacing());
        if (intervals_per_cell < rr * (1.0 - 1e-9))
            detail::fail(ErrorKind::SignalTooCoarse,
                         "signal has " + std::to_string(intervals_per_cell) +
                             " samples per cell, rule needs " + std::to_string(rule.refinement));
        const bool trap = rule.kind == QuadratureKind::Trapezoid;
        for (long k = r.lo; k <= r.hi; ++k) {
            double sum = 0.0;
            double lo = 1.0;
            double hi = 0.0;
            for (long j = 0; j <= rule.refinement; ++j) {
                if (j == rule.refinement && !trap) break;
                const double u = (static_cast<double>(k) + static_cast<double>(j) / rr) / nn;
                const double sample = s.nearest(u);
                lo = std::min(lo, sample);
                hi = std::max(hi, sample);
                const bool end = trap && (j == 0 || j == rule.refinement);
                sum += end ? 0.5 * sample : sample;
            }
            v.push_back(std::clamp(sum / rr, lo, hi));
        }
        break;
    }
    }
    return NodeData(r.lo, std::move(v));
}

/// Sampling-mode node values f(k/n) taken from the nearest signal sample.
inline NodeData sample_nodes(const Signal& s, long n) {
    const NodeRange r = node_range(Mode::Sampling, n, s.domain());
    std::vector<double> v;
    v.reserve(r.size());
    for (long k = r.lo; k <= r.hi; ++k) v.push_back(s.nearest(static_cast<double>(k) / static_cast<double>(n)));
    return NodeData(r.lo, std::move(v));
}

} // namespace kantomm

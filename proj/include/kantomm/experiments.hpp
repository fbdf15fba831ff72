#pragma once

/**
 * @file experiments.hpp
 * @brief Reusable experiment pipelines: error tables, rate sweeps, denoising.
 *
 * The CLI is a thin layer over these functions; tests call them directly.
 */

#include "domain.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "metrics.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "signals.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kantomm {

/// What an operator is applied to: a step function, an analytic function, or samples.
using Source = std::variant<PiecewiseConstant, AnalyticFunction, Signal>;

inline double source_value(const Source& src, double x) {
    return std::visit(
        [x](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Signal>) return s.nearest(x);
            else return s(x);
        },
        src);
}

/// Node values for `spec` drawn from `src` (cell averages by `quad` in Kantorovich mode).
inline NodeData node_data(const Source& src, const OperatorSpec& spec, const QuadratureRule& quad) {
    if (spec.mode == Mode::Sampling) {
        if (const auto* s = std::get_if<Signal>(&src)) return sample_nodes(*s, spec.n);
        return sample_nodes(spec, [&](double x) { return source_value(src, x); });
    }
    if (quad.kind == QuadratureKind::ExactPiecewise) {
        if (const auto* pc = std::get_if<PiecewiseConstant>(&src))
            return cell_averages_exact(*pc, spec.domain, spec.n);
        if (const auto* af = std::get_if<AnalyticFunction>(&src))
            return cell_averages_exact(*af, spec.domain, spec.n);
        detail::fail(ErrorKind::InvalidArgument,
                     "exact quadrature needs an analytic function; use riemann, trapezoid or pairmean for samples");
    }
    if (const auto* s = std::get_if<Signal>(&src)) {
        if (s->domain() != spec.domain)
            detail::fail(ErrorKind::InvalidArgument, "signal domain differs from the operator domain");
        return cell_averages_sampled(*s, spec.n, quad);
    }
    if (quad.kind == QuadratureKind::PairwiseMean)
        detail::fail(ErrorKind::InvalidArgument, "pairwise mean applies to sampled signals only");
    // Refined sampling of an analytic source: refinement sub-intervals per cell.
    const double cells = std::ceil(static_cast<double>(spec.n) * spec.domain.length() - 1e-9);
    const auto count = static_cast<std::size_t>(cells) * static_cast<std::size_t>(quad.refinement) + 1;
    const Signal sampled =
        sample_function([&](double x) { return source_value(src, x); }, spec.domain, count);
    return cell_averages_sampled(sampled, spec.n, quad);
}

/// Evaluates `spec` over the midpoints of `grid` cells and returns the L^p error against src.
inline double operator_lp_error(const OperatorSpec& spec, const NodeData& data, const Source& src,
                                double p, std::size_t grid) {
    const auto xs = midpoint_grid(spec.domain, grid);
    const auto ys = eval_grid(spec, data, xs);
    std::vector<double> diff(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) diff[i] = ys[i] - source_value(src, xs[i]);
    return lp_norm_midpoint(diff, p, spec.domain);
}

/// Sup error over `grid` uniform points, endpoints included.
inline double operator_sup_error(const OperatorSpec& spec, const NodeData& data, const Source& src,
                                 std::size_t grid) {
    const auto xs = uniform_grid(spec.domain, grid);
    const auto ys = eval_grid(spec, data, xs);
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) m = std::max(m, std::abs(ys[i] - source_value(src, xs[i])));
    return m;
}

/// Error of one operator against its source in the given norm (p = inf: sup error).
inline double operator_error(const OperatorSpec& spec, const Source& src, const QuadratureRule& quad,
                             double p, std::size_t grid) {
    const NodeData data = node_data(src, spec, quad);
    return std::isinf(p) ? operator_sup_error(spec, data, src, grid)
                         : operator_lp_error(spec, data, src, p, grid);
}

struct ErrorTableRow {
    long n = 0;
    double linear = 0.0;
    double maxmin = 0.0;
    double maxprod = 0.0;
};

/// L^p errors of the three Kantorovich operators for each n.
inline std::vector<ErrorTableRow> error_table(const Kernel& kernel, const Source& src, const Domain& domain,
                                              const std::vector<long>& ns, double p,
                                              const QuadratureRule& quad, std::size_t grid) {
    std::vector<ErrorTableRow> rows;
    for (long n : ns) {
        ErrorTableRow row{n};
        for (Family fam : {Family::Linear, Family::MaxMin, Family::MaxProduct}) {
            const OperatorSpec spec{fam, Mode::Kantorovich, n, domain, kernel};
            const double e = operator_error(spec, src, quad, p, grid);
            (fam == Family::Linear ? row.linear : fam == Family::MaxMin ? row.maxmin : row.maxprod) = e;
        }
        rows.push_back(row);
    }
    return rows;
}

/// Builds an ErrorReport by calling `measure` for each n and fitting the slope.
template <class Measure>
ErrorReport rate_report(std::string summary, double p, const std::vector<long>& ns, Measure&& measure,
                        std::optional<double> theoretical) {
    ErrorReport r;
    r.operator_summary = std::move(summary);
    r.p = p;
    r.n_values = ns;
    for (long n : ns) r.errors.push_back(measure(n));
    r.theoretical_rate = theoretical;
    r.fit();
    return r;
}

inline std::string summarize(const OperatorSpec& spec) {
    return to_string(spec.family) + "/" + to_string(spec.mode) + " kernel=" + to_string(spec.kernel.sigmoid()) +
           (spec.kernel.sigmoid().variant() == SigmoidVariant::PowerTail
                ? ":" + csv::format_double(spec.kernel.sigmoid().gamma())
                : std::string{}) +
           " scale=" + csv::format_double(spec.kernel.scale()) +
           " alpha=" + csv::format_double(spec.kernel.alpha()) + " domain=[" +
           csv::format_double(spec.domain.a()) + "," + csv::format_double(spec.domain.b()) + "]";
}

/// The step test function sampled at `samples` uniform points of [0, 1] with
/// clipped Gaussian noise.
inline Signal noisy_step_signal(std::size_t samples, double sigma, std::uint64_t seed) {
    const auto f = step_test_function();
    return add_gaussian_noise(sample_function(f, f.domain(), samples), sigma, seed);
}

struct DenoiseConfig {
    Kernel kernel;
    long n = 2000;
    QuadratureRule quad = QuadratureRule::riemann(kDefaultRefinement);
    std::size_t grid = 2000;      // output rows
    std::size_t error_grid = 4000; // midpoint cells for L1 distances
};

struct DenoiseResult {
    long n = 0; // operator n actually used (samples/2 for the pairwise mean)
    std::vector<double> x;
    std::vector<double> noisy;
    std::vector<double> k_maxmin;
    std::vector<double> f_maxmin;
    std::vector<double> k_maxprod;
    std::optional<double> l1_k_maxmin;
    std::optional<double> l1_f_maxmin;
    std::optional<double> l1_k_maxprod;
};

/// Applies K^(m), F^(m) and K^(M) to a noisy signal. When `clean` is given the
/// L1 distance of each output to it is measured as well.
inline DenoiseResult denoise(const Signal& noisy, const std::optional<Source>& clean, const DenoiseConfig& cfg) {
    DenoiseResult r;
    r.n = cfg.quad.kind == QuadratureKind::PairwiseMean ? static_cast<long>(noisy.size() / 2) : cfg.n;
    const Domain& d = noisy.domain();
    const OperatorSpec kmm{Family::MaxMin, Mode::Kantorovich, r.n, d, cfg.kernel};
    const OperatorSpec fmm{Family::MaxMin, Mode::Sampling, r.n, d, cfg.kernel};
    const OperatorSpec kmp{Family::MaxProduct, Mode::Kantorovich, r.n, d, cfg.kernel};
    const Source src = noisy;
    const NodeData kdata = node_data(src, kmm, cfg.quad);
    const NodeData sdata = node_data(src, fmm, cfg.quad);

    r.x = uniform_grid(d, cfg.grid);
    for (double x : r.x) r.noisy.push_back(noisy.nearest(x));
    r.k_maxmin = eval_grid(kmm, kdata, r.x);
    r.f_maxmin = eval_grid(fmm, sdata, r.x);
    r.k_maxprod = eval_grid(kmp, kdata, r.x);
    if (clean) {
        r.l1_k_maxmin = operator_lp_error(kmm, kdata, *clean, 1.0, cfg.error_grid);
        r.l1_f_maxmin = operator_lp_error(fmm, sdata, *clean, 1.0, cfg.error_grid);
        r.l1_k_maxprod = operator_lp_error(kmp, kdata, *clean, 1.0, cfg.error_grid);
    }
    return r;
}

} // namespace kantomm

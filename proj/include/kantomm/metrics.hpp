#pragma once

/**
 * @file metrics.hpp
 * @brief Error norms, modulus of continuity, rate exponents and the computable
 *        constants of the quantitative convergence estimates.
 */

#include "csv.hpp"
#include "domain.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "operators.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace kantomm {

inline constexpr std::size_t kDefaultLpGrid = 100000;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (integral |d|^p)^(1/p) from values of d at the midpoints of equal cells;
/// p = infinity gives the maximum.
inline double lp_norm_midpoint(std::span<const double> diffs, double p, const Domain& d) {
    detail::require(p >= 1.0, "p must be at least 1");
    detail::require(!diffs.empty(), "need at least one cell");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : diffs) m = std::max(m, std::abs(v));
        return m;
    }
    double sum = 0.0;
    for (double v : diffs) sum += std::pow(std::abs(v), p);
    const double h = d.length() / static_cast<double>(diffs.size());
    return std::pow(sum * h, 1.0 / p);
}

/// L^p distance of g and h by the composite midpoint rule on `grid_points` cells.
template <class G, class H>
double lp_error(G&& g, H&& h, double p, const Domain& d, std::size_t grid_points = kDefaultLpGrid) {
    detail::require(grid_points >= 2, "grid_points must be at least 2");
    const auto xs = midpoint_grid(d, grid_points);
    std::vector<double> diff(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) diff[i] = g(xs[i]) - h(xs[i]);
    return lp_norm_midpoint(diff, p, d);
}

/// max |g - h| over `grid_points` uniform points including both endpoints.
template <class G, class H>
double sup_error(G&& g, H&& h, const Domain& d, std::size_t grid_points) {
    double m = 0.0;
    for (double x : uniform_grid(d, grid_points)) m = std::max(m, std::abs(g(x) - h(x)));
    return m;
}

/// omega(f, delta): the largest |f(x) - f(y)| over grid pairs with |x - y| <= delta.
/// Uses a sliding-window max/min over `grid_points` uniform points.
template <class F>
double modulus_of_continuity(F&& f, double delta, const Domain& d, std::size_t grid_points) {
    detail::require(delta > 0.0, "delta must be positive");
    const auto xs = uniform_grid(d, grid_points);
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = f(xs[i]);
    const double h = d.length() / static_cast<double>(grid_points - 1);
    const auto w = static_cast<std::size_t>(std::floor(delta / h * (1.0 + 1e-12)));

    std::deque<std::size_t> hi; // indices with decreasing values
    std::deque<std::size_t> lo; // indices with increasing values
    double best = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        while (!hi.empty() && v[hi.back()] <= v[j]) hi.pop_back();
        while (!lo.empty() && v[lo.back()] >= v[j]) lo.pop_back();
        hi.push_back(j);
        lo.push_back(j);
        while (hi.front() + w < j) hi.pop_front();
        while (lo.front() + w < j) lo.pop_front();
        best = std::max(best, v[hi.front()] - v[lo.front()]);
    }
    return best;
}

/// Exponent (1+alpha) beta / (1+alpha+beta) of the sup-norm rate for
/// Hoelder-beta functions; the error decays like n^-exponent.
inline double rate_exponent_holder(double alpha, double beta) {
    detail::require(alpha > 0.0, "alpha must be positive");
    detail::require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
    return (1.0 + alpha) * beta / (1.0 + alpha + beta);
}

/// omega(f, 1/n) + max(omega(f, delta_n), m / (phi(2) (n delta_n)^(1+alpha))).
/// An order bound on the sup-norm error of the Kantorovich max-min operator,
/// read with constant 1.
template <class F>
double sup_error_bound(F&& f, long n, double delta_n, const Kernel& kernel, double moment,
                      const Domain& d, std::size_t grid_points = 20001) {
    detail::require(n >= 1 && delta_n > 0.0 && moment >= 0.0, "invalid bound arguments");
    const double floor = checked_phi_floor(kernel);
    const double nn = static_cast<double>(n);
    const double w1 = modulus_of_continuity(f, 1.0 / nn, d, grid_points);
    const double w2 = modulus_of_continuity(f, delta_n, d, grid_points);
    const double tail = moment / (floor * std::pow(nn * delta_n, 1.0 + kernel.alpha()));
    return w1 + std::max(w2, tail);
}

struct KFunctionalConstants {
    double A = 0.0;
    double B = 0.0;
    double moment_term = 0.0; // multiplies n^-(1+alpha)/(2+alpha)
};

/// A = (2M/(alpha phi(2)) + 2)^(1/p) + (b-a)^(1/(p(1+alpha))),
/// B = (3/2)(b-a)^(1/p) / A, moment_term = m_(1+alpha) (b-a)^(1/p) / phi(2).
inline KFunctionalConstants kfunctional_constants(double p, const Domain& d, const Kernel& kernel,
                                                  double moment) {
    detail::require(p >= 1.0 && std::isfinite(p), "p must lie in [1, inf)");
    detail::require(moment >= 0.0, "moment must be non-negative");
    const double floor = checked_phi_floor(kernel);
    const double alpha = kernel.alpha();
    const double len = d.length();
    KFunctionalConstants c;
    c.A = std::pow(2.0 * kernel.decay_M() / (alpha * floor) + 2.0, 1.0 / p) +
          std::pow(len, 1.0 / (p * (1.0 + alpha)));
    c.B = 1.5 * std::pow(len, 1.0 / p) / c.A;
    c.moment_term = moment * std::pow(len, 1.0 / p) / floor;
    return c;
}

/// The exponent (1+alpha)/(2+alpha) of the L^p estimate.
inline double kfunctional_rate(double alpha) { return (1.0 + alpha) / (2.0 + alpha); }

/// A smooth comparison function g with a known (or bounded) ||g'||_inf.
struct SmoothCandidate {
    std::function<double(double)> value;
    double derivative_sup = 0.0;
    std::string label;
};

/// Upper estimate of the K-functional
///   inf_g ||f - g||_p^(alpha/(alpha+1)) + delta ||g'||_inf
/// over a finite candidate family. Returns the smallest candidate value and
/// writes the index of the minimizer to `argmin` when given.
template <class F>
double kfunctional_upper(F&& f, double delta, double p, double alpha, const Domain& d,
                         std::span<const SmoothCandidate> candidates, std::size_t grid_points = 20000,
                         std::size_t* argmin = nullptr) {
    detail::require(!candidates.empty(), "need at least one candidate");
    double best = kInfinity;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& g = candidates[i];
        const double dist = lp_error(f, g.value, p, d, grid_points);
        const double val = std::pow(dist, alpha / (alpha + 1.0)) + delta * g.derivative_sup;
        if (val < best) {
            best = val;
            if (argmin) *argmin = i;
        }
    }
    return best;
}

/// Smoothed copies of f: f extended by its end values, averaged twice with a box
/// of half-width w (a hat-kernel mollifier). Each candidate is represented by
/// its values on `resolution` cells and linear interpolation; the recorded
/// derivative bound is the largest slope of that interpolant.
template <class F>
std::vector<SmoothCandidate> mollified_candidates(F&& f, const Domain& d, std::span<const double> widths,
                                                  std::size_t resolution = 8192) {
    const double h = d.length() / static_cast<double>(resolution);
    std::vector<SmoothCandidate> out;
    for (double w : widths) {
        detail::require(w > 0.0, "mollifier width must be positive");
        const auto m = static_cast<long>(std::max(1.0, std::round(w / h)));
        const long N = static_cast<long>(resolution) + 1;
        auto at = [&](long i) { return f(d.a() + h * static_cast<double>(std::clamp(i, 0L, N - 1))); };
        // Two box passes on an extended grid.
        std::vector<double> base(static_cast<std::size_t>(N + 4 * m));
        for (long i = 0; i < N + 4 * m; ++i) base[static_cast<std::size_t>(i)] = at(i - 2 * m);
        auto box = [m](const std::vector<double>& src) {
            std::vector<double> dst(src.size(), 0.0);
            const long n = static_cast<long>(src.size());
            for (long i = m; i < n - m; ++i) {
                double s = 0.0;
                for (long j = -m; j <= m; ++j) s += src[static_cast<std::size_t>(i + j)];
                dst[static_cast<std::size_t>(i)] = s / static_cast<double>(2 * m + 1);
            }
            return dst;
        };
        const auto once = box(base);
        const auto twice = box(once);
        std::vector<double> g(static_cast<std::size_t>(N));
        for (long i = 0; i < N; ++i) g[static_cast<std::size_t>(i)] = std::clamp(twice[static_cast<std::size_t>(i + 2 * m)], 0.0, 1.0);
        double slope = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) slope = std::max(slope, std::abs(g[i] - g[i - 1]) / h);
        SmoothCandidate c;
        c.derivative_sup = slope;
        c.label = "mollified:" + csv::format_double(w);
        c.value = [g = std::move(g), a = d.a(), h, N](double x) {
            const double t = std::clamp((x - a) / h, 0.0, static_cast<double>(N - 1));
            const auto i = std::min(static_cast<long>(t), N - 2);
            const double frac = t - static_cast<double>(i);
            return g[static_cast<std::size_t>(i)] * (1.0 - frac) + g[static_cast<std::size_t>(i + 1)] * frac;
        };
        out.push_back(std::move(c));
    }
    return out;
}

/// Right side of the L^p estimate: A K(f, B n^-r) + moment_term n^-r, r = (1+alpha)/(2+alpha).
inline double lp_error_bound(const KFunctionalConstants& c, double kfunctional_value, long n, double alpha) {
    return c.A * kfunctional_value + c.moment_term * std::pow(static_cast<double>(n), -kfunctional_rate(alpha));
}

/// Least-squares slope of log(error) against log(n).
inline double fit_rate(std::span<const long> n_values, std::span<const double> errors) {
    detail::require(n_values.size() == errors.size(), "n and error vectors differ in length");
    detail::require(n_values.size() >= 3, "rate fit needs at least three points");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        detail::require(errors[i] > 0.0 && std::isfinite(errors[i]), "errors must be positive");
        detail::require(i == 0 || n_values[i] > n_values[i - 1], "n must increase strictly");
        detail::require(n_values[i] > 0, "n must be positive");
    }
    const double count = static_cast<double>(n_values.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        mx += std::log(static_cast<double>(n_values[i]));
        my += std::log(errors[i]);
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const double dx = std::log(static_cast<double>(n_values[i])) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

/// Errors of one operator over a sequence of n.
struct ErrorReport {
    std::string operator_summary;
    double p = 1.0; // infinity for the sup norm
    std::vector<long> n_values;
    std::vector<double> errors;
    std::optional<double> fitted_rate;
    std::optional<double> theoretical_rate;

    /// Fills fitted_rate when there are at least three positive errors.
    void fit() {
        const bool positive = std::all_of(errors.begin(), errors.end(), [](double e) { return e > 0.0; });
        if (n_values.size() >= 3 && positive) fitted_rate = fit_rate(n_values, errors);
    }
};

inline void write_report_csv(std::ostream& out, const ErrorReport& r) {
    out << "n,error\n";
    for (std::size_t i = 0; i < r.n_values.size(); ++i)
        out << r.n_values[i] << ',' << csv::format_double(r.errors[i]) << '\n';
}

inline nlohmann::json report_to_json(const ErrorReport& r) {
    nlohmann::json j;
    j["operator"] = r.operator_summary;
    j["p"] = std::isinf(r.p) ? nlohmann::json("inf") : nlohmann::json(r.p);
    j["n_values"] = r.n_values;
    j["errors"] = r.errors;
    j["fitted_rate"] = r.fitted_rate ? nlohmann::json(*r.fitted_rate) : nlohmann::json(nullptr);
    j["theoretical_rate"] =
        r.theoretical_rate ? nlohmann::json(*r.theoretical_rate) : nlohmann::json(nullptr);
    return j;
}

inline ErrorReport report_from_json(const nlohmann::json& j) {
    try {
        ErrorReport r;
        r.operator_summary = j.at("operator").get<std::string>();
        r.p = j.at("p").is_string() ? kInfinity : j.at("p").get<double>();
        r.n_values = j.at("n_values").get<std::vector<long>>();
        r.errors = j.at("errors").get<std::vector<double>>();
        if (!j.at("fitted_rate").is_null()) r.fitted_rate = j.at("fitted_rate").get<double>();
        if (j.contains("theoretical_rate") && !j.at("theoretical_rate").is_null())
            r.theoretical_rate = j.at("theoretical_rate").get<double>();
        detail::require(r.n_values.size() == r.errors.size(), "report vectors differ in length");
        return r;
    } catch (const nlohmann::json::exception& e) {
        detail::fail(ErrorKind::Parse, std::string("report json: ") + e.what());
    }
}

/// Reads the "n,error" CSV written by write_report_csv.
inline ErrorReport read_report_csv(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    ErrorReport r;
    for (double n : csv::numeric_column(t, csv::resolve_column(t, t.header.empty() ? "0" : "n")))
        r.n_values.push_back(static_cast<long>(n));
    r.errors = csv::numeric_column(t, csv::resolve_column(t, t.header.empty() ? "1" : "error"));
    return r;
}

} // namespace kantomm

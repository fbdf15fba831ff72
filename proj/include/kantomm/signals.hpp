#pragma once

/**
 * @file signals.hpp
 * @brief Test functions, sampled signals, noise injection and CSV ingestion.
 */

#include "csv.hpp"
#include "domain.hpp"
#include "error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace kantomm {

/// Step function on [a, b]. Piece 0 is [a, b_1]; piece i > 0 is (b_i, b_{i+1}].
class PiecewiseConstant {
public:
    PiecewiseConstant(Domain domain, std::vector<double> breakpoints, std::vector<double> values)
        : domain_(domain), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
        detail::require(values_.size() == breakpoints_.size() + 1,
                        "piecewise constant needs one more value than breakpoints");
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            const double b = breakpoints_[i];
            detail::require(b > domain_.a() && b < domain_.b(), "breakpoints must be interior");
            detail::require(i == 0 || b > breakpoints_[i - 1], "breakpoints must increase strictly");
        }
        for (double v : values_) detail::require(v >= 0.0 && v <= 1.0, "piece values must lie in [0, 1]");
    }

    const Domain& domain() const noexcept { return domain_; }
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double operator()(double x) const {
        const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
        return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
    }

    /// Exact integral over [lo, hi] (clipped to the domain), from piece overlaps.
    double integral(double lo, double hi) const {
        lo = std::max(lo, domain_.a());
        hi = std::min(hi, domain_.b());
        double sum = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double left = i == 0 ? domain_.a() : breakpoints_[i - 1];
            const double right = i == breakpoints_.size() ? domain_.b() : breakpoints_[i];
            const double overlap = std::min(hi, right) - std::max(lo, left);
            if (overlap > 0.0) sum += overlap * values_[i];
        }
        return sum;
    }

    bool operator==(const PiecewiseConstant&) const = default;

private:
    Domain domain_;
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// The discontinuous four-level test function on [0, 1].
inline PiecewiseConstant step_test_function() {
    return PiecewiseConstant(Domain(0.0, 1.0), {0.2, 0.5, 0.8}, {0.2, 0.9, 0.3, 0.6});
}

inline void to_json(nlohmann::json& j, const PiecewiseConstant& f) {
    j = nlohmann::json{{"domain", {f.domain().a(), f.domain().b()}},
                       {"breakpoints", f.breakpoints()},
                       {"values", f.values()}};
}

inline PiecewiseConstant piecewise_from_json(const nlohmann::json& j) {
    try {
        const auto d = j.at("domain").get<std::vector<double>>();
        detail::require(d.size() == 2, "domain must have two entries");
        return PiecewiseConstant(Domain(d[0], d[1]), j.at("breakpoints").get<std::vector<double>>(),
                                 j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        detail::fail(ErrorKind::Parse, std::string("piecewise json: ") + e.what());
    }
}

/// A function on [a, b] together with an antiderivative, so cell averages are exact.
struct AnalyticFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> antiderivative;

    double operator()(double x) const { return value(x); }
};

inline AnalyticFunction identity_function() {
    return {"identity", [](double x) { return x; }, [](double x) { return 0.5 * x * x; }};
}

inline AnalyticFunction constant_function(double c) {
    detail::require(c >= 0.0 && c <= 1.0, "constant must lie in [0, 1]");
    return {"constant", [c](double) { return c; }, [c](double x) { return c * x; }};
}

/// x^beta, Hoelder continuous of order beta on [0, 1].
inline AnalyticFunction holder_power_function(double beta) {
    detail::require(beta > 0.0 && beta <= 1.0, "Hoelder order must lie in (0, 1]");
    return {"lipschitz", [beta](double x) { return std::pow(std::max(x, 0.0), beta); },
            [beta](double x) { return std::pow(std::max(x, 0.0), beta + 1.0) / (beta + 1.0); }};
}

inline AnalyticFunction as_analytic(const PiecewiseConstant& f) {
    return {"step", [f](double x) { return f(x); },
            [f](double x) { return f.integral(f.domain().a(), x); }};
}

/// Affine map applied by normalize_to_unit: normalized = (raw - offset) / gain.
struct Normalization {
    double offset = 0.0;
    double gain = 1.0;
    bool operator==(const Normalization&) const = default;
};

/// Uniformly sampled signal on [a, b], endpoints included.
class Signal {
public:
    Signal(Domain domain, std::vector<double> samples, std::optional<Normalization> norm = std::nullopt)
        : domain_(domain), samples_(std::move(samples)), normalization_(norm) {
        if (samples_.size() < 2)
            detail::fail(ErrorKind::TooFewSamples, "a signal needs at least two samples");
    }

    const Domain& domain() const noexcept { return domain_; }
    const std::vector<double>& samples() const noexcept { return samples_; }
    const std::optional<Normalization>& normalization() const noexcept { return normalization_; }
    std::size_t size() const noexcept { return samples_.size(); }

    double spacing() const noexcept {
        return domain_.length() / static_cast<double>(samples_.size() - 1);
    }
    double position(std::size_t i) const noexcept {
        return i + 1 == samples_.size() ? domain_.b()
                                        : domain_.a() + spacing() * static_cast<double>(i);
    }

    /// Index of the sample closest to x (clamped to the grid).
    std::size_t nearest_index(double x) const noexcept {
        const double t = std::round((x - domain_.a()) / spacing());
        const double last = static_cast<double>(samples_.size() - 1);
        return static_cast<std::size_t>(std::clamp(t, 0.0, last));
    }
    double nearest(double x) const noexcept { return samples_[nearest_index(x)]; }

    bool operator==(const Signal&) const = default;

private:
    Domain domain_;
    std::vector<double> samples_;
    std::optional<Normalization> normalization_;
};

template <class F>
Signal sample_function(F&& f, const Domain& d, std::size_t count) {
    const auto xs = uniform_grid(d, count);
    std::vector<double> v;
    v.reserve(count);
    for (double x : xs) v.push_back(f(x));
    return Signal(d, std::move(v));
}

/// `count` independent N(0, sigma^2) draws.
///
/// Generator: std::mt19937_64 seeded with `seed` (its output sequence is fixed by
/// the C++ standard), uniforms from the top 53 bits, Gaussians by the
/// Box-Muller transform using both the cosine and sine branch.
inline std::vector<double> gaussian_noise(std::size_t count, double sigma, std::uint64_t seed) {
    detail::require(sigma >= 0.0, "noise sigma must be non-negative");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<double> out;
    out.reserve(count + 1);
    while (out.size() < count) {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        out.push_back(sigma * r * std::cos(theta));
        out.push_back(sigma * r * std::sin(theta));
    }
    out.resize(count);
    return out;
}

/// Adds Gaussian noise sample-wise and clips the result to [0, 1].
inline Signal add_gaussian_noise(const Signal& s, double sigma, std::uint64_t seed) {
    if (sigma == 0.0) return s;
    const auto noise = gaussian_noise(s.size(), sigma, seed);
    std::vector<double> v(s.samples());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i] + noise[i], 0.0, 1.0);
    return Signal(s.domain(), std::move(v), s.normalization());
}

/// Affine map onto [0, 1]; the map is recorded so denormalize can undo it.
inline Signal normalize_to_unit(const Signal& s) {
    const auto [lo, hi] = std::minmax_element(s.samples().begin(), s.samples().end());
    if (!(*hi > *lo)) detail::fail(ErrorKind::DegenerateRange, "signal is constant; cannot normalize");
    const Normalization n{*lo, *hi - *lo};
    std::vector<double> v(s.samples());
    for (double& x : v) x = std::clamp((x - n.offset) / n.gain, 0.0, 1.0);
    return Signal(s.domain(), std::move(v), n);
}

inline std::vector<double> denormalize(std::span<const double> values, const Normalization& n) {
    std::vector<double> out(values.begin(), values.end());
    for (double& x : out) x = x * n.gain + n.offset;
    return out;
}

inline Signal denormalize(const Signal& s) {
    if (!s.normalization()) return s;
    return Signal(s.domain(), denormalize(s.samples(), *s.normalization()));
}

/// Reads one column of a CSV file as a uniformly sampled signal on `domain`.
/// `column` is a header name or a 0-based index.
inline Signal load_signal_csv(const std::string& path, const std::string& column, const Domain& domain) {
    const csv::Table t = csv::read_table(path);
    auto values = csv::numeric_column(t, csv::resolve_column(t, column));
    if (values.size() < 2)
        detail::fail(ErrorKind::TooFewSamples,
                     "'" + path + "' has " + std::to_string(values.size()) + " samples, need 2");
    return Signal(domain, std::move(values));
}

/// Header "x,value", one sample per row.
inline void write_signal_csv(std::ostream& out, const Signal& s) {
    out << "x,value\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << csv::format_double(s.position(i)) << ',' << csv::format_double(s.samples()[i]) << '\n';
}

/// ECG-like trace: each beat is a sum of Gaussian bumps (P, Q, R, S, T waves)
/// on a slowly wandering baseline. Deterministic; used as the bundled fixture.
inline Signal synthetic_ecg(std::size_t samples, int beats) {
    detail::require(samples >= 2 && beats >= 1, "need at least two samples and one beat");
    struct Wave {
        double center, width, height;
    };
    // Positions as fractions of one beat period.
    static constexpr Wave waves[] = {
        {0.18, 0.025, 0.12}, // P
        {0.36, 0.008, -0.10}, // Q
        {0.40, 0.010, 1.00}, // R
        {0.44, 0.010, -0.22}, // S
        {0.68, 0.045, 0.28}, // T
    };
    const Domain d(0.0, 1.0);
    return sample_function(
        [&](double t) {
            const double phase = t * beats;
            const double local = phase - std::floor(phase);
            double v = 0.05 * std::sin(2.0 * std::numbers::pi * 0.7 * t);
            for (const Wave& w : waves) {
                for (double shift : {-1.0, 0.0, 1.0}) {
                    const double z = (local - w.center - shift) / w.width;
                    v += w.height * std::exp(-0.5 * z * z);
                }
            }
            return v;
        },
        d, samples);
}

} // namespace kantomm

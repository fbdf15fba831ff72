#pragma once

/**
 * @file kernel.hpp
 * @brief The centered bell kernel phi(x) = (sigma(c x + 1) - sigma(c x - 1)) / 2.
 *
 * Besides evaluation this header carries the quantities the convergence
 * theory needs: the denominator floor phi(2), the decay constants (alpha, M, L)
 * with phi(x) <= M |x|^-(1+alpha) for |x| > L, the partition-of-unity defect and
 * the generalized absolute moment m_beta.
 */

#include "error.hpp"
#include "sigmoid.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kantomm {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    bool operator==(const Interval&) const = default;
};

struct DecayConstants {
    double M = 0.0;
    double L = 0.0;
    bool operator==(const DecayConstants&) const = default;
};

/// Decay scan parameters. The scan starts at L = kDecayScanStart / scale.
inline constexpr double kDecayScanStart = 5.0;
inline constexpr double kDecayScanEnd = 1e6;
inline constexpr double kDecaySafety = 1.1;
inline constexpr double kDefaultAlpha = 1.0;

class Kernel;
double eval_kernel(const Kernel& k, double x);
DecayConstants fit_decay_constants(const Kernel& k, double alpha);

class Kernel {
public:
    /// Builds a kernel and fits its decay constants. alpha defaults to 1, or to
    /// gamma for the power-tail sigmoid.
    static Kernel make(const Sigmoid& sigmoid, double scale = 1.0,
                       std::optional<double> alpha = std::nullopt) {
        detail::require(std::isfinite(scale) && scale > 0.0, "kernel scale must be positive");
        const double a = alpha.value_or(sigmoid.variant() == SigmoidVariant::PowerTail
                                            ? sigmoid.gamma()
                                            : kDefaultAlpha);
        detail::require(std::isfinite(a) && a > 0.0, "decay exponent alpha must be positive");
        Kernel k(sigmoid, scale, a, DecayConstants{});
        k.decay_ = fit_decay_constants(k, a);
        return k;
    }

    /// Rebuilds a kernel from stored constants without refitting.
    static Kernel from_parts(const Sigmoid& sigmoid, double scale, double alpha, DecayConstants decay) {
        detail::require(scale > 0.0 && alpha > 0.0, "kernel scale and alpha must be positive");
        return Kernel(sigmoid, scale, alpha, decay);
    }

    const Sigmoid& sigmoid() const noexcept { return sigmoid_; }
    double scale() const noexcept { return scale_; }
    double alpha() const noexcept { return alpha_; }
    double decay_M() const noexcept { return decay_.M; }
    double decay_L() const noexcept { return decay_.L; }

    /// Closed support [-3/(2c), 3/(2c)] for Ramp and ThreeStep; empty otherwise.
    std::optional<Interval> support() const {
        if (!sigmoid_.has_compact_kernel()) return std::nullopt;
        const double r = 1.5 / scale_;
        return Interval{-r, r};
    }

    bool operator==(const Kernel&) const = default;

private:
    Kernel(const Sigmoid& s, double scale, double alpha, DecayConstants decay)
        : sigmoid_(s), scale_(scale), alpha_(alpha), decay_(decay) {}

    Sigmoid sigmoid_;
    double scale_;
    double alpha_;
    DecayConstants decay_;
};

inline double eval_kernel(const Kernel& k, double x) {
    if (const auto supp = k.support(); supp && !supp->contains(x)) return 0.0;
    // Evenness: phi(x) = phi(-|x|). In the left tail both sigmoid values are
    // small, so the difference keeps full relative precision.
    const double t = -std::abs(k.scale() * x);
    const Sigmoid& s = k.sigmoid();
    return 0.5 * (eval_sigmoid(s, t + 1.0) - eval_sigmoid(s, t - 1.0));
}

/// phi(2), the lower bound for the operator denominator. Zero for compact kernels
/// whose support ends before 2.
inline double phi_floor(const Kernel& k) { return eval_kernel(k, 2.0); }

/// phi(2), or a DegenerateKernel error when it is not positive.
inline double checked_phi_floor(const Kernel& k) {
    const double v = phi_floor(k);
    if (!(v > 0.0))
        detail::fail(ErrorKind::DegenerateKernel,
                     "phi(2) = " + std::to_string(v) + " is not positive for kernel '" +
                         to_string(k.sigmoid()) + "'");
    return v;
}

/// |sum_{j=-window..window} phi(x - j) - 1|. Only meaningful at unit scale.
inline double partition_of_unity_defect(const Kernel& k, double x, long window) {
    detail::require(k.scale() == 1.0, "partition of unity holds only for unit-scale kernels");
    detail::require(window >= 1, "window must be at least 1");
    // Sum from the tails inward so the small terms accumulate first.
    double sum = 0.0;
    for (long j = window; j >= 1; --j) sum += eval_kernel(k, x - j) + eval_kernel(k, x + j);
    sum += eval_kernel(k, x);
    return std::abs(sum - 1.0);
}

namespace detail {

// Log-spaced points in [lo, hi], per_decade points per factor of ten.
template <class F>
void for_each_log_point(double lo, double hi, int per_decade, F&& f) {
    const double step = std::log(10.0) / per_decade;
    const int count = static_cast<int>(std::ceil(std::log(hi / lo) / step));
    for (int i = 0; i <= count; ++i) f(std::min(hi, lo * std::exp(i * step)));
}

inline double decay_scan_sup(const Kernel& k, double alpha, double lo, double hi) {
    double sup = 0.0;
    for_each_log_point(lo, hi, 400, [&](double x) {
        sup = std::max(sup, eval_kernel(k, x) * std::pow(x, 1.0 + alpha));
    });
    return sup;
}

} // namespace detail

/// L = 5 / scale; M = 1.1 * sup of phi(x) |x|^(1+alpha) on a log grid over [L, 1e6].
///
/// The sup is also taken up to 1e4 and 1e5. If the increment over the last
/// decade is not smaller than the one before, the product keeps growing and the
/// fit fails with DecayFitFailed (alpha exceeds the kernel's decay rate). A
/// shrinking increment is extrapolated geometrically and M covers that limit,
/// which matters for algebraic tails with alpha equal to their exact decay.
inline DecayConstants fit_decay_constants(const Kernel& k, double alpha) {
    detail::require(alpha > 0.0, "alpha must be positive");
    const double L = kDecayScanStart / k.scale();
    const double hi = std::max(kDecayScanEnd, 100.0 * L);
    const double g4 = detail::decay_scan_sup(k, alpha, L, hi / 100.0);
    const double g5 = detail::decay_scan_sup(k, alpha, L, hi / 10.0);
    const double g6 = detail::decay_scan_sup(k, alpha, L, hi);
    double limit = g6;
    const double d1 = g5 - g4;
    const double d2 = g6 - g5;
    if (d2 > 1e-12 * g6) {
        if (!(d1 > 0.0) || d2 >= d1)
            detail::fail(ErrorKind::DecayFitFailed,
                         "phi(x)|x|^(1+alpha) keeps growing for alpha = " + std::to_string(alpha) +
                             "; the kernel decays more slowly");
        const double r = d2 / d1;
        limit = g6 + d2 * r / (1.0 - r);
    }
    // Compact kernels vanish beyond L; any positive M satisfies the bound.
    const double M = limit > 0.0 ? kDecaySafety * limit : std::numeric_limits<double>::min();
    return DecayConstants{M, L};
}

/// The log-spaced points on which fit_decay_constants guarantees its inequality.
inline std::vector<double> decay_scan_grid(const Kernel& k) {
    std::vector<double> xs;
    const double L = kDecayScanStart / k.scale();
    detail::for_each_log_point(L, std::max(kDecayScanEnd, 100.0 * L), 400,
                               [&](double x) { xs.push_back(x); });
    return xs;
}

/// Numerical m_beta(phi) = sup_x max_k phi(x - k) |x - k|^beta.
///
/// The supremand is 1-periodic in x, so x runs over `resolution` points of [0, 1)
/// and k over a window covering the kernel bulk. Beyond the window the tail is
/// scanned on a log grid up to 1e8, which matters only for algebraic tails
/// with beta = 1 + alpha where the supremum is approached at infinity.
inline double absolute_moment(const Kernel& k, double beta, long resolution) {
    detail::require(beta > 0.0 && beta <= 1.0 + k.alpha(),
                    "beta must lie in (0, 1 + alpha]");
    detail::require(resolution >= 1, "resolution must be positive");
    const long window = static_cast<long>(std::ceil(k.decay_L())) + 2;
    double sup = 0.0;
    for (long i = 0; i < resolution; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(resolution);
        for (long j = -window; j <= window; ++j) {
            const double u = x - static_cast<double>(j);
            sup = std::max(sup, eval_kernel(k, u) * std::pow(std::abs(u), beta));
        }
    }
    if (!k.support()) {
        detail::for_each_log_point(static_cast<double>(window), 1e8, 200, [&](double u) {
            sup = std::max(sup, eval_kernel(k, u) * std::pow(u, beta));
        });
    }
    return sup;
}

// JSON catalogue entry: {variant, gamma?, scale, alpha, decay_M, decay_L}.

inline void to_json(nlohmann::json& j, const Kernel& k) {
    j = nlohmann::json::object();
    j["variant"] = to_string(k.sigmoid());
    if (k.sigmoid().variant() == SigmoidVariant::PowerTail) j["gamma"] = k.sigmoid().gamma();
    j["scale"] = k.scale();
    j["alpha"] = k.alpha();
    j["decay_M"] = k.decay_M();
    j["decay_L"] = k.decay_L();
}

inline Kernel kernel_from_json(const nlohmann::json& j) {
    try {
        const std::string variant = j.at("variant").get<std::string>();
        const Sigmoid s = variant == "power" ? Sigmoid::power_tail(j.at("gamma").get<double>())
                                             : parse_sigmoid(variant);
        return Kernel::from_parts(s, j.at("scale").get<double>(), j.at("alpha").get<double>(),
                                  DecayConstants{j.at("decay_M").get<double>(),
                                                 j.at("decay_L").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        detail::fail(ErrorKind::Parse, std::string("kernel json: ") + e.what());
    }
}

} // namespace kantomm

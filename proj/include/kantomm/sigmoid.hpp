#pragma once

/**
 * @file sigmoid.hpp
 * @brief The five sigmoidal activation functions used to build kernels.
 *
 * Each function is nondecreasing with limits 0 at -inf and 1 at +inf, and
 * sigma(x) - 1/2 is odd. The last property lets the kernel be evaluated in
 * its left tail only, which avoids cancellation for large |x|.
 */

#include "error.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace kantomm {

enum class SigmoidVariant { Logistic, TanH, Ramp, ThreeStep, PowerTail };

class Sigmoid {
public:
    static Sigmoid logistic() { return Sigmoid(SigmoidVariant::Logistic, 1.0); }
    static Sigmoid tanh() { return Sigmoid(SigmoidVariant::TanH, 1.0); }
    static Sigmoid ramp() { return Sigmoid(SigmoidVariant::Ramp, 1.0); }
    static Sigmoid three_step() { return Sigmoid(SigmoidVariant::ThreeStep, 1.0); }

    /// Algebraic tails |x|^-gamma; gamma must lie in (0, 1].
    static Sigmoid power_tail(double gamma) {
        detail::require(gamma > 0.0 && gamma <= 1.0, "power-tail gamma must lie in (0, 1]");
        return Sigmoid(SigmoidVariant::PowerTail, gamma);
    }

    SigmoidVariant variant() const noexcept { return variant_; }
    double gamma() const noexcept { return gamma_; }

    /// Ramp and ThreeStep have kernels with compact support.
    bool has_compact_kernel() const noexcept {
        return variant_ == SigmoidVariant::Ramp || variant_ == SigmoidVariant::ThreeStep;
    }

    bool operator==(const Sigmoid&) const = default;

private:
    Sigmoid(SigmoidVariant v, double gamma) : variant_(v), gamma_(gamma) {}

    SigmoidVariant variant_;
    double gamma_;
};

namespace detail {

// 1 / (1 + e^-t) without overflow in either tail.
inline double stable_logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

} // namespace detail

inline double eval_sigmoid(const Sigmoid& s, double x) {
    switch (s.variant()) {
    case SigmoidVariant::Logistic:
        return detail::stable_logistic(x);
    case SigmoidVariant::TanH:
        // (tanh x + 1) / 2 == 1 / (1 + e^-2x); the second form keeps the left tail accurate.
        return detail::stable_logistic(2.0 * x);
    case SigmoidVariant::Ramp:
        if (x < -0.5) return 0.0;
        if (x > 0.5) return 1.0;
        return x + 0.5;
    case SigmoidVariant::ThreeStep:
        if (x < -0.5) return 0.0;
        if (x > 0.5) return 1.0;
        return 0.5;
    case SigmoidVariant::PowerTail: {
        const double g = s.gamma();
        const double knee = std::pow(2.0, 1.0 / g);
        if (x < -knee) return 1.0 / (std::pow(-x, g) + 2.0);
        if (x > knee) {
            const double p = std::pow(x, g);
            return (p + 1.0) / (p + 2.0);
        }
        return std::pow(2.0, -(1.0 / g) - 2.0) * x + 0.5;
    }
    }
    return 0.0;
}

inline std::string to_string(const Sigmoid& s) {
    switch (s.variant()) {
    case SigmoidVariant::Logistic: return "logistic";
    case SigmoidVariant::TanH: return "tanh";
    case SigmoidVariant::Ramp: return "ramp";
    case SigmoidVariant::ThreeStep: return "three";
    case SigmoidVariant::PowerTail: return "power";
    }
    return "unknown";
}

/// Parses "logistic", "tanh", "ramp", "three" or "power:<gamma>".
inline Sigmoid parse_sigmoid(std::string_view text) {
    if (text == "logistic") return Sigmoid::logistic();
    if (text == "tanh") return Sigmoid::tanh();
    if (text == "ramp") return Sigmoid::ramp();
    if (text == "three") return Sigmoid::three_step();
    if (text.starts_with("power:")) {
        const std::string tail(text.substr(6));
        std::size_t used = 0;
        double gamma = 0.0;
        try {
            gamma = std::stod(tail, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tail.size())
            detail::fail(ErrorKind::InvalidArgument, "bad power-tail gamma '" + tail + "'");
        return Sigmoid::power_tail(gamma);
    }
    detail::fail(ErrorKind::InvalidArgument, "unknown sigmoid '" + std::string(text) + "'");
}

} // namespace kantomm

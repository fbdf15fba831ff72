#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kantomm {

enum class ErrorKind {
    InvalidArgument,
    EmptyRange,
    ZeroDenominator,
    DegenerateKernel,
    DecayFitFailed,
    SignalTooCoarse,
    DegenerateRange,
    Io,
    Parse,
    TooFewSamples,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::DecayFitFailed: return "DecayFitFailed";
    case ErrorKind::SignalTooCoarse: return "SignalTooCoarse";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can separate usage errors from numeric ones.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures caused by the numbers themselves rather than by bad input.
    bool is_numeric() const noexcept {
        return kind_ == ErrorKind::ZeroDenominator || kind_ == ErrorKind::DegenerateKernel ||
               kind_ == ErrorKind::DecayFitFailed;
    }

protected:
    struct Verbatim {};
    Error(ErrorKind kind, const std::string& message, Verbatim)
        : std::runtime_error(message), kind_(kind) {}

private:
    ErrorKind kind_;
};

/// Raised by grid evaluation; remembers which grid point failed.
class GridError : public Error {
public:
    GridError(const Error& cause, std::size_t index, double x)
        : Error(cause.kind(),
                std::string(cause.what()) + " (grid index " + std::to_string(index) +
                    ", x = " + std::to_string(x) + ")",
                Verbatim{}),
          index_(index), x_(x) {}

    std::size_t index() const noexcept { return index_; }
    double x() const noexcept { return x_; }

private:
    std::size_t index_;
    double x_;
};

namespace detail {
[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}
} // namespace detail

} // namespace kantomm

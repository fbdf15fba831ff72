#pragma once

/**
 * @file operators.hpp
 * @brief Sampling and Kantorovich neural-network operators (linear, max-product, max-min).
 *
 * All six operators share one evaluation core. With w_k = phi(n x - k) over the
 * node range and D = max_k w_k:
 *
 *   Linear      sum_k v_k w_k / sum_k w_k
 *   MaxProduct  max_k v_k (w_k / D)
 *   MaxMin      max_k min(v_k, w_k / D)
 *
 * The node values v_k are f(k/n) in sampling mode and the cell averages
 * n * integral_{k/n}^{(k+1)/n} f in Kantorovich mode. Sampling nodes run over
 * ceil(na)..floor(nb); Kantorovich nodes stop one earlier.
 */

#include "csv.hpp"
#include "domain.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace kantomm {

enum class Family { Linear, MaxProduct, MaxMin };
enum class Mode { Sampling, Kantorovich };

inline std::string to_string(Family f) {
    switch (f) {
    case Family::Linear: return "linear";
    case Family::MaxProduct: return "maxprod";
    case Family::MaxMin: return "maxmin";
    }
    return "unknown";
}

inline std::string to_string(Mode m) {
    return m == Mode::Sampling ? "sampling" : "kantorovich";
}

inline Family parse_family(const std::string& s) {
    if (s == "linear") return Family::Linear;
    if (s == "maxprod") return Family::MaxProduct;
    if (s == "maxmin") return Family::MaxMin;
    detail::fail(ErrorKind::InvalidArgument, "unknown operator family '" + s + "'");
}

inline Mode parse_mode(const std::string& s) {
    if (s == "sampling") return Mode::Sampling;
    if (s == "kantorovich") return Mode::Kantorovich;
    detail::fail(ErrorKind::InvalidArgument, "unknown operator mode '" + s + "'");
}

struct OperatorSpec {
    Family family;
    Mode mode;
    long n;
    Domain domain;
    Kernel kernel;
};

struct NodeRange {
    long lo;
    long hi;
    std::size_t size() const noexcept { return static_cast<std::size_t>(hi - lo + 1); }
    bool operator==(const NodeRange&) const = default;
};

/// Node values v_k for k = k_lo..k_hi, each in [0, 1].
class NodeData {
public:
    NodeData(long k_lo, std::vector<double> values) : k_lo_(k_lo), values_(std::move(values)) {
        detail::require(!values_.empty(), "node data must not be empty");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double v = values_[i];
            detail::require(v >= 0.0 && v <= 1.0, "node value " + std::to_string(v) + " at k = " +
                                                      std::to_string(k_lo_ + static_cast<long>(i)) +
                                                      " outside [0, 1]");
        }
    }

    long k_lo() const noexcept { return k_lo_; }
    long k_hi() const noexcept { return k_lo_ + static_cast<long>(values_.size()) - 1; }
    NodeRange range() const noexcept { return {k_lo(), k_hi()}; }
    std::span<const double> values() const& noexcept { return values_; }
    std::vector<double> values() && noexcept { return std::move(values_); }
    double value(long k) const { return values_.at(static_cast<std::size_t>(k - k_lo_)); }

    bool operator==(const NodeData&) const = default;

private:
    long k_lo_;
    std::vector<double> values_;
};

namespace detail {

// n*a rounded to 12 decimals, so 2.9999999999999996 floors to 3.
inline double snap(double v) { return std::round(v * 1e12) / 1e12; }

} // namespace detail

inline NodeRange node_range(Mode mode, long n, const Domain& d) {
    detail::require(n >= 1, "n must be a positive integer");
    const long lo = static_cast<long>(std::ceil(detail::snap(static_cast<double>(n) * d.a())));
    long hi = static_cast<long>(std::floor(detail::snap(static_cast<double>(n) * d.b())));
    if (mode == Mode::Kantorovich) --hi;
    if (lo > hi)
        detail::fail(ErrorKind::EmptyRange,
                     "no nodes for n = " + std::to_string(n) + " on [" + std::to_string(d.a()) +
                         ", " + std::to_string(d.b()) + "] in " + to_string(mode) + " mode");
    return {lo, hi};
}

inline NodeRange node_range(const OperatorSpec& spec) {
    return node_range(spec.mode, spec.n, spec.domain);
}

/// Sampling-mode node data v_k = f(k / n).
template <class F>
NodeData sample_nodes(const OperatorSpec& spec, F&& f) {
    const NodeRange r = node_range(spec);
    std::vector<double> v;
    v.reserve(r.size());
    for (long k = r.lo; k <= r.hi; ++k)
        v.push_back(f(static_cast<double>(k) / static_cast<double>(spec.n)));
    return NodeData(r.lo, std::move(v));
}

namespace detail {

inline void check_inputs(const OperatorSpec& spec, const NodeData& data, double x) {
    if (!spec.domain.contains(x))
        fail(ErrorKind::InvalidArgument, "x = " + std::to_string(x) + " outside the domain");
    if (data.range() != node_range(spec))
        fail(ErrorKind::InvalidArgument, "node data does not match the operator's node range");
}

[[noreturn]] inline void zero_denominator(double x) {
    fail(ErrorKind::ZeroDenominator,
         "all kernel weights vanish at x = " + std::to_string(x) + "; n is too small for this kernel");
}

} // namespace detail

/// Evaluates the operator at x in [a, b].
inline double eval_operator(const OperatorSpec& spec, const NodeData& data, double x) {
    detail::check_inputs(spec, data, x);
    const double nx = static_cast<double>(spec.n) * x;
    long lo = data.k_lo();
    long hi = data.k_hi();
    if (const auto supp = spec.kernel.support()) {
        // Weights vanish unless nx - k lies in the support; widen by one node for rounding.
        lo = std::max(lo, static_cast<long>(std::floor(nx - supp->hi)) - 1);
        hi = std::min(hi, static_cast<long>(std::ceil(nx - supp->lo)) + 1);
        if (lo > hi) detail::zero_denominator(x);
    }

    thread_local std::vector<double> weights;
    weights.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long k = lo; k <= hi; ++k)
        weights[static_cast<std::size_t>(k - lo)] =
            eval_kernel(spec.kernel, nx - static_cast<double>(k));
    const auto values = data.values().subspan(static_cast<std::size_t>(lo - data.k_lo()),
                                              weights.size());

    if (spec.family == Family::Linear) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            num += values[i] * weights[i];
            den += weights[i];
        }
        if (!(den > 0.0)) detail::zero_denominator(x);
        return num / den;
    }

    const double D = lattice::sup(std::span<const double>(weights));
    if (!(D > 0.0)) detail::zero_denominator(x);
    double out = 0.0;
    if (spec.family == Family::MaxMin) {
        for (std::size_t i = 0; i < weights.size(); ++i)
            out = std::max(out, lattice::meet(values[i], weights[i] / D));
    } else {
        for (std::size_t i = 0; i < weights.size(); ++i)
            out = std::max(out, values[i] * (weights[i] / D));
    }
    return out;
}

/// Pointwise evaluation over a grid. Large grids are split across threads;
/// the result is identical to the sequential loop. On failure the error of the
/// lowest failing grid index is rethrown as GridError.
inline std::vector<double> eval_grid(const OperatorSpec& spec, const NodeData& data,
                                     std::span<const double> grid, unsigned threads = 0) {
    std::vector<double> out(grid.size());
    if (grid.empty()) return out;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t min_chunk = 2048;
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, (grid.size() + min_chunk - 1) / min_chunk));

    struct Failure {
        std::size_t index = 0;
        std::exception_ptr error;
    };
    std::vector<Failure> failures(threads);
    auto work = [&](unsigned t) {
        const std::size_t begin = grid.size() * t / threads;
        const std::size_t end = grid.size() * (t + 1) / threads;
        for (std::size_t i = begin; i < end; ++i) {
            try {
                out[i] = eval_operator(spec, data, grid[i]);
            } catch (...) {
                failures[t] = {i, std::current_exception()};
                return;
            }
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& f : failures) {
        if (!f.error) continue;
        try {
            std::rethrow_exception(f.error);
        } catch (const Error& e) {
            throw GridError(e, f.index, grid[f.index]);
        }
    }
    return out;
}

/// Literal transcription of the operator formulas: every node, every weight
/// taken straight from the sigmoid, no windowing. Test oracle for eval_operator.
inline double brute_force_eval(const OperatorSpec& spec, const NodeData& data, double x) {
    detail::check_inputs(spec, data, x);
    const Sigmoid& s = spec.kernel.sigmoid();
    const double c = spec.kernel.scale();
    auto phi = [&](double u) {
        return 0.5 * (eval_sigmoid(s, c * u + 1.0) - eval_sigmoid(s, c * u - 1.0));
    };
    const double nx = static_cast<double>(spec.n) * x;

    double den_max = 0.0;
    double den_sum = 0.0;
    for (long d = data.k_lo(); d <= data.k_hi(); ++d) {
        den_max = std::max(den_max, phi(nx - static_cast<double>(d)));
        den_sum += phi(nx - static_cast<double>(d));
    }
    const double den = spec.family == Family::Linear ? den_sum : den_max;
    if (!(den > 0.0)) detail::zero_denominator(x);

    double acc = 0.0;
    for (long k = data.k_lo(); k <= data.k_hi(); ++k) {
        const double v = data.value(k);
        const double r = phi(nx - static_cast<double>(k)) / den;
        switch (spec.family) {
        case Family::Linear: acc += v * r; break;
        case Family::MaxProduct: acc = std::max(acc, v * r); break;
        case Family::MaxMin: acc = std::max(acc, std::min(v, r)); break;
        }
    }
    return acc;
}

// NodeData CSV: header "k,value", one node per row.

inline void write_node_csv(std::ostream& out, const NodeData& data) {
    out << "k,value\n";
    for (long k = data.k_lo(); k <= data.k_hi(); ++k)
        out << k << ',' << csv::format_double(data.value(k)) << '\n';
}

inline NodeData read_node_csv(const std::string& path) {
    const csv::Table t = csv::read_table(path);
    if (t.rows.empty()) detail::fail(ErrorKind::TooFewSamples, "no node rows in '" + path + "'");
    const auto ks = csv::numeric_column(t, csv::resolve_column(t, t.header.empty() ? "0" : "k"));
    const auto vs = csv::numeric_column(t, csv::resolve_column(t, t.header.empty() ? "1" : "value"));
    for (std::size_t i = 0; i < ks.size(); ++i)
        if (ks[i] != ks[0] + static_cast<double>(i))
            detail::fail(ErrorKind::Parse, "node indices must be consecutive (row " +
                                               std::to_string(t.line_numbers[i]) + ")");
    return NodeData(static_cast<long>(ks[0]), vs);
}

} // namespace kantomm

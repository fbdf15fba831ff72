#pragma once

// Randomized property checks shared by the unit tests and the acceptance binary.
// Each returns the number of cases run and the first violation found.

#include <kantomm/kantomm.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace checks {

using namespace kantomm;
using Rng = std::mt19937_64;

struct Outcome {
    long cases = 0;
    long violations = 0;
    std::string first;

    bool ok() const { return cases > 0 && violations == 0; }
    void fail(const std::string& what) {
        if (violations++ == 0) first = what;
    }
};

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// The five sigmoids at unit scale, in a fixed order.
inline std::vector<Kernel> standard_kernels() {
    return {Kernel::make(Sigmoid::logistic()), Kernel::make(Sigmoid::tanh()), Kernel::make(Sigmoid::ramp()),
            Kernel::make(Sigmoid::three_step()), Kernel::make(Sigmoid::power_tail(1.0))};
}

inline std::vector<Kernel> kernel_pool() {
    std::vector<Kernel> out;
    for (double scale : {1.0, 0.5, 2.0})
        for (const auto& s : {Sigmoid::logistic(), Sigmoid::tanh(), Sigmoid::ramp(), Sigmoid::three_step(),
                              Sigmoid::power_tail(1.0), Sigmoid::power_tail(0.5)})
            out.push_back(Kernel::make(s, scale));
    return out;
}

inline std::string describe(const OperatorSpec& spec, double x) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(spec.family) << "/" << to_string(spec.mode) << " " << to_string(spec.kernel.sigmoid())
       << " scale=" << spec.kernel.scale() << " domain=[" << spec.domain.a() << "," << spec.domain.b()
       << "] n=" << spec.n << " x=" << x;
    return os.str();
}

/// Random node values, with some exact ties and lattice extremes mixed in.
inline std::vector<double> random_values(Rng& rng, std::size_t count) {
    std::vector<double> v(count);
    const bool coarse = uniform(rng) < 0.25;
    for (double& e : v) {
        e = uniform(rng);
        if (coarse) e = std::round(e * 4.0) / 4.0;
    }
    return v;
}

struct Instance {
    OperatorSpec spec;
    NodeData data;
    double x;
};

inline OperatorSpec random_spec(Rng& rng, const std::vector<Kernel>& pool, bool maxmin_only = false) {
    for (;;) {
        const Kernel& k = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(pool.size()) - 1))];
        const Family fam = maxmin_only ? Family::MaxMin
                                       : static_cast<Family>(uniform_int(rng, 0, 2));
        const Mode mode = static_cast<Mode>(uniform_int(rng, 0, 1));
        const long n = uniform_int(rng, 1, 80);
        Domain d(0.0, 1.0);
        if (uniform(rng) < 0.4) {
            const double a = uniform(rng, -1.0, 1.0);
            d = Domain(a, a + uniform(rng, 0.2, 2.0));
        }
        try {
            node_range(mode, n, d);
        } catch (const Error&) {
            continue;
        }
        return OperatorSpec{fam, mode, n, d, k};
    }
}

inline Instance random_instance(Rng& rng, const std::vector<Kernel>& pool, bool maxmin_only = false) {
    const OperatorSpec spec = random_spec(rng, pool, maxmin_only);
    const NodeRange r = node_range(spec);
    NodeData data(r.lo, random_values(rng, r.size()));
    double x = uniform(rng, spec.domain.a(), spec.domain.b());
    if (uniform(rng) < 0.05) x = uniform(rng) < 0.5 ? spec.domain.a() : spec.domain.b();
    return {spec, std::move(data), x};
}

/// Evaluates, mapping ZeroDenominator to nullopt.
inline std::optional<double> try_eval(const OperatorSpec& spec, const NodeData& data, double x,
                                      bool brute = false) {
    try {
        return brute ? brute_force_eval(spec, data, x) : eval_operator(spec, data, x);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ZeroDenominator) return std::nullopt;
        throw;
    }
}

// Lattice identities on random finite vectors.

inline Outcome lattice_sup_difference(std::uint64_t seed, long cases) {
    Rng rng(seed);
    Outcome o;
    for (long c = 0; c < cases; ++c, ++o.cases) {
        const auto len = static_cast<std::size_t>(uniform_int(rng, 1, 40));
        const auto a = random_values(rng, len), b = random_values(rng, len);
        std::vector<double> d(len);
        for (std::size_t i = 0; i < len; ++i) d[i] = std::abs(a[i] - b[i]);
        if (std::abs(lattice::sup(a) - lattice::sup(b)) > lattice::sup(d))
            o.fail("|sup a - sup b| > sup |a - b| at case " + std::to_string(c));
    }
    return o;
}

inline Outcome lattice_meet_difference(std::uint64_t seed, long cases) {
    Rng rng(seed);
    Outcome o;
    for (long c = 0; c < cases; ++c, ++o.cases) {
        const double x = uniform(rng), y = uniform(rng), z = uniform(rng);
        if (std::abs(lattice::meet(x, y) - lattice::meet(x, z)) > lattice::meet(x, std::abs(y - z)))
            o.fail("|x^y - x^z| > x^|y-z| at case " + std::to_string(c));
    }
    return o;
}

inline Outcome lattice_power(std::uint64_t seed, long cases) {
    Rng rng(seed);
    Outcome o;
    for (long c = 0; c < cases; ++c, ++o.cases) {
        const auto len = static_cast<std::size_t>(uniform_int(rng, 1, 40));
        std::vector<double> a(len);
        for (double& e : a) e = uniform(rng, 0.0, 10.0);
        for (double p : {0.5, 1.0, 2.0, 3.0}) {
            std::vector<double> ap(len);
            for (std::size_t i = 0; i < len; ++i) ap[i] = std::pow(a[i], p);
            if (std::pow(lattice::sup(a), p) != lattice::sup(ap) || std::pow(lattice::inf(a), p) != lattice::inf(ap))
                o.fail("power does not commute with sup/inf at case " + std::to_string(c));
        }
    }
    return o;
}

// Max-min operator properties on random instances; v and u share one spec.

template <class Check>
Outcome maxmin_pairs(std::uint64_t seed, long cases, const std::vector<Kernel>& pool, Check&& check) {
    Rng rng(seed);
    Outcome o;
    while (o.cases < cases) {
        const auto inst = random_instance(rng, pool, true);
        const auto u = random_values(rng, inst.data.values().size());
        const auto v = std::vector<double>(inst.data.values().begin(), inst.data.values().end());
        if (!try_eval(inst.spec, inst.data, inst.x)) continue;
        ++o.cases;
        if (auto msg = check(inst, v, u, rng)) o.fail(*msg + " for " + describe(inst.spec, inst.x));
    }
    return o;
}

inline double eval_values(const Instance& inst, const std::vector<double>& v) {
    return eval_operator(inst.spec, NodeData(inst.data.k_lo(), v), inst.x);
}

inline Outcome maxmin_monotone(std::uint64_t seed, long cases, const std::vector<Kernel>& pool) {
    return maxmin_pairs(seed, cases, pool, [](const Instance& inst, auto v, auto u, Rng&) -> std::optional<std::string> {
        for (std::size_t i = 0; i < v.size(); ++i) u[i] = std::max(u[i], v[i]); // v <= u
        if (eval_values(inst, v) > eval_values(inst, u)) return "monotonicity violated";
        return std::nullopt;
    });
}

inline Outcome maxmin_sublinear(std::uint64_t seed, long cases, const std::vector<Kernel>& pool) {
    return maxmin_pairs(seed, cases, pool, [](const Instance& inst, auto v, auto u, Rng&) -> std::optional<std::string> {
        std::vector<double> sum(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            u[i] = std::min(u[i], 1.0 - v[i]);
            sum[i] = v[i] + u[i];
            if (sum[i] > 1.0) sum[i] = 1.0;
        }
        if (eval_values(inst, sum) > eval_values(inst, v) + eval_values(inst, u) + 1e-15)
            return "sublinearity violated";
        return std::nullopt;
    });
}

inline Outcome maxmin_contraction(std::uint64_t seed, long cases, const std::vector<Kernel>& pool) {
    return maxmin_pairs(seed, cases, pool, [](const Instance& inst, auto v, auto u, Rng&) -> std::optional<std::string> {
        std::vector<double> d(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) d[i] = std::abs(v[i] - u[i]);
        if (std::abs(eval_values(inst, v) - eval_values(inst, u)) > eval_values(inst, d) + 1e-15)
            return "contraction violated";
        return std::nullopt;
    });
}

/// Searches random (data, c) for eval(c v) != c eval(v). Counts a violation
/// when no witness turns up within `cases` tries.
inline Outcome maxmin_non_homogeneity(std::uint64_t seed, long cases, const std::vector<Kernel>& pool) {
    Rng rng(seed);
    Outcome o;
    long found = 0;
    for (long c = 0; c < cases; ++c, ++o.cases) {
        const auto inst = random_instance(rng, pool, true);
        if (!try_eval(inst.spec, inst.data, inst.x)) continue;
        const double lambda = uniform(rng, 0.05, 0.95);
        std::vector<double> scaled(inst.data.values().begin(), inst.data.values().end());
        for (double& e : scaled) e *= lambda;
        if (std::abs(eval_values(inst, scaled) - lambda * eval_operator(inst.spec, inst.data, inst.x)) > 1e-6) ++found;
    }
    if (found == 0) o.fail("no non-homogeneity witness found");
    return o;
}

/// Output stays in [0, 1] for any family.
inline Outcome output_in_unit_range(std::uint64_t seed, long cases, const std::vector<Kernel>& pool) {
    Rng rng(seed);
    Outcome o;
    while (o.cases < cases) {
        const auto inst = random_instance(rng, pool);
        const auto y = try_eval(inst.spec, inst.data, inst.x);
        if (!y) continue;
        ++o.cases;
        if (!(*y >= 0.0 && *y <= 1.0)) o.fail("output outside [0, 1] for " + describe(inst.spec, inst.x));
    }
    return o;
}

/// |eval(x + h) - eval(x)| <= 100 n h for continuous sigmoids.
inline Outcome operator_continuity(std::uint64_t seed, long cases, const std::vector<Kernel>& pool) {
    std::vector<Kernel> continuous;
    for (const auto& k : pool)
        if (k.sigmoid().variant() != SigmoidVariant::ThreeStep) continuous.push_back(k);
    Rng rng(seed);
    Outcome o;
    while (o.cases < cases) {
        auto inst = random_instance(rng, continuous);
        const double h = std::pow(10.0, -uniform(rng, 6.0, 10.0));
        if (inst.x + h > inst.spec.domain.b()) inst.x = inst.spec.domain.b() - h;
        const auto y0 = try_eval(inst.spec, inst.data, inst.x);
        const auto y1 = try_eval(inst.spec, inst.data, inst.x + h);
        if (!y0 || !y1) continue;
        ++o.cases;
        if (std::abs(*y1 - *y0) > 100.0 * static_cast<double>(inst.spec.n) * h + 1e-15)
            o.fail("jump " + std::to_string(std::abs(*y1 - *y0)) + " for " + describe(inst.spec, inst.x));
    }
    return o;
}

/// eval_operator against brute_force_eval; both must fail together or agree to tol.
inline Outcome oracle_equivalence(std::uint64_t seed, long cases, const std::vector<Kernel>& pool, double tol) {
    Rng rng(seed);
    Outcome o;
    for (long c = 0; c < cases; ++c, ++o.cases) {
        const auto inst = random_instance(rng, pool);
        const auto fast = try_eval(inst.spec, inst.data, inst.x);
        const auto slow = try_eval(inst.spec, inst.data, inst.x, true);
        if (fast.has_value() != slow.has_value()) {
            o.fail("only one evaluator hit a zero denominator for " + describe(inst.spec, inst.x));
        } else if (fast && std::abs(*fast - *slow) > tol) {
            std::ostringstream os;
            os.precision(17);
            os << "fast " << *fast << " vs brute " << *slow << " for " << describe(inst.spec, inst.x);
            o.fail(os.str());
        }
    }
    return o;
}

/// All six operators reproduce constants on [0, 1] for each kernel and n.
inline Outcome constant_reproduction(std::uint64_t seed, const std::vector<Kernel>& kernels,
                                     const std::vector<long>& ns, int constants, int points, double tol) {
    Rng rng(seed);
    Outcome o;
    const Domain d(0.0, 1.0);
    for (const auto& k : kernels)
        for (long n : ns)
            for (Family fam : {Family::Linear, Family::MaxProduct, Family::MaxMin})
                for (Mode mode : {Mode::Sampling, Mode::Kantorovich}) {
                    const OperatorSpec spec{fam, mode, n, d, k};
                    const NodeRange r = node_range(spec);
                    for (int ci = 0; ci < constants; ++ci) {
                        const double c = uniform(rng);
                        const NodeData data(r.lo, std::vector<double>(r.size(), c));
                        for (int xi = 0; xi < points; ++xi, ++o.cases) {
                            const double x = uniform(rng);
                            const double y = eval_operator(spec, data, x);
                            if (std::abs(y - c) > tol) {
                                std::ostringstream os;
                                os.precision(17);
                                os << "constant " << c << " gave " << y << " for " << describe(spec, x);
                                o.fail(os.str());
                            }
                        }
                    }
                }
    return o;
}

/// Non-negativity, phi <= 1/2, evenness to 1e-12 and unimodality on a dense grid.
inline Outcome kernel_shape(const Kernel& k, double half_width, std::size_t points) {
    Outcome o;
    double prev = -1.0;
    for (std::size_t i = 0; i < points; ++i, ++o.cases) {
        const double x = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(points - 1);
        const double v = eval_kernel(k, x);
        const std::string where = " at x = " + std::to_string(x);
        if (v < 0.0) o.fail("negative" + where);
        if (v > 0.5) o.fail("above 1/2" + where);
        if (std::abs(v - eval_kernel(k, -x)) > 1e-12) o.fail("not even" + where);
        if (x < 0.0 && v < prev) o.fail("decreasing left of 0" + where);
        if (x > 0.0 && v > prev) o.fail("increasing right of 0" + where);
        prev = v;
    }
    return o;
}

/// phi(x) <= M x^-(1+alpha) on every point of the decay scan grid.
inline Outcome kernel_decay(const Kernel& k) {
    Outcome o;
    for (double x : decay_scan_grid(k)) {
        ++o.cases;
        if (eval_kernel(k, x) > k.decay_M() * std::pow(x, -(1.0 + k.alpha())))
            o.fail("decay bound fails at x = " + std::to_string(x));
    }
    return o;
}

} // namespace checks

#pragma once

/**
 * @file app.hpp
 * @brief The `kantomm` command-line front end.
 *
 * Subcommands: kernel-info, approximate, error-table, rate, denoise.
 * Exit codes: 0 success, 2 invalid flags or input, 3 numeric failure.
 * Output goes to stdout as CSV (or to --out); --json switches to a JSON envelope.
 */

#include "experiments.hpp"
#include "kantomm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace kantomm::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

namespace detail {

using kantomm::detail::fail;
using kantomm::detail::require;

inline Domain parse_domain(const std::string& s) {
    const auto cells = csv::split_row(s);
    double a = 0.0, b = 0.0;
    if (cells.size() != 2 || !csv::try_parse_double(cells[0], a) || !csv::try_parse_double(cells[1], b))
        fail(ErrorKind::InvalidArgument, "--domain expects 'a,b', got '" + s + "'");
    return Domain(a, b);
}

inline std::vector<long> parse_n_list(const std::string& s) {
    std::vector<long> ns;
    for (const auto& c : csv::split_row(s)) {
        require(!c.empty() && c.find_first_not_of("0123456789") == std::string::npos,
                "--n-list expects comma-separated positive integers, got '" + s + "'");
        ns.push_back(std::stol(c));
        require(ns.back() >= 1, "n must be positive");
    }
    return ns;
}

inline double parse_p(const std::string& s) {
    if (s == "inf") return kInfinity;
    double p = 0.0;
    if (!csv::try_parse_double(s, p) || !(p >= 1.0))
        fail(ErrorKind::InvalidArgument, "--p expects a real >= 1 or 'inf', got '" + s + "'");
    return p;
}

inline std::string format_p(double p) { return std::isinf(p) ? "inf" : csv::format_double(p); }

struct KernelFlags {
    std::string kernel;
    double scale = 1.0;
    std::optional<double> alpha;

    void add(CLI::App* cmd, std::string default_kernel) {
        kernel = std::move(default_kernel);
        cmd->add_option("--kernel", kernel, "logistic | tanh | ramp | three | power:<gamma>")->capture_default_str();
        cmd->add_option("--scale", scale, "kernel argument scale c > 0")->capture_default_str();
        cmd->add_option("--alpha", alpha, "decay exponent (default 1, or gamma for power)");
    }
    Kernel build() const { return Kernel::make(parse_sigmoid(kernel), scale, alpha); }
};

struct SourceFlags {
    std::string fn;
    std::string input;
    std::string column;

    void add(CLI::App* cmd, std::string default_fn) {
        fn = std::move(default_fn);
        cmd->add_option("--fn", fn, "step | identity | constant:<c> | lipschitz:<beta>")->capture_default_str();
        cmd->add_option("--input", input, "CSV signal file (overrides --fn)");
        cmd->add_option("--column", column, "CSV column name or 0-based index (default: 'value' or 0)");
    }

    bool is_signal() const { return !input.empty(); }

    Source build(const Domain& d) const {
        if (is_signal()) {
            const csv::Table t = csv::read_table(input);
            std::string col = column;
            if (col.empty()) {
                col = "0";
                for (const auto& h : t.header)
                    if (h == "value") col = "value";
            }
            Signal s = load_signal_csv(input, col, d);
            for (double v : s.samples())
                require(v >= 0.0 && v <= 1.0,
                        "signal values must lie in [0, 1]; rescale the input (see normalize_to_unit)");
            return s;
        }
        auto param = [&](std::size_t prefix) {
            double v = 0.0;
            if (!csv::try_parse_double(fn.substr(prefix), v))
                fail(ErrorKind::InvalidArgument, "bad parameter in --fn '" + fn + "'");
            return v;
        };
        if (fn == "step") {
            require(d.a() >= 0.0 && d.b() <= 1.0, "--fn step needs a domain inside [0,1]");
            return step_test_function();
        }
        if (fn == "identity") {
            require(d.a() >= 0.0 && d.b() <= 1.0, "--fn identity needs a domain inside [0,1]");
            return identity_function();
        }
        if (fn.starts_with("constant:")) return constant_function(param(9));
        if (fn.starts_with("lipschitz:")) {
            require(d.a() >= 0.0 && d.b() <= 1.0, "--fn lipschitz needs a domain inside [0,1]");
            return holder_power_function(param(10));
        }
        fail(ErrorKind::InvalidArgument, "unknown --fn '" + fn + "'");
    }
};

/// Writes to --out when given, otherwise to the command's stdout stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) fail(ErrorKind::Io, "cannot write '" + path + "'");
        }
        out_ = file_ ? file_.get() : &fallback;
    }
    std::ostream& operator*() { return *out_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_;
};

inline std::string fmt(double v) { return csv::format_double(v); }

// ---------------------------------------------------------------------------

struct KernelInfoCmd {
    KernelFlags k;
    long resolution = 20000;
    std::string out;
    bool json = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("kernel-info", "kernel catalogue entry with phi(0), phi(2) and m_(1+alpha)");
        k.add(cmd, "tanh");
        cmd->add_option("--resolution", resolution, "grid points in [0,1) for the moment")->capture_default_str();
        cmd->add_option("--out", out, "output file");
        cmd->add_flag("--json", json, "JSON output");
    }

    void run(std::ostream& stdout_, std::ostream&) const {
        require(resolution >= 1, "--resolution must be positive");
        const Kernel kernel = k.build();
        const double phi0 = eval_kernel(kernel, 0.0);
        const double floor = phi_floor(kernel);
        const double moment = absolute_moment(kernel, 1.0 + kernel.alpha(), resolution);
        Sink sink(out, stdout_);
        if (json) {
            nlohmann::json j = kernel;
            j["phi0"] = phi0;
            j["phi_floor"] = floor;
            j["moment_1_plus_alpha"] = moment;
            *sink << j.dump(2) << '\n';
            return;
        }
        *sink << "key,value\n";
        *sink << "variant," << to_string(kernel.sigmoid()) << '\n';
        if (kernel.sigmoid().variant() == SigmoidVariant::PowerTail)
            *sink << "gamma," << fmt(kernel.sigmoid().gamma()) << '\n';
        *sink << "scale," << fmt(kernel.scale()) << '\n'
              << "alpha," << fmt(kernel.alpha()) << '\n'
              << "decay_M," << fmt(kernel.decay_M()) << '\n'
              << "decay_L," << fmt(kernel.decay_L()) << '\n'
              << "phi0," << fmt(phi0) << '\n'
              << "phi_floor," << fmt(floor) << '\n'
              << "moment_1_plus_alpha," << fmt(moment) << '\n';
    }
};

struct ApproximateCmd {
    KernelFlags k;
    SourceFlags src;
    std::string family = "maxmin";
    std::string mode = "kantorovich";
    long n = 30;
    std::string domain = "0,1";
    std::string quad = "exact";
    std::size_t grid = 2000;
    std::string out;
    bool json = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("approximate", "evaluate one operator on a function or signal");
        k.add(cmd, "tanh");
        src.add(cmd, "step");
        cmd->add_option("--family", family, "linear | maxprod | maxmin")->capture_default_str();
        cmd->add_option("--mode", mode, "sampling | kantorovich")->capture_default_str();
        cmd->add_option("--n", n, "operator index n")->capture_default_str();
        cmd->add_option("--domain", domain, "interval a,b")->capture_default_str();
        cmd->add_option("--quad", quad, "exact | riemann:<r> | trapezoid:<r> | pairmean")->capture_default_str();
        cmd->add_option("--grid", grid, "output points (endpoints included)")->capture_default_str();
        cmd->add_option("--out", out, "output file");
        cmd->add_flag("--json", json, "JSON output");
    }

    void run(std::ostream& stdout_, std::ostream& stderr_) const {
        require(n >= 1, "--n must be positive");
        require(grid >= 2, "--grid must be at least 2");
        const Domain d = parse_domain(domain);
        const QuadratureRule q = parse_quadrature(quad);
        const Source s = src.build(d);
        long n_op = n;
        if (q.kind == QuadratureKind::PairwiseMean) {
            const auto* sig = std::get_if<Signal>(&s);
            require(sig != nullptr, "--quad pairmean needs --input");
            n_op = static_cast<long>(sig->size() / 2);
            stderr_ << "pairmean: using n = " << n_op << " (half the sample count)\n";
        }
        const OperatorSpec spec{parse_family(family), parse_mode(mode), n_op, d, k.build()};
        node_range(spec); // EmptyRange surfaces as a usage error
        const NodeData data = node_data(s, spec, q);
        const auto xs = uniform_grid(d, grid);
        const auto ys = eval_grid(spec, data, xs);

        Sink sink(out, stdout_);
        if (json) {
            nlohmann::json j;
            j["operator"] = summarize(spec);
            j["n"] = n_op;
            j["quadrature"] = to_string(q);
            j["x"] = xs;
            std::vector<double> fs;
            for (double x : xs) fs.push_back(source_value(s, x));
            j["f"] = fs;
            j["Kf"] = ys;
            *sink << j.dump() << '\n';
            return;
        }
        *sink << "x,f,Kf\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            *sink << fmt(xs[i]) << ',' << fmt(source_value(s, xs[i])) << ',' << fmt(ys[i]) << '\n';
    }
};

struct ErrorTableCmd {
    KernelFlags k;
    SourceFlags src;
    std::string n_list = "10,30,90,150,500";
    std::string domain = "0,1";
    std::string p = "1";
    std::string quad = "exact";
    std::size_t grid = kDefaultLpGrid;
    std::string out;
    bool json = false;
    bool text = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("error-table", "L^p errors of the Kantorovich linear, max-min and max-product operators");
        k.add(cmd, "tanh");
        src.add(cmd, "step");
        cmd->add_option("--n-list", n_list, "comma-separated n values")->capture_default_str();
        cmd->add_option("--domain", domain, "interval a,b")->capture_default_str();
        cmd->add_option("--p", p, "norm exponent (>= 1 or inf)")->capture_default_str();
        cmd->add_option("--quad", quad, "exact | riemann:<r> | trapezoid:<r> | pairmean")->capture_default_str();
        cmd->add_option("--grid", grid, "midpoint cells for the norm")->capture_default_str();
        cmd->add_option("--out", out, "output file");
        cmd->add_flag("--json", json, "JSON output");
        cmd->add_flag("--text", text, "aligned text table instead of CSV");
    }

    void run(std::ostream& stdout_, std::ostream&) const {
        require(grid >= 2, "--grid must be at least 2");
        const Domain d = parse_domain(domain);
        const auto ns = parse_n_list(n_list);
        const double pp = parse_p(p);
        const QuadratureRule q = parse_quadrature(quad);
        const Source s = src.build(d);
        const Kernel kernel = k.build();
        for (long n : ns) node_range(Mode::Kantorovich, n, d);
        const auto rows = error_table(kernel, s, d, ns, pp, q, grid);

        Sink sink(out, stdout_);
        if (json) {
            nlohmann::json j;
            j["kernel"] = kernel;
            j["p"] = std::isinf(pp) ? nlohmann::json("inf") : nlohmann::json(pp);
            j["grid"] = grid;
            j["quadrature"] = to_string(q);
            j["rows"] = nlohmann::json::array();
            for (const auto& r : rows)
                j["rows"].push_back({{"n", r.n}, {"linear", r.linear}, {"maxmin", r.maxmin}, {"maxprod", r.maxprod}});
            *sink << j.dump(2) << '\n';
        } else if (text) {
            const std::string norm = "||.||_" + format_p(pp);
            *sink << std::left << std::setw(8) << "n" << std::setw(14) << "K_n" << std::setw(14)
                  << "K_n^(m)" << std::setw(14) << "K_n^(M)" << "  (" << norm << ")\n";
            char buf[128];
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof buf, "%-8ld%-14.4f%-14.4f%-14.4f\n", r.n, r.linear, r.maxmin, r.maxprod);
                *sink << buf;
            }
        } else {
            *sink << "n,linear,maxmin,maxprod\n";
            for (const auto& r : rows)
                *sink << r.n << ',' << fmt(r.linear) << ',' << fmt(r.maxmin) << ',' << fmt(r.maxprod) << '\n';
        }
    }
};

struct RateCmd {
    KernelFlags k;
    SourceFlags src;
    std::string family = "maxmin";
    std::string mode = "kantorovich";
    std::string n_list = "25,50,100,200,400";
    std::string domain = "0,1";
    std::string p; // default: inf for continuous functions, 1 for step/signals
    std::string quad = "exact";
    std::size_t grid = 20001;
    std::string out;
    bool json = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("rate", "sweep n, fit the empirical rate and compare with theory");
        k.add(cmd, "tanh");
        src.add(cmd, "identity");
        cmd->add_option("--family", family, "linear | maxprod | maxmin")->capture_default_str();
        cmd->add_option("--mode", mode, "sampling | kantorovich")->capture_default_str();
        cmd->add_option("--n-list", n_list, "comma-separated increasing n values")->capture_default_str();
        cmd->add_option("--domain", domain, "interval a,b")->capture_default_str();
        cmd->add_option("--p", p, "norm exponent (>= 1 or inf)");
        cmd->add_option("--quad", quad, "exact | riemann:<r> | trapezoid:<r> | pairmean")->capture_default_str();
        cmd->add_option("--grid", grid, "evaluation grid size")->capture_default_str();
        cmd->add_option("--out", out, "output file");
        cmd->add_flag("--json", json, "JSON ErrorReport output");
    }

    /// Theoretical slope: Hoelder sup-norm rate, or the K-functional rate for
    /// the identity in L^p. None for discontinuous inputs.
    std::optional<double> theoretical(double pp, double alpha) const {
        if (src.is_signal() || src.fn == "step" || src.fn.starts_with("constant:")) return std::nullopt;
        const double beta = src.fn == "identity" ? 1.0 : std::stod(src.fn.substr(10));
        if (std::isinf(pp)) return -rate_exponent_holder(alpha, beta);
        if (beta == 1.0) return -kfunctional_rate(alpha);
        return std::nullopt;
    }

    void run(std::ostream& stdout_, std::ostream& stderr_) const {
        require(grid >= 2, "--grid must be at least 2");
        const Domain d = parse_domain(domain);
        const auto ns = parse_n_list(n_list);
        require(ns.size() >= 3, "--n-list needs at least three values for a rate fit");
        for (std::size_t i = 1; i < ns.size(); ++i) require(ns[i] > ns[i - 1], "--n-list must increase");
        const Source s = src.build(d);
        const bool discontinuous = src.is_signal() || src.fn == "step";
        const double pp = p.empty() ? (discontinuous ? 1.0 : kInfinity) : parse_p(p);
        const QuadratureRule q = parse_quadrature(quad);
        const Kernel kernel = k.build();
        const Family fam = parse_family(family);
        const Mode md = parse_mode(mode);
        for (long n : ns) node_range(md, n, d);

        const OperatorSpec probe{fam, md, ns.front(), d, kernel};
        const ErrorReport report = rate_report(
            summarize(probe), pp, ns,
            [&](long n) { return operator_error(OperatorSpec{fam, md, n, d, kernel}, s, q, pp, grid); },
            theoretical(pp, kernel.alpha()));

        Sink sink(out, stdout_);
        if (json) {
            *sink << report_to_json(report).dump(2) << '\n';
        } else {
            write_report_csv(*sink, report);
        }
        stderr_ << "fitted_rate=" << (report.fitted_rate ? fmt(*report.fitted_rate) : "n/a")
                << " theoretical_rate=" << (report.theoretical_rate ? fmt(*report.theoretical_rate) : "n/a")
                << '\n';
    }
};

struct DenoiseCmd {
    KernelFlags k;
    std::string input;
    std::string column;
    std::string domain = "0,1";
    long n = 2000;
    std::string quad = "riemann:16";
    double sigma = 0.05;
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    std::size_t grid = 2000;
    std::size_t error_grid = 4000;
    std::string out;
    bool json = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("denoise", "apply K^(m), F^(m) and K^(M) to a noisy signal");
        k.add(cmd, "logistic");
        scale_default(cmd);
        cmd->add_option("--input", input, "CSV signal (default: built-in noisy step function)");
        cmd->add_option("--column", column, "CSV column name or 0-based index");
        cmd->add_option("--domain", domain, "interval a,b of the signal")->capture_default_str();
        cmd->add_option("--n", n, "operator index n (ignored for pairmean)")->capture_default_str();
        cmd->add_option("--quad", quad, "riemann:<r> | trapezoid:<r> | pairmean")->capture_default_str();
        cmd->add_option("--sigma", sigma, "noise standard deviation for the built-in signal")->capture_default_str();
        cmd->add_option("--seed", seed, "noise seed")->capture_default_str();
        cmd->add_option("--samples", samples, "built-in signal length (default n*r+1, or 2n for pairmean)");
        cmd->add_option("--grid", grid, "output points (endpoints included)")->capture_default_str();
        cmd->add_option("--error-grid", error_grid, "midpoint cells for L1 distances")->capture_default_str();
        cmd->add_option("--out", out, "output file");
        cmd->add_flag("--json", json, "JSON output");
    }

    void scale_default(CLI::App* cmd) {
        k.scale = 0.1;
        cmd->get_option("--scale")->default_val(0.1);
    }

    void run(std::ostream& stdout_, std::ostream& stderr_) const {
        require(n >= 1, "--n must be positive");
        require(grid >= 2 && error_grid >= 1, "--grid must be at least 2");
        require(sigma >= 0.0, "--sigma must be non-negative");
        const QuadratureRule q = parse_quadrature(quad);
        require(q.kind != QuadratureKind::ExactPiecewise, "denoise works on samples; use riemann, trapezoid or pairmean");
        const Domain d = parse_domain(domain);

        std::optional<Signal> signal;
        std::optional<Source> clean;
        std::optional<Normalization> norm;
        if (!input.empty()) {
            std::string col = column.empty() ? "0" : column;
            if (column.empty())
                for (const auto& h : csv::read_table(input).header)
                    if (h == "value") col = "value";
            Signal raw = load_signal_csv(input, col, d);
            const auto [lo, hi] = std::minmax_element(raw.samples().begin(), raw.samples().end());
            if (*lo < 0.0 || *hi > 1.0) {
                raw = normalize_to_unit(raw);
                norm = raw.normalization();
                stderr_ << "input normalized to [0,1] (offset " << fmt(norm->offset) << ", gain "
                        << fmt(norm->gain) << "); outputs are mapped back\n";
            }
            signal = std::move(raw);
        } else {
            require(d == Domain(0.0, 1.0), "the built-in step signal lives on [0,1]");
            std::size_t count = samples;
            if (count == 0)
                count = q.kind == QuadratureKind::PairwiseMean
                            ? static_cast<std::size_t>(2 * n)
                            : static_cast<std::size_t>(n * q.refinement + 1);
            signal = noisy_step_signal(count, sigma, seed);
            clean = Source{step_test_function()};
            stderr_ << "noise: mt19937_64 Box-Muller, sigma " << fmt(sigma) << ", seed " << seed
                    << ", clipped to [0,1]\n";
        }

        DenoiseConfig cfg{k.build(), n, q, grid, error_grid};
        DenoiseResult r = denoise(*signal, clean, cfg);
        if (norm) {
            r.noisy = kantomm::denormalize(r.noisy, *norm);
            r.k_maxmin = kantomm::denormalize(r.k_maxmin, *norm);
            r.f_maxmin = kantomm::denormalize(r.f_maxmin, *norm);
            r.k_maxprod = kantomm::denormalize(r.k_maxprod, *norm);
        }

        Sink sink(out, stdout_);
        if (json) {
            nlohmann::json j;
            j["n"] = r.n;
            j["quadrature"] = to_string(q);
            j["x"] = r.x;
            j["noisy"] = r.noisy;
            j["K_maxmin"] = r.k_maxmin;
            j["F_maxmin"] = r.f_maxmin;
            j["K_maxprod"] = r.k_maxprod;
            if (clean)
                j["l1_distance"] = {{"K_maxmin", *r.l1_k_maxmin}, {"F_maxmin", *r.l1_f_maxmin}, {"K_maxprod", *r.l1_k_maxprod}};
            *sink << j.dump() << '\n';
        } else {
            *sink << "x,noisy,K_maxmin,F_maxmin,K_maxprod\n";
            for (std::size_t i = 0; i < r.x.size(); ++i)
                *sink << fmt(r.x[i]) << ',' << fmt(r.noisy[i]) << ',' << fmt(r.k_maxmin[i]) << ','
                      << fmt(r.f_maxmin[i]) << ',' << fmt(r.k_maxprod[i]) << '\n';
        }
        if (clean)
            stderr_ << "l1_distance K_maxmin=" << fmt(*r.l1_k_maxmin) << " F_maxmin=" << fmt(*r.l1_f_maxmin)
                    << " K_maxprod=" << fmt(*r.l1_k_maxprod) << '\n';
    }
};

} // namespace detail

/// Runs the CLI with `args` (without the program name). Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sampling and Kantorovich max-min neural-network operators", "kantomm"};
    app.require_subcommand(1);
    detail::KernelInfoCmd kernel_info;
    detail::ApproximateCmd approximate;
    detail::ErrorTableCmd error_table_cmd;
    detail::RateCmd rate;
    detail::DenoiseCmd denoise_cmd;
    kernel_info.add(app);
    approximate.add(app);
    error_table_cmd.add(app);
    rate.add(app);
    denoise_cmd.add(app);

    std::vector<const char*> argv{"kantomm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("kernel-info")) kernel_info.run(out, err);
        else if (app.got_subcommand("approximate")) approximate.run(out, err);
        else if (app.got_subcommand("error-table")) error_table_cmd.run(out, err);
        else if (app.got_subcommand("rate")) rate.run(out, err);
        else if (app.got_subcommand("denoise")) denoise_cmd.run(out, err);
    } catch (const GridError& e) {
        err << "error: " << e.what() << '\n';
        return e.is_numeric() ? kExitNumeric : kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_numeric() ? kExitNumeric : kExitUsage;
    }
    return kExitOk;
}

} // namespace kantomm::app

#include <kantomm/quadrature.hpp>

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace kantomm;
using Catch::Approx;

namespace {
const Domain unit(0.0, 1.0);
}

TEST_CASE("rule parsing", "[quadrature]") {
    CHECK(parse_quadrature("exact").kind == QuadratureKind::ExactPiecewise);
    CHECK(parse_quadrature("riemann:8").refinement == 8);
    CHECK(parse_quadrature("trapezoid:3").kind == QuadratureKind::Trapezoid);
    CHECK(parse_quadrature("pairmean").kind == QuadratureKind::PairwiseMean);
    CHECK(to_string(parse_quadrature("riemann:16")) == "riemann:16");
    CHECK_THROWS_AS(parse_quadrature("riemann:0"), Error);
    CHECK_THROWS_AS(parse_quadrature("riemann:-2"), Error);
    CHECK_THROWS_AS(parse_quadrature("simpson"), Error);
}

TEST_CASE("exact cell averages of the step function", "[quadrature]") {
    const auto f = step_test_function();
    const auto d10 = cell_averages_exact(f, unit, 10);
    CHECK(d10.range() == NodeRange{0, 9});
    CHECK(d10.value(1) == Approx(0.2).epsilon(1e-14));
    // (0.2 * 0.2 + 0.05 * 0.9) / 0.25
    CHECK(cell_averages_exact(f, unit, 4).value(0) == Approx(0.34).epsilon(1e-14));
    for (long n : {3L, 10L, 77L})
        for (double v : cell_averages_exact(f, unit, n).values()) {
            REQUIRE(v >= 0.2);
            REQUIRE(v <= 0.9);
        }
}

TEST_CASE("exact cell averages of analytic functions", "[quadrature]") {
    const auto c = cell_averages_exact(constant_function(0.37), unit, 13);
    for (double v : c.values()) CHECK(v == Approx(0.37).epsilon(1e-14));
    const auto id = cell_averages_exact(identity_function(), unit, 8);
    for (long k = 0; k <= 7; ++k) CHECK(id.value(k) == Approx((k + 0.5) / 8.0).epsilon(1e-14));
    // The step function as an analytic function agrees with the piecewise path.
    const auto via_antiderivative = cell_averages_exact(as_analytic(step_test_function()), unit, 30);
    const auto direct = cell_averages_exact(step_test_function(), unit, 30);
    for (long k = 0; k < 30; ++k) CHECK(via_antiderivative.value(k) == Approx(direct.value(k)).margin(1e-12));
}

TEST_CASE("sampled cell averages of a constant", "[quadrature]") {
    const Signal s(unit, std::vector<double>(321, 0.61));
    for (const auto& rule : {QuadratureRule::riemann(4), QuadratureRule::trapezoid(4), QuadratureRule::riemann(1)})
        for (double v : cell_averages_sampled(s, 80, rule).values()) REQUIRE(v == Approx(0.61).epsilon(1e-14));
    const Signal pairs(unit, std::vector<double>(160, 0.61));
    for (double v : cell_averages_sampled(pairs, 80, QuadratureRule::pairwise_mean()).values()) REQUIRE(v == 0.61);
}

TEST_CASE("trapezoid is exact on affine signals", "[quadrature]") {
    const auto s = sample_function([](double x) { return 0.1 + 0.8 * x; }, unit, 20 * 8 + 1);
    const auto avg = cell_averages_sampled(s, 20, QuadratureRule::trapezoid(8));
    for (long k = 0; k < 20; ++k) CHECK(avg.value(k) == Approx(0.1 + 0.8 * (k + 0.5) / 20.0).margin(1e-12));
}

TEST_CASE("refined Riemann sums converge to exact averages", "[quadrature]") {
    const auto f = step_test_function();
    const auto s = sample_function(f, unit, 100000);
    // Breakpoints fall on cell edges at n = 150, so one sub-sample per edge cell
    // lands on the wrong side: the error is about jump / refinement.
    const auto approx = cell_averages_sampled(s, 150, QuadratureRule::riemann(600));
    const auto exact = cell_averages_exact(f, unit, 150);
    double worst = 0.0;
    for (long k = 0; k < 150; ++k) worst = std::max(worst, std::abs(approx.value(k) - exact.value(k)));
    CHECK(worst < 1e-3);
}

TEST_CASE("Riemann error halves when refinement doubles", "[quadrature]") {
    auto f = [](double x) { return 0.5 + 0.4 * std::sin(3.0 * x); };
    const auto s = sample_function(f, unit, 10 * 1024 + 1);
    const auto exact_avg = [&](long k) {
        const double lo = k / 10.0, hi = (k + 1) / 10.0;
        return 0.5 + 0.4 * (std::cos(3.0 * lo) - std::cos(3.0 * hi)) / 3.0 / (hi - lo);
    };
    auto error = [&](long r) {
        const auto avg = cell_averages_sampled(s, 10, QuadratureRule::riemann(r));
        double worst = 0.0;
        for (long k = 0; k < 10; ++k) worst = std::max(worst, std::abs(avg.value(k) - exact_avg(k)));
        return worst;
    };
    for (long r : {8L, 16L, 32L}) {
        const double ratio = error(r) / error(2 * r);
        INFO("refinement " << r);
        CHECK(ratio > 1.8);
        CHECK(ratio < 2.2);
    }
}

TEST_CASE("cell averages stay within the sample range", "[quadrature]") {
    std::vector<double> v(2001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.3 + 0.4 * std::abs(std::sin(0.37 * static_cast<double>(i)));
    const Signal s(unit, v);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    for (const auto& rule : {QuadratureRule::riemann(16), QuadratureRule::trapezoid(16)})
        for (double a : cell_averages_sampled(s, 100, rule).values()) {
            REQUIRE(a >= *lo);
            REQUIRE(a <= *hi);
        }
}

TEST_CASE("sampled quadrature errors", "[quadrature]") {
    const Signal s(unit, std::vector<double>(101, 0.5));
    try {
        cell_averages_sampled(s, 50, QuadratureRule::riemann(16));
        FAIL("expected SignalTooCoarse");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SignalTooCoarse);
    }
    CHECK_THROWS_AS(cell_averages_sampled(s, 50, QuadratureRule::pairwise_mean()), Error);
    CHECK_THROWS_AS(cell_averages_sampled(s, 10, QuadratureRule::exact()), Error);
}

TEST_CASE("pairwise mean", "[quadrature]") {
    const Signal s(unit, {0.1, 0.3, 0.5, 0.9, 0.0, 1.0});
    const auto avg = cell_averages_sampled(s, 3, QuadratureRule::pairwise_mean());
    CHECK(avg.value(0) == Approx(0.2));
    CHECK(avg.value(1) == Approx(0.7));
    CHECK(avg.value(2) == Approx(0.5));
}

TEST_CASE("sampling-mode nodes from a signal", "[quadrature]") {
    const auto s = sample_function([](double x) { return x; }, unit, 101);
    const auto nodes = sample_nodes(s, 10);
    CHECK(nodes.range() == NodeRange{0, 10});
    for (long k = 0; k <= 10; ++k) CHECK(nodes.value(k) == Approx(k / 10.0).margin(1e-15));
}

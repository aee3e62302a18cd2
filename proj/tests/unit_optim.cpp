#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "driftwatch/optim.hpp"

using namespace driftwatch;

TEST_CASE("quadratic bowl converges to the interior minimum") {
    auto f = [](std::span<const double> x) {
        return (x[0] - 1.5) * (x[0] - 1.5) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5);
    };
    const std::vector<double> start{0.0, 0.0};
    const std::vector<Interval> bounds{{-10.0, 10.0}, {-10.0, 10.0}};
    const OptimResult r = nelder_mead(f, start, bounds, {});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(-0.5).epsilon(1e-5));
}

TEST_CASE("rosenbrock valley inside a box") {
    auto f = [](std::span<const double> x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    const std::vector<double> start{-1.2, 1.0};
    const std::vector<Interval> bounds{{-5.0, 5.0}, {-5.0, 5.0}};
    OptimizerConfig cfg;
    cfg.max_iters = 5000;
    const OptimResult r = nelder_mead(f, start, bounds, cfg);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("active bound pins the solution to the box edge") {
    auto f = [](std::span<const double> x) { return (x[0] + 3.0) * (x[0] + 3.0); };
    const std::vector<double> start{5.0};
    const std::vector<Interval> bounds{{0.5, 10.0}};
    const OptimResult r = nelder_mead(f, start, bounds, {});
    CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.value == doctest::Approx(12.25).epsilon(1e-8));
}

TEST_CASE("result lies inside the bounds and reports the raw objective") {
    auto f = [](std::span<const double> x) { return std::abs(x[0] - 2.0); };
    const std::vector<double> start{9.5};
    const std::vector<Interval> bounds{{1.0, 10.0}};
    const OptimResult r = nelder_mead(f, start, bounds, {});
    CHECK(r.x[0] >= 1.0);
    CHECK(r.x[0] <= 10.0);
    CHECK(r.value == doctest::Approx(f(r.x)));
}

TEST_CASE("iteration cap reports non-convergence") {
    auto f = [](std::span<const double> x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    OptimizerConfig cfg;
    cfg.max_iters = 3;
    const std::vector<double> start{-1.2, 1.0};
    const std::vector<Interval> bounds{{-5.0, 5.0}, {-5.0, 5.0}};
    const OptimResult r = nelder_mead(f, start, bounds, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
}

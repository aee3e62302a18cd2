#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "driftwatch/errors.hpp"
#include "driftwatch/model.hpp"
#include "driftwatch/rng.hpp"
#include "driftwatch/simulate.hpp"

using namespace driftwatch;

namespace {

double realized_qv_over_nh(const SamplePath& path) {
    double acc = 0.0;
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        const double d = path.values[i] - path.values[i - 1];
        acc += d * d;
    }
    return acc / (static_cast<double>(path.n()) * path.step);
}

}  // namespace

TEST_CASE("noise-free Euler recursion with substeps=1") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 50;
    cfg.h = 0.01;
    cfg.substeps = 1;
    cfg.x0 = 1.0;
    cfg.seed = 42;
    const SamplePath path = simulate_path(m, std::vector<double>{1.0}, 0.0, cfg);
    REQUIRE(path.values.size() == 51);
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        CHECK(path.values[i] == doctest::Approx(path.values[i - 1] * (1.0 - cfg.h)));
    }
}

TEST_CASE("realized quadratic variation tracks sigma^2") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 1000;
    cfg.gamma = 0.75;
    cfg.substeps = 20;
    cfg.x0 = 0.0;
    cfg.seed = 20250809;
    const SamplePath path = simulate_path(m, std::vector<double>{1.0}, 1.0, cfg);
    CHECK(realized_qv_over_nh(path) == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("same seed gives bit-identical paths") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 200;
    cfg.gamma = 0.75;
    cfg.seed = 777;
    const SamplePath a = simulate_path(m, std::vector<double>{1.0}, 1.0, cfg);
    const SamplePath b = simulate_path(m, std::vector<double>{1.0}, 1.0, cfg);
    CHECK(a.values == b.values);
}

TEST_CASE("no-change switch is bit-identical to the plain generator") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 300;
    cfg.gamma = 0.75;
    cfg.seed = 999;
    const std::vector<double> theta{1.0};
    const SamplePath plain = simulate_path(m, theta, 1.0, cfg);
    const SamplePath switched =
        simulate_path_with_change(m, theta, 1.0, theta, 1.0, 0.5, cfg);
    CHECK(plain.values == switched.values);
}

TEST_CASE("dispersion change shows up in the half-path quadratic variations") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 1000;
    cfg.gamma = 0.75;
    cfg.substeps = 20;
    cfg.seed = 31415;
    const std::vector<double> theta{1.0};
    const SamplePath path =
        simulate_path_with_change(m, theta, 1.0, theta, 1.5, 0.5, cfg);
    double first = 0.0, second = 0.0;
    const std::size_t half = path.n() / 2;
    for (std::size_t i = 1; i <= half; ++i) {
        const double d = path.values[i] - path.values[i - 1];
        first += d * d;
    }
    for (std::size_t i = half + 1; i <= path.n(); ++i) {
        const double d = path.values[i] - path.values[i - 1];
        second += d * d;
    }
    CHECK(second / first == doctest::Approx(2.25).epsilon(0.15));
}

TEST_CASE("change fraction must lie in (0,1)") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 100;
    cfg.h = 0.01;
    cfg.seed = 5;
    const std::vector<double> theta{1.0};
    CHECK_THROWS_AS(simulate_path_with_change(m, theta, 1.0, theta, 1.5, 0.0, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_path_with_change(m, theta, 1.0, theta, 1.5, 1.0, cfg),
                    std::invalid_argument);
}

TEST_CASE("negative sigma is rejected") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 100;
    cfg.h = 0.01;
    cfg.seed = 5;
    CHECK_THROWS_AS(simulate_path(m, std::vector<double>{1.0}, -1.0, cfg),
                    std::domain_error);
}

TEST_CASE("exact Euler shocks reproduce the recursion to machine precision") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 500;
    cfg.gamma = 0.75;
    cfg.substeps = 1;
    cfg.x0 = 0.3;
    cfg.seed = 2718;
    const std::vector<double> theta{1.0};
    const double sigma = 1.2;
    const SamplePath path = simulate_path(m, theta, sigma, cfg);
    REQUIRE(path.has_shocks());
    REQUIRE(path.shocks.size() == path.n());
    const double h = path.step;
    for (std::size_t i = 1; i <= path.n(); ++i) {
        const double x_prev = path.values[i - 1];
        const double expected =
            x_prev + m.drift_at(x_prev, theta) * h + sigma * std::sqrt(h) * path.shocks[i - 1];
        CHECK(path.values[i] == doctest::Approx(expected).epsilon(1e-12));
    }
    // subsampled generation does not record shocks
    cfg.substeps = 20;
    CHECK_FALSE(simulate_path(m, theta, sigma, cfg).has_shocks());
}

TEST_CASE("contamination keeps values with prob=0 or var_v=0") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 200;
    cfg.gamma = 0.75;
    cfg.seed = 11;
    const SamplePath path = simulate_path(m, std::vector<double>{1.0}, 1.0, cfg);
    CHECK(contaminate(path, {0.0, 1.0}, 3).values == path.values);
    CHECK(contaminate(path, {1.0, 0.0}, 3).values == path.values);
}

TEST_CASE("full contamination displaces by half-normal magnitudes") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 20000;
    cfg.h = 0.001;
    cfg.substeps = 1;
    cfg.seed = 404;
    const SamplePath path = simulate_path(m, std::vector<double>{1.0}, 1.0, cfg);
    const SamplePath dirty = contaminate(path, {1.0, 1.0}, 505);
    std::size_t moved = 0;
    double mean_disp = 0.0;
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        const double d = std::abs(dirty.values[i] - path.values[i]);
        if (d > 0.0) ++moved;
        mean_disp += d;
    }
    mean_disp /= static_cast<double>(path.values.size());
    CHECK(moved == path.values.size());
    // E|N(0,1)| = sqrt(2/pi)
    CHECK(mean_disp == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.05));
    CHECK_FALSE(dirty.has_shocks());
}

TEST_CASE("contamination pushes values away from zero") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 2000;
    cfg.gamma = 0.75;
    cfg.seed = 12;
    const SamplePath path = simulate_path(m, std::vector<double>{1.0}, 1.0, cfg);
    const SamplePath dirty = contaminate(path, {0.5, 2.0}, 13);
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        const double delta = dirty.values[i] - path.values[i];
        if (delta != 0.0 && path.values[i] != 0.0) {
            CHECK(std::signbit(delta) == std::signbit(path.values[i]));
        }
    }
}

TEST_CASE("piecewise generator rejects unsorted fractions") {
    const DriftModel m = ou_centered();
    SimConfig cfg;
    cfg.n = 100;
    cfg.h = 0.01;
    cfg.seed = 1;
    const std::vector<double> theta{1.0};
    std::vector<ParamChange> changes{{0.6, {1.0}, 1.5}, {0.3, {1.0}, 1.0}};
    CHECK_THROWS_AS(simulate_path_piecewise(m, theta, 1.0, changes, cfg),
                    std::invalid_argument);
}

TEST_CASE("step rule resolves gamma") {
    SimConfig cfg;
    cfg.n = 1000;
    cfg.gamma = 0.75;
    CHECK(cfg.step_size() == doctest::Approx(std::pow(1000.0, -0.75)));
    cfg.h = 0.5;
    CHECK(cfg.step_size() == 0.5);
    SimConfig bad;
    bad.n = 10;
    CHECK_THROWS_AS(bad.step_size(), std::invalid_argument);
}

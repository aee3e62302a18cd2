#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "driftwatch/model.hpp"
#include "driftwatch/rng.hpp"

using namespace driftwatch;

TEST_CASE("ou-centered drift values") {
    const DriftModel m = ou_centered();
    const std::vector<double> theta{1.0};
    CHECK(m.evaluate(2.0, theta) == -2.0);
}

TEST_CASE("ou-mean-reverting drift values") {
    const DriftModel m = ou_mean_reverting();
    CHECK(m.evaluate(14.0, std::vector<double>{1.0, 14.0}) == 0.0);
    CHECK(m.evaluate(10.0, std::vector<double>{2.0, 14.0}) == 8.0);
}

TEST_CASE("evaluate rejects bad parameter vectors") {
    const DriftModel m = ou_centered();
    CHECK_THROWS_AS(m.evaluate(1.0, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(m.evaluate(1.0, std::vector<double>{-5.0}), std::domain_error);
    CHECK_THROWS_AS(m.evaluate(1.0, std::vector<double>{5000.0}), std::domain_error);
}

TEST_CASE("ou-centered drift is linear in x") {
    const DriftModel m = ou_centered();
    Rng rng(7);
    const std::vector<double> theta{0.7};
    for (int i = 0; i < 200; ++i) {
        const double x = 10.0 * rng.normal();
        const double a = 4.0 * rng.normal();
        CHECK(m.evaluate(a * x, theta) == doctest::Approx(a * m.evaluate(x, theta)));
    }
}

TEST_CASE("ou-mean-reverting drift points at the mean") {
    const DriftModel m = ou_mean_reverting();
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const double lambda = 0.02 + 5.0 * rng.uniform();
        const double mu = 20.0 * rng.normal();
        const double x = mu + 10.0 * rng.normal();
        const double d = m.evaluate(x, std::vector<double>{lambda, mu});
        if (x < mu) CHECK(d > 0.0);
        if (x > mu) CHECK(d < 0.0);
    }
}

TEST_CASE("model_by_name round trip and failure") {
    CHECK(model_by_name("ou-centered").dim_theta == 1);
    CHECK(model_by_name("ou-mean-reverting").dim_theta == 2);
    CHECK_THROWS_AS(model_by_name("brownian"), std::invalid_argument);
}

TEST_CASE("default bounds per the library contract") {
    const DriftModel m = ou_mean_reverting();
    CHECK(m.theta_bounds[0].lo == 0.01);
    CHECK(m.theta_bounds[0].hi == 1000.0);
    CHECK(m.theta_bounds[1].lo == -1e6);
    CHECK(m.theta_bounds[1].hi == 1e6);
    CHECK(m.sigma_bounds.lo == 0.01);
    CHECK(m.sigma_bounds.hi == 1000.0);
}

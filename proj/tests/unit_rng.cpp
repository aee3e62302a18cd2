#include <doctest.h>

#include <cmath>
#include <vector>

#include "driftwatch/rng.hpp"

using namespace driftwatch;

TEST_CASE("same seed reproduces the stream") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
    }
}

TEST_CASE("derived seeds separate streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
    CHECK(derive_seed(7, 3, 4) == derive_seed(derive_seed(7, 3), 4));
    CHECK(derive_seed(7, 3, 4, 5) == derive_seed(derive_seed(7, 3, 4), 5));
}

TEST_CASE("uniform stays inside (0,1)") {
    Rng rng(99);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal moments match the standard normal") {
    Rng rng(2024);
    const int n = 200000;
    double mean = 0.0, var = 0.0, kurt = 0.0;
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.normal();
    for (double v : z) mean += v;
    mean /= n;
    for (double v : z) {
        const double d = v - mean;
        var += d * d;
        kurt += d * d * d * d;
    }
    var /= n;
    kurt = kurt / n / (var * var);
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    CHECK(kurt == doctest::Approx(3.0).epsilon(0.05));
}

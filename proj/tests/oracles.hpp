// Test-only oracles, kept independent of the library implementations they
// check. Nothing here is linked into the shipped library.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "driftwatch/rng.hpp"

namespace oracles {

// Brute-force CUSUM-of-squares scan: recompute every partial sum from scratch
// and track the smallest maximizing k. Returns (statistic, k_hat, tau).
struct BruteCusum {
    double statistic;
    std::size_t k_hat;
    double tau;
};

inline BruteCusum brute_force_cusum(std::span<const double> series,
                                    const std::function<double(double)>& trim) {
    const std::size_t n = series.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = trim(series[i]);

    double mean = 0.0, mean_sq = 0.0;
    for (double v : f) {
        mean += v;
        mean_sq += v * v;
    }
    mean /= static_cast<double>(n);
    mean_sq /= static_cast<double>(n);
    const double tau = std::sqrt(mean_sq - mean * mean);

    double total = 0.0;
    for (double v : f) total += v;

    double best = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        double partial = 0.0;
        for (std::size_t i = 0; i < k; ++i) partial += f[i];
        const double dev =
            std::abs(partial - (static_cast<double>(k) / static_cast<double>(n)) * total);
        if (dev > best) {
            best = dev;
            best_k = k;
        }
    }
    return {best / (std::sqrt(static_cast<double>(n)) * tau), best_k, tau};
}

// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// E[g(Z^2)] for Z ~ N(0,1), i.e. the integral of g against the chi-square(1)
// density, computed in z-space where the integrand is smooth between the
// supplied breakpoints.
inline double normal_sq_expectation(const std::function<double(double)>& g,
                                    std::span<const double> z_breaks) {
    const double inv_sqrt_2pi = 0.3989422804014327;
    auto integrand = [&](double z) { return g(z * z) * inv_sqrt_2pi * std::exp(-0.5 * z * z); };
    double total = 0.0;
    double prev = 0.0;
    for (double b : z_breaks) {
        if (b <= prev) throw std::invalid_argument("breakpoints must increase");
        total += integrate(integrand, prev, b);
        prev = b;
    }
    total += integrate(integrand, prev, 40.0);
    return 2.0 * total;
}

// Monte Carlo estimate of P(sup_{0<=t<=1} |BridgeB_t| > u) on an m-point grid.
struct BridgeTailEstimate {
    double p_hat;
    double stderr_hat;
};

inline BridgeTailEstimate mc_bridge_sup_tail(double u, std::size_t grid,
                                             std::size_t reps, std::uint64_t seed) {
    std::size_t hits = 0;
    const double sqrt_dt = std::sqrt(1.0 / static_cast<double>(grid));
    for (std::size_t r = 0; r < reps; ++r) {
        driftwatch::Rng rng(driftwatch::derive_seed(seed, r));
        double w = 0.0;
        double max_abs_w = 0.0;
        std::vector<double> walk(grid);
        for (std::size_t j = 0; j < grid; ++j) {
            w += sqrt_dt * rng.normal();
            walk[j] = w;
        }
        const double w_end = w;
        for (std::size_t j = 0; j < grid; ++j) {
            const double t = static_cast<double>(j + 1) / static_cast<double>(grid);
            max_abs_w = std::max(max_abs_w, std::abs(walk[j] - t * w_end));
        }
        if (max_abs_w > u) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(reps);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(reps))};
}

}  // namespace oracles
